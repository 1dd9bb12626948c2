"""Three-branch fusion classifier over per-user feature blocks.

The embedding block runs through a width-2 convolution (32 channels, no
padding), ReLU, global max-pool per channel and a fully connected layer of
64 units; the similarity and metadata blocks each pass through one fully
connected layer (32 and 16 units) with dropout at train time. Active branch
outputs are concatenated, fused through a 16-unit layer and classified by a
2-way softmax. Forward, backward and the training loop are implemented
directly in numpy; training is deterministic per seed. Feature z-scoring is
fitted on the training set and stored inside the model.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .features import FeatureVector, MFE_SIZE, SFE_SIZE

BRANCH_ORDER = ("tfe", "sfe", "mfe")  # concatenation order of branch outputs
ALL_BRANCHES = ("mfe", "sfe", "tfe")
CORE = 1  # class index of the core label in softmax outputs
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class NurseConfig:
    embedding_dim: int = 768
    conv_channels: int = 32
    conv_filter: int = 2
    tfe_fc: int = 64
    sfe_fc: int = 32
    sfe_dropout: float = 0.3
    mfe_fc: int = 16
    mfe_dropout: float = 0.25
    fusion_fc: int = 16
    classes: int = 2
    learning_rate: float = 0.01
    momentum: float = 0.9
    epochs: int = 300
    batch_size: int = 32
    seed: int = 0
    branches: tuple = ALL_BRANCHES
    class_weight: str = "none"  # "none" | "balanced"

    def __post_init__(self):
        for name in ("embedding_dim", "conv_channels", "conv_filter", "tfe_fc",
                     "sfe_fc", "mfe_fc", "fusion_fc", "classes", "epochs", "batch_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("sfe_dropout", "mfe_dropout"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be in [0, 1)")
        if not self.branches or any(b not in ALL_BRANCHES for b in self.branches):
            raise ValueError(f"branches must be a non-empty subset of {ALL_BRANCHES}")
        if self.class_weight not in ("none", "balanced"):
            raise ValueError("class_weight must be 'none' or 'balanced'")

    @property
    def branch_widths(self) -> dict:
        return {"tfe": self.tfe_fc, "sfe": self.sfe_fc, "mfe": self.mfe_fc}

    @property
    def fusion_input(self) -> int:
        return sum(self.branch_widths[b] for b in BRANCH_ORDER if b in self.branches)


@dataclass
class NurseModel:
    config: NurseConfig
    params: dict
    norm_mean: dict
    norm_std: dict


def _relu(x):
    return np.maximum(x, 0.0)


def _softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def init_model(config: NurseConfig, rng=None) -> NurseModel:
    """Fresh parameters (He-scaled normals, zero biases), identity scaling."""
    if rng is None:
        rng = np.random.default_rng(config.seed)
    params: dict = {}

    def he(shape, fan_in):
        return rng.standard_normal(shape) * np.sqrt(2.0 / fan_in)

    if "tfe" in config.branches:
        params["conv_w"] = he((config.conv_channels, config.conv_filter), config.conv_filter)
        params["conv_b"] = np.zeros(config.conv_channels)
        params["tfe_w"] = he((config.tfe_fc, config.conv_channels), config.conv_channels)
        params["tfe_b"] = np.zeros(config.tfe_fc)
    if "sfe" in config.branches:
        params["sfe_w"] = he((config.sfe_fc, SFE_SIZE), SFE_SIZE)
        params["sfe_b"] = np.zeros(config.sfe_fc)
    if "mfe" in config.branches:
        params["mfe_w"] = he((config.mfe_fc, MFE_SIZE), MFE_SIZE)
        params["mfe_b"] = np.zeros(config.mfe_fc)
    params["fus_w"] = he((config.fusion_fc, config.fusion_input), config.fusion_input)
    params["fus_b"] = np.zeros(config.fusion_fc)
    params["out_w"] = he((config.classes, config.fusion_fc), config.fusion_fc)
    params["out_b"] = np.zeros(config.classes)

    norm_mean = {}
    norm_std = {}
    sizes = {"mfe": MFE_SIZE, "sfe": SFE_SIZE, "tfe": config.embedding_dim}
    for branch in config.branches:
        norm_mean[branch] = np.zeros(sizes[branch])
        norm_std[branch] = np.ones(sizes[branch])
    return NurseModel(config=config, params=params, norm_mean=norm_mean, norm_std=norm_std)


def _raw_inputs(features, config: NurseConfig) -> dict:
    X = {}
    for branch in config.branches:
        X[branch] = np.stack([np.asarray(getattr(fv, branch), dtype=float) for fv in features])
    if "tfe" in X and X["tfe"].shape[1] != config.embedding_dim:
        raise ValueError(
            f"embedding dimension mismatch: got {X['tfe'].shape[1]}, "
            f"config says {config.embedding_dim}"
        )
    if "sfe" in X and X["sfe"].shape[1] != SFE_SIZE:
        raise ValueError("sfe block must have 25 entries")
    if "mfe" in X and X["mfe"].shape[1] != MFE_SIZE:
        raise ValueError("mfe block must have 26 entries")
    return X


def _standardize(model: NurseModel, X: dict) -> dict:
    return {
        b: (X[b] - model.norm_mean[b]) / model.norm_std[b] for b in X
    }


def _forward_batch(model: NurseModel, X: dict, train_mode: bool = False, rng=None):
    """Run the network on standardized inputs; returns (probs, cache)."""
    cfg = model.config
    p = model.params
    if train_mode and rng is None:
        raise ValueError("train_mode forward needs an rng for dropout")
    cache: dict = {"X": X, "train": train_mode}
    parts = []
    if "tfe" in cfg.branches:
        T = X["tfe"]
        T0, T1 = T[:, :-1], T[:, 1:]
        z_conv = (
            T0[:, None, :] * p["conv_w"][None, :, 0, None]
            + T1[:, None, :] * p["conv_w"][None, :, 1, None]
            + p["conv_b"][None, :, None]
        )
        a_conv = _relu(z_conv)
        pool_idx = np.argmax(a_conv, axis=2)
        pooled = np.take_along_axis(a_conv, pool_idx[:, :, None], axis=2)[:, :, 0]
        z_tfe = pooled @ p["tfe_w"].T + p["tfe_b"]
        h_tfe = _relu(z_tfe)
        cache.update(T0=T0, T1=T1, z_conv=z_conv, pool_idx=pool_idx,
                     pooled=pooled, z_tfe=z_tfe)
        parts.append(h_tfe)
    if "sfe" in cfg.branches:
        z_sfe = X["sfe"] @ p["sfe_w"].T + p["sfe_b"]
        h_sfe = _relu(z_sfe)
        if train_mode and cfg.sfe_dropout > 0:
            mask = (rng.random(h_sfe.shape) >= cfg.sfe_dropout) / (1.0 - cfg.sfe_dropout)
        else:
            mask = np.ones_like(h_sfe)
        cache.update(z_sfe=z_sfe, sfe_mask=mask)
        parts.append(h_sfe * mask)
    if "mfe" in cfg.branches:
        z_mfe = X["mfe"] @ p["mfe_w"].T + p["mfe_b"]
        h_mfe = _relu(z_mfe)
        if train_mode and cfg.mfe_dropout > 0:
            mask = (rng.random(h_mfe.shape) >= cfg.mfe_dropout) / (1.0 - cfg.mfe_dropout)
        else:
            mask = np.ones_like(h_mfe)
        cache.update(z_mfe=z_mfe, mfe_mask=mask)
        parts.append(h_mfe * mask)

    fused_in = np.concatenate(parts, axis=1)
    z_fus = fused_in @ p["fus_w"].T + p["fus_b"]
    h_fus = _relu(z_fus)
    logits = h_fus @ p["out_w"].T + p["out_b"]
    probs = _softmax(logits)
    cache.update(fused_in=fused_in, z_fus=z_fus, h_fus=h_fus)
    return probs, cache


def _backward_batch(model: NurseModel, cache: dict, d_logits) -> dict:
    """Gradients of the loss w.r.t. every parameter tensor."""
    cfg = model.config
    p = model.params
    g: dict = {}
    g["out_w"] = d_logits.T @ cache["h_fus"]
    g["out_b"] = d_logits.sum(axis=0)
    d_hfus = d_logits @ p["out_w"]
    d_zfus = d_hfus * (cache["z_fus"] > 0)
    g["fus_w"] = d_zfus.T @ cache["fused_in"]
    g["fus_b"] = d_zfus.sum(axis=0)
    d_fused = d_zfus @ p["fus_w"]

    offset = 0
    if "tfe" in cfg.branches:
        width = cfg.tfe_fc
        d_htfe = d_fused[:, offset:offset + width]
        offset += width
        d_ztfe = d_htfe * (cache["z_tfe"] > 0)
        g["tfe_w"] = d_ztfe.T @ cache["pooled"]
        g["tfe_b"] = d_ztfe.sum(axis=0)
        d_pooled = d_ztfe @ p["tfe_w"]
        d_aconv = np.zeros_like(cache["z_conv"])
        np.put_along_axis(d_aconv, cache["pool_idx"][:, :, None],
                          d_pooled[:, :, None], axis=2)
        d_zconv = d_aconv * (cache["z_conv"] > 0)
        g["conv_b"] = d_zconv.sum(axis=(0, 2))
        g["conv_w"] = np.stack(
            [
                np.einsum("bcl,bl->c", d_zconv, cache["T0"]),
                np.einsum("bcl,bl->c", d_zconv, cache["T1"]),
            ],
            axis=1,
        )
    if "sfe" in cfg.branches:
        width = cfg.sfe_fc
        d_hsfe = d_fused[:, offset:offset + width] * cache["sfe_mask"]
        offset += width
        d_zsfe = d_hsfe * (cache["z_sfe"] > 0)
        g["sfe_w"] = d_zsfe.T @ cache["X"]["sfe"]
        g["sfe_b"] = d_zsfe.sum(axis=0)
    if "mfe" in cfg.branches:
        width = cfg.mfe_fc
        d_hmfe = d_fused[:, offset:offset + width] * cache["mfe_mask"]
        d_zmfe = d_hmfe * (cache["z_mfe"] > 0)
        g["mfe_w"] = d_zmfe.T @ cache["X"]["mfe"]
        g["mfe_b"] = d_zmfe.sum(axis=0)
    return g


def _labels_array(features) -> np.ndarray:
    labels = []
    for fv in features:
        if fv.label not in ("core", "compromised"):
            raise ValueError(f"user '{fv.user_id}' has no core/compromised label")
        labels.append(1 if fv.label == "core" else 0)
    return np.array(labels, dtype=int)


def _cross_entropy(probs, y, sample_weight=None):
    p_core = np.clip(probs[:, CORE], PROB_FLOOR, 1.0 - PROB_FLOOR)
    ce = -(y * np.log(p_core) + (1 - y) * np.log(1.0 - p_core))
    if sample_weight is not None:
        ce = ce * sample_weight
    return float(ce.mean())


def predict_proba(model: NurseModel, features) -> np.ndarray:
    """Per-user (compromised, core) probability rows, evaluation mode."""
    X = _standardize(model, _raw_inputs(features, model.config))
    probs, _ = _forward_batch(model, X, train_mode=False)
    return probs


def forward(model: NurseModel, fv: FeatureVector, train_mode: bool = False, rng=None):
    """Probability pair (core, compromised) for a single user."""
    X = _standardize(model, _raw_inputs([fv], model.config))
    probs, _ = _forward_batch(model, X, train_mode=train_mode, rng=rng)
    return float(probs[0, CORE]), float(probs[0, 1 - CORE])


def loss(model: NurseModel, batch) -> float:
    """Mean binary cross-entropy of the core-class probability on a batch."""
    if not batch:
        raise ValueError("loss requires a non-empty batch")
    y = _labels_array(batch)
    probs = predict_proba(model, batch)
    return _cross_entropy(probs, y)


def loss_and_grads(model: NurseModel, batch):
    """(loss, analytic parameter gradients) in evaluation mode.

    The backward pass pairs with the unweighted mean cross-entropy used by
    :func:`loss`, which makes it directly comparable to finite differences.
    """
    y = _labels_array(batch)
    X = _standardize(model, _raw_inputs(batch, model.config))
    probs, cache = _forward_batch(model, X, train_mode=False)
    value = _cross_entropy(probs, y)
    onehot = np.stack([1 - y, y], axis=1).astype(float)
    d_logits = (probs - onehot) / len(batch)
    return value, _backward_batch(model, cache, d_logits)


def train(features, config: NurseConfig) -> NurseModel:
    """Mini-batch momentum SGD, returning the best-loss checkpoint.

    Deterministic for a fixed seed. The z-scoring constants are fitted on
    the given training features and stored in the model; the checkpoint is
    chosen by the full-set training objective evaluated after every epoch
    (the untrained state included).
    """
    if not features:
        raise ValueError("train requires a non-empty feature list")
    features = sorted(features, key=lambda fv: fv.user_id)
    y = _labels_array(features)
    n_core = int(y.sum())
    if n_core < 2 or len(y) - n_core < 2:
        raise ValueError("train requires at least 2 examples of each class")

    rng = np.random.default_rng(config.seed)
    model = init_model(config, rng)
    raw = _raw_inputs(features, config)
    for branch in config.branches:
        model.norm_mean[branch] = raw[branch].mean(axis=0)
        std = raw[branch].std(axis=0)
        std[std == 0.0] = 1.0
        model.norm_std[branch] = std
    X = _standardize(model, raw)

    if config.class_weight == "balanced":
        counts = np.bincount(y, minlength=2)
        weights = (len(y) / (2.0 * counts))[y]
    else:
        weights = None

    def objective(params):
        saved = model.params
        model.params = params
        probs, _ = _forward_batch(model, X, train_mode=False)
        model.params = saved
        return _cross_entropy(probs, y, weights)

    velocity = {k: np.zeros_like(v) for k, v in model.params.items()}
    best_loss = objective(model.params)
    best_params = {k: v.copy() for k, v in model.params.items()}
    n = len(features)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            batch_X = {b: X[b][idx] for b in X}
            probs, cache = _forward_batch(model, batch_X, train_mode=True, rng=rng)
            yb = y[idx]
            onehot = np.stack([1 - yb, yb], axis=1).astype(float)
            d_logits = (probs - onehot) / len(idx)
            if weights is not None:
                d_logits = d_logits * weights[idx][:, None]
            grads = _backward_batch(model, cache, d_logits)
            for key, grad in grads.items():
                velocity[key] = config.momentum * velocity[key] - config.learning_rate * grad
                model.params[key] = model.params[key] + velocity[key]
        epoch_loss = objective(model.params)
        if epoch_loss < best_loss:
            best_loss = epoch_loss
            best_params = {k: v.copy() for k, v in model.params.items()}
    model.params = best_params
    return model


# ---------------------------------------------------------------------------
# Ranking evaluation
# ---------------------------------------------------------------------------

def auc(scores, labels) -> float:
    """Probability that a random positive outranks a random negative.

    Rank-sum formulation; tied scores contribute one half.
    """
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must have equal length")
    n_pos = int(labels.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc requires both classes")
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(len(scores), dtype=float)
    sorted_scores = scores[order]
    i = 0
    while i < len(scores):
        j = i
        while j + 1 < len(scores) and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0  # average rank, 1-based
        i = j + 1
    pos_rank_sum = float(ranks[labels == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _prf_at_k(ranked_labels, k: int, n_pos: int):
    hits = int(sum(ranked_labels[:k]))
    precision = hits / k
    recall = hits / n_pos if n_pos else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


@dataclass(frozen=True)
class FoldMetrics:
    fold: int
    n: int
    n_core: int
    auc: float
    precision_at: tuple
    recall_at: tuple
    f1_at: tuple
    break_even_k: int
    break_even_precision: float
    break_even_recall: float
    break_even_f1: float
    f1_at_half: float


@dataclass(frozen=True)
class EvalReport:
    mode: str
    folds: tuple
    mean_auc: float
    mean_break_even_precision: float
    mean_break_even_recall: float
    mean_break_even_f1: float
    mean_f1_at_half: float
    curve_ks: tuple
    mean_precision_at: tuple
    mean_recall_at: tuple
    mean_f1_at: tuple


def rank_users(scored) -> list:
    """Sort (user_id, score, label) triples by descending score, then id."""
    return sorted(scored, key=lambda t: (-t[1], t[0]))


def _fold_metrics(fold: int, scored) -> FoldMetrics:
    ranked = rank_users(scored)
    labels = [1 if lab == "core" else 0 for _, _, lab in ranked]
    scores = [s for _, s, _ in ranked]
    n = len(ranked)
    n_pos = sum(labels)
    p_at, r_at, f_at = [], [], []
    for k in range(1, n + 1):
        p, r, f = _prf_at_k(labels, k, n_pos)
        p_at.append(p)
        r_at.append(r)
        f_at.append(f)
    be_k = n_pos
    be_p, be_r, be_f = _prf_at_k(labels, be_k, n_pos) if be_k else (0.0, 0.0, 0.0)
    preds = [1 if s >= 0.5 else 0 for s in scores]
    tp = sum(1 for pr, lab in zip(preds, labels) if pr and lab)
    fp = sum(1 for pr, lab in zip(preds, labels) if pr and not lab)
    fn = sum(1 for pr, lab in zip(preds, labels) if not pr and lab)
    prec_half = tp / (tp + fp) if tp + fp else 0.0
    rec_half = tp / (tp + fn) if tp + fn else 0.0
    f1_half = (
        2 * prec_half * rec_half / (prec_half + rec_half) if prec_half + rec_half else 0.0
    )
    return FoldMetrics(
        fold=fold,
        n=n,
        n_core=n_pos,
        auc=auc(scores, labels),
        precision_at=tuple(p_at),
        recall_at=tuple(r_at),
        f1_at=tuple(f_at),
        break_even_k=be_k,
        break_even_precision=be_p,
        break_even_recall=be_r,
        break_even_f1=be_f,
        f1_at_half=f1_half,
    )


def evaluate(features, config: NurseConfig, mode: str = "balanced_1to1",
             folds: int = 10, seed: int = 0) -> EvalReport:
    """Stratified cross-validated ranking evaluation.

    ``balanced_1to1`` undersamples the majority class to parity (seeded)
    before folding; ``complete`` keeps every user and trains fold models
    with class-balanced loss. Per fold, a fresh model is trained on the
    other folds (training seed = config.seed + 7919 * (fold + 1)) and the
    held-out users are ranked by core probability. The break-even cutoff
    per fold equals its number of true core users.
    """
    if mode not in ("balanced_1to1", "complete"):
        raise ValueError("mode must be 'balanced_1to1' or 'complete'")
    features = sorted(features, key=lambda fv: fv.user_id)
    _labels_array(features)  # validates labels
    rng = np.random.default_rng(seed)

    core = [fv for fv in features if fv.label == "core"]
    comp = [fv for fv in features if fv.label == "compromised"]
    if mode == "balanced_1to1":
        target = min(len(core), len(comp))
        if len(core) > target:
            keep = rng.choice(len(core), size=target, replace=False)
            core = [core[i] for i in sorted(keep)]
        if len(comp) > target:
            keep = rng.choice(len(comp), size=target, replace=False)
            comp = [comp[i] for i in sorted(keep)]

    if len(core) < folds or len(comp) < folds:
        raise ValueError(
            f"impossible stratification: need >= {folds} users per class, "
            f"have {len(core)} core / {len(comp)} compromised"
        )
    assignments: dict = {}
    for group in (core, comp):
        for position, index in enumerate(rng.permutation(len(group))):
            assignments[group[index].user_id] = position % folds
    pool = sorted(core + comp, key=lambda fv: fv.user_id)

    fold_config = config if mode == "balanced_1to1" else replace(config, class_weight="balanced")
    fold_metrics = []
    for fold in range(folds):
        train_set = [fv for fv in pool if assignments[fv.user_id] != fold]
        test_set = [fv for fv in pool if assignments[fv.user_id] == fold]
        model = train(train_set, replace(fold_config, seed=config.seed + 7919 * (fold + 1)))
        probs = predict_proba(model, test_set)
        scored = [
            (fv.user_id, float(probs[i, CORE]), fv.label) for i, fv in enumerate(test_set)
        ]
        fold_metrics.append(_fold_metrics(fold, scored))

    min_n = min(fm.n for fm in fold_metrics)
    ks = tuple(range(1, min_n + 1))
    mean_p = tuple(
        float(np.mean([fm.precision_at[k - 1] for fm in fold_metrics])) for k in ks
    )
    mean_r = tuple(
        float(np.mean([fm.recall_at[k - 1] for fm in fold_metrics])) for k in ks
    )
    mean_f = tuple(
        float(np.mean([fm.f1_at[k - 1] for fm in fold_metrics])) for k in ks
    )
    return EvalReport(
        mode=mode,
        folds=tuple(fold_metrics),
        mean_auc=float(np.mean([fm.auc for fm in fold_metrics])),
        mean_break_even_precision=float(np.mean([fm.break_even_precision for fm in fold_metrics])),
        mean_break_even_recall=float(np.mean([fm.break_even_recall for fm in fold_metrics])),
        mean_break_even_f1=float(np.mean([fm.break_even_f1 for fm in fold_metrics])),
        mean_f1_at_half=float(np.mean([fm.f1_at_half for fm in fold_metrics])),
        curve_ks=ks,
        mean_precision_at=mean_p,
        mean_recall_at=mean_r,
        mean_f1_at=mean_f,
    )


ABLATION_SUBSETS = (
    ("mfe", ("mfe",)),
    ("sfe", ("sfe",)),
    ("tfe", ("tfe",)),
    ("mfe+sfe", ("mfe", "sfe")),
    ("mfe+tfe", ("mfe", "tfe")),
    ("sfe+tfe", ("sfe", "tfe")),
    ("all", ALL_BRANCHES),
)


def ablations(features, config: NurseConfig, mode: str = "balanced_1to1",
              folds: int = 10, seed: int = 0) -> dict:
    """Cross-validated reports per branch subset, keyed by subset name.

    Absent branches are removed from the architecture entirely, shrinking
    the fusion layer input accordingly.
    """
    out = {}
    for name, branches in ABLATION_SUBSETS:
        out[name] = evaluate(features, replace(config, branches=branches),
                             mode=mode, folds=folds, seed=seed)
    return out


# ---------------------------------------------------------------------------
# Model and report files
# ---------------------------------------------------------------------------

MODEL_FORMAT = 1


def save_model(model: NurseModel, path) -> None:
    """Versioned dump of config, parameters and scaling constants."""
    arrays = {f"param_{k}": v for k, v in model.params.items()}
    arrays.update({f"mean_{k}": v for k, v in model.norm_mean.items()})
    arrays.update({f"std_{k}": v for k, v in model.norm_std.items()})
    cfg = {k: (list(v) if isinstance(v, tuple) else v)
           for k, v in model.config.__dict__.items()}
    meta = json.dumps({"format": MODEL_FORMAT, "config": cfg}, sort_keys=True)
    np.savez(path, meta=np.frombuffer(meta.encode("utf-8"), dtype=np.uint8), **arrays)


def load_model(path) -> NurseModel:
    """Inverse of :func:`save_model`; predictions round-trip bit-exactly."""
    data = np.load(path)
    meta = json.loads(bytes(data["meta"]).decode("utf-8"))
    if meta.get("format") != MODEL_FORMAT:
        raise ValueError(f"unsupported model format {meta.get('format')}")
    cfg_dict = dict(meta["config"])
    cfg_dict["branches"] = tuple(cfg_dict["branches"])
    config = NurseConfig(**cfg_dict)
    params = {}
    norm_mean = {}
    norm_std = {}
    for key in data.files:
        if key.startswith("param_"):
            params[key[len("param_"):]] = data[key]
        elif key.startswith("mean_"):
            norm_mean[key[len("mean_"):]] = data[key]
        elif key.startswith("std_"):
            norm_std[key[len("std_"):]] = data[key]
    return NurseModel(config=config, params=params, norm_mean=norm_mean, norm_std=norm_std)


def write_eval_report(report: EvalReport, path) -> None:
    """CSV with one row per fold and cutoff, plus a break-even summary row."""
    with Path(path).open("w", encoding="utf-8") as handle:
        handle.write("fold,k,precision,recall,f1,auc\n")
        for fm in report.folds:
            for k in range(1, fm.n + 1):
                handle.write(
                    f"{fm.fold},{k},{fm.precision_at[k - 1]!r},"
                    f"{fm.recall_at[k - 1]!r},{fm.f1_at[k - 1]!r},{fm.auc!r}\n"
                )
        handle.write(
            f"mean,breakeven,{report.mean_break_even_precision!r},"
            f"{report.mean_break_even_recall!r},{report.mean_break_even_f1!r},"
            f"{report.mean_auc!r}\n"
        )


def write_method_curves(reports: dict, f1_path, auc_path) -> None:
    """Per-method mean F1@k and AUC rows for comparison plots."""
    with Path(f1_path).open("w", encoding="utf-8") as handle:
        handle.write("method,k,f1\n")
        for method in sorted(reports):
            report = reports[method]
            for i, k in enumerate(report.curve_ks):
                handle.write(f"{method},{k},{report.mean_f1_at[i]!r}\n")
    with Path(auc_path).open("w", encoding="utf-8") as handle:
        handle.write("method,k,auc\n")
        for method in sorted(reports):
            report = reports[method]
            for k in report.curve_ks:
                handle.write(f"{method},{k},{report.mean_auc!r}\n")
