import json

import pytest

from collusioncore.cli import main

from conftest import SYNTH_SEED


@pytest.fixture(scope="module")
def synth_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synthdata")
    assert main(["synth", "--seed", str(SYNTH_SEED), "--out", str(out)]) == 0
    return out


def dataset_args(d):
    return [
        "--comments", str(d / "comments.jsonl"),
        "--videos", str(d / "videos.jsonl"),
        "--users", str(d / "users.jsonl"),
    ]


def test_synth_writes_expected_files(synth_dir):
    for name in ("comments.jsonl", "videos.jsonl", "users.jsonl",
                 "labels.tsv", "synth_meta", "manifest.json"):
        assert (synth_dir / name).exists(), name
    manifest = json.loads((synth_dir / "manifest.json").read_text())
    assert manifest["command"] == "synth"
    assert manifest["seeds"] == {"generator": SYNTH_SEED}


def test_ingest_check_ok(synth_dir, capsys):
    assert main(["ingest-check"] + dataset_args(synth_dir)) == 0
    out = capsys.readouterr().out
    assert "violations=0" in out


def test_ingest_check_missing_file(tmp_path):
    code = main([
        "ingest-check",
        "--comments", str(tmp_path / "nope.jsonl"),
        "--videos", str(tmp_path / "nope2.jsonl"),
        "--users", str(tmp_path / "nope3.jsonl"),
    ])
    assert code == 3


def test_ingest_check_validation_failure(tmp_path, capsys):
    (tmp_path / "comments.jsonl").write_text(
        '{"comment_id": "c1", "user_id": "ghost", "video_id": "v1", "text": "x"}\n'
    )
    (tmp_path / "videos.jsonl").write_text(
        '{"video_id": "v1", "uploader_user_id": "u1", "title": "t", "description": "d",'
        ' "genre": "g", "duration_sec": 1, "likes": 0, "dislikes": 0, "views": 0,'
        ' "is_collusive": true}\n'
    )
    (tmp_path / "users.jsonl").write_text('{"user_id": "u1"}\n')
    code = main([
        "ingest-check",
        "--comments", str(tmp_path / "comments.jsonl"),
        "--videos", str(tmp_path / "videos.jsonl"),
        "--users", str(tmp_path / "users.jsonl"),
    ])
    assert code == 4


def test_unknown_subcommand_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


@pytest.fixture(scope="module")
def ccn_dir(synth_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("ccn")
    assert main(["build-ccn"] + dataset_args(synth_dir) + ["--out", str(out)]) == 0
    return out


def test_build_ccn_outputs(ccn_dir):
    assert (ccn_dir / "ccn.tsv").exists()
    assert (ccn_dir / "ccn.tsv.nodes").exists()
    stats = (ccn_dir / "stats.txt").read_text()
    assert "node_count=" in stats and "density=" in stats


def test_kcore_triangle_fixture(tmp_path):
    graph_file = tmp_path / "tri.tsv"
    graph_file.write_text("# ccn v1\na\tb\t1\na\tc\t1\nb\tc\t1\n")
    out = tmp_path / "out"
    assert main(["kcore", "--graph", str(graph_file), "--out", str(out)]) == 0
    lines = (out / "coreness_weighted.tsv").read_text().splitlines()
    assert lines == ["a\t2", "b\t2", "c\t2"]


@pytest.fixture(scope="module")
def korse_dir(ccn_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("korse")
    assert main(["korse", "--graph", str(ccn_dir / "ccn.tsv"), "--out", str(out)]) == 0
    return out


def test_korse_outputs(korse_dir, synth_dir):
    text = (korse_dir / "partition.tsv").read_text()
    assert text.startswith("# core_threshold=")
    for b in ("0.5", "1", "2"):
        assert (korse_dir / f"sweep_beta_{b}.csv").exists()
    # recovered core matches the planted labels exactly on this seed
    planted = {
        line.split("\t")[0]
        for line in (synth_dir / "labels.tsv").read_text().splitlines()
        if line.endswith("\tcore")
    }
    got = {
        line.split("\t")[0]
        for line in text.splitlines()
        if not line.startswith("#") and line.endswith("\tcore")
    }
    assert got == planted


def test_breakage_and_communities_and_interplay(ccn_dir, korse_dir, tmp_path):
    out = tmp_path / "breakage"
    assert main(["breakage", "--graph", str(ccn_dir / "ccn.tsv"),
                 "--order-key", "weighted_degree", "--out", str(out)]) == 0
    assert (out / "breakage_weighted_degree.csv").exists()
    assert (out / "disintegration.txt").exists()

    out2 = tmp_path / "interplay"
    assert main(["interplay", "--graph", str(ccn_dir / "ccn.tsv"),
                 "--partition", str(korse_dir / "partition.tsv"),
                 "--seed", "0", "--out", str(out2)]) == 0
    assert (out2 / "communities.csv").exists()
    for seed in (0, 1, 2):
        assert (out2 / f"interplay_seed{seed}.csv").exists()
    assert (out2 / "correlations.txt").exists()


def test_case_study_cli(synth_dir, korse_dir, tmp_path):
    out = tmp_path / "case"
    assert main(["case-study"] + dataset_args(synth_dir) +
                ["--partition", str(korse_dir / "partition.tsv"), "--out", str(out)]) == 0
    text = (out / "case_study.txt").read_text()
    assert "contribution_ratio=" in text


@pytest.fixture(scope="module")
def features_dir(synth_dir, korse_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("features")
    assert main(["features"] + dataset_args(synth_dir) +
                ["--partition", str(korse_dir / "partition.tsv"),
                 "--dim", "32", "--seed", "0", "--out", str(out)]) == 0
    return out


def test_nurse_train_eval_roundtrip(features_dir, tmp_path):
    model_dir = tmp_path / "model"
    assert main(["nurse-train", "--features", str(features_dir / "features.csv"),
                 "--epochs", "30", "--seed", "1", "--out", str(model_dir)]) == 0
    assert (model_dir / "model.npz").exists()

    eval_dir = tmp_path / "eval"
    assert main(["nurse-eval", "--model", str(model_dir / "model.npz"),
                 "--features", str(features_dir / "features.csv"),
                 "--mode", "balanced", "--out", str(eval_dir)]) == 0
    header = (eval_dir / "eval.csv").read_text().splitlines()[0]
    assert header == "fold,k,precision,recall,f1,auc"


def test_nurse_eval_without_model_is_missing_input(features_dir, tmp_path):
    code = main(["nurse-eval", "--features", str(features_dir / "features.csv"),
                 "--mode", "balanced", "--out", str(tmp_path / "x")])
    assert code == 3


def test_bad_tunables_are_input_errors(ccn_dir, tmp_path):
    assert main(["breakage", "--graph", str(ccn_dir / "ccn.tsv"),
                 "--step", "0.5", "--out", str(tmp_path / "x")]) == 3
    assert main(["korse", "--graph", str(ccn_dir / "ccn.tsv"),
                 "--beta", "-1", "--out", str(tmp_path / "y")]) == 3


def test_baseline_wbc_cli(ccn_dir, tmp_path):
    out = tmp_path / "wbc"
    assert main(["baseline-wbc", "--graph", str(ccn_dir / "ccn.tsv"),
                 "--k", "10", "--out", str(out)]) == 0
    lines = (out / "wbc_ranking.tsv").read_text().splitlines()
    assert len(lines) == 10


def test_config_file_supplies_defaults(synth_dir, tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("seed=3\n")
    out1 = tmp_path / "s1"
    out2 = tmp_path / "s2"
    assert main(["--config", str(config), "synth", "--out", str(out1)]) == 0
    assert main(["synth", "--seed", "3", "--out", str(out2)]) == 0
    assert (out1 / "comments.jsonl").read_bytes() == (out2 / "comments.jsonl").read_bytes()
    # explicit flag beats the config file
    out3 = tmp_path / "s3"
    assert main(["--config", str(config), "synth", "--seed", "4", "--out", str(out3)]) == 0
    assert (out3 / "comments.jsonl").read_bytes() != (out2 / "comments.jsonl").read_bytes()


def test_pipeline_end_to_end(synth_dir, tmp_path, capsys):
    out = tmp_path / "pipe"
    code = main(["pipeline"] + dataset_args(synth_dir) +
                ["--labels", str(synth_dir / "labels.tsv"),
                 "--dim", "32", "--epochs", "60", "--folds", "5",
                 "--seed", "0", "--out", str(out)])
    assert code == 0
    summary = (out / "summary.txt").read_text()
    values = dict(line.split("=", 1) for line in summary.splitlines())
    assert float(values["planted_core_f1"]) >= 0.95
    assert float(values["nurse_mean_auc"]) > float(values["wbc_auc"])
    for name in ("ccn.tsv", "stats.txt", "coreness_weighted.tsv",
                 "coreness_unweighted.tsv", "partition.tsv",
                 "breakage_weighted_degree.csv", "communities.csv",
                 "interplay_seed0.csv", "correlations.txt", "case_study.txt",
                 "features.csv", "eval.csv", "manifest.json"):
        assert (out / name).exists(), name


def test_pipeline_matches_manual_composition(synth_dir, tmp_path):
    pipe = tmp_path / "pipe"
    assert main(["pipeline"] + dataset_args(synth_dir) +
                ["--dim", "16", "--epochs", "5", "--folds", "3",
                 "--seed", "1", "--out", str(pipe)]) == 0
    manual = tmp_path / "manual"
    assert main(["build-ccn"] + dataset_args(synth_dir) + ["--out", str(manual)]) == 0
    assert main(["kcore", "--graph", str(manual / "ccn.tsv"), "--mode", "weighted",
                 "--out", str(manual)]) == 0
    assert main(["korse", "--graph", str(manual / "ccn.tsv"), "--out", str(manual)]) == 0
    assert main(["interplay", "--graph", str(manual / "ccn.tsv"),
                 "--partition", str(manual / "partition.tsv"),
                 "--seed", "1", "--out", str(manual)]) == 0
    assert main(["features"] + dataset_args(synth_dir) +
                ["--partition", str(manual / "partition.tsv"),
                 "--dim", "16", "--seed", "1", "--out", str(manual)]) == 0
    for name in ("ccn.tsv", "ccn.tsv.nodes", "stats.txt", "coreness_weighted.tsv",
                 "partition.tsv", "sweep_beta_1.csv", "communities.csv",
                 "interplay_seed1.csv", "correlations.txt", "features.csv"):
        assert (pipe / name).read_bytes() == (manual / name).read_bytes(), name


def test_rerun_is_byte_identical(synth_dir, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["build-ccn"] + dataset_args(synth_dir) + ["--out", str(out)]) == 0
        outs.append(out)
    for fname in ("ccn.tsv", "ccn.tsv.nodes", "stats.txt"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()
