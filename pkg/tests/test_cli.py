"""Experiment harness: config handling, subcommands, output contracts."""

import json

import numpy as np
import pytest

import hypersir as hs
from hypersir.cli import (
    ExperimentConfig,
    fit_loglog_slope,
    load_config,
    main,
    resolve_seed_counts,
)

SF_FLAGS = ["--family", "scale_free", "--num-nodes", "120",
            "--num-hyperedges", "200", "--exponent", "2",
            "--size-range", "2", "3", "--degree-range", "1", "15",
            "--gen-seed", "4"]


def triangle_file(tmp_path):
    p = tmp_path / "tri.txt"
    p.write_text("0 1 2\n")
    return p


def sf_file(tmp_path):
    out = tmp_path / "gen"
    assert main(["generate", *SF_FLAGS, "--output-dir", str(out)]) == 0
    return out / "scale_free_n120_m200_s4.txt"


def test_generate_round_trip(tmp_path):
    path = sf_file(tmp_path)
    assert path.exists()
    spec = hs.GenSpec("scale_free", 120, 200, exponent=2.0,
                      size_range=(2, 3), degree_range=(1, 15), rng_seed=4)
    direct = hs.generate(spec)
    loaded = hs.load_hyperedge_list(path)
    # nodes in no hyperedge are invisible to the text format; everything
    # else survives the round trip unchanged
    covered = {v for e in direct.hyperedges for v in e}
    assert loaded.num_nodes == len(covered)
    a, b = hs.dataset_stats(loaded), hs.dataset_stats(direct)
    for f in ("m", "gcc_size", "mean_node_degree", "mean_hyperdegree",
              "k1_mean", "k2_mean"):
        assert getattr(a, f) == getattr(b, f)
    prov = json.loads((tmp_path / "gen" / "provenance.json").read_text())
    assert prov["command"] == "generate"
    assert prov["generator_spec"]["rng_seed"] == 4
    assert path.name in prov["outputs"]


def test_generate_same_seed_byte_identical(tmp_path):
    a = sf_file(tmp_path / "a")
    b = sf_file(tmp_path / "b")
    assert a.read_bytes() == b.read_bytes()


def test_generate_empty_warns(tmp_path, capsys):
    code = main(["generate", "--family", "erdos_renyi", "--num-nodes", "20",
                 "--num-hyperedges", "10", "--membership-p", "0",
                 "--output-dir", str(tmp_path)])
    assert code == 0
    assert "no hyperedges" in capsys.readouterr().err
    name = "erdos_renyi_n20_m10_s0.txt"
    assert (tmp_path / name).read_text() == ""


def test_experiment_zero_rates_gives_seed_count(tmp_path):
    data = sf_file(tmp_path)
    out = tmp_path / "exp"
    code = main(["experiment", "--dataset", str(data), "--beta1", "0",
                 "--beta2", "0", "--k-absolute", "4", "--methods", "cia",
                 "random", "degree", "--runs", "10",
                 "--output-dir", str(out)])
    assert code == 0
    rows = [r for r in (out / "results.csv").read_text().splitlines()[2:]]
    assert len(rows) == 3
    for row in rows:
        cells = row.split(",")
        assert cells[9] == "4" and cells[10] == "0"   # sigma_mean, sigma_std
        assert cells[13] == ""                         # no error


def test_experiment_deterministic_and_parallel_equal(tmp_path):
    data = sf_file(tmp_path)
    texts = []
    for i, workers in enumerate(("1", "1", "2")):
        out = tmp_path / f"run{i}"
        code = main(["experiment", "--dataset", str(data),
                     "--lambda1", "0.8", "1.1", "--lambda2", "1.0",
                     "--k-percent", "3", "--methods", "cia", "random",
                     "--runs", "10", "--rng-seed", "9",
                     "--workers", workers, "--output-dir", str(out)])
        assert code == 0
        texts.append((out / "results.csv").read_bytes())
    assert texts[0] == texts[1] == texts[2]


def test_experiment_cell_errors_isolated(tmp_path):
    p = tmp_path / "path.txt"
    p.write_text("0 1\n1 2\n2 3\n")
    out = tmp_path / "exp"
    code = main(["experiment", "--dataset", str(p), "--lambda1", "0.5",
                 "--lambda2", "0", "2.0", "--k-absolute", "1",
                 "--methods", "degree", "--runs", "5",
                 "--output-dir", str(out)])
    assert code == 1
    lines = (out / "results.csv").read_text().splitlines()
    assert lines[0].startswith("# schema=experiment_results")
    good = [l for l in lines[2:] if l.endswith(",")]
    bad = [l for l in lines[2:] if "no triangles" in l]
    assert len(good) == 1 and len(bad) == 1
    assert (out / "details" / "cell000_degree.csv").exists()
    assert not (out / "details" / "cell001_degree.csv").exists()


def test_experiment_detail_files_match_summary(tmp_path):
    data = sf_file(tmp_path)
    out = tmp_path / "exp"
    assert main(["experiment", "--dataset", str(data), "--beta1", "0.1",
                 "--k-absolute", "3", "--methods", "hyperdegree",
                 "--runs", "7", "--output-dir", str(out)]) == 0
    detail = (out / "details" / "cell000_hyperdegree.csv").read_text().splitlines()
    assert detail[1] == "run,sigma,absorbed"
    sigmas = [int(l.split(",")[1]) for l in detail[2:]]
    assert len(sigmas) == 7
    summary = (out / "results.csv").read_text().splitlines()[2].split(",")
    assert float(summary[9]) == pytest.approx(np.mean(sigmas))


def test_seed_count_resolution():
    cfg = ExperimentConfig(k_percent=[3.0])
    assert resolve_seed_counts(cfg, 50) == [2]      # 1.5 rounds half-up
    assert resolve_seed_counts(cfg, 175) == [5]     # 5.25 rounds down
    assert resolve_seed_counts(ExperimentConfig(k_percent=[0.1]), 50) == [1]
    assert resolve_seed_counts(ExperimentConfig(k_absolute=[7, 2]), 50) == [7, 2]
    assert resolve_seed_counts(ExperimentConfig(), 100) == [3]


def test_config_validation():
    with pytest.raises(ValueError, match="known"):
        ExperimentConfig(methods=["pagerank"]).validate()
    with pytest.raises(ValueError, match="0, 100"):
        ExperimentConfig(k_percent=[0.0]).validate()
    with pytest.raises(ValueError, match="not both"):
        ExperimentConfig(lambda1=[1.0], beta1=[0.5]).validate()
    with pytest.raises(ValueError, match="non-empty"):
        ExperimentConfig(lambda1=[]).validate()
    ExperimentConfig(k_percent=[100.0]).validate()


def test_config_file_and_flag_override(tmp_path):
    cfgp = tmp_path / "c.json"
    cfgp.write_text(json.dumps({
        "dataset": "unused.txt", "lambda1": [0.5], "runs": 4,
        "methods": ["degree"], "k_absolute": [2],
    }))
    cfg = load_config(cfgp, {"lambda1": [0.7], "runs": None})
    assert cfg.lambda1 == [0.7]
    assert cfg.runs == 4
    assert cfg.methods == ["degree"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"lambda_one": [0.5]}))
    with pytest.raises(ValueError, match="unknown config keys"):
        load_config(bad)


def test_cli_error_exit_codes(tmp_path):
    assert main(["experiment", "--lambda1", "1.0"]) == 2        # no input
    assert main(["experiment", "--dataset", "x", "--methods", "nope"]) == 2
    assert main(["stats", "--dataset", str(tmp_path / "missing.txt")]) == 2


def test_output_root_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HYPERSIR_OUTPUT_ROOT", str(tmp_path))
    tri = triangle_file(tmp_path)
    assert main(["stats", "--dataset", str(tri), "--output-dir", "nested/out"]) == 0
    assert (tmp_path / "nested" / "out" / "stats.csv").exists()


def test_spectrum_triangle_and_forest(tmp_path):
    tri = triangle_file(tmp_path)
    out = tmp_path / "spec"
    assert main(["spectrum", "--dataset", str(tri), "--beta1", "0.5",
                 "--output-dir", str(out), "--dump-operator"]) == 0
    doc = json.loads((out / "spectrum.json").read_text())
    assert doc["lambda_c"] == pytest.approx(0.5, abs=1e-9)
    assert doc["beta1_star"] == pytest.approx(1.0, abs=1e-9)
    assert (out / "operator.txt").exists()
    p = tmp_path / "forest.txt"
    p.write_text("0 1\n1 2\n")
    out2 = tmp_path / "spec2"
    assert main(["spectrum", "--dataset", str(p), "--output-dir", str(out2)]) == 0
    assert json.loads((out2 / "spectrum.json").read_text())["beta1_star"] == "inf"


def test_spectrum_scales_with_beta1(tmp_path):
    data = sf_file(tmp_path)
    vals = []
    for i, b in enumerate(("0.4", "0.8")):
        out = tmp_path / f"s{i}"
        assert main(["spectrum", "--dataset", str(data), "--beta1", b,
                     "--output-dir", str(out)]) == 0
        vals.append(json.loads((out / "spectrum.json").read_text())["lambda_c"])
    assert vals[1] == pytest.approx(2 * vals[0], rel=1e-7)


def test_fig3_sweep(tmp_path):
    data = sf_file(tmp_path)
    out = tmp_path / "f"
    assert main(["fig3", "--dataset", str(data), "--n-grid", "5", "100",
                 "--output-dir", str(out)]) == 0
    lines = (out / "fig3.csv").read_text().splitlines()
    assert lines[1] == "n_percent,overlap_probability"
    last = lines[-1].split(",")
    assert float(last[0]) == 100 and float(last[1]) == 1.0
    out2 = tmp_path / "f2"
    main(["fig3", "--dataset", str(data), "--n-grid", "5", "100",
          "--output-dir", str(out2)])
    assert (out / "fig3.csv").read_bytes() == (out2 / "fig3.csv").read_bytes()


def test_stats_command_reports_both_conventions(tmp_path):
    p = tmp_path / "dup.txt"
    p.write_text("0 1 2\n0 1 2\n")
    out = tmp_path / "st"
    assert main(["stats", "--dataset", str(p), "--name", "dup",
                 "--output-dir", str(out)]) == 0
    lines = (out / "stats.csv").read_text().splitlines()
    assert len(lines) == 3
    retained = lines[1].split(",")
    deduped = lines[2].split(",")
    assert retained[0] == "dup" and deduped[0] == "dup/dedup"
    assert retained[2] == "2" and deduped[2] == "1"
    doc = json.loads((out / "stats.json").read_text())
    assert doc["retained"]["m"] == 2 and doc["dedup"]["m"] == 1


def test_stats_single_triple_values(tmp_path):
    tri = triangle_file(tmp_path)
    out = tmp_path / "st"
    assert main(["stats", "--dataset", str(tri), "--name", "tri",
                 "--output-dir", str(out)]) == 0
    doc = json.loads((out / "stats.json").read_text())["retained"]
    assert (doc["n"], doc["m"], doc["gcc_size"]) == (3, 1, 3)
    assert doc["mean_node_degree"] == 2.0
    assert doc["k2_mean"] == 1.0


def test_bench_smoke(tmp_path):
    out = tmp_path / "b"
    code = main(["bench", "--sizes", "60", "120", "--methods", "cia",
                 "degree", "--k-percent", "5", "--bench-repeats", "1",
                 "--output-dir", str(out)])
    assert code == 0
    lines = (out / "bench.csv").read_text().splitlines()
    assert len(lines) == 2 + 4   # schema, header, 2 methods x 2 sizes
    fits = (out / "bench_fit.csv").read_text().splitlines()
    assert fits[1] == "method,slope,intercept"
    assert len(fits) == 4


def test_loglog_fit_sanity():
    ns = np.array([100, 200, 400, 800])
    slope, intercept = fit_loglog_slope(ns, 2.5e-6 * ns)
    assert slope == pytest.approx(1.0, abs=0.01)
    slope2, _ = fit_loglog_slope(ns, 3e-9 * ns ** 1.5)
    assert slope2 == pytest.approx(1.5, abs=0.01)
    with pytest.raises(ValueError):
        fit_loglog_slope([100], [1.0])


def test_provenance_alongside_outputs(tmp_path):
    tri = triangle_file(tmp_path)
    out = tmp_path / "o"
    assert main(["fig3", "--dataset", str(tri), "--n-grid", "100",
                 "--output-dir", str(out)]) == 0
    prov = json.loads((out / "provenance.json").read_text())
    assert prov["outputs"] == ["fig3.csv"]
    assert prov["config"]["dataset"] == str(tri)
    assert "package_version" in prov
