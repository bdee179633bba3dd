import csv
import io
import json

import pytest

from spinwire.cli import half_label, main

SPECTRUM_HEADER = (
    "two_jz,level_index,energy,inferred_two_j,channel_two_k,predicted_energy,rel_err"
)
DEGENERACY_HEADER = (
    "inferred_two_j,j_label,mean_energy,spread_rel,multiplicity,sectors_two_jz,"
    "consistent,truncated,channel_two_k,channel_ambiguous,matched_two_k,"
    "predicted_energy,rel_err"
)


def write_config(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def cheap_doc(**extra):
    doc = {
        "two_s": 1,
        "mass": 1.0,
        "preset": {"name": "dipole", "params": {"k": 1.0}},
        "radial": {"r_max": 60.0, "n_points": 800},
        "sectors": {"two_jz_min": -1, "two_jz_max": 1},
    }
    doc.update(extra)
    return doc


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_half_label():
    assert half_label(3) == "3/2"
    assert half_label(4) == "2"
    assert half_label(0) == "0"
    assert half_label(-3) == "-3/2"
    assert half_label(-4) == "-2"


def test_mu_table_dipole_entries(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc())
    code, out, err = run_cli(capsys, "mu-table", "--config", cfg)
    assert code == 0 and err == ""
    header, rows = parse_csv(out)
    assert header == ["kind", "form", "angle", "row_two_k", "col_two_k", "re", "im"]
    entries = {
        (r[3], r[4]): complex(float(r[5]), float(r[6]))
        for r in rows
        if r[0] == "entry"
    }
    assert entries == {
        ("1", "1"): 0j,
        ("1", "-1"): -1j,
        ("-1", "1"): 1j,
        ("-1", "-1"): 0j,
    }
    squared = [r for r in rows if r[0] == "mu_squared"]
    assert [float(r[5]) for r in squared] == [1.0, 1.0]
    assert all(r[2] == "" for r in squared)  # angle column empty off-entries


def test_mu_table_json_form_difference(tmp_path, capsys):
    doc = cheap_doc(betas=[{"two_k": 1, "im": -1.0}], angles=[0.0, 0.7])
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "mu-table", "--config", cfg, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["two_k_labels"] == [1, -1]
    assert len(data["tables"]) == 2
    forms = {f["form"] for f in data["tables"][0]["forms"]}
    assert forms == {"alphas", "betas"}
    assert data["max_form_difference"] < 1e-12
    assert data["mu_squared_diagonal"][0] == {"two_k": 1, "value": 1.0}


def test_mu_table_rejects_broken_hermiticity(tmp_path, capsys):
    doc = cheap_doc()
    del doc["preset"]
    doc["alphas"] = [{"two_k": 1, "re": 1.0}, {"two_k": -1, "re": 0.5}]
    cfg = write_config(tmp_path, doc)
    code, out, err = run_cli(capsys, "mu-table", "--config", cfg)
    assert code == 2
    assert out == "" and err.startswith("error:")


def test_spectrum_zero_coupling_is_empty(tmp_path, capsys):
    doc = cheap_doc()
    del doc["preset"]
    doc["alphas"] = [{"two_k": 1}, {"two_k": -1}]
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert code == 0
    assert out == SPECTRUM_HEADER + "\n"


def test_spectrum_reports_tower_attribution(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc(tolerances={"rel_tol": 0.02}))
    code, out, _ = run_cli(capsys, "spectrum", "--config", cfg)
    assert code == 0
    header, rows = parse_csv(out)
    assert ",".join(header) == SPECTRUM_HEADER
    ground = [r for r in rows if r[1] == "0"]
    assert [r[0] for r in ground] == ["-1", "1"]
    for r in ground:
        assert float(r[2]) == pytest.approx(-0.5, abs=5e-3)
        assert r[3] == "1" and r[4] == "1"
        assert float(r[5]) == pytest.approx(-0.5)
        assert float(r[6]) < 0.02


def test_spectrum_json_labels(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc(tolerances={"rel_tol": 0.02}))
    code, out, _ = run_cli(capsys, "spectrum", "--config", cfg, "--format", "json")
    assert code == 0
    levels = json.loads(out)["levels"]
    assert levels[0]["two_jz"] == -1 and levels[0]["jz_label"] == "-1/2"
    assert levels[0]["j_label"] == "1/2"


def test_degeneracy_table(tmp_path, capsys):
    doc = cheap_doc(
        sectors={"two_jz_min": -3, "two_jz_max": 3},
        tolerances={"rel_tol": 0.02},
    )
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "degeneracy", "--config", cfg)
    assert code == 0
    header, rows = parse_csv(out)
    assert ",".join(header) == DEGENERACY_HEADER
    first = rows[0]  # sorted by mean energy: the j = 1/2 ground multiplet
    assert first[0] == "1" and first[1] == "1/2"
    assert float(first[2]) == pytest.approx(-0.5, abs=5e-3)
    assert first[4] == "2" and first[5] == "-1;1"
    assert first[6] == "true" and first[7] == "false"
    second = rows[1]
    assert second[0] == "3" and second[5] == "-3;-1;1;3"
    assert second[7] == "true"  # touches the +-3 scan edge


def test_verify_small_grids_pass(tmp_path, capsys):
    doc = cheap_doc(
        plane={"half_extent": 12.0, "n": 96, "refinement_levels": 3},
        tolerances={"residual_threshold": 0.05},
    )
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "verify", "--config", cfg)
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert data["check_conditions"]["passed"] is True
    names = [c["name"] for c in data["check_conditions"]["checks"]]
    assert names == [
        "anti_diagonal",
        "sz_anticommutation",
        "rotation_covariance",
        "hermiticity",
    ]
    pairs = {p["pair"]: p for p in data["pairs"]}
    assert set(pairs) == {"Jz,H", "Ax,H", "Ay,H", "Jz,Ax", "Jz,Ay", "Ax,Ay"}
    for p in pairs.values():
        assert p["verdict"] is True
        assert 1.6 <= p["order"] <= 2.4
        assert len(p["spacings"]) == len(p["residuals"]) == 3
    assert pairs["Ax,Ay"]["fitted_constant"] == pytest.approx(2.0, abs=0.2)
    assert "fitted_constant" not in pairs["Jz,H"]


def test_verify_flags_broken_interaction(tmp_path, capsys):
    doc = cheap_doc(
        plane={"half_extent": 12.0, "n": 96, "refinement_levels": 3},
        tolerances={"residual_threshold": 0.05},
    )
    del doc["preset"]
    doc["alphas"] = [{"two_k": 1, "re": 1.0}, {"two_k": -1, "re": 0.5}]
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "verify", "--config", cfg)
    assert code == 1
    data = json.loads(out)
    assert data["passed"] is False
    failed = {c["name"] for c in data["check_conditions"]["checks"] if not c["passed"]}
    assert "hermiticity" in failed


def test_verify_requires_three_levels(tmp_path, capsys):
    doc = cheap_doc(plane={"half_extent": 12.0, "n": 96, "refinement_levels": 2})
    cfg = write_config(tmp_path, doc)
    code, _, err = run_cli(capsys, "verify", "--config", cfg)
    assert code == 2 and "refinement_levels" in err


def test_ladder_end_to_end(tmp_path, capsys):
    doc = cheap_doc(
        sectors={"two_jz_min": -3, "two_jz_max": 3},
        plane={"half_extent": 12.0, "n": 64, "refinement_levels": 3},
        tolerances={
            "rel_tol": 0.02,
            "ladder_top_max": 0.3,
            "ladder_overlap_min": 0.99,
            "casimir_rel_max": 0.02,
        },
    )
    cfg = write_config(tmp_path, doc)
    code, out, _ = run_cli(capsys, "ladder", "--config", cfg)
    assert code == 0
    data = json.loads(out)
    assert data["passed"] is True
    assert len(data["multiplets"]) == 1
    m = data["multiplets"][0]
    assert m["two_j"] == 1 and m["j_label"] == "1/2"
    assert m["casimir"]["passed"] is True
    assert len(m["levels"]) == 3
    finest = m["levels"][-1]["steps"]
    top = [s for s in finest if s["two_jz_to"] is None]
    assert len(top) == 1 and top[0]["norm_ratio"] < 0.3
    up = [s for s in finest if s["two_jz_to"] is not None]
    assert up[0]["overlap"] > 0.99
    reasons = {s["reason"] for s in data["skipped"]}
    assert "touches the scanned sector range edge" in reasons


def test_out_writes_file_not_stdout(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc())
    target = tmp_path / "mu.csv"
    code, out, _ = run_cli(capsys, "mu-table", "--config", cfg, "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("kind,form,angle")


def test_outputs_are_byte_deterministic(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc(tolerances={"rel_tol": 0.02}))
    outs = []
    for name, threads in (("a.csv", "1"), ("b.csv", "1"), ("c.csv", "4")):
        target = tmp_path / name
        code, _, _ = run_cli(
            capsys, "spectrum", "--config", cfg,
            "--out", str(target), "--threads", threads,
        )
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1] == outs[2]


@pytest.mark.parametrize(
    "doc_mutation",
    [
        lambda d: d.update(bogus=1),
        lambda d: d.update(sectors={"two_jz_min": 0, "two_jz_max": 0}),
    ],
)
def test_bad_configs_exit_2(tmp_path, capsys, doc_mutation):
    doc = cheap_doc()
    doc_mutation(doc)
    cfg = write_config(tmp_path, doc)
    code, out, err = run_cli(capsys, "spectrum", "--config", cfg)
    assert code == 2 and out == "" and err.startswith("error:")


def test_malformed_and_missing_config_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run_cli(capsys, "spectrum", "--config", str(bad))
    assert code == 2 and "error:" in err
    code, _, err = run_cli(capsys, "spectrum", "--config", str(tmp_path / "nope.json"))
    assert code == 2 and "error:" in err


def test_thread_count_validation(tmp_path, capsys):
    cfg = write_config(tmp_path, cheap_doc())
    code, _, err = run_cli(capsys, "mu-table", "--config", cfg, "--threads", "0")
    assert code == 2 and "threads" in err


def test_argparse_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["spectrum"])  # --config is required
    assert exc.value.code == 2
