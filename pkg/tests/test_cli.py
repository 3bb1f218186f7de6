"""Command-line interface: exit codes, files, determinism."""

import json

import pytest

from bochnerkit.cli import cli_dispatch


def test_scenario_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli_dispatch(
        ["scenario", "thm31_s6", "--json", str(out), "--points", "1"]
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["scenario"] == "thm31_s6"
    assert payload["status"] == "pass"
    assert "wall_time_s" not in payload
    assert "[PASS]" in capsys.readouterr().out


def test_tensor_product_descriptor(capsys):
    assert cli_dispatch(["tensor", "PRODUCT(CD(1,-1),S6(1))"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["document"]["dim"] == 8
    assert payload["rk_bochner"]["norm"] < 1e-12
    assert payload["generalized_bochner"]["norm"] < 1e-12


def test_scenario_unknown_id(capsys):
    assert cli_dispatch(["scenario", "thm99"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_scenario_bad_params(capsys):
    assert cli_dispatch(["scenario", "thm21_forward", "--m", "9"]) == 2


def test_tensor_s6_fixes_dimension(capsys):
    assert cli_dispatch(["tensor", "s6", "--m", "4"]) == 2
    assert "fixes dim 6" in capsys.readouterr().err


def test_tensor_bundle_stdout(capsys):
    assert cli_dispatch(["tensor", "s6"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["model"] == "S6(1)"
    assert payload["rk_bochner"]["norm"] < 1e-12
    assert payload["ricci"]["tau"] == 30.0


def test_tensor_small_dimension_has_no_rk_tensor(capsys):
    assert cli_dispatch(["tensor", "cd", "--m", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["rk_bochner"] is None
    assert "rk_bochner_status" in payload


def test_tensor_dump_then_validate(tmp_path, capsys):
    doc = tmp_path / "cp.json"
    assert cli_dispatch(["tensor", "CP(3,4)", "--dump", str(doc), "--quiet"]) == 0
    assert cli_dispatch(["validate", str(doc)]) == 0
    assert "valid tensor document" in capsys.readouterr().out


def test_validate_rejects_broken_document(tmp_path, capsys):
    doc = tmp_path / "cp.json"
    cli_dispatch(["tensor", "CP(2,4)", "--dump", str(doc), "--quiet"])
    payload = json.loads(doc.read_text())
    payload["J"] = [0.0] * len(payload["J"])
    doc.write_text(json.dumps(payload))
    assert cli_dispatch(["validate", str(doc)]) == 1


def test_validate_malformed_json(tmp_path):
    doc = tmp_path / "junk.json"
    doc.write_text("{]")
    assert cli_dispatch(["validate", str(doc)]) == 2


def test_validate_missing_file():
    assert cli_dispatch(["validate", "/nonexistent/never.json"]) == 2


def test_identities_chart(tmp_path, capsys):
    out = tmp_path / "identities.json"
    code = cli_dispatch(["identities", "S6(1)", "--points", "1", "--json", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["chart"] == "S6(1)"
    assert payload["status"] == "pass"
    assert payload["residuals"]["nk"] < 1e-6


def test_identities_bad_chart(capsys):
    assert cli_dispatch(["identities", "TORUS(1)"]) == 2


def test_usage_error_exit_code():
    assert cli_dispatch([]) == 2
    assert cli_dispatch(["frobnicate"]) == 2


def test_quiet_suppresses_output(capsys):
    assert cli_dispatch(["scenario", "thm21_forward", "--quiet"]) == 0
    assert capsys.readouterr().out == ""


@pytest.mark.slow
def test_all_seed7_byte_identical(tmp_path):
    """Two identical invocations serialize to identical bytes."""
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["all", "--seed", "7", "--points", "1", "--samples", "64", "--quiet"]
    assert cli_dispatch(argv + ["--json", str(a)]) == 0
    assert cli_dispatch(argv + ["--json", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
