import json
import pathlib

import jsonschema
import pytest

from aldp.cli import main

SCHEMA_PATH = (
    pathlib.Path(__file__).parent.parent / "src" / "aldp" / "schemas" / "outputs.schema.json"
)
SCHEMA = json.loads(SCHEMA_PATH.read_text())
DATA = pathlib.Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def validate(payload, ref):
    jsonschema.validate(
        payload, {"$ref": "#/$defs/%s" % ref, "$defs": SCHEMA["$defs"]}
    )


def test_verify_family_reports_square(capsys):
    code, out, _ = run(capsys, "verify", "--family", "I.9B.3")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "verifyReport")
    assert payload["verdict"]["strong"]["value"] == "Positive"
    assert payload["verdict"]["square_pretty"] == "4*b +b^2"


def test_verify_beta_specialization(capsys):
    code, out, _ = run(capsys, "verify", "--family", "I.2.n", "--n", "2", "--beta", "1/3")
    assert code == 0
    payload = json.loads(out)
    assert payload["at_beta"]["ample"] is True
    assert payload["at_beta"]["beta"] == ["1/3"]
    assert all("/" in c["value"] or c["value"].lstrip("-").isdigit() for c in payload["at_beta"]["checks"])


def test_verify_failure_exit_code(capsys, tmp_path):
    bad = {
        "model": {"Fn": 0},
        "boundary": [[2, 1]],
        "blowups": [{"on": [0], "fiber_group": 0}, {"on": [0], "fiber_group": 0}],
    }
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(bad))
    code, out, _ = run(capsys, "verify", "--pair-json", str(path))
    assert code == 2
    payload = json.loads(out)
    validate(payload, "verifyReport")
    assert payload["verdict"]["strong"]["value"] == "NotPositive"
    assert payload["verdict"]["failing_inequality"]["curve"].startswith("fiber through group")


def test_malformed_input_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--family", "I.99")
    assert code == 1 and "unknown family" in err
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "verify", "--pair-json", str(path))
    assert code == 1
    code, _, err = run(capsys, "verify", "--family", "I.5.m", "--m", "20")
    assert code == 1


def test_classify_and_alpha(capsys):
    code, out, _ = run(capsys, "classify", "--family", "I.6C.2")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "classifyReport")
    assert payload["positivity_class"] == "Gimel"

    code, out, _ = run(capsys, "alpha", "--limit", "--family", "I.4B")
    payload = json.loads(out)
    validate(payload, "alphaReport")
    assert payload["alpha"] == {"kind": "Limit", "value": "1/2"}

    code, out, _ = run(capsys, "alpha", "--toric", "1/2", "1/4", "1/4")
    payload = json.loads(out)
    assert payload["alpha"]["value"] == "1/2"

    code, out, _ = run(capsys, "alpha", "--berman-dim", "2", "--beta", "1/2")
    payload = json.loads(out)
    assert payload["alpha"]["value"] == "2/9"
    assert payload["kee_angle_threshold"] == "1/6"

    code, out, _ = run(capsys, "alpha", "--eckardt", "--beta", "1/2")
    payload = json.loads(out)
    assert payload["alpha"]["value"] == "3/5"

    code, _, err = run(capsys, "alpha", "--limit", "--toric", "1", "1", "1")
    assert code == 1


def test_lct_subcommand(capsys, tmp_path):
    code, out, _ = run(capsys, "lct", "--preset", "eckardt")
    payload = json.loads(out)
    validate(payload, "lctReport")
    assert payload["lct"]["value"] == {"num": ["1", "1"], "den": ["2", "1"]}

    config = {
        "branches": [
            {"label": "A", "scale": 1},
            {"label": "B", "scale": 1},
        ],
        "contact": 3,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(config))
    code, out, _ = run(capsys, "lct", "--config", str(path), "--beta", "1/2")
    payload = json.loads(out)
    assert payload["lct"]["value"] == "2/3"  # (1 + 1/3)/2


def test_catalog_list_and_show_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "catalog-list")
    assert code == 0
    entries = json.loads(out)
    assert len(entries) == 37

    # every family round-trips: show a sample member, feed it back to verify
    samples = [e["family"] for e in entries] + ["I.9B.2", "II.6C.1.2", "III.5.0.3"]
    for family in samples:
        argv = ["catalog-show", "--family", family]
        if ".n" in family:
            argv += ["--n", "2"]
        if family.endswith(".m"):
            argv += ["--m", "2"]
        code, out, _ = run(capsys, *argv)
        assert code == 0, family
        shown = json.loads(out)
        validate(shown["pair"], "pair")
        path = tmp_path / "pair.json"
        path.write_text(json.dumps(shown["pair"]))
        code, out, _ = run(capsys, "verify", "--pair-json", str(path))
        assert code == 0, family


def test_minimal_model_and_conic_bundle(capsys):
    code, out, _ = run(capsys, "minimal-model", "--family", "II.5B.1")
    payload = json.loads(out)
    assert payload["minimal_family"]["family"] == "II.1B"
    assert len(payload["steps"]) == 1

    code, out, _ = run(capsys, "conic-bundle", "--family", "II.2A.n", "--n", "1")
    payload = json.loads(out)
    assert payload["conic_bundle"]["components"] == 2
    code, _, err = run(capsys, "conic-bundle", "--family", "I.1C")
    assert code == 1


def test_outputs_are_deterministic(capsys):
    outputs = []
    for _ in range(2):
        _, out, _ = run(capsys, "verify", "--family", "III.5.n.m", "--n", "1", "--m", "3")
        outputs.append(out)
    assert outputs[0] == outputs[1]


def test_regen_tables_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "regen-tables", "--out-dir", str(tmp_path))
    assert code == 0
    computed = json.loads((tmp_path / "theorem_4cases.json").read_text())
    validate(computed, "positivityTable")
    expected = json.loads((DATA / "theorem_4cases_expected.json").read_text())
    assert computed == expected

    kee = json.loads((tmp_path / "kee_status.json").read_text())
    assert kee["I.2.n"] == "NotExistsSmallBeta"
    assert kee["I.3A"] == "ExistsSmallBeta"
    assert {"status": "ExistsSmallBeta", "when": "m=5"} in kee["I.9B.m"]

    aut = json.loads((tmp_path / "aut_groups.json").read_text())
    assert aut["I.1C"] == {"group": "Ga^2 x| GL2(C)", "reductive": False}
    assert aut["I.1B"]["reductive"] is True
    assert {"group": "Ga x| Gm^2", "reductive": False, "when": "m=1"} in aut["I.8B.m"]
