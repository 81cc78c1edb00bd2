import io
import json
import os
import subprocess
import sys

import pytest

from influence_logic import __version__
from influence_logic.canonical import build_promotional_canonical
from influence_logic.cli import main
from influence_logic.files import network_from_json

import support
from cli_cases import CASES

GOLDEN = support.DATA / "golden"


def run(argv, cwd=support.DATA):
    out, err = io.StringIO(), io.StringIO()
    old = os.getcwd()
    os.chdir(cwd)
    try:
        code = main(argv, out, err)
    finally:
        os.chdir(old)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name, argv, expected_code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, expected_code):
    code, out, err = run(argv)
    assert code == expected_code
    assert out == (GOLDEN / f"{name}.out").read_text()
    err_file = GOLDEN / f"{name}.err"
    assert err == (err_file.read_text() if err_file.exists() else "")


def test_outputs_are_deterministic():
    for _, argv, _ in CASES:
        assert run(argv) == run(argv)


def test_canon_output_reparses():
    _, out, _ = run(["canon", "--system", "promo", "--hypotheses", "x_sample.json"])
    doc = json.loads(out)
    assert doc["names"]["1"] == {"alpha": "alpha_1", "beta": "beta_1"}
    net = network_from_json(doc)
    assert net == build_promotional_canonical(support.x_sample()).network
    assert (support.DATA / "x_sample_promo_network.json").read_text() == out


def test_canon_prev_epsilon():
    _, out, _ = run(["canon", "--system", "prev", "--hypotheses", "x_sample.json", "--budgets", "1,2,3"])
    doc = json.loads(out)
    assert doc["epsilon"] == "1/2"
    alpha_thresholds = {doc["threshold"][v["alpha"]] for v in doc["names"].values()}
    assert alpha_thresholds == {"-1/2", "-3/2", "-5/2"}


def test_canon_names_sidecar(tmp_path):
    target = tmp_path / "names.json"
    code, out, _ = run(["canon", "--system", "promo", "--hypotheses", "x_sample.json", "--names", str(target)])
    assert code == 0
    assert json.loads(target.read_text()) == json.loads(out)["names"]


def test_derive_explain_file_is_checkable(tmp_path):
    proof = tmp_path / "proof.json"
    code, out, _ = run(["derive", "--system", "prev", "--hypotheses", "x_sample.json", "--query", "{b,c} |>1 {d}", "--explain", str(proof)])
    assert (code, out) == (0, "true\n")
    code, out, _ = run(["check", "--system", "prev", "--hypotheses", "x_sample.json", "--proof", str(proof)])
    assert (code, out) == (0, "accepted\n")


def test_check_system_mismatch_is_an_error():
    code, _, err = run(["check", "--system", "prev", "--proof", "proofs/mono_lemma.json"])
    assert code == 2 and err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ["diffuse", "--network", "missing.json", "--seed", "a"],
        ["diffuse", "--network", "net1.json", "--seed", "q"],
        ["eval", "--network", "net1.json", "--mode", "both", "--formula", "{x} |>0 {z}"],
        ["eval", "--network", "net1.json", "--mode", "promo", "--formula", "{x} |>"],
        ["derive", "--system", "promo", "--hypotheses", "x_sample.json", "--query", "{q} |>1 {a}"],
        ["budget", "--network", "x_sample.json", "--mode", "promo", "--from", "a", "--to", "b"],
        [],
    ],
)
def test_errors_exit_2(argv):
    code, _, _ = run(argv)
    assert code == 2


def test_version_and_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "influence_logic", "--version"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and __version__ in proc.stdout
