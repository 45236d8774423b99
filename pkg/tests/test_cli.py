import io
import json
import subprocess
import sys

import jsonschema
import pytest

from cocycle_forge.cli import main
from cocycle_forge.schemas import SCHEMAS

from oracles import dee_by_definition


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        code = main(list(argv), out=out, err=err)
    except SystemExit as exc:          # argparse errors
        code = exc.code
    return code, out.getvalue(), err.getvalue()


def test_ball_dot_counts():
    code, out, _ = run("tree", "ball", "--q", "2", "--radius", "1", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph")
    assert out.count(" -> ") == 3 and out.count("[label=") == 4


@pytest.mark.parametrize("q,radius", [(2, 2), (3, 1)])
def test_ball_json(q, radius):
    code, out, _ = run("tree", "ball", "--q", str(q), "--radius", str(radius), "--format", "json")
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS["ball"])
    # a radius-r ball in the (q+1)-regular tree
    expect = 1 + (q + 1) * sum(q ** i for i in range(radius))
    assert len(doc["vertices"]) == expect and len(doc["edges"]) == expect - 1


def test_rep_dee_against_definition():
    code, out, _ = run("rep", "dee", "--p", "3", "--max-n", "40")
    assert code == 0
    rows = [l.split("\t") for l in out.splitlines()[1:]]
    assert [bool(int(r[1])) for r in rows] == [dee_by_definition(n, 3) for n in range(1, 41)]


def test_quotient_json_schema():
    code, out, _ = run("quotient", "build", "--gamma", "gamma0:t", "--format", "json")
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMAS["quotient"])


@pytest.mark.parametrize("argv,kind", [
    (("cocycles", "basis", "--gamma", "gamma0:t"), "cocycles"),
    (("pairing", "demo", "--gamma", "gamma0:t"), "pairing"),
    (("corr", "roundtrip", "--gamma", "gamma0:t", "--trials", "5"), "roundtrip"),
    (("corr", "lift", "--gamma", "gamma0:t", "--k", "3"), "lift"),
    (("corr", "weight2", "--gamma", "full"), "weight2"),
])
def test_json_outputs_validate(argv, kind):
    code, out, _ = run(*argv)
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == kind
    jsonschema.validate(doc, SCHEMAS[kind])


def test_cocycles_dim_tsv():
    code, out, _ = run("cocycles", "dim", "--gamma", "full")
    assert code == 0 and out.strip().splitlines()[-1].endswith("\t0")


@pytest.mark.parametrize("argv", [
    ("tree", "ball", "--radius", "99"),
    ("tree", "ball", "--bogus"),
    ("quotient", "build", "--q", "8"),
    ("cocycles", "dim", "--precision", "3"),
    ("cocycles", "dim", "--gamma", "nonsense:t"),
])
def test_usage_errors_exit_64(argv):
    assert run(*argv)[0] == 64


def test_depth_too_small_exits_2():
    code, _, err = run("cocycles", "dim", "--gamma", "gamma0:t^3", "--depth", "2")
    assert code == 2 and "DepthTooSmall" in err


def test_finding_exits_3_with_report():
    code, out, err = run("corr", "weight2", "--gamma", "gamma0:t^3", "--depth", "6", "--support", "H!!")
    assert code == 3
    report = json.loads(err)
    jsonschema.validate(report, SCHEMAS["finding"])
    assert report["kind"] == "finding" and report["data"]["invariant_factors"] == [2]
    assert json.loads(out)["reduction_surjective"] is False


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ngamma = gamma0:t\ndepth = 5\n")
    _, a, _ = run("cocycles", "dim", "--config", str(cfg), "--format", "json")
    assert json.loads(a)["gamma"] == "gamma0:t"
    _, b, _ = run("cocycles", "dim", "--config", str(cfg), "--gamma", "full", "--format", "json")
    assert json.loads(b)["gamma"] == "full"


def test_seeded_tree_act_is_deterministic():
    a = run("tree", "act", "--seed", "5")
    b = run("tree", "act", "--seed", "5")
    assert a == b and a[0] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cocycle_forge", "rep", "alpha", "--p", "2", "--max-n", "5"],
                         capture_output=True, text=True, check=True)
    assert res.stdout.splitlines()[0].split("\t")[0] == "n"
