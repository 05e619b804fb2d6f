import json
import os
import pathlib
import subprocess

import numpy as np
import pytest

import dsaddle

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA = pathlib.Path(os.environ.get("DSADDLE_SCHEMA", ROOT / "docs" / "report-schema.json"))
FIXTURE = ROOT / "tests" / "data" / "running4x4"

RUNNING_INVERSE = np.array(
    [[0.5, 0, 1, -0.5], [0, 1, 0, 0], [1, 0, 0, 0], [-0.5, 0, 0, 0.5]]
)


def running(e=2.0):
    return dsaddle.BlockSystem(
        np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]), np.array([[1.0]]), E=np.array([[e]])
    )


@pytest.fixture(scope="module")
def validator():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads(SCHEMA.read_text())
    cls = jsonschema.validators.validator_for(schema)
    cls.check_schema(schema)
    return cls(schema)


def test_block_system_shapes():
    s = running()
    assert (s.n, s.m, s.p) == (2, 1, 1)
    assert np.array_equal(s.D, np.zeros((1, 1)))
    k = s.assemble()
    assert k.shape == (4, 4)
    assert np.allclose(k, k.T)


def test_bad_shapes_raise():
    with pytest.raises(dsaddle.DimensionError):
        dsaddle.BlockSystem(np.eye(2), np.ones((1, 3)), np.ones((1, 1)))
    with pytest.raises(dsaddle.Error):
        dsaddle.Tolerance(rank_rtol=2.0)


def test_diagnose_running_example(validator):
    report = dsaddle.diagnose(running(), oracle=True)
    validator.validate(report)
    assert report["verdict"] == "invertible"
    assert report["rule"] == "e_iff_rule"
    assert report["oracle_check"] is True

    singular = dsaddle.diagnose(running(0.0))
    validator.validate(singular)
    assert singular["verdict"] == "singular"
    u = np.array(singular["witness"])
    assert dsaddle.witness_residual(running(0.0), u) <= 1e-8
    assert np.linalg.norm(running(0.0).assemble() @ u) <= 1e-8


def test_conditions():
    c = dsaddle.conditions(running())
    assert c == {"N1": True, "N2": True, "N3": True, "R": False, "DS1": True, "DS2": False}


def test_inverse_constructors_agree():
    s = running()
    for build in (dsaddle.three_block_inverse, dsaddle.inverse_via_factorization,
                  dsaddle.dense_inverse):
        assert np.max(np.abs(build(s) - RUNNING_INVERSE)) <= 1e-12
    x = dsaddle.two_block_inverse(np.diag([0.0, 1.0]), np.array([[1.0, 0.0]]), np.array([[3.0]]))
    assert np.allclose(x, [[3, 0, 1], [0, 1, 0], [1, 0, 0]], atol=1e-12)
    with pytest.raises(dsaddle.PreconditionError):
        dsaddle.three_block_inverse(running(0.0))


def test_schur_tilde_and_bounds():
    s_tilde = dsaddle.schur_tilde_S(running(), 1.0)
    assert np.allclose(s_tilde, [[-0.5, 0.5], [0.5, 1.5]], atol=1e-14)
    bounds = dsaddle.z22_nullity_bounds(running())
    assert bounds["null_Z22"] == 1
    assert bounds["all_hold"]


def test_generate_is_deterministic(validator):
    spec = {"n": 5, "m": 3, "p": 2, "null_A": 3, "rank_B": 3, "require_DS1": True, "seed": 4}
    a, cert_a = dsaddle.generate(spec)
    b, cert_b = dsaddle.generate(spec)
    assert a == b
    assert cert_a == cert_b
    validator.validate(cert_a)
    assert cert_a["measured"]["null_A"] == 3
    assert dsaddle.oracle_invertible(a)
    with pytest.raises(dsaddle.DataError):
        dsaddle.generate({"n": 2, "bogus": 1})


def test_block_directory_round_trip(tmp_path):
    s, _ = dsaddle.generate({"n": 4, "m": 3, "p": 2, "seed": 9})
    dsaddle.save_block_system(tmp_path, s)
    assert dsaddle.load_block_system(tmp_path) == s
    assert dsaddle.load_block_system(FIXTURE) == running()
    with pytest.raises(dsaddle.DataError):
        dsaddle.load_block_system(tmp_path / "missing")


@pytest.mark.skipif("DSADDLE_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_reports_match_schema(tmp_path, validator):
    cli = os.environ["DSADDLE_CLI"]

    def run(*args):
        return subprocess.run([cli, *args, "--format", "json"], capture_output=True, text=True)

    diag = run("diagnose", "-i", str(FIXTURE))
    assert diag.returncode == 0
    validator.validate(json.loads(diag.stdout))
    assert json.loads(diag.stdout) == dsaddle.diagnose(running())

    inv = run("invert", "-i", str(FIXTURE), "-o", str(tmp_path / "inv"))
    assert inv.returncode == 0
    validator.validate(json.loads(inv.stdout))

    ver = run("verify", "-i", str(FIXTURE))
    assert ver.returncode == 0
    validator.validate(json.loads(ver.stdout))

    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"n": 3, "m": 2, "p": 2, "seed": 1}))
    gen = run("generate", "--spec", str(spec), "-o", str(tmp_path / "gen"))
    assert gen.returncode == 0
    validator.validate(json.loads(gen.stdout))
