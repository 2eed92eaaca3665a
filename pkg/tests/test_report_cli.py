import json
from fractions import Fraction

import jsonschema
import numpy as np
import pytest

from severi.cli import main
from severi.errors import DegenerateSample
from severi.experiments import REGISTRY, ConfigError, Experiment, Outcome, run_experiment
from severi.report import EXIT_CONFIG, EXIT_DEGENERATE, EXIT_FAIL, EXIT_PASS, canonical_json, load_schema, to_jsonable

# one experiment per structural claim; the registry must cover exactly these
MANIFEST = {
    "contact-dims", "quadric-tangent", "unique-tangency", "secant-intersections", "qx-cone",
    "fibre-types", "second-fibre", "position-intersection", "five-types", "lines-in-tangent",
    "fano-dims", "n4-closure", "veronese-components", "veronese-gauss", "torelli-envelope",
}


def test_registry_matches_manifest():
    assert set(REGISTRY) == MANIFEST
    for exp in REGISTRY.values():
        assert exp.claim and exp.models


def test_reports_validate_against_schema():
    schema = load_schema()
    for name in ("contact-dims", "fano-dims"):
        doc = json.loads(run_experiment(name, "veronese", seed=3, samples=6).to_json())
        jsonschema.validate(doc, schema)
    doc = json.loads(run_experiment("five-types", "segre", "q", seed=3, samples=5).to_json())
    jsonschema.validate(doc, schema)


def test_failures_carry_witnesses():
    r = run_experiment("fano-dims", "veronese", seed=1, samples=6)
    assert r.status == "fail" and r.exit_code == EXIT_FAIL
    assert r.counts.failed == len(r.witnesses) > 0
    w = r.witnesses[0]
    assert w["type"] == "SECANT" and w["tangent_dim"] == 6 and len(w["a"]) == 6


def test_reports_are_byte_identical(monkeypatch):
    a = run_experiment("qx-cone", "grass", seed=12, samples=6).to_json()
    b = run_experiment("qx-cone", "grass", seed=12, samples=6).to_json()
    assert a == b
    monkeypatch.setenv("SEVERI_WORKERS", "2")
    assert run_experiment("qx-cone", "grass", seed=12, samples=6).to_json() == a


def test_numbers_are_strings():
    doc = to_jsonable({"a": 3, "b": Fraction(-1, 2), "c": np.int64(7), "d": [True]})
    assert doc == {"a": "3", "b": "-1/2", "c": "7", "d": [True]}
    with pytest.raises(TypeError):
        to_jsonable({"x": 0.5})
    assert canonical_json({"b": 1, "a": 2}).startswith('{\n  "a"')


def test_configuration_errors():
    with pytest.raises(ConfigError):
        run_experiment("no-such", "segre")
    with pytest.raises(ConfigError):
        run_experiment("torelli-envelope", "e6")
    with pytest.raises(ConfigError):
        run_experiment("torelli-envelope", "segre", "q")
    with pytest.raises(ConfigError):
        run_experiment("second-fibre", "veronese")
    with pytest.raises(ConfigError):
        run_experiment("contact-dims", "segre", prime=31990)


def test_degenerate_threshold(monkeypatch):
    def always_degenerate(space, rng, index):
        raise DegenerateSample("forced")

    def half(space, rng, index):
        return Outcome("pass") if index % 20 else Outcome("degenerate")

    monkeypatch.setitem(REGISTRY, "contact-dims", Experiment("contact-dims", "c", always_degenerate))
    assert run_experiment("contact-dims", "segre", samples=4).exit_code == EXIT_DEGENERATE
    monkeypatch.setitem(REGISTRY, "contact-dims", Experiment("contact-dims", "c", half))
    r = run_experiment("contact-dims", "segre", samples=40)
    assert r.counts.degenerate == 4 and r.exit_code == EXIT_PASS


class TestCli:
    def test_list(self, capsys):
        assert main(["list-experiments"]) == EXIT_PASS
        out = capsys.readouterr().out
        assert all(name in out for name in MANIFEST)

    def test_verify_writes_report(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["verify", "contact-dims", "--model", "segre", "--seed", "1", "--samples", "4", "--out", str(out)])
        assert code == EXIT_PASS
        doc = json.loads(out.read_text())
        assert doc["samples"]["passed"] == "8" and doc["primes"] == ["31991", "65537"]
        assert "contact-dims" in capsys.readouterr().out

    def test_verify_exit_codes(self, tmp_path):
        out = str(tmp_path / "r.json")
        assert main(["verify", "fano-dims", "--model", "veronese", "--samples", "3", "--out", out]) == EXIT_FAIL
        assert main(["verify", "torelli-envelope", "--model", "e6", "--out", out]) == EXIT_CONFIG
        assert main(["verify", "bogus", "--model", "segre", "--out", out]) == EXIT_CONFIG
        assert main(["verify", "contact-dims", "--model", "g2", "--out", out]) == EXIT_CONFIG

    def test_classify(self, capsys):
        # E11 and E22 span a secant line of the Veronese surface
        line = ["1", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "0"]
        assert main(["classify", "--model", "veronese", "--line", *line]) == EXIT_PASS
        assert "type SECANT" in capsys.readouterr().out
        assert main(["classify", "--model", "veronese", "--line", "1", "2"]) == EXIT_CONFIG

    def test_classify_off_cubic(self, capsys):
        line = ["1", "1", "1", "0", "0", "0", "1", "0", "0", "0", "0", "0"]
        # an input line off SX is a usage error, not a failed claim
        assert main(["classify", "--model", "veronese", "--prime", "31991", "--line", *line]) == EXIT_CONFIG
        assert "not contained in SX" in capsys.readouterr().err
