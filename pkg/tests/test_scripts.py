import importlib.util
import sys
from pathlib import Path

import pytest

from beliefuse.proof import DEFAULT_LIBRARY, build, check_proof, parse_script

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod  # dataclasses resolve annotations through sys.modules
    spec.loader.exec_module(mod)
    return mod


def test_run_examples(capsys):
    load("run_examples").main(["--max-worlds", "2"])
    out = capsys.readouterr().out
    assert "cutting   [1>2>3>4](p & q): True" in out
    assert "cutting   [1>2>3>4](r & s) satisfiable: False" in out
    assert "split (trusting): True" in out
    assert out.count("no countermodel ≤ 2") == 2
    assert "rejected" not in out


def test_soundness_sweep_small(capsys):
    assert load("soundness_sweep").main(["--instances", "20", "--models-per-lemma", "3"]) == 0
    assert "0 with violations" in capsys.readouterr().out


def test_sweep_config_is_reproducible():
    mod = load("soundness_sweep")
    a = mod.sweep_axioms(mod.SweepConfig(instances=5, seed=3))
    b = mod.sweep_axioms(mod.SweepConfig(instances=5, seed=3))
    assert a == b and set(a) >= {"DBFc:G1", "DBFs:V3"}


def test_export_matches_builders(tmp_path):
    mod = load("export_corpus")
    paths = mod.export(tmp_path, n_agents=2, max_len=2)
    names = {p.name for p in paths}
    assert {"example1_dbfc.prf", "example1_dbfs.prf", "example5.prf"} <= names
    p = tmp_path / mod.filename("DBFs", "Prop1.3(2>1)")
    assert p.read_text() == build("DBFs", "Prop1.3(2>1)")
    for path in paths:
        res = check_proof(parse_script(path.read_text(), path.name), DEFAULT_LIBRARY)
        assert res.ok, f"{path.name}: {res.summary()}"


@pytest.mark.parametrize("name", ["Prop1.1(1>2,2)", "Prop1.4(1>2)"])
def test_export_filenames_are_distinct(name):
    mod = load("export_corpus")
    assert mod.filename("DBFc", name) != mod.filename("DBFs", name)
