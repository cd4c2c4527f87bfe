import dataclasses
import random

import pytest

from beliefuse.formula import parse
from beliefuse.proof import (
    CORPUS,
    DEFAULT_LIBRARY,
    SCHEMAS,
    ProofLibrary,
    ScriptError,
    build,
    check_proof,
    lemma_instances,
    lemma_name,
    load_corpus,
    match_axiom,
    matches_schema,
    parse_script,
    render_script,
    verify_library,
)
from beliefuse.proof.script import Line
from beliefuse.sampling import axiom_instance


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.mark.parametrize(
    "text, system, name",
    [
        ("~[1] false", "DBFc", "G2"),
        ("~[3] false", "DBFs", "V2"),
        ("[{1,2}] p & [{1,2}] (p -> q) -> [{1,2}] q", "DBFc", "G1"),
        ("[1>2] p & [1>2] (p -> q) -> [1>2] q", "DBFs", "V1"),
        ("[{1>2, 3}] p & [{1>2, 3}] (p -> q) -> [{1>2, 3}] q", "DBFs", "V1"),
        ("[1] p -> [{1,2}] p", "DBFc", "G3"),
        ("[{1>2}] p -> [{1>2, 3}] p", "DBFs", "V3"),
        ("~[{1,2}] false -> ([1>2] p <-> [{1,2}] p)", "DBFc", "O1"),
        ("[{1,2}] false -> ([1>2] p <-> [1] p)", "DBFc", "O2"),
        ("~[{1,2}] false -> ([1>2] p <-> [{1,2}] p)", "DBFs", "O1'"),
        ("[{1>2, 3}] false -> ([{1>2>3, 4}] p <-> [{1>2, 4}] p)", "DBFs", "O2'"),
        ("p | ~p", "DBFc", "P"),
        ("[1] q -> [1] q", "DBFs", "P"),
    ],
)
def test_match_axiom(text, system, name):
    hit = match_axiom(parse(text), system)
    assert hit is not None and hit.name == name


@pytest.mark.parametrize(
    "text, system",
    [
        ("[1] p -> [2] p", "DBFc"),
        ("[1>2] p & [1>2] (p -> q) -> [1>2] q", "DBFc"),  # derived, not an axiom
        ("[{1,2}] p -> [1] p", "DBFc"),
        ("~[{1,2}] false", "DBFc"),
        ("[{1>2, 3}] p -> [{1>2, 3}] p", "DBFc"),  # order sets are outside DBFc
        ("~[{1,2}] false -> ([2>1] p <-> [{1,2}] q)", "DBFs"),
    ],
)
def test_non_axioms(text, system):
    assert match_axiom(parse(text), system) is None


def test_o2_drops_only_the_last_agent():
    assert matches_schema(parse("[{1,2,3}] false -> ([1>2>3] p <-> [1>2] p)"), "O2", "DBFc") is not None
    assert matches_schema(parse("[{1,2}] false -> ([1>2>3] p <-> [1] p)"), "O2", "DBFc") is None
    w = parse("[{1>2, 3}] false -> ([1>2>3] p <-> [1>2] p)")
    assert matches_schema(w, "O2'", "DBFs") is not None


def test_every_sampled_instance_matches_its_schema():
    rng = random.Random(11)
    for system, names in SCHEMAS.items():
        for name in names:
            for _ in range(50):
                w = axiom_instance(rng, name, system, ["p", "q"], 3)
                assert matches_schema(w, name, system) is not None, (system, name)


class TestCorpus:
    def test_names(self, corpus):
        assert set(corpus) == set(CORPUS)

    def test_line_counts(self, corpus):
        assert len(corpus["example1_dbfc.prf"].lines) == 3
        assert len(corpus["example1_dbfs.prf"].lines) == 11
        assert len(corpus["example5.prf"].lines) == 10

    @pytest.mark.parametrize("name", CORPUS)
    def test_verifies(self, corpus, name):
        res = check_proof(corpus[name], DEFAULT_LIBRARY)
        assert res.ok, res.summary()

    def test_example5_conclusion(self, corpus):
        res = check_proof(corpus["example5.prf"], DEFAULT_LIBRARY)
        assert res.conclusion == parse("[1] p & [2] ~p")

    def test_example5_group_belief_mutation(self, corpus):
        s = corpus["example5.prf"]
        lines = list(s.lines)
        lines[4] = Line(5, parse("[{1,2}] p"), lines[4].just)
        res = check_proof(dataclasses.replace(s, lines=tuple(lines)), DEFAULT_LIBRARY)
        assert not res.ok and res.line == 5

    def test_render_round_trip(self, corpus):
        for s in corpus.values():
            again = parse_script(render_script(s), s.name)
            assert again.lines == s.lines and again.premises == s.premises


class TestScriptFormat:
    def test_missing_system(self):
        with pytest.raises(ScriptError, match="system"):
            parse_script("1. p | ~p ; P\n")

    def test_numbering(self):
        with pytest.raises(ScriptError, match="numbered"):
            parse_script("system: DBFc\n2. p | ~p ; P\n")

    def test_bad_justification(self):
        with pytest.raises(ScriptError, match="unknown justification"):
            parse_script("system: DBFc\n1. p | ~p ; because\n")

    def test_premise_reference(self):
        s = parse_script("system: DBFc\npremise 1: p\n1. p ; Pre 1\n2. p | q ; P(pre1)\n")
        assert check_proof(s).ok

    def test_unknown_system(self):
        res = check_proof(parse_script("system: K45\n1. p | ~p ; P\n"))
        assert not res.ok and "unknown system" in res.reason


class TestChecker:
    def test_mp(self):
        s = parse_script("system: DBFc\npremise 1: p\npremise 2: p -> [1] q\n1. [1] q ; MP pre1 pre2\n")
        assert check_proof(s).ok

    def test_bad_mp(self):
        s = parse_script("system: DBFc\npremise 1: p\n1. q ; MP pre1 pre1\n")
        res = check_proof(s)
        assert not res.ok and res.line == 1

    def test_forward_reference(self):
        s = parse_script("system: DBFc\n1. p | ~p ; P(2)\n2. q | ~q ; P\n")
        res = check_proof(s)
        assert res.line == 1 and "earlier" in res.reason

    def test_wrong_schema(self):
        s = parse_script("system: DBFc\n1. [1] p -> [{1,2}] p ; AX O1\n")
        assert not check_proof(s).ok

    def test_schema_from_other_system(self):
        s = parse_script("system: DBFc\n1. ~[1] false ; AX V2\n")
        res = check_proof(s)
        assert not res.ok and "not a schema of DBFc" in res.reason

    def test_generalisation_from_premise_is_global(self):
        s = parse_script("system: DBFc\npremise 1: p\n1. p ; Pre 1\n2. [1] p ; Gen 1\n")
        res = check_proof(s)
        assert res.ok and not res.local

    def test_k_step_needs_hint(self):
        body = "([1] p & [1] (p -> q)) -> [1] q"
        assert not check_proof(parse_script(f"system: DBFc\n1. {body} ; P\n")).ok
        assert check_proof(parse_script(f"system: DBFc\n1. {body} ; P(G1)\n")).ok

    def test_language_violation(self):
        s = parse_script("system: DBFc\n1. [{1>2, 3}] p | ~[{1>2, 3}] p ; P\n")
        res = check_proof(s)
        assert not res.ok and "language" in res.reason


class TestLibrary:
    def test_lemma_names(self):
        assert lemma_name("Prop1.1", (1, 2, 3, 4), 2) == "Prop1.1(1>2>3>4,2)"
        assert lemma_name("Prop1.3", (2, 1)) == "Prop1.3(2>1)"

    def test_unknown_lemma(self):
        s = parse_script("system: DBFc\n1. p | ~p ; LEM Prop9.9(1>2)\n")
        res = check_proof(s, DEFAULT_LIBRARY)
        assert not res.ok and "unknown lemma" in res.reason

    def test_cutting_lemma_unavailable_in_dbfs(self):
        with pytest.raises(KeyError):
            build("DBFs", "Prop1.1(1>2,1)")

    def test_lemma_instance_count(self):
        # 64 orders over four agents; Prop1.1 has one instance per cut position
        inst = lemma_instances(4, 4)
        assert sum(1 for _s, n in inst if n.startswith("Prop1.1")) == 4 + 24 + 72 + 96
        assert len(inst) == 196 + 64 * 6

    def test_wrong_lemma_instance_rejected(self):
        s = parse_script("system: DBFc\n1. ~[1>2] p ; LEM Prop1.3(1>2)\n")
        res = check_proof(s, DEFAULT_LIBRARY)
        assert not res.ok and "instance" in res.reason

    def test_necessitation_lemma(self):
        s = parse_script(
            "system: DBFc\npremise 1: p | q\n1. p | q ; Pre 1\n2. [2>1>3] (p | q) ; LEM Prop1.4(2>1>3) 1\n"
        )
        res = check_proof(s, DEFAULT_LIBRARY)
        assert res.ok and not res.local

    def test_full_library_verifies(self):
        report = verify_library(4, 4, ProofLibrary())
        assert report.ok, report.failures[:3]
        assert report.checked == 196 + 64 * 6 + len(CORPUS)
