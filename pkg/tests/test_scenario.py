from pathlib import Path

import pytest

from hermsig.scenario import (
    ScenarioInvariantError,
    ScenarioParseError,
    ScenarioReferenceError,
    corpus_generate,
    dump_scenario,
    load_scenario,
    loads_scenario,
)

SCENARIOS = sorted((Path(__file__).parent.parent / "scenarios").glob("*.toml"))

BASIC = """
[base]
factors = [[-2, 0, 1]]

[algebra]
n = 1
division = { kind = "base" }
standard = "transpose"

[form.h]
over = "algebra"
epsilon = 1
diagonal = [1, "1/2", { scalar = [0, 1] }]
"""


def test_example_scenarios_load_and_round_trip():
    assert SCENARIOS
    for path in SCENARIOS:
        sc = load_scenario(path)
        assert loads_scenario(dump_scenario(sc)) == sc


def test_generated_corpus_round_trips():
    insts = corpus_generate(3, 20)
    assert len(insts) == 20
    for sc in insts:
        again = loads_scenario(dump_scenario(sc))
        assert again == sc
        assert dump_scenario(again) == dump_scenario(sc)


def test_corpus_is_deterministic():
    a = [dump_scenario(s) for s in corpus_generate(5, 4)]
    b = [dump_scenario(s) for s in corpus_generate(5, 4)]
    assert a == b


def test_basic_parse():
    sc = loads_scenario(BASIC)
    over, h = sc.forms["h"]
    assert over == "algebra" and h.dim == 3 and h.epsilon == 1
    assert len(sc.base.orderings) == 2


def _error(text):
    with pytest.raises((ScenarioParseError, ScenarioInvariantError, ScenarioReferenceError)) as info:
        loads_scenario(text)
    return info.value


def test_unknown_section_is_located():
    err = _error(BASIC + "\n[mystery]\nx = 1\n")
    assert isinstance(err, ScenarioParseError)
    assert "[mystery]" in err.location and "line 15" in err.location


def test_non_squarefree_base_is_an_invariant_error():
    err = _error("[base]\nfactors = [[1, 2, 1]]\n")
    assert isinstance(err, ScenarioInvariantError)
    assert "[base] (line 1)" in str(err)


def test_non_hermitian_gram_is_rejected():
    text = BASIC.replace('diagonal = [1, "1/2", { scalar = [0, 1] }]', "gram = [[1, 2], [3, 4]]")
    err = _error(text)
    assert isinstance(err, ScenarioInvariantError)
    assert "[form.h]" in err.location


def test_unresolved_references():
    err = _error(BASIC.replace('over = "algebra"', 'over = "extended"'))
    assert isinstance(err, ScenarioReferenceError)
    err = _error(BASIC + '\n[params]\neta = "nope"\n')
    assert isinstance(err, ScenarioReferenceError) and "[params]" in err.location


def test_bad_rational_and_parameter():
    err = _error(BASIC.replace('"1/2"', '"one half"'))
    assert isinstance(err, ScenarioParseError)
    err = _error(BASIC + "\n[params]\nspeed = 3\n")
    assert isinstance(err, ScenarioParseError)


def test_toml_syntax_error():
    with pytest.raises(ScenarioParseError):
        loads_scenario("[base\nfactors = 1")
