import pytest

from coopsynt import FormatError, parse_dra, parse_mealy, render_dra, render_mealy
from coopsynt.fixtures import constant_machine, fixture_text, running_example


def test_running_example_parses_with_appended_top():
    a, g = running_example()
    declared = {f"q{k}" for k in range(17)}
    assert set(a.states) == declared | {"top"}
    assert a.alphabet.inputs == ("x0", "x1", "x2")
    assert len(a.alphabet.outputs) == 13
    assert len(a.pairs) == 1
    f, gset = a.pairs[0]
    assert f == frozenset()
    assert gset & declared == {"q0", "q6", "q7", "q8", "q9", "q11", "q12"}
    assert g.pairs[0][1] & declared == {"q2", "q13", "q14", "q15"}


def test_first_match_wins():
    aut = parse_dra(fixture_text("running_example_assumption.dra"))
    # q6 routes by input: the catch-all never fires before the labeled rules
    assert aut.step("q6", ("x0", "y3")) == "q6"
    assert aut.step("q6", ("x1", "y3")) == "q13"
    assert aut.step("q6", ("x2", "y3")) == "q5"
    assert aut.step("q2", ("x1", "y7")) == "q7"


def test_missing_transition_is_an_error():
    text = """
    dra broken
    inputs: x0 x1
    outputs: y0
    states: s0 initial s0
    trans: s0 x0 y0 -> s0
    pair: { } { s0 }
    """
    with pytest.raises(FormatError) as err:
        parse_dra(text)
    assert "x1" in str(err.value)


def test_syntax_errors_carry_line_numbers():
    with pytest.raises(FormatError) as err:
        parse_dra("dra x\ninputs: a\noutputs: b\nstates: s0 initial s0\ntrans: s0 a b s0\n")
    assert "line 5" in str(err.value)
    with pytest.raises(FormatError) as err:
        parse_dra("dra x\nbogus: 1\n")
    assert "line 2" in str(err.value)


def test_dangling_state_name():
    text = """
    dra broken
    inputs: x0
    outputs: y0
    states: s0 initial s0
    trans: s0 * * -> s1
    """
    with pytest.raises(FormatError) as err:
        parse_dra(text)
    assert "s1" in str(err.value)


def test_unknown_pair_member():
    text = """
    dra broken
    inputs: x0
    outputs: y0
    states: s0 initial s0
    trans: s0 * * -> s0
    pair: { s9 } { s0 }
    """
    with pytest.raises(FormatError):
        parse_dra(text)


def test_dra_roundtrip(running):
    for aut in running:
        again = parse_dra(render_dra(aut))
        assert again.states == aut.states
        assert again.initial == aut.initial
        assert again.transition == aut.transition
        assert again.pairs == aut.pairs
        assert again.top == aut.top
        assert again.alphabet == aut.alphabet


def test_dra_roundtrip_trigger_ack(trigack):
    for aut in trigack:
        again = parse_dra(render_dra(aut))
        assert again.transition == aut.transition and again.pairs == aut.pairs


def test_universal_one_state_equivalent_to_own_top():
    aut = parse_dra(
        "dra u\ninputs: x0\noutputs: y0\nstates: s0 initial s0\n"
        "trans: s0 * * -> s0\npair: { } { s0 }\n"
    )
    from_top = parse_dra(render_dra(aut).replace("initial s0", "initial top"))
    lassos = [[("x0", "y0")], [("x0", "y0"), ("x0", "y0")]]
    for cycle in lassos:
        assert aut.accepts_lasso([], cycle) == from_top.accepts_lasso([], cycle) is True


def test_mealy_roundtrip(running):
    a, _ = running
    m = constant_machine(a.alphabet, "y3")
    text = render_mealy(m)
    again = parse_mealy(text)
    assert again.states == m.states
    assert again.output_of == m.output_of
    assert again.next_state == m.next_state
    assert again.level_of is None


def test_mealy_level_lines_roundtrip(running):
    a, _ = running
    m = constant_machine(a.alphabet, "y0")
    m.level_of = {"s0": "A->G & GE(A)"}
    again = parse_mealy(render_mealy(m))
    assert again.level_of == {"s0": "A->G & GE(A)"}


def test_mealy_wildcard_and_errors():
    text = """
    mealy m
    inputs: a b
    outputs: p q
    states: s0 s1 initial s0
    emit: s0 p
    emit: s1 q
    next: s0 a -> s1
    next: s0 * -> s0
    next: s1 * -> s1
    """
    m = parse_mealy(text)
    assert m.step("s0", "a") == "s1"
    assert m.step("s0", "b") == "s0"
    with pytest.raises(FormatError):
        parse_mealy(text.replace("next: s1 * -> s1", ""))
    from coopsynt import SpecError
    with pytest.raises(SpecError):
        parse_mealy(text.replace("emit: s1 q", ""))


def test_derived_automata_roundtrip(trigack):
    from coopsynt import derive_combination
    a, g = trigack
    for kind in ("implies", "and", "or"):
        derived = derive_combination(a, g, kind)
        again = parse_dra(render_dra(derived))
        assert again.states == derived.states
        assert again.transition == derived.transition
        assert again.pairs == derived.pairs
