import pytest

from coopsynt import parse_level
from coopsynt.checker import (
    BobbleQuery,
    ProductGraph,
    bobble_level,
    check_exists,
    check_globally_exists,
    check_level,
    check_level_detailed,
    check_universal,
    classify,
    satisfied_levels,
)
from coopsynt.fixtures import constant_machine
from coopsynt.hierarchy import BaseProp


def const(running, k):
    a, _ = running
    return constant_machine(a.alphabet, f"y{k}", name=f"tau{k}")


def test_product_graph_shape(running):
    a, _ = running
    graph = ProductGraph(const(running, 0), a)
    assert all(len(edges) == len(a.alphabet.inputs) for edges in graph.succ)


def test_check_universal_examples(running, running_bases):
    a, g = running
    and_aut = running_bases[BaseProp.AND]
    implies_aut = running_bases[BaseProp.IMPLIES]
    assert check_universal(const(running, 0), and_aut)
    assert check_universal(const(running, 5), implies_aut)
    assert not check_universal(const(running, 5), g)
    univ = ProductGraph(const(running, 7), a).aut  # any machine vs universal
    # a one-pair automaton whose G covers everything accepts all machines
    from coopsynt import RabinWordAutomaton
    full = RabinWordAutomaton(
        "full", a.alphabet, ["u"], "u",
        {("u", i, o): "u" for i, o in a.alphabet.letters()},
        [(set(), {"u"})],
    )
    for k in (0, 5, 9):
        assert check_universal(const(running, k), full)


def test_check_exists_examples(running):
    a, g = running
    assert check_exists(const(running, 4), g)
    assert not check_exists(const(running, 2), a)
    from coopsynt import RabinWordAutomaton
    empty = RabinWordAutomaton(
        "empty", a.alphabet, ["u"], "u",
        {("u", i, o): "u" for i, o in a.alphabet.letters()},
        [],
    )
    for k in (0, 4):
        assert not check_exists(const(running, k), empty)


def test_check_globally_exists_examples(running, running_bases):
    a, g = running
    implies_aut = running_bases[BaseProp.IMPLIES]
    assert check_globally_exists(const(running, 3), a)
    assert not check_globally_exists(const(running, 7), a)
    assert check_globally_exists(const(running, 6), implies_aut)
    assert not check_globally_exists(const(running, 6), g)
    assert not check_globally_exists(const(running, 6), a)


def test_check_level_examples(running, running_bases):
    assert check_level(const(running, 1), parse_level("G & GE(A)"), running_bases)
    assert check_level(const(running, 11), parse_level("GE(A*G)"), running_bases)
    assert not check_level(const(running, 11), parse_level("A"), running_bases)
    assert check_level(const(running, 3), parse_level("A->G & GE(A)"), running_bases)


# golden classification table for the thirteen constant behaviors
TAU_LEVELS = {
    0: "A*G",
    1: "G & GE(A)",
    2: "G",
    3: "A->G & GE(A)",
    4: "A->G & GE(G)",
    5: "A->G",
    6: "GE(A->G)",
    7: "GE(G)",
    8: "A & GE(G)",
    9: "A",
    10: "GE(A)",
    11: "GE(A*G)",
    12: "GE(A) & GE(A->G)",
}


@pytest.mark.parametrize("k", sorted(TAU_LEVELS))
def test_classification_table(running, running_bases, base_lattice, k):
    got = classify(const(running, k), base_lattice, running_bases)
    assert [lv.name for lv in got] == [TAU_LEVELS[k]]


def test_classify_returns_antichain(running, running_bases, base_lattice):
    for k in TAU_LEVELS:
        got = classify(const(running, k), base_lattice, running_bases)
        for x in got:
            for y in got:
                if x != y:
                    assert not x.implies(y) and not y.implies(x)


def test_satisfied_levels_downward_closed(running, running_bases, base_lattice):
    for k in (0, 6, 11):
        sat = set(satisfied_levels(const(running, k), base_lattice, running_bases))
        for lv in sat:
            for other in base_lattice.levels:
                if lv.implies(other):
                    assert other in sat


def test_modal_strength_chain(running, running_bases):
    # universal implies globally-exists implies exists, on every combination
    machines = [const(running, k) for k in range(13)]
    for aut in running_bases.values():
        for m in machines:
            u = check_universal(m, aut)
            ge = check_globally_exists(m, aut)
            e = check_exists(m, aut)
            assert (not u or ge) and (not ge or e)


def test_universal_distributes_over_and(running, running_bases):
    a, g = running
    and_aut = running_bases[BaseProp.AND]
    for k in range(13):
        m = const(running, k)
        assert check_universal(m, and_aut) == (
            check_universal(m, a) and check_universal(m, g)
        )


def test_detailed_witnesses(running, running_bases, base_lattice):
    a, g = running
    m = const(running, 4)
    ok, records = check_level_detailed(m, parse_level("A->G & GE(G)"), running_bases)
    assert ok and all(r["satisfied"] for r in records)
    # violated universal conjunct comes with a counterexample lasso
    ok, records = check_level_detailed(m, parse_level("G"), running_bases)
    assert not ok
    rec = next(r for r in records if r["conjunct"] == "G")
    prefix, cycle = rec["witness_lasso"]
    assert not g.accepts_lasso(prefix, cycle)
    assert [i for i, _ in m.trace([i for i, _ in prefix + cycle])] \
        == [i for i, _ in prefix + cycle]
    # satisfied existential conjunct on the full-e side
    ok, records = check_level_detailed(
        m, parse_level("E(G)", "full-e"),
        running_bases | {BaseProp.OR: running_bases[BaseProp.AND]},
    )
    assert ok
    prefix, cycle = records[0]["witness_lasso"]
    assert g.accepts_lasso(prefix, cycle)
    outs = [o for _, o in m.trace([i for i, _ in prefix + cycle])]
    assert outs == [o for _, o in prefix + cycle]


def test_bobble_of_empty_split_is_classify(running, running_bases, base_lattice):
    for k in (0, 3, 6, 12):
        m = const(running, k)
        assert bobble_level(BobbleQuery(m, ()), base_lattice, running_bases) \
            == classify(m, base_lattice, running_bases)


def test_bobble_never_below_full_tree(running, running_bases, base_lattice):
    # cutting to a bobble tree keeps every level the full tree fulfills
    import itertools
    a, _ = running
    for k in (1, 4, 6, 10):
        m = const(running, k)
        full = set(satisfied_levels(m, base_lattice, running_bases))
        for depth in (1, 2, 3):
            for split in itertools.product(a.alphabet.inputs, repeat=depth):
                memo_levels = bobble_level(
                    BobbleQuery(m, split), base_lattice, running_bases
                )
                sat = {
                    lv for lv in base_lattice.levels
                    if any(top.implies(lv) for top in memo_levels)
                }
                assert full <= sat, (k, split)


def test_bobble_invalid_letter(running, running_bases, base_lattice):
    m = const(running, 0)
    with pytest.raises(Exception):
        bobble_level(BobbleQuery(m, ("bogus",)), base_lattice, running_bases)


def test_exists_false_on_pairless_automaton(running):
    from coopsynt import RabinWordAutomaton
    a, _ = running
    no_pairs = RabinWordAutomaton(
        "no_pairs", a.alphabet, ["u"], "u",
        {("u", i, o): "u" for i, o in a.alphabet.letters()},
        [],
    )
    for k in (0, 4):
        assert not check_exists(const(running, k), no_pairs)


def test_bobble_strictly_above_root_after_ack(trigack, trigack_bases, base_lattice):
    from coopsynt.maxcoop import synthesize_max_coop
    a, g = trigack
    machine, _ = synthesize_max_coop(a, g)
    root = classify(machine, base_lattice, trigack_bases)
    assert [lv.name for lv in root] == ["G"]
    after_ack = bobble_level(BobbleQuery(machine, ("ack",)), base_lattice,
                             trigack_bases)
    assert any(lv.implies(root[0]) and lv != root[0] for lv in after_ack)
    assert [lv.name for lv in after_ack] == ["G & GE(A)"]
