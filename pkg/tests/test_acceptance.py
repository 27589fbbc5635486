"""Acceptance suite: one test per shipped criterion, each printing a verdict
line. Run with `pytest tests/test_acceptance.py -v -s` to see the lines."""
import itertools
import random
import time
from pathlib import Path

from coopsynt import is_graylevel
from coopsynt.checker import classify
from coopsynt.cli import main
from coopsynt.fixtures import constant_machine
from coopsynt.games import iar_to_parity, solve_parity
from coopsynt.maxcoop import synthesize_max_coop

from .oracles import (
    brute_force_parity_region0,
    brute_force_rabin_region0,
    machine_lasso,
    random_parity_game,
    random_rabin_game,
)
from .test_checker import TAU_LEVELS
from .test_hierarchy import GOLDEN_EDGES


def _verdict(number, ok, text):
    print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, f"criterion {number} failed: {text}"


def test_criterion_1_hierarchy_cardinalities(capsys):
    start = time.perf_counter()
    results = {}
    for args, expected in [
        (["hierarchy", "--set", "base", "--count"], "14"),
        (["hierarchy", "--set", "base", "--count", "--include-true"], "15"),
        (["hierarchy", "--set", "or", "--count"], "23"),
        (["hierarchy", "--set", "full-e", "--count"], "77"),
    ]:
        assert main(args) == 0
        results[tuple(args)] = capsys.readouterr().out.strip()
        assert results[tuple(args)] == expected, args
    elapsed = time.perf_counter() - start
    with capsys.disabled():
        _verdict(1, elapsed < 1.0,
                 f"level counts 14/15/23/77 exact in {elapsed:.3f}s (< 1s)")


def test_criterion_2_hasse_fidelity(base_lattice, capsys):
    edges = {(u.name, v.name) for u, v in base_lattice.hasse_edges()}
    gray = [lv for lv in base_lattice.levels if is_graylevel(lv)]
    ok = edges == GOLDEN_EDGES and len(edges) == 19 and len(gray) == 6
    with capsys.disabled():
        _verdict(2, ok, "base Hasse diagram matches the golden 19 edges "
                        "and 6 gray levels exactly")


def test_criterion_3_classification_table(running, running_bases, base_lattice,
                                           capsys):
    a, _ = running
    start = time.perf_counter()
    mismatches = []
    for k, expected in TAU_LEVELS.items():
        machine = constant_machine(a.alphabet, f"y{k}", name=f"tau{k}")
        got = [lv.name for lv in classify(machine, base_lattice, running_bases)]
        if got != [expected]:
            mismatches.append((k, got, expected))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 5.0
    with capsys.disabled():
        _verdict(3, ok, f"all 13 constant behaviors classified exactly per the "
                        f"golden table in {elapsed:.2f}s (< 5s); "
                        f"mismatches: {mismatches}")


def test_criterion_4_running_example_synthesis(running, capsys):
    a, g = running
    machine, report = synthesize_max_coop(a, g)
    ok = report["initial_level"] == "A*G"
    bad = []
    inputs = a.alphabet.inputs
    for np in range(0, 5):
        for prefix in itertools.product(inputs, repeat=np):
            for nc in range(1, 5):
                for cycle in itertools.product(inputs, repeat=nc):
                    lp, lc = machine_lasso(machine, list(prefix), list(cycle))
                    if not (a.accepts_lasso(lp, lc) and g.accepts_lasso(lp, lc)):
                        bad.append((prefix, cycle))
    ok = ok and not bad
    with capsys.disabled():
        _verdict(4, ok, "synthesized machine starts at level A*G and every "
                        "lasso to prefix 4 / cycle 4 satisfies both A and G "
                        f"({len(bad)} violations)")


def _switch_profile(machine, lattice, word):
    by_name = lattice.by_name
    s = machine.initial
    levels = [machine.level_of[s]]
    for i in word:
        s = machine.step(s, i)
        levels.append(machine.level_of[s])
    switches = 0
    monotone = True
    for prev, cur in zip(levels, levels[1:]):
        if prev != cur:
            switches += 1
            if not by_name[cur].implies(by_name[prev]):
                monotone = False
    return switches, monotone


def test_criterion_5_switch_monotonicity(running, trigack, base_lattice, capsys):
    problems = []
    for a, g, depth in [(running[0], running[1], 8), (trigack[0], trigack[1], 8)]:
        machine, _ = synthesize_max_coop(a, g)
        for d in range(1, depth + 1):
            for word in itertools.product(a.alphabet.inputs, repeat=d):
                switches, monotone = _switch_profile(machine, base_lattice, word)
                if not monotone or switches > len(base_lattice) - 1:
                    problems.append((a.name, word))
    # trigger/ack: exactly one switch iff the machine's trigger is acked
    ta, tg = trigack
    machine, _ = synthesize_max_coop(ta, tg)
    trig_step = None
    s = machine.initial
    for k in range(8):
        if machine.output_of[s] == "trig":
            trig_step = k
            break
        s = machine.step(s, "nack")
    for word in itertools.product(ta.alphabet.inputs, repeat=8):
        switches, _ = _switch_profile(machine, base_lattice, word)
        acked = trig_step is not None and word[trig_step] == "ack" \
            and all(w == "nack" for w in word[:trig_step])
        expected = 1 if acked else 0
        if switches != expected:
            problems.append(("trigack", word, switches, expected))
    with capsys.disabled():
        _verdict(5, not problems,
                 "levels non-decreasing with at most 13 switches to depth 8; "
                 "trigger/ack switches exactly once on acking sequences "
                 f"(problems: {problems[:3]})")


def test_criterion_6_solver_oracle_equivalence(capsys):
    start = time.perf_counter()
    disagreements = 0
    for seed in range(200):
        rng = random.Random(seed)
        pg = random_parity_game(rng, max_vertices=8, max_priority=4)
        if solve_parity(pg).region != brute_force_parity_region0(pg):
            disagreements += 1
    for seed in range(100):
        rng = random.Random(10_000 + seed)
        game = random_rabin_game(rng, max_vertices=6, pairs=2)
        parity = iar_to_parity(game, seeds=range(len(game)))
        cert = solve_parity(parity)
        got = {v for v in range(len(game)) if parity.seed_pid[v] in cert.region}
        if got != brute_force_rabin_region0(game):
            disagreements += 1
    elapsed = time.perf_counter() - start
    ok = disagreements == 0 and elapsed < 60.0
    with capsys.disabled():
        _verdict(6, ok, f"200 parity + 100 Rabin games match brute force "
                        f"({disagreements} disagreements) in {elapsed:.1f}s (< 60s)")


def test_criterion_7_rule_soundness(capsys):
    from coopsynt.hierarchy import ruleset_rules
    from .test_rule_soundness import _holds, _instance

    rules = ruleset_rules("base")
    violations = 0
    for seed in range(200):
        machine, bases = _instance(seed)
        memo = {}
        for premises, conclusion in rules:
            if all(_holds(machine, p, bases, memo) for p in premises):
                if not _holds(machine, conclusion, bases, memo):
                    violations += 1
    with capsys.disabled():
        _verdict(7, violations == 0,
                 f"200 random instances, every base rule: {violations} "
                 "counterexamples (0 required)")


def test_criterion_8_combination_correctness(trigack, capsys):
    from coopsynt import derive_combination

    a, g = trigack  # 2x2 alphabet
    letters = list(a.alphabet.letters())
    derived = {
        "and": (derive_combination(a, g, "and"), lambda x, y: x and y),
        "or": (derive_combination(a, g, "or"), lambda x, y: x or y),
        "implies": (derive_combination(a, g, "implies"), lambda x, y: (not x) or y),
    }
    bad = 0
    for np in range(0, 5):
        for prefix in itertools.product(letters, repeat=np):
            for nc in range(1, 5):
                for cycle in itertools.product(letters, repeat=nc):
                    va = a.accepts_lasso(prefix, list(cycle))
                    vg = g.accepts_lasso(prefix, list(cycle))
                    for aut, combine in derived.values():
                        if aut.accepts_lasso(prefix, list(cycle)) != combine(va, vg):
                            bad += 1
    with capsys.disabled():
        _verdict(8, bad == 0,
                 "derived AND/OR/IMPLIES agree with pointwise lasso semantics "
                 f"on all lassos to prefix 4 / cycle 4 over a 2x2 alphabet "
                 f"({bad} mismatches)")


def test_criterion_9_non_reproducible_content_stated(capsys):
    readme = Path(__file__).resolve().parent.parent / "README.md"
    text = readme.read_text()
    ok = "not reproduced" in text.lower() and "ltl" in text.lower()
    with capsys.disabled():
        _verdict(9, ok, "README states the out-of-scope LTL front end and the "
                        "hand-encoded example that are not reproduced")
