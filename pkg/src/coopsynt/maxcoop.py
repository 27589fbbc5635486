"""Maximally cooperative synthesis.

One tree automaton is built and solved per cooperation level, with every
base automaton tracked so that states of different levels can be matched by
the set of word states they track. Transitions are then re-routed to the
most preferred higher level whose matching state still has a non-empty
language; the synthesized machine follows the per-level winning strategies
and carries the current level as an annotation.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import AND, IMPLIES, OR, SpecError, derive_combination
from .games import UnrealizableError, solve_membership
from .hierarchy import (
    BaseProp,
    FULL_E,
    enumerate_levels,
    is_graylevel,
    ruleset_base_props,
)
from .trees import LATCHED, base_tuple_of, build_level_automaton, canonical_state


class NoRealizableLevelError(UnrealizableError):
    """No cooperation level is realizable from the initial states."""


_DERIVE_KIND = {BaseProp.IMPLIES: IMPLIES, BaseProp.AND: AND, BaseProp.OR: OR}


def build_bases(a, g, ruleset, overrides=None):
    """Base-property automata for a ruleset, deriving combinations as needed.

    `overrides` may map combined base properties to user-supplied automata,
    which is required when the inputs are not Buchi-shaped.
    """
    overrides = overrides or {}
    bases = {BaseProp.A: a, BaseProp.G: g}
    for prop in ruleset_base_props(ruleset):
        if prop in bases:
            continue
        if prop in overrides:
            bases[prop] = overrides[prop]
        else:
            bases[prop] = derive_combination(a, g, _DERIVE_KIND[prop])
    return bases


@dataclass
class LevelSolve:
    """One cooperation level's tree automaton and solved membership game."""

    level: object
    tree: object
    solution: object
    canonical: dict

    @property
    def winning(self):
        return self.solution.winning


class LevelIndexedAutomata:
    """All level automata over shared bases, with their non-empty state sets."""

    def __init__(self, lattice, bases, solves, base_tuples, acceptance_mode):
        self.lattice = lattice
        self.bases = bases
        self.solves = solves
        self.base_tuples = base_tuples
        self.acceptance_mode = acceptance_mode
        # candidate target levels per level, most preferred first; the level
        # itself is always last since stricter levels have larger closures
        self._above = [
            [k for k, kl in enumerate(lattice.levels) if kl.implies(jl)]
            for jl in lattice.levels
        ]

    def reroute(self, j, target):
        """Successor adjustment: the most preferred level at least as high as
        `j` with a matching non-empty state, the state unchanged when staying
        at `j`. Returns (j, target) unchanged if nothing matches."""
        base_tuple = base_tuple_of(self.solves[j].tree, target)
        for k in self._above[j]:
            if k == j:
                if target in self.solves[j].winning:
                    return (j, target)
            else:
                cand = self.solves[k].canonical.get(base_tuple)
                if cand is not None and cand in self.solves[k].winning:
                    return (k, cand)
        return (j, target)

    def initial_level(self):
        """Most preferred level whose initial state has non-empty language."""
        for j, solve in enumerate(self.solves):
            if solve.tree.initial in solve.winning:
                return j
        raise NoRealizableLevelError(
            "no cooperation level is realizable; even the weakest level has "
            "an empty language (degenerate assumption/guarantee pair)"
        )


def _reachable_base_tuples(bases, props):
    """All tuples of base-automaton states reachable on a common word."""
    alphabet = bases[props[0]].alphabet
    start = tuple(bases[p].initial for p in props)
    order = [start]
    seen = {start}
    k = 0
    while k < len(order):
        cur = order[k]
        k += 1
        for letter in alphabet.letters():
            nxt = tuple(
                bases[p].step(cur[pi], letter) for pi, p in enumerate(props)
            )
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return order


def assemble(lattice, bases, acceptance_mode=LATCHED):
    """Build and solve the track-all tree automaton of every lattice level."""
    if lattice.ruleset == FULL_E:
        raise SpecError(
            "maximally cooperative synthesis excludes levels with E "
            "conjuncts; use the base or or ruleset"
        )
    props = ruleset_base_props(lattice.ruleset)
    for p in props:
        if p not in bases:
            raise SpecError(f"missing base automaton for {p.token}")
    alphabet = bases[props[0]].alphabet
    for p in props:
        if bases[p].alphabet != alphabet:
            raise SpecError("base automata must share one alphabet")
    base_tuples = _reachable_base_tuples(bases, props)
    solves = []
    for level in lattice.levels:
        tree = build_level_automaton(
            level, bases, track_all=True, acceptance_mode=acceptance_mode,
            seed_tuples=base_tuples,
        )
        solution = solve_membership(tree)
        canonical = {bt: canonical_state(tree, bt) for bt in base_tuples}
        solves.append(LevelSolve(level, tree, solution, canonical))
    return LevelIndexedAutomata(lattice, bases, solves, base_tuples,
                                acceptance_mode)


class MaxCoopAutomaton:
    """The combined re-routed tree automaton over all level automata.

    States are (level index, level state) pairs; acceptance is the union of
    the per-level conditions; every transition weakly climbs the hierarchy.
    """

    def __init__(self, ix):
        self.ix = ix
        self.alphabet = ix.bases[ruleset_base_props(ix.lattice.ruleset)[0]].alphabet
        j0 = ix.initial_level()
        self.initial = (j0, ix.solves[j0].tree.initial)
        self.initial_level_index = j0

        states = [self.initial]
        index = {self.initial}
        transitions = {}
        k = 0
        while k < len(states):
            st = states[k]
            k += 1
            j, s = st
            tree = ix.solves[j].tree
            per_output = {}
            for o in self.alphabet.outputs:
                fs = []
                for f in tree.moves(s, o):
                    routed = tuple(ix.reroute(j, t) for t in f)
                    fs.append(routed)
                    for nxt in routed:
                        if nxt not in index:
                            index.add(nxt)
                            states.append(nxt)
                per_output[o] = tuple(fs)
            transitions[st] = per_output
        self.states = tuple(states)
        self.transitions = transitions

        pairs = []
        reached = set(states)
        for j, solve in enumerate(ix.solves):
            for f, g in solve.tree.pairs:
                lifted_f = {(j, s) for s in f if (j, s) in reached}
                lifted_g = {(j, s) for s in g if (j, s) in reached}
                if lifted_g:
                    pairs.append((frozenset(lifted_f), frozenset(lifted_g)))
        self.pairs = tuple(pairs)
        self.level_of = {st: st[0] for st in self.states}
        self.level_name_of = {
            st: ix.lattice.levels[st[0]].name for st in self.states
        }

    def unpack(self, state):
        j, s = state
        return self.ix.solves[j].tree.unpack(s)


def build_max_coop(ix):
    return MaxCoopAutomaton(ix)


def extract_max_coop(ix, name="max_coop"):
    """Level-annotated machine combining the per-level winning strategies.

    Plays follow the current level's positional strategy; whenever a
    successor matches a non-empty state of a more preferred higher level,
    the machine re-routes there and continues with that level's strategy.
    """
    from .automata import MealyStrategy

    j0 = ix.initial_level()
    alphabet = ix.solves[0].tree.alphabet
    inputs = alphabet.inputs
    start = (j0, ix.solves[j0].solution.seed(ix.solves[j0].tree.initial))
    names = {}
    order = []

    def intern(key):
        if key not in names:
            names[key] = f"s{len(names)}"
            order.append(key)
        return names[key]

    intern(start)
    output_of = {}
    next_state = {}
    level_of = {}
    k = 0
    while k < len(order):
        j, pid = order[k]
        k += 1
        s = names[(j, pid)]
        sol = ix.solves[j].solution
        choice = sol.cert.strategy[pid]
        gv, _ = sol.parity.origin[choice]
        o, fstates = sol.game.pdesc[gv]
        output_of[s] = o
        level_of[s] = ix.lattice.levels[j].name
        for ii, inp in enumerate(inputs):
            target = fstates[ii]
            kk, tstate = ix.reroute(j, target)
            if kk == j:
                nxt = (j, sol.parity.succ[choice][ii])
            else:
                nxt = (kk, ix.solves[kk].solution.seed(tstate))
            next_state[(s, inp)] = intern(nxt)
    return MealyStrategy(
        name=name,
        alphabet=alphabet,
        states=[names[key] for key in order],
        initial=names[start],
        output_of=output_of,
        next_state=next_state,
        level_of=level_of,
    )


def synthesis_report(ix, machine):
    """Per-level realizability summary plus the machine's level switches."""
    levels = []
    for j, solve in enumerate(ix.solves):
        levels.append({
            "name": solve.level.name,
            "preference_index": j,
            "gray": is_graylevel(solve.level),
            "realizable": solve.tree.initial in solve.winning,
            "w_size": len(solve.winning),
            "stats": solve.solution.stats,
        })
    switches = []
    for s in machine.states:
        for inp in machine.alphabet.inputs:
            t = machine.next_state[(s, inp)]
            if machine.level_of[s] != machine.level_of[t]:
                switches.append({
                    "from_state": s,
                    "input": inp,
                    "to_state": t,
                    "from_level": machine.level_of[s],
                    "to_level": machine.level_of[t],
                })
    return {
        "ruleset": ix.lattice.ruleset,
        "acceptance_mode": ix.acceptance_mode,
        "initial_level": ix.lattice.levels[ix.initial_level()].name,
        "levels": levels,
        "machine_states": len(machine.states),
        "switch_edges": switches,
    }


def synthesize_max_coop(a, g, ruleset="base", acceptance_mode=LATCHED,
                        preference=None, overrides=None, name="max_coop"):
    """End-to-end pipeline from an assumption/guarantee pair of word automata
    to a maximally cooperative level-annotated Mealy machine and its report."""
    bases = build_bases(a, g, ruleset, overrides)
    lattice = enumerate_levels(ruleset, preference)
    ix = assemble(lattice, bases, acceptance_mode)
    machine = extract_max_coop(ix, name=name)
    report = synthesis_report(ix, machine)
    return machine, report
