"""Deterministic Rabin word automata and Mealy machines.

Letters are pairs (input, output) over two named, finite, atomic alphabets.
Every Rabin automaton carries a designated universal sink state ``top`` that
accepts every word; constructors append one when it is missing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .scc import nontrivial_sccs, reachable

TOP_NAME = "top"

IMPLIES = "implies"
AND = "and"
OR = "or"
COMBINATION_KINDS = (IMPLIES, AND, OR)


class SpecError(Exception):
    """Base class for all user-facing errors of this package."""


class FormatError(SpecError):
    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


class AlphabetMismatchError(SpecError):
    pass


class ShapeError(SpecError):
    """Raised when AND/IMPLIES derivation is requested on non-Buchi-shaped input."""


@dataclass(frozen=True)
class Alphabet:
    """Input letters (environment) and output letters (system), order-stable."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __post_init__(self):
        if not self.inputs or not self.outputs:
            raise SpecError("alphabet sides must be non-empty")
        if len(set(self.inputs)) != len(self.inputs):
            raise SpecError("duplicate input letter")
        if len(set(self.outputs)) != len(self.outputs):
            raise SpecError("duplicate output letter")
        if set(self.inputs) & set(self.outputs):
            raise SpecError("input and output letters must be disjoint")

    def letters(self):
        """All (input, output) pairs in declaration order."""
        return itertools.product(self.inputs, self.outputs)

    def check_letter(self, letter):
        i, o = letter
        if i not in self.inputs or o not in self.outputs:
            raise SpecError(f"letter ({i}, {o}) not in alphabet")


@dataclass(frozen=True)
class RunOutcome:
    """Loop portion of a lasso run and its Rabin verdict."""

    visited_infinitely: frozenset
    accepting: bool


class RabinWordAutomaton:
    """Deterministic, total Rabin word automaton over (input, output) letters.

    `transition` maps (state, input, output) to the successor state. `pairs`
    is a list of (F, G) state sets; a run is accepting iff for some pair the
    states visited infinitely often avoid F and meet G.
    """

    def __init__(self, name, alphabet, states, initial, transition, pairs):
        self.name = name
        self.alphabet = alphabet
        states = list(states)
        if len(set(states)) != len(states):
            raise SpecError("duplicate state name")
        if initial not in states:
            raise SpecError(f"initial state {initial!r} not declared")
        state_set = set(states)
        trans = {}
        for s in states:
            for i, o in alphabet.letters():
                try:
                    t = transition[(s, i, o)]
                except KeyError:
                    raise SpecError(
                        f"missing transition for state {s!r} on letter ({i}, {o})"
                    ) from None
                if t not in state_set:
                    raise SpecError(f"transition target {t!r} not declared")
                trans[(s, i, o)] = t
        pairs = [(frozenset(f), frozenset(g)) for f, g in pairs]
        for f, g in pairs:
            for q in f | g:
                if q not in state_set:
                    raise SpecError(f"acceptance pair refers to unknown state {q!r}")

        if TOP_NAME in state_set:
            self._validate_top(TOP_NAME, trans, pairs)
            top = TOP_NAME
        else:
            top = TOP_NAME
            states.append(top)
            for i, o in alphabet.letters():
                trans[(top, i, o)] = top
            pairs = [(f, g | {top}) for f, g in pairs]

        self.states = tuple(states)
        self.initial = initial
        self.transition = trans
        self.pairs = tuple(pairs)
        self.top = top
        self._index = {s: k for k, s in enumerate(self.states)}

    def _validate_top(self, top, trans, pairs):
        for i, o in self.alphabet.letters():
            if trans[(top, i, o)] != top:
                raise SpecError("state named 'top' must be a self-loop sink")
        if pairs and not any(top not in f and top in g for f, g in pairs):
            raise SpecError(
                "state named 'top' must lie in G and outside F of some pair"
            )

    def step(self, state, letter):
        return self.transition[(state, letter[0], letter[1])]

    def run_lasso(self, prefix, cycle):
        """Run prefix.cycle^omega and report the loop states and the verdict."""
        if not cycle:
            raise SpecError("lasso cycle must be non-empty")
        for letter in itertools.chain(prefix, cycle):
            self.alphabet.check_letter(letter)
        s = self.initial
        for letter in prefix:
            s = self.step(s, letter)
        seen = {}
        trail = []
        pos = 0
        while (s, pos) not in seen:
            seen[(s, pos)] = len(trail)
            trail.append(s)
            s = self.step(s, cycle[pos])
            pos = (pos + 1) % len(cycle)
        loop = frozenset(trail[seen[(s, pos)]:])
        accepting = any(not (loop & f) and loop & g for f, g in self.pairs)
        return RunOutcome(loop, accepting)

    def accepts_lasso(self, prefix, cycle):
        return self.run_lasso(prefix, cycle).accepting

    def successors(self, state):
        return [self.step(state, letter) for letter in self.alphabet.letters()]

    def nonempty_from(self, state):
        """True iff some accepting run starts at `state`.

        Per pair (F, G): look for a reachable cycle inside states minus F
        that touches G. The path to the cycle may cross F.
        """
        if state not in self._index:
            raise SpecError(f"unknown state {state!r}")
        n = len(self.states)
        succ = [
            [self._index[t] for t in self.successors(s)] for s in self.states
        ]
        reach = reachable([self._index[state]], succ)
        for f, g in self.pairs:
            allowed = [k for k in range(n) if self.states[k] not in f]
            allowed_set = set(allowed)
            sub = {
                k: [w for w in succ[k] if w in allowed_set] for k in allowed
            }
            remap = {k: j for j, k in enumerate(allowed)}
            comps = nontrivial_sccs(
                len(allowed), [[remap[w] for w in sub[k]] for k in allowed]
            )
            for comp in comps:
                verts = [allowed[j] for j in comp]
                if any(v in reach for v in verts) and any(
                    self.states[v] in g for v in verts
                ):
                    return True
        return False


def accepts_lasso(aut, prefix, cycle):
    return aut.accepts_lasso(prefix, cycle)


def nonempty_from(aut, state):
    return aut.nonempty_from(state)


def _check_buchi_shaped(aut, role):
    if len(aut.pairs) != 1 or aut.pairs[0][0]:
        raise ShapeError(
            f"{role} automaton {aut.name!r} is not Buchi-shaped (one pair, empty F); "
            "supply the combined automaton explicitly"
        )


def derive_combination(a, g, kind):
    """Product automaton for A->G, A and G, or A or G on a shared alphabet.

    OR works for arbitrary Rabin inputs. AND and IMPLIES require both inputs
    Buchi-shaped: a single pair with empty F.
    """
    if kind not in COMBINATION_KINDS:
        raise SpecError(f"unknown combination kind {kind!r}")
    if a.alphabet != g.alphabet:
        raise AlphabetMismatchError(
            f"automata {a.name!r} and {g.name!r} have different alphabets"
        )
    alphabet = a.alphabet
    if kind in (AND, IMPLIES):
        _check_buchi_shaped(a, "assumption")
        _check_buchi_shaped(g, "guarantee")
        good_a = a.pairs[0][1]
        good_g = g.pairs[0][1]

    def advance(counter, qa, qg):
        if counter == 0 and qa in good_a:
            return 1
        if counter == 1 and qg in good_g:
            return 0
        return counter

    if kind == AND:
        start = (a.initial, g.initial, 0)
    else:
        start = (a.initial, g.initial)

    states = [start]
    seen = {start}
    transition = {}
    k = 0
    while k < len(states):
        cur = states[k]
        k += 1
        qa, qg = cur[0], cur[1]
        for i, o in alphabet.letters():
            ta, tg = a.transition[(qa, i, o)], g.transition[(qg, i, o)]
            if kind == AND:
                nxt = (ta, tg, advance(cur[2], qa, qg))
            else:
                nxt = (ta, tg)
            transition[(cur, i, o)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                states.append(nxt)

    def name_of(s):
        return ",".join(str(part) for part in s)

    named_trans = {
        (name_of(s), i, o): name_of(t) for (s, i, o), t in transition.items()
    }
    named_states = [name_of(s) for s in states]
    if kind == OR:
        pairs = []
        for f, gset in a.pairs:
            pairs.append(
                (
                    {name_of(s) for s in states if s[0] in f},
                    {name_of(s) for s in states if s[0] in gset},
                )
            )
        for f, gset in g.pairs:
            pairs.append(
                (
                    {name_of(s) for s in states if s[1] in f},
                    {name_of(s) for s in states if s[1] in gset},
                )
            )
    elif kind == IMPLIES:
        pairs = [
            ({name_of(s) for s in states if s[0] in good_a}, set(named_states)),
            (set(), {name_of(s) for s in states if s[1] in good_g}),
        ]
    else:
        pairs = [
            (set(), {name_of(s) for s in states if s[2] == 1 and s[1] in good_g}),
        ]
    return RabinWordAutomaton(
        name=f"{a.name}_{kind}_{g.name}",
        alphabet=alphabet,
        states=named_states,
        initial=name_of(start),
        transition=named_trans,
        pairs=pairs,
    )


class MealyStrategy:
    """Finite-state implementation: emit an output, then consume an input.

    `level_of` optionally annotates states with cooperation level names.
    """

    def __init__(self, name, alphabet, states, initial, output_of, next_state,
                 level_of=None):
        self.name = name
        self.alphabet = alphabet
        states = list(states)
        if len(set(states)) != len(states):
            raise SpecError("duplicate machine state")
        if initial not in states:
            raise SpecError(f"initial state {initial!r} not declared")
        for s in states:
            if s not in output_of:
                raise SpecError(f"state {s!r} has no emitted output")
            if output_of[s] not in alphabet.outputs:
                raise SpecError(f"state {s!r} emits unknown output {output_of[s]!r}")
            for i in alphabet.inputs:
                if (s, i) not in next_state:
                    raise SpecError(f"state {s!r} has no successor on input {i!r}")
                if next_state[(s, i)] not in states:
                    raise SpecError(
                        f"successor {next_state[(s, i)]!r} of {s!r} not declared"
                    )
        self.states = tuple(states)
        self.initial = initial
        self.output_of = dict(output_of)
        self.next_state = dict(next_state)
        self.level_of = dict(level_of) if level_of else None

    def output(self, state):
        return self.output_of[state]

    def step(self, state, inp):
        return self.next_state[(state, inp)]

    def trace(self, inputs):
        """Letters (input, output) produced on the given input word."""
        s = self.initial
        out = []
        for i in inputs:
            if i not in self.alphabet.inputs:
                raise SpecError(f"unknown input letter {i!r}")
            out.append((i, self.output_of[s]))
            s = self.next_state[(s, i)]
        return out

    def trimmed(self):
        """Copy with only the states reachable from the initial one."""
        keep = [self.initial]
        seen = {self.initial}
        k = 0
        while k < len(keep):
            s = keep[k]
            k += 1
            for i in self.alphabet.inputs:
                t = self.next_state[(s, i)]
                if t not in seen:
                    seen.add(t)
                    keep.append(t)
        return MealyStrategy(
            self.name,
            self.alphabet,
            keep,
            self.initial,
            {s: self.output_of[s] for s in keep},
            {(s, i): self.next_state[(s, i)] for s in keep for i in self.alphabet.inputs},
            {s: self.level_of[s] for s in keep} if self.level_of else None,
        )
