"""Line-oriented text formats for Rabin automata and Mealy machines.

Both formats are whitespace-tokenized with '#' comments. Transition rules
use first-match-wins semantics and '*' wildcards, so fixtures stay compact.
"""
from __future__ import annotations

import re

from .automata import Alphabet, FormatError, MealyStrategy, RabinWordAutomaton

_TOKEN = re.compile(r"\S+")


def _tokenize(text):
    """Yield (lineno, [(column, token), ...]) for non-empty lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]
        if toks:
            yield lineno, toks


class _Cursor:
    def __init__(self, lineno, toks):
        self.lineno = lineno
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][1] if self.pos < len(self.toks) else None

    def take(self, what="token"):
        if self.pos >= len(self.toks):
            raise FormatError(f"expected {what}", self.lineno)
        col, tok = self.toks[self.pos]
        self.pos += 1
        return col, tok

    def expect(self, literal):
        col, tok = self.take(repr(literal))
        if tok != literal:
            raise FormatError(f"expected {literal!r}, found {tok!r}", self.lineno, col)

    def rest(self):
        out = [t for _, t in self.toks[self.pos:]]
        self.pos = len(self.toks)
        return out

    def done(self):
        if self.pos != len(self.toks):
            col, tok = self.toks[self.pos]
            raise FormatError(f"unexpected trailing token {tok!r}", self.lineno, col)


def _parse_states_line(cur):
    toks = cur.rest()
    if "initial" not in toks:
        raise FormatError("states line must declare 'initial <state>'", cur.lineno)
    k = toks.index("initial")
    states = toks[:k]
    if len(toks) != k + 2:
        raise FormatError("exactly one initial state expected", cur.lineno)
    initial = toks[k + 1]
    if not states:
        raise FormatError("at least one state required", cur.lineno)
    if initial not in states:
        raise FormatError(f"initial state {initial!r} not in state list", cur.lineno)
    return states, initial


def _match_rule(rules, state, inp, out):
    for (rs, ri, ro, target, lineno) in rules:
        if rs == state and ri in (inp, "*") and ro in (out, "*"):
            return target, lineno
    return None, None


def parse_dra(text):
    """Parse the DRA text format into a validated RabinWordAutomaton."""
    name = None
    inputs = outputs = None
    states = initial = None
    rules = []
    pairs = []
    for lineno, toks in _tokenize(text):
        cur = _Cursor(lineno, toks)
        _, head = cur.take("section keyword")
        if head == "dra":
            _, name = cur.take("automaton name")
            cur.done()
        elif head == "inputs:":
            inputs = cur.rest()
        elif head == "outputs:":
            outputs = cur.rest()
        elif head == "states:":
            states, initial = _parse_states_line(cur)
        elif head == "trans:":
            _, src = cur.take("source state")
            _, i = cur.take("input letter or *")
            _, o = cur.take("output letter or *")
            cur.expect("->")
            _, dst = cur.take("target state")
            cur.done()
            rules.append((src, i, o, dst, lineno))
        elif head == "pair:":
            sets = []
            for _ in range(2):
                cur.expect("{")
                members = []
                while cur.peek() != "}":
                    _, tok = cur.take("state name or }")
                    members.append(tok)
                cur.expect("}")
                sets.append(members)
            cur.done()
            pairs.append((sets[0], sets[1], lineno))
        else:
            raise FormatError(f"unknown section {head!r}", lineno, toks[0][0])

    if name is None:
        raise FormatError("missing 'dra <name>' header")
    for label, value in (("inputs:", inputs), ("outputs:", outputs), ("states:", states)):
        if value is None:
            raise FormatError(f"missing {label} section in {name!r}")
    alphabet = Alphabet(tuple(inputs), tuple(outputs))
    state_set = set(states)
    for (src, i, o, dst, lineno) in rules:
        if src not in state_set:
            raise FormatError(f"rule source {src!r} is not a declared state", lineno)
        if dst not in state_set:
            raise FormatError(f"rule target {dst!r} is not a declared state", lineno)
        if i != "*" and i not in alphabet.inputs:
            raise FormatError(f"unknown input letter {i!r}", lineno)
        if o != "*" and o not in alphabet.outputs:
            raise FormatError(f"unknown output letter {o!r}", lineno)
    for f, g, lineno in pairs:
        for q in f + g:
            if q not in state_set:
                raise FormatError(f"pair member {q!r} is not a declared state", lineno)

    transition = {}
    for s in states:
        for i, o in alphabet.letters():
            target, _ = _match_rule(rules, s, i, o)
            if target is None:
                raise FormatError(
                    f"no transition rule matches state {s!r} on letter ({i}, {o})"
                )
            transition[(s, i, o)] = target
    return RabinWordAutomaton(
        name=name,
        alphabet=alphabet,
        states=states,
        initial=initial,
        transition=transition,
        pairs=[(set(f), set(g)) for f, g, _ in pairs],
    )


def _compressed_rules(states, letters, lookup):
    """Per-state rules with a majority catch-all, first-match order."""
    lines = []
    for s in states:
        counts = {}
        for i, o in letters:
            t = lookup(s, i, o)
            counts[t] = counts.get(t, 0) + 1
        default = max(counts, key=lambda t: (counts[t], t))
        for i, o in letters:
            t = lookup(s, i, o)
            if t != default:
                lines.append((s, i, o, t))
        lines.append((s, "*", "*", default))
    return lines


def render_dra(aut):
    out = [f"dra {aut.name}"]
    out.append("inputs: " + " ".join(aut.alphabet.inputs))
    out.append("outputs: " + " ".join(aut.alphabet.outputs))
    out.append("states: " + " ".join(aut.states) + f" initial {aut.initial}")
    letters = list(aut.alphabet.letters())
    for s, i, o, t in _compressed_rules(
        aut.states, letters, lambda s, i, o: aut.transition[(s, i, o)]
    ):
        out.append(f"trans: {s} {i} {o} -> {t}")
    order = {s: k for k, s in enumerate(aut.states)}
    for f, g in aut.pairs:
        fs = " ".join(sorted(f, key=order.get))
        gs = " ".join(sorted(g, key=order.get))
        out.append("pair: { " + (fs + " " if fs else "") + "} { " + (gs + " " if gs else "") + "}")
    return "\n".join(out) + "\n"


def parse_mealy(text):
    """Parse the Mealy text format, including optional 'level:' annotations."""
    name = None
    inputs = outputs = None
    states = initial = None
    emits = {}
    rules = []
    levels = {}
    for lineno, toks in _tokenize(text):
        cur = _Cursor(lineno, toks)
        _, head = cur.take("section keyword")
        if head == "mealy":
            _, name = cur.take("machine name")
            cur.done()
        elif head == "inputs:":
            inputs = cur.rest()
        elif head == "outputs:":
            outputs = cur.rest()
        elif head == "states:":
            states, initial = _parse_states_line(cur)
        elif head == "emit:":
            _, s = cur.take("state")
            _, o = cur.take("output letter")
            cur.done()
            if s in emits:
                raise FormatError(f"duplicate emit for state {s!r}", lineno)
            emits[s] = o
        elif head == "next:":
            _, src = cur.take("source state")
            _, i = cur.take("input letter or *")
            cur.expect("->")
            _, dst = cur.take("target state")
            cur.done()
            rules.append((src, i, dst, lineno))
        elif head == "level:":
            _, s = cur.take("state")
            level = " ".join(cur.rest())
            if not level:
                raise FormatError("empty level annotation", lineno)
            levels[s] = level
        else:
            raise FormatError(f"unknown section {head!r}", lineno, toks[0][0])

    if name is None:
        raise FormatError("missing 'mealy <name>' header")
    for label, value in (("inputs:", inputs), ("outputs:", outputs), ("states:", states)):
        if value is None:
            raise FormatError(f"missing {label} section in {name!r}")
    alphabet = Alphabet(tuple(inputs), tuple(outputs))
    next_state = {}
    for s in states:
        for i in alphabet.inputs:
            target = None
            for (rs, ri, dst, _) in rules:
                if rs == s and ri in (i, "*"):
                    target = dst
                    break
            if target is None:
                raise FormatError(f"no next rule matches state {s!r} on input {i!r}")
            next_state[(s, i)] = target
    return MealyStrategy(
        name=name,
        alphabet=alphabet,
        states=states,
        initial=initial,
        output_of=emits,
        next_state=next_state,
        level_of=levels or None,
    )


def render_mealy(machine):
    out = [f"mealy {machine.name}"]
    out.append("inputs: " + " ".join(machine.alphabet.inputs))
    out.append("outputs: " + " ".join(machine.alphabet.outputs))
    out.append("states: " + " ".join(machine.states) + f" initial {machine.initial}")
    for s in machine.states:
        out.append(f"emit: {s} {machine.output_of[s]}")
    for s in machine.states:
        counts = {}
        for i in machine.alphabet.inputs:
            t = machine.next_state[(s, i)]
            counts[t] = counts.get(t, 0) + 1
        default = max(counts, key=lambda t: (counts[t], t))
        for i in machine.alphabet.inputs:
            t = machine.next_state[(s, i)]
            if t != default:
                out.append(f"next: {s} {i} -> {t}")
        out.append(f"next: {s} * -> {default}")
    if machine.level_of:
        for s in machine.states:
            if s in machine.level_of:
                out.append(f"level: {s} {machine.level_of[s]}")
    return "\n".join(out) + "\n"
