"""Non-deterministic Rabin tree automata over branching inputs and output labels.

Word automata are lifted per conjunct modality (all branches, one chosen
branch, one chosen branch through every node) and combined with a product.
The default product acceptance adds round-robin obligation counters so that
the combined condition is an exact conjunction of the factors' conditions;
the literal cartesian acceptance is kept behind a flag.
"""
from __future__ import annotations

import itertools

from .automata import AlphabetMismatchError, SpecError
from .hierarchy import Modality, ruleset_base_props

LATCHED = "latched"
LITERAL = "literal"
ACCEPTANCE_MODES = (LATCHED, LITERAL)

PLAIN_KIND = "plain"
FLAG_KIND = "flag"


class RabinTreeAutomaton:
    """Tree automaton with transitions state x output -> set of input maps.

    Each input map is a tuple of successor states indexed by input position.
    `factor_origin` names the word automaton each component tracks and
    `component_kinds` records whether a component carries a Boolean flag.
    Product states are pairs (components, latch).
    """

    def __init__(self, alphabet, states, initial, transitions, pairs,
                 factor_origin, component_kinds, is_product=False,
                 latch_width=0, name=None):
        self.alphabet = alphabet
        self.states = tuple(states)
        self.initial = initial
        self.transitions = transitions
        self.pairs = tuple((frozenset(f), frozenset(g)) for f, g in pairs)
        self.factor_origin = tuple(factor_origin)
        self.component_kinds = tuple(component_kinds)
        self.is_product = is_product
        self.latch_width = latch_width
        self.name = name

    def moves(self, state, output):
        return self.transitions[state][output]

    def components(self, state):
        return state[0] if self.is_product else (state,)

    def unpack(self, state):
        """Word-automaton states tracked by `state`, flags and latch dropped."""
        out = set()
        for origin, kind, comp in zip(
            self.factor_origin, self.component_kinds, self.components(state)
        ):
            out.add((origin, comp[0] if kind == FLAG_KIND else comp))
        return frozenset(out)

    def to_dot(self):
        lines = ["digraph tree_automaton {", "  node [shape=box];"]
        idx = {s: k for k, s in enumerate(self.states)}
        for s in self.states:
            tracked = sorted(f"{o}:{q}" for o, q in self.unpack(s))
            flags = [
                str(comp[1]).lower()
                for kind, comp in zip(self.component_kinds, self.components(s))
                if kind == FLAG_KIND
            ]
            label = " ".join(tracked) + (" | " + ",".join(flags) if flags else "")
            shape = ' peripheries=2' if s == self.initial else ""
            lines.append(f'  n{idx[s]} [label="{label}"{shape}];')
        for s in self.states:
            for o in self.alphabet.outputs:
                for f in self.transitions[s].get(o, ()):
                    for i, t in zip(self.alphabet.inputs, f):
                        lines.append(f'  n{idx[s]} -> n{idx[t]} [label="{i}/{o}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def lift_universal(w, origin=None):
    """Tree automaton enforcing w's language along every branch."""
    transitions = {}
    for q in w.states:
        per_output = {}
        for o in w.alphabet.outputs:
            per_output[o] = (
                tuple(w.transition[(q, i, o)] for i in w.alphabet.inputs),
            )
        transitions[q] = per_output
    return RabinTreeAutomaton(
        alphabet=w.alphabet,
        states=w.states,
        initial=w.initial,
        transitions=transitions,
        pairs=w.pairs,
        factor_origin=(origin or w.name,),
        component_kinds=(PLAIN_KIND,),
        name=f"all({w.name})",
    )


def lift_exists(w, origin=None):
    """Tree automaton requiring one chosen branch in w's language.

    The chosen input continues tracking w; every other branch is discharged
    at the universal sink.
    """
    transitions = {}
    for q in w.states:
        per_output = {}
        for o in w.alphabet.outputs:
            fs = []
            for chosen in w.alphabet.inputs:
                fs.append(tuple(
                    w.transition[(q, i, o)] if i == chosen else w.top
                    for i in w.alphabet.inputs
                ))
            per_output[o] = tuple(fs)
        transitions[q] = per_output
    return RabinTreeAutomaton(
        alphabet=w.alphabet,
        states=w.states,
        initial=w.initial,
        transitions=transitions,
        pairs=w.pairs,
        factor_origin=(origin or w.name,),
        component_kinds=(PLAIN_KIND,),
        name=f"some({w.name})",
    )


def lift_globally_exists(w, origin=None):
    """Tree automaton requiring, through every node, a branch in w's language.

    States carry a flag marking the chosen continuation; branches flagged
    false infinitely often are discharged by the extra acceptance pair.
    """
    states = [(q, b) for q in w.states for b in (True, False)]
    transitions = {}
    for q, b in states:
        per_output = {}
        for o in w.alphabet.outputs:
            fs = []
            for chosen in w.alphabet.inputs:
                fs.append(tuple(
                    (w.transition[(q, i, o)], i == chosen)
                    for i in w.alphabet.inputs
                ))
            per_output[o] = tuple(fs)
        transitions[(q, b)] = per_output
    pairs = [
        (
            {(q, True) for q in f},
            {(q, True) for q in g},
        )
        for f, g in w.pairs
    ]
    pairs.append((set(), {(q, False) for q in w.states}))
    return RabinTreeAutomaton(
        alphabet=w.alphabet,
        states=states,
        initial=(w.initial, True),
        transitions=transitions,
        pairs=pairs,
        factor_origin=(origin or w.name,),
        component_kinds=(FLAG_KIND,),
        name=f"always_some({w.name})",
    )


def _normalized_pairs(pairs):
    """Merge all-F-empty pairs into one Buchi pair and drop dead pairs.

    Valid inside a conjunction factor: among pairs with empty F the Rabin
    disjunction is recurrence of the union of the G sets.
    """
    merged_g = set()
    out = []
    for f, g in pairs:
        if not g:
            continue
        if f:
            out.append((f, g))
        else:
            merged_g |= g
    if merged_g:
        out.insert(0, (frozenset(), frozenset(merged_g)))
    seen = set()
    unique = []
    for f, g in out:
        key = (frozenset(f), frozenset(g))
        if key not in seen:
            seen.add(key)
            unique.append(key)
    return unique


def product(factors, acceptance_mode=LATCHED, accepting=None, seeds=None):
    """Synchronize tree automata; a run tree must satisfy every accepting factor.

    `accepting` selects the factor indices contributing acceptance (all by
    default); the rest only track state. States are built lazily from
    `seeds` (component tuples), defaulting to the factor initials.
    """
    if not factors:
        raise SpecError("product needs at least one factor")
    if acceptance_mode not in ACCEPTANCE_MODES:
        raise SpecError(f"unknown acceptance mode {acceptance_mode!r}")
    alphabet = factors[0].alphabet
    for f in factors[1:]:
        if f.alphabet != alphabet:
            raise AlphabetMismatchError("product factors must share one alphabet")
    if accepting is None:
        accepting = list(range(len(factors)))
    accepting = sorted(set(accepting))
    if not accepting:
        raise SpecError("at least one accepting factor required")

    all_states = [frozenset(f.states) for f in factors]
    if acceptance_mode == LATCHED and len(accepting) > 1:
        pair_lists = [_normalized_pairs(factors[k].pairs) for k in accepting]
    else:
        pair_lists = [[(frozenset(f), frozenset(g)) for f, g in factors[k].pairs]
                      for k in accepting]

    # One product pair per choice of one pair from each accepting factor.
    # LATCHED gives each choice a round-robin counter over its non-trivial
    # recurrence obligations; the state witnessing the final obligation
    # while the counter points at it is the pair's G set.
    choices = []
    signatures = set()
    for combo in itertools.product(*pair_lists):
        f_parts = tuple(
            (k, f) for k, (f, _) in zip(accepting, combo) if f
        )
        obligations = tuple(
            (k, g) for k, (_, g) in zip(accepting, combo)
            if g != all_states[k]
        )
        sig = (frozenset(f_parts), obligations)
        if sig in signatures:
            continue
        signatures.add(sig)
        choices.append((f_parts, obligations))

    if acceptance_mode == LATCHED:
        slot_of = {}
        slots = []
        slot_index = {}
        for cidx, (_, obligations) in enumerate(choices):
            if obligations:
                if obligations not in slot_index:
                    slot_index[obligations] = len(slots)
                    slots.append(obligations)
                slot_of[cidx] = slot_index[obligations]
        latch0 = (0,) * len(slots)

        def advance(comps, latch):
            out = list(latch)
            for j, obligations in enumerate(slots):
                k, g = obligations[latch[j]]
                if comps[k] in g:
                    out[j] = (latch[j] + 1) % len(obligations)
            return tuple(out)
    else:
        latch0 = ()

        def advance(comps, latch):
            return ()

    if seeds is None:
        seeds = [tuple(f.initial for f in factors)]
    initial = (seeds[0], latch0)
    states = []
    index = {}
    transitions = {}
    todo = []
    for comps in seeds:
        st = (comps, latch0)
        if st not in index:
            index[st] = len(states)
            states.append(st)
            todo.append(st)
    while todo:
        st = todo.pop()
        comps, latch = st
        latch_next = advance(comps, latch)
        per_output = {}
        for o in alphabet.outputs:
            fs = []
            for combo in itertools.product(
                *(f.transitions[c][o] for f, c in zip(factors, comps))
            ):
                succs = tuple(
                    (tuple(fk[ii] for fk in combo), latch_next)
                    for ii in range(len(alphabet.inputs))
                )
                fs.append(succs)
                for nxt in succs:
                    if nxt not in index:
                        index[nxt] = len(states)
                        states.append(nxt)
                        todo.append(nxt)
            per_output[o] = tuple(fs)
        transitions[st] = per_output

    pairs = []
    if acceptance_mode == LATCHED:
        for cidx, (f_parts, obligations) in enumerate(choices):
            fset = {
                st for st in states
                if any(st[0][k] in f for k, f in f_parts)
            }
            if obligations:
                j = slot_of[cidx]
                last = len(obligations) - 1
                k, g = obligations[last]
                gset = {
                    st for st in states
                    if st[1][j] == last and st[0][k] in g
                }
            else:
                gset = set(states)
            pairs.append((fset, gset))
    else:
        for f_parts, obligations in choices:
            g_by_k = dict(obligations)
            # cartesian product acceptance: one factor pair with empty F
            # empties the whole product F set
            if len(f_parts) == len(accepting):
                f_by_k = dict(f_parts)
                fset = {
                    st for st in states
                    if all(st[0][k] in f_by_k[k] for k in accepting)
                }
            else:
                fset = set()
            gset = {
                st for st in states
                if all(st[0][k] in g_by_k.get(k, all_states[k]) for k in accepting)
            }
            pairs.append((fset, gset))

    unique_pairs = []
    seen = set()
    for f, g in pairs:
        key = (frozenset(f), frozenset(g))
        if key not in seen:
            seen.add(key)
            unique_pairs.append(key)

    return RabinTreeAutomaton(
        alphabet=alphabet,
        states=states,
        initial=initial,
        transitions=transitions,
        pairs=unique_pairs,
        factor_origin=tuple(itertools.chain.from_iterable(
            f.factor_origin for f in factors
        )),
        component_kinds=tuple(itertools.chain.from_iterable(
            f.component_kinds for f in factors
        )),
        is_product=True,
        latch_width=len(latch0),
        name="*".join(str(f.name) for f in factors),
    )


_LIFTS = {
    Modality.PLAIN: lift_universal,
    Modality.E: lift_exists,
    Modality.GE: lift_globally_exists,
}


def build_level_automaton(level, bases, track_all, acceptance_mode=LATCHED,
                          seed_tuples=None):
    """Tree automaton whose language is the set of trees fulfilling `level`.

    With `track_all`, one universal tracker per base property of the
    ruleset is multiplied in (acceptance still drawn only from the level's
    reduced conjuncts), so unpack exposes the current state of every base
    automaton. `seed_tuples` optionally lists base-state tuples, aligned
    with `ruleset_base_props`, to seed additional product states.
    """
    conjuncts = level.minimal()
    props = ruleset_base_props(level.ruleset)
    for c in conjuncts:
        if c.base not in bases:
            raise SpecError(f"missing base automaton for {c.base.token}")
    factors = []
    accepting = []
    if track_all:
        tracker_pos = {}
        for p in props:
            if p not in bases:
                raise SpecError(f"missing base automaton for {p.token}")
            tracker_pos[p] = len(factors)
            factors.append(lift_universal(bases[p], origin=p.token))
        for c in conjuncts:
            if c.modality is Modality.PLAIN:
                accepting.append(tracker_pos[c.base])
            else:
                accepting.append(len(factors))
                factors.append(_LIFTS[c.modality](bases[c.base], origin=c.base.token))
        seeds = None
        if seed_tuples is not None:
            seeds = [_seed_components(bt, props, conjuncts, tracker_pos)
                     for bt in seed_tuples]
    else:
        for c in conjuncts:
            accepting.append(len(factors))
            factors.append(_LIFTS[c.modality](bases[c.base], origin=c.base.token))
        seeds = None
    tree = product(factors, acceptance_mode=acceptance_mode,
                   accepting=sorted(set(accepting)), seeds=seeds)
    tree.name = level.name
    if track_all:
        tree.base_props = props
        tree.tracker_positions = {p: tracker_pos[p] for p in props}
        tree.level_conjuncts = conjuncts
    return tree


def _seed_components(base_tuple, props, conjuncts, tracker_pos):
    comps = list(base_tuple)
    for c in conjuncts:
        if c.modality is Modality.PLAIN:
            continue
        word_state = base_tuple[props.index(c.base)]
        comps.append((word_state, True) if c.modality is Modality.GE else word_state)
    return tuple(comps)


def base_tuple_of(tree, state):
    """Project a track_all product state to its tuple of base states."""
    comps = tree.components(state)
    return tuple(comps[tree.tracker_positions[p]] for p in tree.base_props)


def canonical_state(tree, base_tuple):
    """The representative product state for a base tuple: flags true, latch 0."""
    comps = _seed_components(
        base_tuple, tree.base_props, tree.level_conjuncts, tree.tracker_positions
    )
    return (comps, (0,) * tree.latch_width)
