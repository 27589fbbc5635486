"""Model checking of Mealy machines against cooperation-level specifications.

The carrier is the finite product of a machine and a deterministic Rabin
word automaton. Universal checks search for a violating strongly connected
subgraph (a Streett-style complement check), existential checks for an
accepting one, and the prefix-relative check demands an accepting
continuation from every reachable product node.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import AlphabetMismatchError, SpecError
from .hierarchy import Modality
from .scc import nontrivial_sccs


class ProductGraph:
    """Machine x DRA product, optionally unrolled along a split input word.

    Nodes before the split node have a single successor (the split branch);
    from the split node on, the product is full. With an empty split word
    this is the plain reachable product.
    """

    def __init__(self, machine, aut, split_inputs=()):
        if machine.alphabet != aut.alphabet:
            raise AlphabetMismatchError(
                f"machine {machine.name!r} and automaton {aut.name!r} "
                "have different alphabets"
            )
        self.machine = machine
        self.aut = aut
        self.machine_state = []
        self.dra_state = []
        self.succ = []

        m, q = machine.initial, aut.initial
        chain = []
        for inp in split_inputs:
            if inp not in machine.alphabet.inputs:
                raise SpecError(f"unknown input letter {inp!r} in split word")
            out = machine.output_of[m]
            chain.append((m, q, inp, out))
            m = machine.step(m, inp)
            q = aut.step(q, (inp, out))

        full_index = {}
        order = [(m, q)]
        full_index[(m, q)] = len(chain)
        k = 0
        while k < len(order):
            mm, qq = order[k]
            k += 1
            out = machine.output_of[mm]
            for inp in machine.alphabet.inputs:
                nxt = (machine.step(mm, inp), aut.step(qq, (inp, out)))
                if nxt not in full_index:
                    full_index[nxt] = len(chain) + len(order)
                    order.append(nxt)

        for idx, (mm, qq, inp, out) in enumerate(chain):
            self.machine_state.append(mm)
            self.dra_state.append(qq)
            self.succ.append([(inp, out, idx + 1)])
        for mm, qq in order:
            self.machine_state.append(mm)
            self.dra_state.append(qq)
            out = machine.output_of[mm]
            edges = []
            for inp in machine.alphabet.inputs:
                nxt = (machine.step(mm, inp), aut.step(qq, (inp, out)))
                edges.append((inp, out, full_index[nxt]))
            self.succ.append(edges)
        self.n = len(self.succ)
        self.initial = 0

    def plain_succ(self):
        return [[j for (_, _, j) in edges] for edges in self.succ]


def _accepting_nodes(graph):
    """Nodes from which some continuation satisfies the Rabin condition."""
    succ = graph.plain_succ()
    good = set()
    for f, g in graph.aut.pairs:
        allowed = [v for v in range(graph.n) if graph.dra_state[v] not in f]
        allowed_set = set(allowed)
        remap = {v: j for j, v in enumerate(allowed)}
        sub = [[remap[w] for w in succ[v] if w in allowed_set] for v in allowed]
        for comp in nontrivial_sccs(len(allowed), sub):
            verts = [allowed[j] for j in comp]
            if any(graph.dra_state[v] in g for v in verts):
                good.update(verts)
    if not good:
        return set()
    preds = [[] for _ in range(graph.n)]
    for v in range(graph.n):
        for w in succ[v]:
            preds[w].append(v)
    result = set(good)
    todo = list(good)
    while todo:
        v = todo.pop()
        for u in preds[v]:
            if u not in result:
                result.add(u)
                todo.append(u)
    return result


def _violating_scs(graph):
    """A strongly connected subgraph on which no Rabin pair holds, or None."""
    succ = graph.plain_succ()
    worklist = [list(range(graph.n))]
    while worklist:
        nodes = worklist.pop()
        node_set = set(nodes)
        remap = {v: j for j, v in enumerate(nodes)}
        sub = [[remap[w] for w in succ[v] if w in node_set] for v in nodes]
        for comp in nontrivial_sccs(len(nodes), sub):
            verts = [nodes[j] for j in comp]
            colors = {graph.dra_state[v] for v in verts}
            accepting_pairs = [
                (f, g) for f, g in graph.aut.pairs
                if not (colors & f) and colors & g
            ]
            if not accepting_pairs:
                return verts
            drop = set()
            for _, g in accepting_pairs:
                drop |= {v for v in verts if graph.dra_state[v] in g}
            remainder = [v for v in verts if v not in drop]
            if remainder:
                worklist.append(remainder)
    return None


def _path_letters(graph, start, targets, within=None):
    """Shortest edge path from start into `targets`; returns (letters, end)."""
    if start in targets:
        return [], start
    seen = {start}
    queue = [(start, [])]
    k = 0
    while k < len(queue):
        v, path = queue[k]
        k += 1
        for (i, o, w) in graph.succ[v]:
            if within is not None and w not in within:
                continue
            if w in targets:
                return path + [(i, o)], w
            if w not in seen:
                seen.add(w)
                queue.append((w, path + [(i, o)]))
    raise SpecError("internal: witness path not found")


def _cycle_letters(graph, start, within):
    """A non-empty cycle start -> start inside `within`."""
    letters = []
    seen = set()
    queue = []
    for (i, o, w) in graph.succ[start]:
        if w in within:
            if w == start:
                return [(i, o)]
            queue.append((w, [(i, o)]))
            seen.add(w)
    k = 0
    while k < len(queue):
        v, path = queue[k]
        k += 1
        for (i, o, w) in graph.succ[v]:
            if w not in within:
                continue
            if w == start:
                return path + [(i, o)]
            if w not in seen:
                seen.add(w)
                queue.append((w, path + [(i, o)]))
    raise SpecError("internal: witness cycle not found")


def _exists_witness(graph):
    """A lasso of the product whose word the automaton accepts."""
    succ = graph.plain_succ()
    for f, g in graph.aut.pairs:
        allowed = [v for v in range(graph.n) if graph.dra_state[v] not in f]
        allowed_set = set(allowed)
        remap = {v: j for j, v in enumerate(allowed)}
        sub = [[remap[w] for w in succ[v] if w in allowed_set] for v in allowed]
        for comp in nontrivial_sccs(len(allowed), sub):
            verts = {allowed[j] for j in comp}
            g_nodes = {v for v in verts if graph.dra_state[v] in g}
            if not g_nodes:
                continue
            try:
                prefix, gnode = _path_letters(graph, graph.initial, g_nodes)
            except SpecError:
                continue
            cycle = _cycle_letters(graph, gnode, verts)
            return prefix, cycle
    return None


def _universal_counterexample(graph):
    """A lasso of the product whose word the automaton rejects.

    The cycle is a closed walk covering the whole violating subgraph, so the
    states visited infinitely often are exactly its members.
    """
    scs = _violating_scs(graph)
    if scs is None:
        return None
    scs_set = set(scs)
    prefix, entry = _path_letters(graph, graph.initial, {scs[0]})
    cycle = []
    at = entry
    for v in scs:
        if v != at:
            step, at = _path_letters(graph, at, {v}, within=scs_set)
            cycle += step
    if at != entry:
        step, at = _path_letters(graph, at, {entry}, within=scs_set)
        cycle += step
    if not cycle:
        cycle = _cycle_letters(graph, entry, scs_set)
    return prefix, cycle


def check_universal(machine, aut):
    """True iff every trace of the machine is accepted by `aut`."""
    return _violating_scs(ProductGraph(machine, aut)) is None


def check_exists(machine, aut):
    """True iff some trace of the machine is accepted by `aut`."""
    graph = ProductGraph(machine, aut)
    return graph.initial in _accepting_nodes(graph)


def check_globally_exists(machine, aut):
    """True iff after every finite prefix some accepting continuation remains.

    The automaton is deterministic, so prefix equality collapses to product
    node identity and the check quantifies over reachable product nodes.
    """
    graph = ProductGraph(machine, aut)
    return len(_accepting_nodes(graph)) == graph.n


_CHECKS = {
    Modality.PLAIN: check_universal,
    Modality.E: check_exists,
    Modality.GE: check_globally_exists,
}


def _conjunct_holds(machine, conjunct, bases, split_inputs=(), memo=None):
    key = (conjunct.modality, conjunct.base)
    if memo is not None and key in memo:
        return memo[key]
    if conjunct.base not in bases:
        raise SpecError(f"missing base automaton for {conjunct.base.token}")
    graph = ProductGraph(machine, bases[conjunct.base], split_inputs)
    if conjunct.modality is Modality.PLAIN:
        result = _violating_scs(graph) is None
    elif conjunct.modality is Modality.E:
        result = graph.initial in _accepting_nodes(graph)
    else:
        result = len(_accepting_nodes(graph)) == graph.n
    if memo is not None:
        memo[key] = result
    return result


def check_level(machine, level, bases):
    """True iff the machine's computation tree fulfills every conjunct."""
    memo = {}
    return all(
        _conjunct_holds(machine, c, bases, memo=memo) for c in level.minimal()
    )


def check_level_detailed(machine, level, bases):
    """Per-conjunct verdicts with witness lassos where they exist.

    Witnesses are reported for satisfied existential conjuncts and violated
    universal ones, as (prefix, cycle) letter lists.
    """
    records = []
    satisfied = True
    for c in level.minimal():
        graph = ProductGraph(machine, bases[c.base])
        witness = None
        if c.modality is Modality.PLAIN:
            counterexample = _universal_counterexample(graph)
            ok = counterexample is None
            witness = counterexample
        elif c.modality is Modality.E:
            ok = graph.initial in _accepting_nodes(graph)
            if ok:
                witness = _exists_witness(graph)
        else:
            ok = len(_accepting_nodes(graph)) == graph.n
        satisfied = satisfied and ok
        records.append({
            "conjunct": c.token,
            "satisfied": ok,
            "witness_lasso": witness,
        })
    return satisfied, records


def satisfied_levels(machine, lattice, bases):
    """All lattice levels the machine fulfills, in preference order."""
    memo = {}
    out = []
    for level in lattice.levels:
        if all(_conjunct_holds(machine, c, bases, memo=memo)
               for c in level.minimal()):
            out.append(level)
    return out


def classify(machine, lattice, bases):
    """Maximal satisfied levels (an antichain), in preference order."""
    return lattice.maximal(satisfied_levels(machine, lattice, bases))


@dataclass(frozen=True)
class BobbleQuery:
    """A machine together with the input word leading to the split node."""

    machine: object
    split_inputs: tuple


def bobble_level(query, lattice, bases):
    """Maximal levels satisfied by the bobble tree of the query's machine.

    The bobble tree keeps a single path up to the split node and the full
    subtree after it; its traces are exactly the machine traces through the
    split word.
    """
    memo = {}
    split = tuple(query.split_inputs)
    satisfied = [
        level for level in lattice.levels
        if all(_conjunct_holds(query.machine, c, bases, split, memo)
               for c in level.minimal())
    ]
    return lattice.maximal(satisfied)
