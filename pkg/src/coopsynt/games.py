"""Tree-automaton emptiness via games.

The membership game pits the automaton player (chooses an output and a
transition function) against the pathfinder (chooses the input branch). Its
Rabin winning condition is reduced to a parity game with index appearance
records and solved with Zielonka's recursive algorithm, implemented with an
explicit stack. Winning regions give the states with non-empty language;
winning strategies give Mealy implementations.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .automata import MealyStrategy, SpecError


class UnrealizableError(SpecError):
    """The initial position is not winning for the automaton player."""


AUTOMATON = 0
PATHFINDER = 1


class RabinGame:
    """Game graph with vertices colored by tree-automaton states.

    Player 0 (automaton) wins a play iff the colors visited infinitely often
    satisfy some Rabin pair. Pairs are sets of color ids; `color` may be
    None for neutral vertices.
    """

    def __init__(self, owner, succ, color, pairs, tree=None, state_index=None,
                 pdesc=None, averts=None):
        self.owner = owner
        self.succ = succ
        self.color = color
        self.pairs = [(frozenset(f), frozenset(g)) for f, g in pairs]
        self.tree = tree
        self.state_index = state_index
        self.pdesc = pdesc
        self.averts = averts

    def __len__(self):
        return len(self.owner)


def membership_game(tree):
    """Membership game of `tree`, with one automaton vertex per state.

    Automaton vertices choose among deduplicated (output, input-map) moves;
    pathfinder vertices then choose the input. Moves keep the first output
    that realizes a given successor map, so extraction is deterministic.
    """
    states = tree.states
    sidx = {s: k for k, s in enumerate(states)}
    n = len(states)
    owner = [AUTOMATON] * n
    color = list(range(n))
    succ = [[] for _ in range(n)]
    pdesc = [None] * n
    sink = None

    for k, q in enumerate(states):
        seen_maps = {}
        for o in tree.alphabet.outputs:
            for f in tree.transitions[q].get(o, ()):
                if f in seen_maps:
                    continue
                v = len(owner)
                seen_maps[f] = v
                owner.append(PATHFINDER)
                color.append(None)
                pdesc.append((o, f))
                succ.append([sidx[t] for t in f])
                succ[k].append(v)
        if not succ[k]:
            if sink is None:
                sink = len(owner)
                owner.append(AUTOMATON)
                color.append(None)
                pdesc.append(None)
                succ.append([sink])
            succ[k].append(sink)

    pairs = [
        ({sidx[s] for s in f}, {sidx[s] for s in g}) for f, g in tree.pairs
    ]
    return RabinGame(owner, succ, color, pairs, tree=tree, state_index=sidx,
                     pdesc=pdesc, averts=list(range(n)))


class ParityGame:
    """Max-parity game: player 0 wins a play iff the highest priority seen
    infinitely often is even."""

    def __init__(self, owner, succ, prio, origin=None, seed_pid=None, game=None):
        self.owner = owner
        self.succ = succ
        self.prio = prio
        self.origin = origin
        self.seed_pid = seed_pid or {}
        self.game = game

    def __len__(self):
        return len(self.owner)


def _move_to_front(rec, hits):
    front = tuple(j for j in rec if j in hits)
    if not front:
        return rec
    return front + tuple(j for j in rec if j not in hits)


def iar_to_parity(game, seeds=None):
    """Reduce the Rabin game to a parity game with index appearance records.

    A record is a permutation of the pair indices; indices whose F set was
    just visited move to the front. Visiting G at record position p yields
    priority 2p, visiting F at position p yields 2p+1, neutral vertices 1,
    so the automaton player wins under max-even parity iff some pair's F is
    eventually avoided while its G recurs.
    """
    npairs = len(game.pairs)
    id_rec = tuple(range(npairs))
    fhits = {}
    ghits = {}

    def hits(c):
        if c not in fhits:
            fhits[c] = frozenset(
                j for j, (f, _) in enumerate(game.pairs) if c in f
            )
            ghits[c] = frozenset(
                j for j, (_, g) in enumerate(game.pairs) if c in g
            )
        return fhits[c], ghits[c]

    step_cache = {}

    def step(rec, c):
        key = (rec, c)
        if key not in step_cache:
            if c is None:
                step_cache[key] = (1, rec)
            else:
                fh, gh = hits(c)
                pos = {j: p for p, j in enumerate(rec, start=1)}
                mf = max((pos[j] for j in fh), default=0)
                mg = max((pos[j] for j in gh), default=0)
                if mf == 0 and mg == 0:
                    prio = 1
                elif mg > mf:
                    prio = 2 * mg
                else:
                    prio = 2 * mf + 1
                step_cache[key] = (prio, _move_to_front(rec, fh) if fh else rec)
        return step_cache[key]

    if seeds is None:
        seeds = game.averts if game.averts is not None else range(len(game))
    index = {}
    owner = []
    prio = []
    origin = []
    succ = []
    seed_pid = {}
    todo = []

    def intern(v, rec):
        key = (v, rec)
        if key not in index:
            index[key] = len(owner)
            owner.append(game.owner[v])
            p, _ = step(rec, game.color[v])
            prio.append(p)
            origin.append(key)
            succ.append(None)
            todo.append(key)
        return index[key]

    for v in seeds:
        seed_pid[v] = intern(v, id_rec)
    while todo:
        v, rec = todo.pop()
        pid = index[(v, rec)]
        _, rec2 = step(rec, game.color[v])
        succ[pid] = [intern(w, rec2) for w in game.succ[v]]

    return ParityGame(owner, succ, prio, origin, seed_pid, game)


@dataclass
class WinningCertificate:
    """Winning regions and positional strategies of a parity game.

    `region` and `strategy` belong to the automaton (even) player; the
    pathfinder's counterparts are kept for determinacy checks.
    """

    region: frozenset
    strategy: dict
    opponent_region: frozenset
    opponent_strategy: dict
    parity: ParityGame = field(repr=False, default=None)


def solve_parity(pg):
    """Zielonka's algorithm; exact regions and strategies for both players."""
    n = len(pg)
    preds = [[] for _ in range(n)]
    for v in range(n):
        for w in pg.succ[v]:
            preds[w].append(v)
    strategy = ({}, {})

    def attract(universe, target, player):
        attr = set(target)
        cnt = {}
        strat = {}
        queue = sorted(target)
        qi = 0
        while qi < len(queue):
            w = queue[qi]
            qi += 1
            for v in preds[w]:
                if v not in universe or v in attr:
                    continue
                if pg.owner[v] == player:
                    attr.add(v)
                    strat[v] = w
                    queue.append(v)
                else:
                    if v not in cnt:
                        cnt[v] = sum(1 for x in pg.succ[v] if x in universe)
                    cnt[v] -= 1
                    if cnt[v] == 0:
                        attr.add(v)
                        queue.append(v)
        return attr, strat

    ret = None
    stack = [{"phase": 0, "universe": frozenset(range(n))}]
    while stack:
        fr = stack[-1]
        if fr["phase"] == 0:
            uni = fr["universe"]
            if not uni:
                ret = (set(), set())
                stack.pop()
                continue
            p = max(pg.prio[v] for v in uni)
            i = 0 if p % 2 == 0 else 1
            target = {v for v in uni if pg.prio[v] == p}
            attr, astrat = attract(uni, target, i)
            fr.update(i=i, target=target, astrat=astrat, phase=1)
            stack.append({"phase": 0, "universe": uni - attr})
        elif fr["phase"] == 1:
            child = ret
            i = fr["i"]
            uni = fr["universe"]
            if not child[1 - i]:
                for v in sorted(fr["target"]):
                    if pg.owner[v] == i:
                        for w in pg.succ[v]:
                            if w in uni:
                                strategy[i][v] = w
                                break
                strategy[i].update(fr["astrat"])
                ret = (set(uni), set()) if i == 0 else (set(), set(uni))
                stack.pop()
            else:
                battr, bstrat = attract(uni, child[1 - i], 1 - i)
                strategy[1 - i].update(bstrat)
                fr.update(battr=battr, phase=2)
                stack.append({"phase": 0, "universe": uni - battr})
        else:
            child = ret
            i = fr["i"]
            regions = [None, None]
            regions[1 - i] = child[1 - i] | fr["battr"]
            regions[i] = child[i]
            ret = (regions[0], regions[1])
            stack.pop()

    w0, w1 = ret
    s0 = {v: w for v, w in strategy[0].items() if v in w0 and pg.owner[v] == 0}
    s1 = {v: w for v, w in strategy[1].items() if v in w1 and pg.owner[v] == 1}
    return WinningCertificate(frozenset(w0), s0, frozenset(w1), s1, pg)


@dataclass
class MembershipSolution:
    """Solved membership game of one tree automaton."""

    tree: object
    game: RabinGame
    parity: ParityGame
    cert: WinningCertificate
    winning: frozenset
    stats: dict

    def seed(self, state):
        return self.parity.seed_pid[self.game.state_index[state]]


def solve_membership(tree):
    t0 = time.perf_counter()
    game = membership_game(tree)
    parity = iar_to_parity(game)
    cert = solve_parity(parity)
    winning = frozenset(
        s for s in tree.states
        if parity.seed_pid[game.state_index[s]] in cert.region
    )
    records = {rec for _, rec in parity.origin}
    stats = {
        "tree_states": len(tree.states),
        "rabin_pairs": len(tree.pairs),
        "game_vertices": len(game),
        "parity_vertices": len(parity),
        "records": len(records),
        "solve_seconds": round(time.perf_counter() - t0, 6),
    }
    return MembershipSolution(tree, game, parity, cert, winning, stats)


def nonempty_states(tree):
    """Tree states from which the automaton accepts at least one tree."""
    return solve_membership(tree).winning


def extract_strategy(tree, cert, name="synthesized"):
    """Mealy machine realizing the tree automaton's language from its initial
    state, following the certificate's positional parity strategy."""
    parity = cert.parity
    game = parity.game
    if game is None or game.tree is not tree:
        raise SpecError("certificate does not belong to this tree automaton")
    start = parity.seed_pid[game.state_index[tree.initial]]
    if start not in cert.region:
        raise UnrealizableError(
            f"initial state of {tree.name!r} has empty language"
        )

    inputs = tree.alphabet.inputs
    names = {}
    order = []

    def intern(pid):
        if pid not in names:
            names[pid] = f"s{len(names)}"
            order.append(pid)
        return names[pid]

    intern(start)
    output_of = {}
    next_state = {}
    level_of = {}
    k = 0
    while k < len(order):
        pid = order[k]
        k += 1
        s = names[pid]
        choice = cert.strategy[pid]
        v, _ = parity.origin[choice]
        o, _ = game.pdesc[v]
        output_of[s] = o
        for ii, inp in enumerate(inputs):
            next_state[(s, inp)] = intern(parity.succ[choice][ii])
        if getattr(tree, "level_name_of", None) is not None:
            state = tree.states[parity.origin[pid][0]]
            level_of[s] = tree.level_name_of[state]
    return MealyStrategy(
        name=name,
        alphabet=tree.alphabet,
        states=[names[pid] for pid in order],
        initial=names[start],
        output_of=output_of,
        next_state=next_state,
        level_of=level_of or None,
    )


def game_to_dot(game, cert=None):
    """DOT dump of a Rabin game; regions colored when a certificate is given."""
    won = set()
    if cert is not None and cert.parity is not None:
        won = {
            cert.parity.origin[pid][0]
            for pid in cert.region
            if cert.parity.origin[pid][1] == tuple(range(len(game.pairs)))
        }
    lines = ["digraph membership_game {"]
    for v in range(len(game)):
        shape = "box" if game.owner[v] == AUTOMATON else "diamond"
        label = str(game.color[v]) if game.color[v] is not None else ""
        fill = ', style=filled, fillcolor="palegreen"' if v in won else ""
        lines.append(f'  v{v} [shape={shape}, label="{label}"{fill}];')
    for v in range(len(game)):
        for w in game.succ[v]:
            lines.append(f"  v{v} -> v{w};")
    lines.append("}")
    return "\n".join(lines) + "\n"
