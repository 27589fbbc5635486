"""Cooperation-level algebra: conjuncts, reduction closure, lattices.

A cooperation level is a conjunction of modal conjuncts over the base
properties A, G, A->G, A*G (and A+G in the extended rule sets). Levels are
kept in closed form under the reduction rules; the canonical display name
uses the reduced form with implied conjuncts dropped.
"""
from __future__ import annotations

import enum

from .automata import SpecError

BASE = "base"
OR_EXTENDED = "or"
FULL_E = "full-e"
RULESETS = (BASE, OR_EXTENDED, FULL_E)


class BaseProp(enum.Enum):
    A = "A"
    G = "G"
    IMPLIES = "A->G"
    AND = "A*G"
    OR = "A+G"

    @property
    def token(self):
        return self.value


class Modality(enum.Enum):
    PLAIN = ""
    E = "E"
    GE = "GE"


_BASE_RANK = {BaseProp.A: 0, BaseProp.G: 1, BaseProp.IMPLIES: 2,
              BaseProp.AND: 3, BaseProp.OR: 4}
_MOD_RANK = {Modality.PLAIN: 0, Modality.E: 1, Modality.GE: 2}


class Conjunct:
    """One modal conjunct, e.g. GE(A->G) or plain G."""

    __slots__ = ("modality", "base")

    def __init__(self, modality, base):
        self.modality = modality
        self.base = base

    @property
    def sort_key(self):
        return (_MOD_RANK[self.modality], _BASE_RANK[self.base])

    @property
    def token(self):
        if self.modality is Modality.PLAIN:
            return self.base.token
        return f"{self.modality.value}({self.base.token})"

    def __eq__(self, other):
        return (isinstance(other, Conjunct)
                and self.modality is other.modality and self.base is other.base)

    def __hash__(self):
        return hash((self.modality, self.base))

    def __repr__(self):
        return f"Conjunct({self.token})"


def _c(mod, base):
    return Conjunct(mod, base)


P, E, GE = Modality.PLAIN, Modality.E, Modality.GE
A, G, I, N, O = BaseProp.A, BaseProp.G, BaseProp.IMPLIES, BaseProp.AND, BaseProp.OR

_ALPHABETS = {
    BASE: (
        _c(P, I), _c(P, G), _c(P, A),
        _c(GE, N), _c(GE, G), _c(GE, A), _c(GE, I),
    ),
}
_ALPHABETS[OR_EXTENDED] = _ALPHABETS[BASE] + (_c(P, O), _c(GE, O))
_ALPHABETS[FULL_E] = _ALPHABETS[OR_EXTENDED] + (
    _c(E, G), _c(E, A), _c(E, N), _c(E, I), _c(E, O),
)

# Implication rules; plain A*G never occurs as a conjunct (it is the pair
# {A, G}), so its absorption instance is derivable and omitted.
_BASE_RULES = [
    (( _c(P, A),), _c(GE, A)),
    (( _c(P, G),), _c(GE, G)),
    (( _c(P, I),), _c(GE, I)),
    (( _c(P, G),), _c(P, I)),
    (( _c(GE, N),), _c(GE, A)),
    (( _c(GE, N),), _c(GE, G)),
    (( _c(GE, G),), _c(GE, I)),
    (( _c(P, I), _c(P, A)), _c(P, G)),
    (( _c(P, I), _c(GE, A)), _c(GE, N)),
    (( _c(P, A), _c(GE, G)), _c(GE, N)),
    (( _c(GE, I), _c(P, A)), _c(GE, G)),
]

_OR_RULES = [
    (( _c(P, O),), _c(GE, O)),
    (( _c(P, G),), _c(P, O)),
    (( _c(P, A),), _c(P, O)),
    (( _c(GE, G),), _c(GE, O)),
    (( _c(GE, A),), _c(GE, O)),
    (( _c(P, I), _c(P, O)), _c(P, G)),
    (( _c(P, I), _c(GE, O)), _c(GE, G)),
]

# The E rules mirror the GE rules with E substituted, plus the E versions
# of the disjunction rules.
_E_RULES = [
    (( _c(GE, G),), _c(E, G)),
    (( _c(GE, A),), _c(E, A)),
    (( _c(GE, N),), _c(E, N)),
    (( _c(GE, I),), _c(E, I)),
    (( _c(GE, O),), _c(E, O)),
    (( _c(E, G),), _c(E, I)),
    (( _c(E, N),), _c(E, A)),
    (( _c(E, N),), _c(E, G)),
    (( _c(P, I), _c(E, A)), _c(E, N)),
    (( _c(P, A), _c(E, G)), _c(E, N)),
    (( _c(E, I), _c(P, A)), _c(E, G)),
    (( _c(E, G),), _c(E, O)),
    (( _c(E, A),), _c(E, O)),
    (( _c(P, I), _c(E, O)), _c(E, G)),
]

_RULES = {
    BASE: _BASE_RULES,
    OR_EXTENDED: _BASE_RULES + _OR_RULES,
    FULL_E: _BASE_RULES + _OR_RULES + _E_RULES,
}

# Order in which redundant conjuncts are discarded when computing the
# reduced display form. Dropping the compound/derived conjuncts first
# reproduces the conventional labels (the pair {A, G} prints as A*G).
_DROP_ORDER = [
    _c(P, I), _c(P, O),
    _c(GE, N), _c(GE, O), _c(GE, I), _c(GE, G), _c(GE, A),
    _c(E, N), _c(E, O), _c(E, I), _c(E, G), _c(E, A),
    _c(P, G), _c(P, A),
]


class _CompiledRuleset:
    def __init__(self, name):
        self.name = name
        self.alphabet = _ALPHABETS[name]
        self.index = {c: k for k, c in enumerate(self.alphabet)}
        self.rules = [
            (sum(1 << self.index[p] for p in prem), 1 << self.index[con])
            for prem, con in _RULES[name]
        ]

    def mask_of(self, conjuncts):
        mask = 0
        for c in conjuncts:
            if c not in self.index:
                raise SpecError(
                    f"conjunct {c.token} is not admissible in ruleset {self.name!r}"
                )
            mask |= 1 << self.index[c]
        return mask

    def close(self, mask):
        changed = True
        while changed:
            changed = False
            for prem, con in self.rules:
                if mask & con != con and mask & prem == prem:
                    mask |= con
                    changed = True
        return mask

    def unmask(self, mask):
        return frozenset(c for c in self.alphabet if mask & (1 << self.index[c]))


_COMPILED = {}


def _ruleset(name):
    if name not in RULESETS:
        raise SpecError(f"unknown ruleset {name!r} (choose from {RULESETS})")
    if name not in _COMPILED:
        _COMPILED[name] = _CompiledRuleset(name)
    return _COMPILED[name]


def ruleset_alphabet(ruleset=BASE):
    return _ruleset(ruleset).alphabet


def ruleset_rules(ruleset=BASE):
    """The implication rules as (premises, conclusion) conjunct tuples."""
    return tuple((tuple(prem), con) for prem, con in _RULES[ruleset])


def ruleset_base_props(ruleset=BASE):
    """Base properties tracked by the ruleset, in canonical order."""
    props = [A, G, I, N]
    if ruleset in (OR_EXTENDED, FULL_E):
        props.append(O)
    return tuple(props)


def reduction_closure(conjuncts, ruleset=BASE):
    """Least fixpoint of the ruleset's implication rules."""
    rs = _ruleset(ruleset)
    return rs.unmask(rs.close(rs.mask_of(conjuncts)))


class LevelSpec:
    """A cooperation level, stored as the closure of its conjunct set."""

    __slots__ = ("conjuncts", "ruleset", "_minimal")

    def __init__(self, conjuncts, ruleset=BASE):
        rs = _ruleset(ruleset)
        self.conjuncts = rs.unmask(rs.close(rs.mask_of(conjuncts)))
        self.ruleset = ruleset
        self._minimal = None

    def __eq__(self, other):
        return (isinstance(other, LevelSpec)
                and self.conjuncts == other.conjuncts
                and self.ruleset == other.ruleset)

    def __hash__(self):
        return hash((self.conjuncts, self.ruleset))

    def __repr__(self):
        return f"LevelSpec({self.name!r})"

    @property
    def is_true(self):
        return not self.conjuncts

    def implies(self, other):
        """True iff this level is at least as strict as `other`."""
        return self.conjuncts >= other.conjuncts

    def minimal(self):
        """Reduced generating set, in display order."""
        if self._minimal is None:
            rs = _ruleset(self.ruleset)
            keep = set(self.conjuncts)
            full = rs.close(rs.mask_of(keep))
            for cand in _DROP_ORDER:
                if cand in keep:
                    rest = keep - {cand}
                    if rs.close(rs.mask_of(rest)) == full:
                        keep = rest
            self._minimal = tuple(sorted(keep, key=lambda c: c.sort_key))
        return self._minimal

    @property
    def name(self):
        if self.is_true:
            return "true"
        m = self.minimal()
        if _c(P, A) in m and _c(P, G) in m:
            rest = [c for c in m if c not in (_c(P, A), _c(P, G))]
            return " & ".join([BaseProp.AND.token] + [c.token for c in rest])
        return " & ".join(c.token for c in m)


def is_graylevel(level):
    """True iff the level enforces the classical correctness criterion A->G."""
    return _c(P, I) in level.conjuncts


def parse_level(text, ruleset=BASE):
    """Parse a level string such as 'A->G & GE(A)' into a closed LevelSpec."""
    conjuncts = []
    parts = [p.strip() for p in text.split("&")]
    if parts == [""]:
        raise SpecError("empty level specification")
    atom_of = {b.token: b for b in BaseProp}
    for part in parts:
        if not part:
            raise SpecError(f"empty conjunct in level {text!r}")
        mod = Modality.PLAIN
        body = part
        for prefix, m in (("GE(", Modality.GE), ("E(", Modality.E)):
            if part.startswith(prefix) and part.endswith(")"):
                mod, body = m, part[len(prefix):-1].strip()
                break
        if body not in atom_of:
            raise SpecError(f"unknown base property {body!r} in level {text!r}")
        base = atom_of[body]
        if mod is Modality.PLAIN and base is BaseProp.AND:
            conjuncts += [_c(P, A), _c(P, G)]
        else:
            conjuncts.append(_c(mod, base))
    rs = _ruleset(ruleset)
    for c in conjuncts:
        if c not in rs.index:
            raise SpecError(
                f"conjunct {c.token} is not admissible in ruleset {ruleset!r}"
            )
    return LevelSpec(conjuncts, ruleset)


class Lattice:
    """All non-trivial levels of a ruleset, listed most-preferred first.

    The preference order is a linear extension of the strictness order
    (closure superset). `order(x, y)` holds iff x is at least as strict as y.
    """

    def __init__(self, levels, ruleset):
        self.ruleset = ruleset
        self.levels = tuple(levels)
        self.by_name = {lv.name: lv for lv in self.levels}
        self._pref = {lv: k for k, lv in enumerate(self.levels)}

    def __len__(self):
        return len(self.levels)

    def preference_index(self, level):
        return self._pref[level]

    def order(self, x, y):
        return x.implies(y)

    def at_least_as_high(self, level):
        """Levels k with level <=_H k, in preference order (best first)."""
        return [k for k in self.levels if k.implies(level)]

    def maximal(self, subset):
        """Antichain of <=_H-maximal levels in `subset`, preference order."""
        chosen = []
        for lv in sorted(subset, key=self._pref.get):
            if not any(other.implies(lv) and other != lv for other in subset):
                chosen.append(lv)
        return chosen

    def hasse_edges(self):
        """Covering pairs (stricter, weaker) of the strictness order."""
        edges = []
        for upper in self.levels:
            for lower in self.levels:
                if upper == lower or not upper.implies(lower):
                    continue
                covered = any(
                    z not in (upper, lower)
                    and upper.implies(z) and z.implies(lower)
                    for z in self.levels
                )
                if not covered:
                    edges.append((upper, lower))
        edges.sort(key=lambda e: (self._pref[e[0]], self._pref[e[1]]))
        return edges


def _default_preference_key(level):
    # Gray levels outrank non-gray ones among incomparables; then larger
    # closures; the conjunct-tuple tiebreak makes the order total.
    keys = tuple(sorted(c.sort_key for c in level.conjuncts))
    return (0 if is_graylevel(level) else 1, -len(level.conjuncts), keys)


def enumerate_levels(ruleset=BASE, preference=None):
    """Enumerate all distinct non-trivial levels of the ruleset as a Lattice.

    `preference` optionally lists level names, most preferred first; it must
    be a linear extension of the strictness order over exactly these levels.
    """
    rs = _ruleset(ruleset)
    n = len(rs.alphabet)
    seen = {}
    for bits in range(1 << n):
        closed = rs.close(bits)
        if closed and closed not in seen:
            seen[closed] = LevelSpec(rs.unmask(closed), ruleset)
    levels = sorted(seen.values(), key=_default_preference_key)
    if preference is not None:
        by_name = {lv.name: lv for lv in levels}
        if sorted(preference) != sorted(by_name):
            missing = sorted(set(by_name) - set(preference))
            extra = sorted(set(preference) - set(by_name))
            raise SpecError(
                "preference order must list every level exactly once"
                + (f"; missing {missing}" if missing else "")
                + (f"; unknown {extra}" if extra else "")
            )
        levels = [by_name[name] for name in preference]
        for i, x in enumerate(levels):
            for y in levels[i + 1:]:
                if y.implies(x) and y != x:
                    raise SpecError(
                        f"preference order violates the hierarchy: {y.name} "
                        f"is stricter than {x.name} but listed below it"
                    )
    return Lattice(levels, ruleset)


def hasse_dot(lattice):
    """Hasse diagram as DOT, gray levels filled, stricter levels on top."""
    lines = ["digraph hierarchy {", "  rankdir=TB;",
             '  node [shape=box, style=filled, fillcolor=white];']
    for lv in lattice.levels:
        fill = "gray80" if is_graylevel(lv) else "white"
        lines.append(f'  "{lv.name}" [fillcolor={fill}];')
    for upper, lower in lattice.hasse_edges():
        lines.append(f'  "{upper.name}" -> "{lower.name}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
