"""Cooperation-level hierarchy, model checking, and maximally cooperative
controller synthesis for specifications given as deterministic Rabin word
automata."""

from .automata import (
    AND,
    Alphabet,
    AlphabetMismatchError,
    FormatError,
    IMPLIES,
    MealyStrategy,
    OR,
    RabinWordAutomaton,
    RunOutcome,
    ShapeError,
    SpecError,
    accepts_lasso,
    derive_combination,
    nonempty_from,
)
from .formats import parse_dra, parse_mealy, render_dra, render_mealy
from .hierarchy import (
    BASE,
    BaseProp,
    Conjunct,
    FULL_E,
    Lattice,
    LevelSpec,
    Modality,
    OR_EXTENDED,
    enumerate_levels,
    hasse_dot,
    is_graylevel,
    parse_level,
    reduction_closure,
)
from .checker import (
    BobbleQuery,
    bobble_level,
    check_exists,
    check_globally_exists,
    check_level,
    check_universal,
    classify,
)
from .games import UnrealizableError, extract_strategy, nonempty_states
from .maxcoop import NoRealizableLevelError, synthesize_max_coop
from .trees import build_level_automaton, lift_exists, lift_globally_exists, \
    lift_universal, product

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
