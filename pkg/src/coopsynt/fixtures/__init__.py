"""Bundled example specifications used by the test suite and the docs."""
from __future__ import annotations

from importlib import resources

from ..automata import MealyStrategy
from ..formats import parse_dra


def fixture_text(name):
    return resources.files("coopsynt.fixtures").joinpath(name).read_text()


def running_example():
    """The 17-state assumption/guarantee pair; they differ only in acceptance."""
    a = parse_dra(fixture_text("running_example_assumption.dra"))
    g = parse_dra(fixture_text("running_example_guarantee.dra"))
    return a, g


def trigger_ack():
    """Trigger/ack pair: an initially unenforceable assumption that a helpful
    environment unlocks after the one required trigger is acknowledged."""
    a = parse_dra(fixture_text("trigger_ack_assumption.dra"))
    g = parse_dra(fixture_text("trigger_ack_guarantee.dra"))
    return a, g


def constant_machine(alphabet, output, name=None):
    """One-state machine that emits `output` forever."""
    return MealyStrategy(
        name=name or f"const_{output}",
        alphabet=alphabet,
        states=["s0"],
        initial="s0",
        output_of={"s0": output},
        next_state={("s0", i): "s0" for i in alphabet.inputs},
    )
