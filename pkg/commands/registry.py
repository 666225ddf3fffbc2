from __future__ import annotations

import argparse
from collections.abc import Callable
from typing import NamedTuple

from commands import bounds, graph, invariants, leakage, verify
from commands.schemas import RunConfig


class Command(NamedTuple):
    help: str
    add_arguments: Callable[[argparse.ArgumentParser], None]
    run: Callable[[RunConfig], int]


COMMANDS: dict[str, Command] = {
    "graph": Command("Build the confusion graph Γ_t(S) and export it.", graph.add_arguments, graph.run),
    "invariants": Command(
        "α, ω, χ, χ_f per t and the certified broadcast-rate bracket.", invariants.add_arguments, invariants.run
    ),
    "leakage": Command(
        "Exact leakage of given codes, or of the least-leaking zero-error code.", leakage.add_arguments, leakage.run
    ),
    "bounds": Command("Leakage-rate bounds for the instance's adversary.", bounds.add_arguments, bounds.run),
    "verify": Command("Run the cross-check suite.", verify.add_arguments, verify.run),
}
