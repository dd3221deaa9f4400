"""Workbench for the abstract tile assembly model.

Square (or cubic) tiles with colored, integer-strength glues attach one
at a time to a growing seeded assembly whenever their matching bonds
meet a temperature threshold. This package provides the core model
types, a deterministic and reversible simulator, stability and frontier
analysis, tile-set compilers for counters and Turing machines, a text
persistence layer, a command line, and an HTTP session service.
"""

from .analysis import (
    Progress, bond_graph, duplicate_glue_groups, is_tau_stable, is_terminal,
    min_bond_cut, terminal_status, usage_stats,
)
from .engine import (
    Breakpoint, BreakpointKind, Diagnostic, DiagnosticKind, FrontierIncoherent,
    NothingToUndo, Outcome, RunKind, RunOutcome, SeedEditError, Simulation,
    StepResult, compute_frontier, fitting_types,
)
from .formats import (
    FormatError, parse_assembly, parse_system, parse_tileset,
    serialize_assembly, serialize_system, serialize_tileset,
)
from .generators import (
    CounterSpec, RowIncomplete, TmSpec, TmSpecError, decode_row, gen_counter,
    gen_turing, parse_tm_file,
)
from .model import (
    Assembly, Direction, Glue, Placement, StepMode, Tas, TileSet, TileType,
    assembly_from_names, binders_for_side, bond_strength, functionally_equivalent,
    incident_strength, make_tile, rotate_tile, search_types,
)
from .prng import Pcg32
from .synth import glue_grid_system, random_growing_system, random_system

__version__ = "0.1.0"

__all__ = [
    "Assembly", "Breakpoint", "BreakpointKind", "CounterSpec", "Diagnostic",
    "DiagnosticKind", "Direction", "FormatError", "FrontierIncoherent", "Glue",
    "NothingToUndo", "Outcome", "Pcg32", "Placement", "Progress",
    "RowIncomplete", "RunKind", "RunOutcome", "SeedEditError", "Simulation",
    "StepMode", "StepResult", "Tas", "TileSet", "TileType", "TmSpec",
    "TmSpecError", "assembly_from_names", "binders_for_side", "bond_graph",
    "bond_strength", "compute_frontier", "decode_row", "duplicate_glue_groups",
    "fitting_types", "functionally_equivalent", "gen_counter", "gen_turing",
    "glue_grid_system", "incident_strength", "is_tau_stable", "is_terminal",
    "make_tile", "min_bond_cut", "parse_assembly", "parse_system",
    "parse_tileset", "parse_tm_file", "random_growing_system", "random_system",
    "rotate_tile", "search_types", "serialize_assembly", "serialize_system",
    "serialize_tileset", "terminal_status", "usage_stats",
]
