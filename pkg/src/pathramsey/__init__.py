"""Builder/Painter games and exact Ramsey quantities for monotone paths."""

from .bounds import loose_value, midlevel_size, online_bounds, q_tower_sandwich, tow
from .builders import Builder2, BuilderGeneral, BuilderRandom, GLabelAtlas
from .game import GameParams, GameState, Transcript, run_match
from .oracle import exact_online_value, offline_force_check, verify_witness
from .painters import Painter2, PainterGeneral, painter_offline_witness
from .posets import ChainSpec, Poset, build_q1, downset_lattice, max_antichain, q_hierarchy

__version__ = "0.1.0"

__all__ = [
    "Builder2",
    "BuilderGeneral",
    "BuilderRandom",
    "ChainSpec",
    "GLabelAtlas",
    "GameParams",
    "GameState",
    "Painter2",
    "PainterGeneral",
    "Poset",
    "Transcript",
    "build_q1",
    "downset_lattice",
    "exact_online_value",
    "loose_value",
    "max_antichain",
    "midlevel_size",
    "offline_force_check",
    "online_bounds",
    "painter_offline_witness",
    "q_hierarchy",
    "q_tower_sandwich",
    "run_match",
    "tow",
    "verify_witness",
]
