"""Simulation, exact analysis and brute-force verification for the
no-replacement semi-random graph process."""

from .process import (ContractViolation, GameOutcome, GameState, MultiGraph, PermutationStream,
                      StopPredicate, Trajectory, make_rng, offer_next, play, play_recorded, step)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation", "GameOutcome", "GameState", "MultiGraph", "PermutationStream",
    "StopPredicate", "Trajectory", "make_rng", "offer_next", "play", "play_recorded", "step",
]
