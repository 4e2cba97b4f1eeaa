from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from classes.errors_class import StructuralError


@dataclass(frozen=True)
class Settings:
    """Tunable grids and desk-scale caps shared by derivatives, certifiers and probes."""
    # sampled scalar derivative: t_k = t0 * rho^k, k <= kmax
    sampled_t0: Fraction = Fraction(1)
    sampled_rho: Fraction = Fraction(1, 2)
    sampled_kmax: int = 40

    # set-valued bracket
    bracket_depth: int = 6
    bracket_window: int = 3

    # radial continuity probes
    probe_radius0: Fraction = Fraction(1, 4)
    probe_rho: Fraction = Fraction(1, 2)
    probe_depth: int = 6

    # witness search
    regions_max_dim: int = 3
    witness_grid: int = 4

    # implication harness
    aux_search_depth: int = 4
    constancy_grid: int = 5

    # random generator caps
    max_n: int = 4
    max_m: int = 4
    max_k: int = 8
    max_pieces: int = 4

    linf_default_n: int = 5

    def __post_init__(self):
        if not (0 < self.sampled_rho < 1) or not (0 < self.probe_rho < 1):
            raise StructuralError("grid ratios must lie in (0, 1)")
        if self.sampled_t0 <= 0 or self.probe_radius0 <= 0:
            raise StructuralError("grid start must be positive")
        if self.bracket_window < 1 or self.bracket_window > self.bracket_depth + 1:
            raise StructuralError("bracket window must fit inside the bracket grid")
        if self.constancy_grid < 2:
            raise StructuralError("constancy grid needs at least two points")
        if self.witness_grid < 1:
            raise StructuralError("witness grid resolution must be positive")

    def with_overrides(self, **changes) -> "Settings":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_SETTINGS = Settings()
