from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

from classes.errors_class import StructuralError
from classes.lp_class import ZERO, as_rational


class ExtKind(str, Enum):
    MINUS_INF = "-inf"
    FINITE = "finite"
    PLUS_INF = "+inf"


_RANK = {ExtKind.MINUS_INF: 0, ExtKind.FINITE: 1, ExtKind.PLUS_INF: 2}


@total_ordering
@dataclass(frozen=True)
class ExtReal:
    """Element of R ∪ {±∞}; infinities are explicit states, never sentinels."""
    kind: ExtKind
    value: Fraction = ZERO

    @classmethod
    def of(cls, v: Union[int, str, Fraction]) -> "ExtReal":
        return cls(ExtKind.FINITE, as_rational(v))

    @property
    def is_finite(self) -> bool:
        return self.kind == ExtKind.FINITE

    @property
    def is_plus_inf(self) -> bool:
        return self.kind == ExtKind.PLUS_INF

    @property
    def is_minus_inf(self) -> bool:
        return self.kind == ExtKind.MINUS_INF

    def _key(self):
        return (_RANK[self.kind], self.value)

    def __lt__(self, other: "ExtReal") -> bool:
        if not isinstance(other, ExtReal):
            return NotImplemented
        return self._key() < other._key()

    def __neg__(self) -> "ExtReal":
        if self.kind == ExtKind.PLUS_INF:
            return MINUS_INF
        if self.kind == ExtKind.MINUS_INF:
            return PLUS_INF
        return ExtReal(ExtKind.FINITE, -self.value)

    def __str__(self) -> str:
        if self.kind == ExtKind.FINITE:
            return str(self.value)
        return self.kind.value


PLUS_INF = ExtReal(ExtKind.PLUS_INF)
MINUS_INF = ExtReal(ExtKind.MINUS_INF)


def inf_add(r: ExtReal, s: ExtReal) -> ExtReal:
    """(+∞) absorbs everything, including −∞."""
    if r.is_plus_inf or s.is_plus_inf:
        return PLUS_INF
    if r.is_minus_inf or s.is_minus_inf:
        return MINUS_INF
    return ExtReal(ExtKind.FINITE, r.value + s.value)


def residual(r: ExtReal, s: ExtReal) -> ExtReal:
    """inf{t | r <= s +̇ t}; inf ∅ = +∞."""
    if s.is_plus_inf:
        return MINUS_INF
    if s.is_minus_inf:
        return MINUS_INF if r.is_minus_inf else PLUS_INF
    if r.is_finite:
        return ExtReal(ExtKind.FINITE, r.value - s.value)
    return r


def ext_scale(t: Fraction, r: ExtReal) -> ExtReal:
    """t·r for t >= 0 with 0·(±∞) = 0."""
    t = as_rational(t)
    if t < 0:
        raise StructuralError(f"negative scale factor {t}")
    if t == 0:
        return ExtReal(ExtKind.FINITE, ZERO)
    if r.is_finite:
        return ExtReal(ExtKind.FINITE, t * r.value)
    return r
