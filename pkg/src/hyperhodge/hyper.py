"""Classical hypergeometric parameter data and its elementary invariants.

A parameter pair (alpha_1..alpha_n; beta_1..beta_m) of rationals determines
the operator prod_i (theta - alpha_i) - t * prod_j (theta - beta_j) on the
punctured line, with theta = t*d/dt. This module holds the parameter type,
the operator constructor, irreducibility, the singularity profile and the
two parameter normalizations (Kummer twist, reduction into [0,1)).

Parameters are restricted to Q: every downstream computation needs decidable
comparison and exact ceilings. Duplicate parameters are permitted everywhere;
the counting formulas want multisets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import ore
from .errors import DomainError, ParseError

Rat = Fraction


@dataclass(frozen=True)
class HypergeometricParams:
    alpha: tuple
    beta: tuple

    def __init__(self, alpha, beta):
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in alpha))
        object.__setattr__(self, "beta", tuple(Fraction(b) for b in beta))

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return len(self.beta)

    def __str__(self) -> str:
        return (",".join(str(a) for a in self.alpha) + ";"
                + ",".join(str(b) for b in self.beta))


def parse_params(text: str) -> HypergeometricParams:
    """Parse "a1,a2,...;b1,b2,..." with entries like "2", "-1/3".

    The semicolon is mandatory even when one side is empty, so "(n,0)" and
    "(0,m)" inputs stay unambiguous.
    """
    if text.count(";") != 1:
        raise ParseError(f"expected exactly one ';' in parameter string {text!r}")
    left, right = text.split(";")

    def side(chunk: str) -> tuple:
        chunk = chunk.strip()
        if not chunk:
            return ()
        out = []
        for piece in chunk.split(","):
            piece = piece.strip()
            try:
                out.append(Fraction(piece))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad rational {piece!r}: {exc}") from None
        return tuple(out)

    return HypergeometricParams(side(left), side(right))


@dataclass(frozen=True)
class SingularityProfile:
    type_pair: tuple
    regular_points: frozenset
    irregular_point: Optional[str]
    slope: Optional[Rat]
    slope_multiplicity: Optional[int]
    irregularity: int
    euler_characteristic: int


def hypergeometric_operator(p: HypergeometricParams) -> ore.OrePoly:
    """prod_i (theta - alpha_i) - t * prod_j (theta - beta_j), expanded.

    Empty products are one, so the (0,0) pair gives 1 - t. The theta-degree
    is exactly max(n, m).
    """
    theta = ore.OrePoly.op_theta()
    left = ore.OrePoly.one()
    for a in p.alpha:
        left = left * (theta - ore.OrePoly.scalar(a))
    right = ore.OrePoly.one()
    for b in p.beta:
        right = right * (theta - ore.OrePoly.scalar(b))
    return left - ore.OrePoly.var_t() * right


def _require_nonpunctual(p: HypergeometricParams, what: str) -> None:
    if p.n == 0 and p.m == 0:
        raise DomainError(f"{what} is undefined for the punctual (0,0) module")


def is_irreducible(p: HypergeometricParams) -> bool:
    """True iff no difference alpha_i - beta_j is an integer.

    Vacuously true when either list is empty. The (0,0) pair is rejected.
    """
    _require_nonpunctual(p, "irreducibility")
    return all((a - b).denominator != 1 for a in p.alpha for b in p.beta)


def singularity_profile(p: HypergeometricParams) -> SingularityProfile:
    """Regular/irregular singularity data for the (n,m) type.

    Type (n,n) is regular with singular set {0, 1, inf}. For n > m the
    origin is regular and infinity irregular with slope 1/(n-m) of
    multiplicity n-m and irregularity one; for m > n the roles of 0 and
    infinity swap. The Euler characteristic is -1 in every case.
    """
    _require_nonpunctual(p, "the singularity profile")
    n, m = p.n, p.m
    if n == m:
        return SingularityProfile(
            type_pair=(n, m), regular_points=frozenset({"0", "1", "inf"}),
            irregular_point=None, slope=None, slope_multiplicity=None,
            irregularity=0, euler_characteristic=-1)
    if n > m:
        regular, irregular = "0", "inf"
    else:
        regular, irregular = "inf", "0"
    d = abs(n - m)
    return SingularityProfile(
        type_pair=(n, m), regular_points=frozenset({regular}),
        irregular_point=irregular, slope=Fraction(1, d), slope_multiplicity=d,
        irregularity=1, euler_characteristic=-1)


def kummer_twist(p: HypergeometricParams, eta) -> HypergeometricParams:
    """Shift every parameter by eta, preserving order."""
    eta = Fraction(eta)
    return HypergeometricParams((a + eta for a in p.alpha),
                                (b + eta for b in p.beta))


def normalize_params(p: HypergeometricParams):
    """Reduce all parameters into [0,1) and sort each list ascending.

    Returns (normalized, shifts) where shifts lists, per original position
    (alpha entries first, then beta entries), the integer subtracted from
    that parameter. The sort happens after shifting, so the shift list is
    indexed by original positions.
    """
    shifts = tuple(math.floor(x) for x in p.alpha + p.beta)
    alpha = sorted(a - math.floor(a) for a in p.alpha)
    beta = sorted(b - math.floor(b) for b in p.beta)
    return HypergeometricParams(alpha, beta), shifts
