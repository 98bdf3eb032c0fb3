"""Hodge spectra of hypergeometric modules, regular and irregular.

Regular case (type (n,n), irreducible, parameters in [0,1) and sorted): the
Hodge numbers come from pair counting,

    rho(k) = #{i : beta_i < alpha_k} - k   (k = 1..n),
    h^p = #{k : rho(k) = p},

reported shift-free (the underlying filtration is defined up to an overall
shift, so the raw rho values are kept as-is).

Purely irregular case (type (n,0)): the spectrum is the multiset
{k - n*alpha_k : k = 1..n}, tagged normalized_as_theorem. The unnormalized
filtration lives on the jump grid -gamma + k - 1 - n*alpha_k; adding the
computed shift gamma + 1 recovers the normalized values. irregular_filtration
emits the filtration steps on that grid (plus whole-level padding) with basis
classes Qbar_k = (-n)^k prod_{i<=k} (theta - alpha_i), selected by the
V-filtration ceilings of module rescale.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from . import ore, rescale
from .errors import DomainError, ReducibleError
from .hyper import HypergeometricParams, is_irreducible

Rat = Fraction

SHIFT_FREE = "shift_free"
AS_THEOREM = "normalized_as_theorem"


@dataclass(frozen=True)
class HodgeSpectrum:
    """Sorted (value, multiplicity) pairs plus a normalization tag."""

    jumps: tuple
    normalization_note: str

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.jumps)

    def values(self) -> list:
        out = []
        for v, m in self.jumps:
            out.extend([v] * m)
        return out


@dataclass(frozen=True)
class FiltrationStep:
    level: Rat
    basis_indices: tuple


def _bucket(values, note: str) -> HodgeSpectrum:
    counts = Counter(values)
    jumps = tuple((v, counts[v]) for v in sorted(counts))
    return HodgeSpectrum(jumps=jumps, normalization_note=note)


def _require_unit_sorted(vals, label: str) -> None:
    for v in vals:
        if v < 0 or v >= 1:
            raise DomainError(f"{label} parameters must lie in [0,1): {vals}")
    if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
        raise DomainError(f"{label} parameters must be sorted ascending: {vals}")


def fedorov_numbers(p: HypergeometricParams) -> HodgeSpectrum:
    """Shift-free Hodge numbers of an irreducible regular type (n,n) module.

    rho(k) counts the beta strictly below alpha_k, minus k (1-based); the
    spectrum is the rho multiset. Sorted beta makes the count a bisect.
    """
    if p.n != p.m or p.n == 0:
        raise DomainError(f"regular calculator needs type (n,n), n >= 1, got ({p.n},{p.m})")
    _require_unit_sorted(p.alpha, "alpha")
    _require_unit_sorted(p.beta, "beta")
    if not is_irreducible(p):
        raise ReducibleError("some alpha_i - beta_j is an integer")
    rho = [Fraction(bisect_left(p.beta, a) - (k + 1)) for k, a in enumerate(p.alpha)]
    return _bucket(rho, SHIFT_FREE)


def irregular_hodge_numbers(p: HypergeometricParams) -> HodgeSpectrum:
    """Normalized irregular Hodge spectrum {k - n*alpha_k} of a type (n,0) module."""
    if p.m != 0:
        raise DomainError("beta must be empty; for type (n,n) use fedorov_numbers")
    if p.n == 0:
        raise DomainError("need at least one alpha parameter")
    _require_unit_sorted(p.alpha, "alpha")
    n = p.n
    values = [k + 1 - n * p.alpha[k] for k in range(n)]
    return _bucket(values, AS_THEOREM)


def _context(p: HypergeometricParams) -> rescale.IrregularContext:
    if p.m != 0:
        raise DomainError("beta must be empty for the irregular filtration")
    if p.n == 0:
        raise DomainError("need at least one alpha parameter")
    return rescale.IrregularContext(p.alpha)


def unnormalized_jumps(p: HypergeometricParams) -> tuple:
    """Jump levels k - gamma - n*alpha_{k+1} (k = 0..n-1) before shifting."""
    ctx = _context(p)
    return tuple(k - ctx.gamma - ctx.n * ctx.alpha[k] for k in range(ctx.n))


def filtration_shift(p: HypergeometricParams) -> Rat:
    """The overall shift gamma + 1 taking unnormalized jumps to the spectrum."""
    return _context(p).gamma + 1


def irregular_filtration(p: HypergeometricParams, window: int = 2) -> list:
    """Filtration steps on the unnormalized jump grid.

    Levels are every jump value plus whole numbers 0..window-1; at level x
    the basis holds the k with V-filtration ceiling nu_x(k) <= 0, i.e. whose
    jump value is <= x. Nested by construction; the top step is full.
    """
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    ctx = _context(p)
    jumps = unnormalized_jumps(p)
    levels = sorted({j + w for j in jumps for w in range(window)})
    steps = []
    for x in levels:
        nu = rescale.v_step(ctx, x).nu
        basis = tuple(k for k in range(ctx.n) if nu[k] <= 0)
        steps.append(FiltrationStep(level=x, basis_indices=basis))
    return steps


def qbar_operators(p: HypergeometricParams) -> list:
    """Graded basis classes Qbar_k = (-n)^k prod_{i=1..k} (theta - alpha_i)."""
    if p.m != 0:
        raise DomainError("beta must be empty")
    if p.n == 0:
        raise DomainError("need at least one alpha parameter")
    n = p.n
    out = [ore.OrePoly.one()]
    for k in range(1, n):
        factor = ore.OrePoly.op_theta() - ore.OrePoly.scalar(p.alpha[k - 1])
        out.append(ore.op_mul(out[-1], factor).scale(-n))
    return out
