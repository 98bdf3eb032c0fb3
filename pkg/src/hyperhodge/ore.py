"""Noncommutative operator kernel: the independent verification oracle.

Operators live in the algebra generated over Q by

    z, tau (invertible), t (invertible), theta, dtau, dz

where theta = t*d/dt scaled by t (the Euler operator), dtau = z*tau*d/dtau
and dz = z^2*d/dz. The nontrivial commutation relations are

    theta * t^c = t^c * (theta + c)
    dtau * tau^b = tau^b * (dtau + b*z)
    dz * z^a = z^a * (dz + a*z)
    dz * dtau = dtau * dz + z * dtau

and every other pair of generators commutes. Each element is stored as a map
from the canonical monomial z^a tau^b t^c theta^e dtau^f dz^g to its rational
coefficient. On top of the product, the module implements left-ideal
normal-form reduction modulo the generator triple (P, R, H) used to present
the rescaled hypergeometric module, plus the handful of substitutions the
calculators need.

A second, multivariate alphabet (z, lambda_1..lambda_N, z*d/dlambda_j,
z^2*d/dz) lives at the bottom of the file; it only supports construction,
multiplication and central substitution and is consumed by the GKZ module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple

from .errors import NotInLatticeError

Rat = Fraction


class Mono(NamedTuple):
    """Exponents of a canonical monomial. tau and t may be negative."""

    z: int = 0
    tau: int = 0
    t: int = 0
    theta: int = 0
    dtau: int = 0
    dz: int = 0


def _acc(d: dict, m: Mono, c: Fraction) -> None:
    c = d.get(m, 0) + c
    if c:
        d[m] = c
    else:
        d.pop(m, None)


def _lmul_theta(terms: dict) -> dict:
    # theta * (z^a tau^b t^c theta^e ...) = (... theta^{e+1} ...) + c * (...)
    out: dict = {}
    for m, c in terms.items():
        _acc(out, m._replace(theta=m.theta + 1), c)
        if m.t:
            _acc(out, m, c * m.t)
    return out


def _lmul_dtau(terms: dict) -> dict:
    # dtau * tau^b = tau^b * (dtau + b*z)
    out: dict = {}
    for m, c in terms.items():
        _acc(out, m._replace(dtau=m.dtau + 1), c)
        if m.tau:
            _acc(out, m._replace(z=m.z + 1), c * m.tau)
    return out


def _lmul_dz(terms: dict) -> dict:
    # dz * z^a = z^a * (dz + a*z)  and  dz * dtau^f = dtau^f * (dz + f*z)
    out: dict = {}
    for m, c in terms.items():
        _acc(out, m._replace(dz=m.dz + 1), c)
        k = m.z + m.dtau
        if k:
            _acc(out, m._replace(z=m.z + 1), c * k)
    return out


class OrePoly:
    """Immutable element of the operator algebra, in canonical normal order."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Mono, Fraction] | None = None):
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Mono):
                    m = Mono(*m)
                if m.z < 0 or m.theta < 0 or m.dtau < 0 or m.dz < 0:
                    raise ValueError(f"negative exponent where none is allowed: {m}")
                c = Fraction(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        self._terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "OrePoly":
        return cls()

    @classmethod
    def scalar(cls, c) -> "OrePoly":
        return cls({Mono(): Fraction(c)})

    @classmethod
    def one(cls) -> "OrePoly":
        return cls.scalar(1)

    @classmethod
    def monomial(cls, coeff=1, z=0, tau=0, t=0, theta=0, dtau=0, dz=0) -> "OrePoly":
        return cls({Mono(z, tau, t, theta, dtau, dz): Fraction(coeff)})

    @classmethod
    def var_z(cls):
        return cls.monomial(z=1)

    @classmethod
    def var_tau(cls):
        return cls.monomial(tau=1)

    @classmethod
    def var_t(cls):
        return cls.monomial(t=1)

    @classmethod
    def op_theta(cls):
        return cls.monomial(theta=1)

    @classmethod
    def op_dtau(cls):
        return cls.monomial(dtau=1)

    @classmethod
    def op_dz(cls):
        return cls.monomial(dz=1)

    # -- views -------------------------------------------------------------

    def terms(self) -> dict:
        return dict(self._terms)

    def coeff(self, m: Mono | tuple) -> Fraction:
        if not isinstance(m, Mono):
            m = Mono(*m)
        return self._terms.get(m, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def theta_degree(self) -> int:
        return max((m.theta for m in self._terms), default=-1)

    def has_dz(self) -> bool:
        return any(m.dz for m in self._terms)

    def has_dtau(self) -> bool:
        return any(m.dtau for m in self._terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "OrePoly":
        other = _coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            _acc(out, m, c)
        return OrePoly(out)

    __radd__ = __add__

    def __neg__(self) -> "OrePoly":
        return OrePoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "OrePoly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "OrePoly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "OrePoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return op_mul(self, _coerce(other))

    def __rmul__(self, other) -> "OrePoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return op_mul(_coerce(other), self)

    def __pow__(self, e: int) -> "OrePoly":
        if e < 0:
            raise ValueError("negative operator power")
        out = OrePoly.one()
        for _ in range(e):
            out = op_mul(out, self)
        return out

    def scale(self, c) -> "OrePoly":
        c = Fraction(c)
        if not c:
            return OrePoly.zero()
        return OrePoly({m: cc * c for m, cc in self._terms.items()})

    def times_monomial(self, coeff=1, z=0, tau=0, t=0) -> "OrePoly":
        """Multiply by a central monomial in z, tau, t (exact exponent shifts)."""
        coeff = Fraction(coeff)
        out = {}
        for m, c in self._terms.items():
            out[m._replace(z=m.z + z, tau=m.tau + tau, t=m.t + t)] = c * coeff
        return OrePoly(out)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = OrePoly.scalar(other)
        return isinstance(other, OrePoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"OrePoly<{format_op(self)}>"


def _coerce(x) -> OrePoly:
    if isinstance(x, OrePoly):
        return x
    if isinstance(x, (int, Fraction)):
        return OrePoly.scalar(x)
    raise TypeError(f"cannot coerce {type(x)!r} into an operator")


def op_mul(a: OrePoly, b: OrePoly) -> OrePoly:
    """Associative product in canonical normal order, bilinear over Q.

    For each monomial z^a tau^b t^c theta^e dtau^f dz^g of the left factor,
    the right factor is hit by dz g times, dtau f times and theta e times
    (innermost first), then shifted by the central prefix.
    """
    out: dict = {}
    for ma, ca in a._terms.items():
        cur = b._terms
        for _ in range(ma.dz):
            cur = _lmul_dz(cur)
        for _ in range(ma.dtau):
            cur = _lmul_dtau(cur)
        for _ in range(ma.theta):
            cur = _lmul_theta(cur)
        for m, c in cur.items():
            _acc(out, m._replace(z=m.z + ma.z, tau=m.tau + ma.tau, t=m.t + ma.t),
                 ca * c)
    return OrePoly(out)


@dataclass(frozen=True)
class IdealGenerators:
    """The left-ideal generator triple presenting the rescaled module.

    p_gen = dz + n*z*theta + gamma*z, tau_r_gen = dz + dtau, and
    tau_h_cleared = prod_i z*(theta - alpha_i) - tau^n * t, which is the
    rescaled hypergeometric operator with denominators cleared by tau^n
    (the cleared power is recorded so displays can restore it).
    """

    p_gen: OrePoly
    tau_r_gen: OrePoly
    tau_h_cleared: OrePoly
    cleared_tau_power: int


def normal_form(op: OrePoly, gens: IdealGenerators, n: int,
                strategy: str = "delta_z_first") -> OrePoly:
    """Left-ideal remainder: no dz, no dtau, theta-degree < n.

    The reduction is a fixed triangular elimination: dz-terms are killed by
    subtracting left multiples of p_gen, dtau-terms by multiples of
    tau_r_gen (which trades dtau for dz), and finally every term of
    theta-degree >= n is rewritten through tau_h_cleared, whose leading
    monomial is z^n theta^n with coefficient one. ``strategy`` switches which
    delta is eliminated first when both are present; the two orders must
    agree on the remainder, which the test suite asserts.

    The caller must have cleared tau denominators: negative tau exponents are
    rejected. A term of theta-degree >= n whose z-degree is below n cannot
    host the rewrite and raises NotInLatticeError.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if strategy not in ("delta_z_first", "delta_tau_first"):
        raise ValueError(f"unknown strategy {strategy!r}")
    for m in op._terms:
        if m.tau < 0:
            raise ValueError("clear tau denominators before reduction")
    assert gens.tau_h_cleared.theta_degree() == n
    assert gens.tau_h_cleared.coeff(Mono(z=n, theta=n)) == 1

    cur = op
    while True:
        dz_terms = [m for m in cur._terms if m.dz > 0]
        dtau_terms = [m for m in cur._terms if m.dtau > 0]
        if not dz_terms and not dtau_terms:
            break
        prefer_dz = (strategy == "delta_z_first" and dz_terms) or not dtau_terms
        if prefer_dz:
            m = max(dz_terms, key=lambda x: (x.dz, x))
            w = OrePoly.monomial(cur._terms[m], m.z, m.tau, m.t, m.theta, m.dtau, m.dz - 1)
            cur = cur - op_mul(w, gens.p_gen)
        else:
            m = max(dtau_terms, key=lambda x: (x.dtau, x))
            w = OrePoly.monomial(cur._terms[m], m.z, m.tau, m.t, m.theta, m.dtau - 1, m.dz)
            cur = cur - op_mul(w, gens.tau_r_gen)

    while True:
        heavy = [m for m in cur._terms if m.theta >= n]
        if not heavy:
            break
        m = max(heavy, key=lambda x: (x.theta, x))
        if m.z < n:
            raise NotInLatticeError(
                f"term {m} has theta-degree {m.theta} but z-degree {m.z} < {n}; "
                "not in the lattice spanned by the basis operators")
        w = OrePoly.monomial(cur._terms[m], m.z - n, m.tau, m.t, m.theta - n)
        cur = cur - op_mul(w, gens.tau_h_cleared)

    assert not cur.has_dz() and not cur.has_dtau() and cur.theta_degree() < n
    return cur


def substitute(op: OrePoly, tau=None, z=None, t=None, theta_shift=None) -> OrePoly:
    """Exact substitution, applied in the order tau, z, t, theta_shift.

    tau may be the string "z" (the restriction tau := z) or a rational.
    Substituting for a variable that fails to commute with an operator part
    still present is rejected:

      * tau := z needs no dtau and no dz terms (dz does not commute with z);
      * tau := scalar needs no dtau terms;
      * z := scalar needs no dz and no dtau terms;
      * t := scalar needs no theta terms;
      * theta := theta + eta is always a valid algebra map for scalar eta.
    """
    terms = op._terms
    if tau is not None:
        out: dict = {}
        if tau == "z":
            for m, c in terms.items():
                if m.dtau or m.dz:
                    raise ValueError("tau := z requires an operator free of dtau and dz")
                if m.z + m.tau < 0:
                    raise ValueError("tau := z would create a negative z exponent")
                _acc(out, m._replace(z=m.z + m.tau, tau=0), c)
        else:
            val = Fraction(tau)
            for m, c in terms.items():
                if m.dtau:
                    raise ValueError("tau := scalar requires an operator free of dtau")
                if val == 0 and m.tau < 0:
                    raise ValueError("tau := 0 meets a negative tau exponent")
                _acc(out, m._replace(tau=0), c * val ** m.tau)
        terms = out
    if z is not None:
        val = Fraction(z)
        out = {}
        for m, c in terms.items():
            if m.dz or m.dtau:
                raise ValueError("z := scalar requires an operator free of dz and dtau")
            _acc(out, m._replace(z=0), c * val ** m.z)
        terms = out
    if t is not None:
        val = Fraction(t)
        out = {}
        for m, c in terms.items():
            if m.theta:
                raise ValueError("t := scalar requires an operator free of theta")
            if val == 0 and m.t < 0:
                raise ValueError("t := 0 meets a negative t exponent")
            _acc(out, m._replace(t=0), c * val ** m.t)
        terms = out
    if theta_shift is not None:
        eta = Fraction(theta_shift)
        if eta:
            out = {}
            for m, c in terms.items():
                # theta^e -> (theta + eta)^e, expanded binomially.
                coeffs = [Fraction(1)]
                for _ in range(m.theta):
                    nxt = [Fraction(0)] * (len(coeffs) + 1)
                    for i, cc in enumerate(coeffs):
                        nxt[i + 1] += cc
                        nxt[i] += cc * eta
                    coeffs = nxt
                for i, cc in enumerate(coeffs):
                    if cc:
                        _acc(out, m._replace(theta=i), c * cc)
            terms = out
    return OrePoly(terms)


def theta_poly(coeffs: Iterable) -> OrePoly:
    """Sum of coeffs[i] * theta^i."""
    return OrePoly({Mono(theta=i): Fraction(c) for i, c in enumerate(coeffs) if c})


def negate_t(op: OrePoly) -> OrePoly:
    """The algebra automorphism t -> -t (negates coefficients of odd t powers)."""
    return OrePoly({m: (-c if m.t % 2 else c) for m, c in op._terms.items()})


# -- pretty printing -------------------------------------------------------

_OP_NAMES = (("theta", "(t∂t)"), ("dtau", "(zτ∂τ)"), ("dz", "(z²∂z)"))


def _power(sym: str, e: int) -> str:
    return sym if e == 1 else f"{sym}^{e}"


def format_op(op: OrePoly, cleared_tau_power: int = 0) -> str:
    """Deterministic display string; operator parts use the classical symbols.

    cleared_tau_power restores tau denominators hidden by clearing, e.g. the
    basis operator stored as 9*z^2*(t∂t)^2 with cleared power 2 prints with
    tau^-2.
    """
    if op.is_zero():
        return "0"
    items = sorted(op._terms.items(),
                   key=lambda kv: (kv[0].theta, kv[0].dtau, kv[0].dz,
                                   kv[0].z, kv[0].tau, kv[0].t),
                   reverse=True)
    parts = []
    for m, c in items:
        m = m._replace(tau=m.tau - cleared_tau_power)
        factors = []
        for sym, e in (("z", m.z), ("τ", m.tau), ("t", m.t)):
            if e:
                factors.append(_power(sym, e))
        for field, sym in _OP_NAMES:
            e = getattr(m, field)
            if e:
                factors.append(_power(sym, e))
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "·".join(factors)
        else:
            body = "·".join([str(mag)] + factors)
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


# -- multivariate alphabet for GKZ systems ---------------------------------

class LMono(NamedTuple):
    """z^s * lambda^lam * (z d/dlambda)^dee * (z^2 d/dz)^dz, all exponents >= 0."""

    z: int
    lam: tuple
    dee: tuple
    dz: int


class LambdaPoly:
    """Operator in z, lambda_1..lambda_N, z*d/dlambda_j and z^2*d/dz.

    Relations: [z d/dlambda_j, lambda_j] = z, distinct indices commute,
    [z^2 d/dz, z d/dlambda_j] = z * (z d/dlambda_j), [z^2 d/dz, z] = z^2,
    lambda_j central for z^2 d/dz. Only construction, multiplication and
    central substitution are supported; there is no division.
    """

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[LMono, Fraction] | None = None):
        self.nvars = nvars
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, LMono):
                    m = LMono(*m)
                if len(m.lam) != nvars or len(m.dee) != nvars:
                    raise ValueError("exponent tuple length mismatch")
                if m.z < 0 or m.dz < 0 or min(m.lam, default=0) < 0 or min(m.dee, default=0) < 0:
                    raise ValueError(f"negative exponent: {m}")
                c = Fraction(c)
                if c:
                    clean[m] = clean.get(m, 0) + c
                    if not clean[m]:
                        del clean[m]
        self._terms = clean

    @classmethod
    def scalar(cls, nvars: int, c) -> "LambdaPoly":
        zero = (0,) * nvars
        return cls(nvars, {LMono(0, zero, zero, 0): Fraction(c)})

    @classmethod
    def one(cls, nvars: int) -> "LambdaPoly":
        return cls.scalar(nvars, 1)

    @classmethod
    def var_z(cls, nvars: int) -> "LambdaPoly":
        zero = (0,) * nvars
        return cls(nvars, {LMono(1, zero, zero, 0): Fraction(1)})

    @classmethod
    def var_lam(cls, nvars: int, j: int) -> "LambdaPoly":
        zero = (0,) * nvars
        e = tuple(1 if i == j else 0 for i in range(nvars))
        return cls(nvars, {LMono(0, e, zero, 0): Fraction(1)})

    @classmethod
    def op_dee(cls, nvars: int, j: int) -> "LambdaPoly":
        zero = (0,) * nvars
        e = tuple(1 if i == j else 0 for i in range(nvars))
        return cls(nvars, {LMono(0, zero, e, 0): Fraction(1)})

    @classmethod
    def op_dz(cls, nvars: int) -> "LambdaPoly":
        zero = (0,) * nvars
        return cls(nvars, {LMono(0, zero, zero, 1): Fraction(1)})

    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, LambdaPoly) and self.nvars == other.nvars
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._terms.items())))

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        assert self.nvars == other.nvars
        out = dict(self._terms)
        for m, c in other._terms.items():
            c0 = out.get(m, 0) + c
            if c0:
                out[m] = c0
            else:
                out.pop(m, None)
        return LambdaPoly(self.nvars, out)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def scale(self, c) -> "LambdaPoly":
        c = Fraction(c)
        return LambdaPoly(self.nvars, {m: cc * c for m, cc in self._terms.items()})

    def __mul__(self, other: "LambdaPoly") -> "LambdaPoly":
        assert self.nvars == other.nvars
        n = self.nvars
        out: dict = {}

        def lmul_dee(terms, j):
            res: dict = {}
            for m, c in terms.items():
                e = list(m.dee)
                e[j] += 1
                _lacc(res, m._replace(dee=tuple(e)), c)
                if m.lam[j]:
                    v = list(m.lam)
                    v[j] -= 1
                    _lacc(res, m._replace(z=m.z + 1, lam=tuple(v)), c * m.lam[j])
            return res

        def lmul_dz(terms):
            res: dict = {}
            for m, c in terms.items():
                _lacc(res, m._replace(dz=m.dz + 1), c)
                k = m.z + sum(m.dee)
                if k:
                    _lacc(res, m._replace(z=m.z + 1), c * k)
            return res

        for ma, ca in self._terms.items():
            cur = other._terms
            for _ in range(ma.dz):
                cur = lmul_dz(cur)
            for j in range(n):
                for _ in range(ma.dee[j]):
                    cur = lmul_dee(cur, j)
            for m, c in cur.items():
                lam = tuple(x + y for x, y in zip(m.lam, ma.lam))
                _lacc(out, m._replace(z=m.z + ma.z, lam=lam), ca * c)
        return LambdaPoly(n, out)

    def substitute_lambda(self, values: Mapping[int, Fraction]) -> "LambdaPoly":
        """Set lambda_j := scalar for the given indices.

        Only valid when no term differentiates along those lambdas, since
        z d/dlambda_j does not commute with lambda_j.
        """
        out: dict = {}
        for m, c in self._terms.items():
            for j, val in values.items():
                if m.dee[j]:
                    raise ValueError(
                        f"lambda_{j + 1} := scalar requires no z*d/dlambda_{j + 1} factor")
            lam = list(m.lam)
            for j, val in values.items():
                c = c * Fraction(val) ** lam[j]
                lam[j] = 0
            _lacc(out, m._replace(lam=tuple(lam)), c)
        return LambdaPoly(self.nvars, out)

    def __repr__(self) -> str:
        return f"LambdaPoly<{format_lambda_op(self)}>"


def _lacc(d: dict, m: LMono, c: Fraction) -> None:
    c = d.get(m, 0) + c
    if c:
        d[m] = c
    else:
        d.pop(m, None)


def format_lambda_op(op: LambdaPoly) -> str:
    if op.is_zero():
        return "0"
    items = sorted(op._terms.items(),
                   key=lambda kv: (sum(kv[0].dee), kv[0].dz, kv[0].z, kv[0].lam, kv[0].dee),
                   reverse=True)
    parts = []
    for m, c in items:
        factors = []
        if m.z:
            factors.append(_power("z", m.z))
        for j, e in enumerate(m.lam):
            if e:
                factors.append(_power(f"λ{j + 1}", e))
        for j, e in enumerate(m.dee):
            if e:
                factors.append(_power(f"(z∂λ{j + 1})", e))
        if m.dz:
            factors.append(_power("(z²∂z)", m.dz))
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "·".join(factors)
        else:
            body = "·".join([str(mag)] + factors)
        parts.append(("- " if c < 0 else "+ ") + body)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]
