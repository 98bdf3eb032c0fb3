"""The rescaled hypergeometric module: basis, connection, V-filtration.

For sorted parameters alpha_1 <= ... <= alpha_n in [0,1) (purely irregular
type (n,0)) with gamma = -sum(alpha), the module is presented by the left
ideal generated by

    P = dz + n*z*theta + gamma*z,   R = dz + dtau,
    H = prod_i z*(theta - alpha_i) - tau^n * t   (tau-cleared form),

and it is free on the basis operators Q_k = (-n)^k prod_{j<=k} (z/tau) *
(theta - alpha_j), stored tau^k-cleared. The closed-form connection in that
basis is

    nabla Q = Q * ((tau*A0 + z*Ainf) dz/z^2 + (-tau*A0 + z*Ainf') dt/(n*z*t)
                   - (tau*A0 + z*Ainf) dtau/(z*tau))

with A0 the companion matrix carrying (-n)^n*t in its upper right corner,
Ainf' = diag(n*alpha_k) and Ainf = diag(0..n-1) - gamma*I - Ainf'. Everything
here is cross-checked: verify_connection reduces theta*Q_k, dz*Q_k, dtau*Q_k
through the operator kernel and compares against the matrix columns, and
curvature_check expands d(Omega) + Omega^Omega symbolically.

The V-filtration step along tau = 0 at index a is nu_a(k) =
ceil(-a + k - gamma - n*alpha_{k+1}); graded pieces carry the nilpotent part
of the twisted tau-Euler operator, nonzero on a basis class exactly when the
next parameter repeats the current one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import ore
from .errors import DomainError
from .exact import ceil_rat

Rat = Fraction


@dataclass(frozen=True)
class IrregularContext:
    """Sorted parameters in [0,1) with gamma = -sum(alpha)."""

    alpha: tuple
    gamma: Rat

    def __init__(self, alpha, gamma=None):
        alpha = tuple(Fraction(a) for a in alpha)
        if len(alpha) < 1:
            raise DomainError("need at least one parameter")
        if any(a < 0 or a >= 1 for a in alpha):
            raise DomainError(f"parameters must lie in [0,1): {alpha}")
        if any(alpha[i] > alpha[i + 1] for i in range(len(alpha) - 1)):
            raise DomainError(f"parameters must be sorted ascending: {alpha}")
        expected = -sum(alpha, Fraction(0))
        if gamma is not None and Fraction(gamma) != expected:
            raise DomainError(f"gamma must equal -sum(alpha) = {expected}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "gamma", expected)

    @property
    def n(self) -> int:
        return len(self.alpha)


def rees_pair(alpha: Sequence, beta: Sequence) -> tuple:
    """The defining operator pair of the z-graded hypergeometric module.

    P = dz + (n-m)*z*theta + gamma*z with gamma = -sum(alpha) + sum(beta),
    H = prod_i z*(theta - alpha_i) - t * prod_j z*(theta - beta_j).
    Valid for any type (n, m); the (n,0) case matches rescaled_generators.
    """
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    n, m = len(alpha), len(beta)
    gamma = -sum(alpha, Fraction(0)) + sum(beta, Fraction(0))
    p = (ore.OrePoly.op_dz()
         + ore.OrePoly.monomial(n - m, z=1, theta=1)
         + ore.OrePoly.monomial(gamma, z=1))
    left = ore.OrePoly.one()
    for a in alpha:
        left = left * (ore.OrePoly.monomial(1, z=1, theta=1) - ore.OrePoly.monomial(a, z=1))
    right = ore.OrePoly.one()
    for b in beta:
        right = right * (ore.OrePoly.monomial(1, z=1, theta=1) - ore.OrePoly.monomial(b, z=1))
    h = left - ore.OrePoly.var_t() * right
    return p, h


def rescaled_generators(ctx: IrregularContext) -> ore.IdealGenerators:
    """(P, R, tau-cleared H) for the type (n,0) context."""
    p, h = rees_pair(ctx.alpha, ())
    n = ctx.n
    # Clearing multiplies the -t term by tau^n; the product part is tau-free.
    h_cleared = ore.OrePoly({m._replace(tau=m.tau + (n if m.t else 0)): c
                             for m, c in h.terms().items()})
    r = ore.OrePoly.op_dz() + ore.OrePoly.op_dtau()
    return ore.IdealGenerators(p_gen=p, tau_r_gen=r, tau_h_cleared=h_cleared,
                               cleared_tau_power=n)


def q_basis(ctx: IrregularContext) -> list:
    """Basis operators Q_0..Q_{n-1}, each stored tau^k-cleared.

    Q_k (cleared) = (-n)^k * prod_{j=1..k} z*(theta - alpha_j); the empty
    product is one, so Q_0 = 1. The true operator divides by tau^k.
    """
    n = ctx.n
    out = [ore.OrePoly.one()]
    for k in range(1, n):
        factor = (ore.OrePoly.monomial(1, z=1, theta=1)
                  - ore.OrePoly.monomial(ctx.alpha[k - 1], z=1))
        out.append(out[-1] * factor.scale(-n))
    return out


# -- Laurent coefficients for the connection -------------------------------

class LaurentPoly:
    """Element of Q[z^{+-1}, tau^{+-1}, t^{+-1}] (curvature bookkeeping only)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        clean: dict = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[tuple(m)] = clean.get(tuple(m), 0) + c
                    if not clean[tuple(m)]:
                        del clean[tuple(m)]
        self._terms = clean

    @classmethod
    def monomial(cls, coeff=1, z=0, tau=0, t=0) -> "LaurentPoly":
        return cls({(z, tau, t): Fraction(coeff)})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._terms)
        for m, c in other._terms.items():
            c0 = out.get(m, 0) + c
            if c0:
                out[m] = c0
            else:
                out.pop(m, None)
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict = {}
        for (a1, b1, c1), x in self._terms.items():
            for (a2, b2, c2), y in other._terms.items():
                m = (a1 + a2, b1 + b2, c1 + c2)
                v = out.get(m, 0) + x * y
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return LaurentPoly(out)

    def diff(self, var: int) -> "LaurentPoly":
        """Partial derivative; var indexes (z, tau, t) as 0, 1, 2."""
        out: dict = {}
        for m, c in self._terms.items():
            e = m[var]
            if e:
                m2 = list(m)
                m2[var] = e - 1
                out[tuple(m2)] = c * e
        return LaurentPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, reverse=True):
            c = self._terms[m]
            factors = []
            for sym, e in zip(("z", "τ", "t"), m):
                if e:
                    factors.append(sym if e == 1 else f"{sym}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self) -> str:
        return f"LaurentPoly<{self}>"


def _lmat(n: int) -> list:
    return [[LaurentPoly.zero() for _ in range(n)] for _ in range(n)]


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_mul(a, b):
    n = len(a)
    out = _lmat(n)
    for i in range(n):
        for k in range(n):
            if a[i][k].is_zero():
                continue
            for j in range(n):
                if not b[k][j].is_zero():
                    out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def _mat_scale(a, mono: LaurentPoly):
    return [[x * mono for x in row] for row in a]


def _mat_diff(a, var: int):
    return [[x.diff(var) for x in row] for row in a]


def _mat_is_zero(a) -> bool:
    return all(x.is_zero() for row in a for x in row)


@dataclass(frozen=True)
class ConnectionMatrices:
    """A0 (companion with (-n)^n*t in the top-right corner, ones on the
    subdiagonal), Ainf' = diag(n*alpha_k) and Ainf = diag(0..n-1) - gamma*I
    - Ainf'. Entries are Laurent polynomials in (z, tau, t); only A0 actually
    depends on t."""

    a0: tuple
    ainf_prime: tuple
    ainf: tuple


def connection_matrices(ctx: IrregularContext) -> ConnectionMatrices:
    n = ctx.n
    a0 = _lmat(n)
    a0[0][n - 1] = LaurentPoly.monomial(Fraction(-n) ** n, t=1)
    for i in range(1, n):
        a0[i][i - 1] = LaurentPoly.monomial(1)
    ainf_prime = _lmat(n)
    ainf = _lmat(n)
    for k in range(n):
        ainf_prime[k][k] = LaurentPoly.monomial(n * ctx.alpha[k])
        ainf[k][k] = LaurentPoly.monomial(k - ctx.gamma - n * ctx.alpha[k])
    freeze = lambda mat: tuple(tuple(row) for row in mat)
    return ConnectionMatrices(a0=freeze(a0), ainf_prime=freeze(ainf_prime),
                              ainf=freeze(ainf))


def _column_combination(mat, k: int, qcl: list) -> ore.OrePoly:
    """Sum_j mat[j][k] * tau^(k-j) * Q_j (cleared), as an operator.

    The tau^(k-j) factor rebalances the cleared powers of the two sides so
    the comparison happens after multiplying by one common tau power.
    """
    out = ore.OrePoly.zero()
    for j in range(len(qcl)):
        entry = mat[j][k]
        for (ez, etau, et), c in entry.terms().items():
            shift = etau + k - j
            assert shift >= 0, "comparison would need a tau denominator"
            out = out + qcl[j].times_monomial(c, z=ez, tau=shift, t=et)
    return out


def verify_connection(ctx: IrregularContext, bound: int = 6,
                      matrices: Optional[ConnectionMatrices] = None) -> bool:
    ok, _ = verify_connection_report(ctx, bound=bound, matrices=matrices)
    return ok


def verify_connection_report(ctx: IrregularContext, bound: int = 6,
                             matrices: Optional[ConnectionMatrices] = None):
    """Check the closed-form matrices against the defining ideal.

    For every basis index k, the operator kernel reduces n*z*theta * Q_k,
    dz * Q_k and dtau * Q_k to the free basis and the result is compared
    with the corresponding column of -tau*A0 + z*Ainf', tau*A0 + z*Ainf and
    -(tau*A0 + z*Ainf). Returns (ok, first_failure) where first_failure
    names the direction and column that broke, or None.
    """
    n = ctx.n
    if n > bound:
        raise DomainError(f"n = {n} exceeds the verification bound {bound}")
    gens = rescaled_generators(ctx)
    qcl = q_basis(ctx)
    mats = matrices or connection_matrices(ctx)
    tau = LaurentPoly.monomial(1, tau=1)
    zz = LaurentPoly.monomial(1, z=1)
    m_dt = _mat_sub(_mat_scale(mats.ainf_prime, zz), _mat_scale(mats.a0, tau))
    m_dz = _mat_add(_mat_scale(mats.a0, tau), _mat_scale(mats.ainf, zz))

    for k in range(n):
        # n*z*theta * Q_k against column k of -tau*A0 + z*Ainf'.
        lhs = ore.normal_form(ore.OrePoly.monomial(n, z=1, theta=1) * qcl[k], gens, n)
        if lhs != _column_combination(m_dt, k, qcl):
            return False, {"direction": "dt", "column": k}
        # dz * Q_k against column k of tau*A0 + z*Ainf.
        lhs = ore.normal_form(ore.OrePoly.op_dz() * qcl[k], gens, n)
        rhs = _column_combination(m_dz, k, qcl)
        if lhs != rhs:
            return False, {"direction": "dz", "column": k}
        # dtau * Q_k: clearing tau^k conjugates dtau into dtau - k*z, and the
        # matrix side is the negative of the dz column.
        shifted = (ore.OrePoly.op_dtau() - ore.OrePoly.monomial(k, z=1)) * qcl[k]
        lhs = ore.normal_form(shifted, gens, n)
        if lhs != -rhs:
            return False, {"direction": "dtau", "column": k}
    return True, None


def curvature_check(ctx: IrregularContext,
                    matrices: Optional[ConnectionMatrices] = None,
                    omega: Optional[tuple] = None) -> bool:
    """Flatness of the connection form: d(Omega) + Omega^Omega = 0.

    Omega = F dz + G dt + H dtau with F = (tau*A0 + z*Ainf)/z^2,
    G = (-tau*A0 + z*Ainf')/(n*z*t), H = -(tau*A0 + z*Ainf)/(z*tau), expanded
    over Q[z^{+-1}, tau^{+-1}, t^{+-1}]. The three 2-form components (on
    dz^dt, dz^dtau, dt^dtau) must vanish identically. ``omega`` injects a
    custom (F, G, H) triple, which the mutation tests use.
    """
    n = ctx.n
    if omega is None:
        mats = matrices or connection_matrices(ctx)
        tau = LaurentPoly.monomial(1, tau=1)
        zz = LaurentPoly.monomial(1, z=1)
        base = _mat_add(_mat_scale(mats.a0, tau), _mat_scale(mats.ainf, zz))
        f = _mat_scale(base, LaurentPoly.monomial(1, z=-2))
        g = _mat_scale(_mat_sub(_mat_scale(mats.ainf_prime, zz), _mat_scale(mats.a0, tau)),
                       LaurentPoly.monomial(Fraction(1, n), z=-1, t=-1))
        h = _mat_scale(base, LaurentPoly.monomial(-1, z=-1, tau=-1))
    else:
        f, g, h = omega
    # Components of d(Omega) + Omega^Omega in the ordered basis
    # dz^dt, dz^dtau, dt^dtau (z, tau, t are axes 0, 1, 2 of LaurentPoly).
    comp_zt = _mat_add(_mat_sub(_mat_diff(g, 0), _mat_diff(f, 2)),
                       _mat_sub(_mat_mul(f, g), _mat_mul(g, f)))
    comp_ztau = _mat_add(_mat_sub(_mat_diff(h, 0), _mat_diff(f, 1)),
                         _mat_sub(_mat_mul(f, h), _mat_mul(h, f)))
    comp_ttau = _mat_add(_mat_sub(_mat_diff(h, 2), _mat_diff(g, 1)),
                         _mat_sub(_mat_mul(g, h), _mat_mul(h, g)))
    return _mat_is_zero(comp_zt) and _mat_is_zero(comp_ztau) and _mat_is_zero(comp_ttau)


# -- V-filtration along tau = 0 --------------------------------------------

@dataclass(frozen=True)
class VFiltrationStep:
    """nu[k] = ceil(-alpha + k - gamma - n*alpha_{k+1}) for k = 0..n-1."""

    alpha: Rat
    nu: tuple


def v_step(ctx: IrregularContext, alpha) -> VFiltrationStep:
    a = Fraction(alpha)
    n = ctx.n
    nu = tuple(ceil_rat(-a + k - ctx.gamma - n * ctx.alpha[k]) for k in range(n))
    return VFiltrationStep(alpha=a, nu=nu)


@dataclass(frozen=True)
class GradedPiece:
    """Basis classes of the graded V-piece at the given index.

    contributing_indices lists the k whose jump value matches the index
    modulo nothing (exact integrality test); the nilpotent matrix is the
    induced twisted tau-Euler operator in that basis, with entries 0 or -1:
    column k maps to -1 times the class of k+1 exactly when k+1 also
    contributes and the two parameters alpha_{k+1}, alpha_{k+2} coincide.
    The image of the top index k = n-1 is a multiple of t and dies in the
    graded piece.
    """

    alpha: Rat
    contributing_indices: tuple
    nilpotent: tuple


def graded_piece(ctx: IrregularContext, alpha) -> GradedPiece:
    a = Fraction(alpha)
    n = ctx.n
    contributing = [k for k in range(n)
                    if (-a + k - ctx.gamma - n * ctx.alpha[k]).denominator == 1]
    pos = {k: i for i, k in enumerate(contributing)}
    size = len(contributing)
    nil = [[0] * size for _ in range(size)]
    for k in contributing:
        if k + 1 in pos and k + 1 < n and ctx.alpha[k + 1] == ctx.alpha[k]:
            nil[pos[k + 1]][pos[k]] = -1
    return GradedPiece(alpha=a, contributing_indices=tuple(contributing),
                       nilpotent=tuple(tuple(r) for r in nil))


def jordan_block_sizes(ctx: IrregularContext, piece: GradedPiece) -> tuple:
    """Block sizes of the graded nilpotent, largest first.

    A chain link k-1 -> k exists exactly when both indices contribute and
    alpha_k = alpha_{k+1} (the -1 entry of the matrix), so the blocks are
    the maximal runs of consecutive contributing indices with equal
    parameter value.
    """
    sizes = []
    prev = None
    for k in piece.contributing_indices:
        if prev is not None and k == prev + 1 and ctx.alpha[k] == ctx.alpha[k - 1]:
            sizes[-1] += 1
        else:
            sizes.append(1)
        prev = k
    return tuple(sorted(sizes, reverse=True))


def classical_restriction(ctx: IrregularContext) -> ore.OrePoly:
    """Restriction tau := z of the cleared rescaled operator, divided by z^n
    and evaluated at z = 1; equals the classical operator of (alpha; )."""
    h = rescaled_generators(ctx).tau_h_cleared
    restricted = ore.substitute(h, tau="z")
    n = ctx.n
    shifted = {}
    for m, c in restricted.terms().items():
        if m.z < n:
            raise DomainError("restriction is not divisible by z^n")
        shifted[m._replace(z=m.z - n)] = c
    return ore.substitute(ore.OrePoly(shifted), z=1)
