"""GKZ systems: lattice data, polytope checks, Gale duality, reduction.

A system is an integer matrix A (d rows, n columns, d < n) with a rational
parameter vector beta and a graded-level parameter beta0. The calculators
here cover

  * the three admissibility checks (full column lattice, independence of the
    columns on every proper face of the hull, origin interior to the hull),
  * the normalized volume of the column hull, which equals the holonomic
    rank under those checks,
  * Gale duality and the recovery of classical hypergeometric parameters
    from a corank-one Gale column,
  * the block matrix attached to classical parameters with alpha_1 = 0, and
    the operator-level reduction back to the classical defining pair (P, H)
    by eliminating the Euler operators and substituting lambda_1 = t,
    lambda_i = 1.

The hull code is exact brute force over rational arithmetic: candidate
facet hyperplanes from point subsets, a face lattice by intersecting facet
vertex sets, and a pulling triangulation for the volume. Sizes are capped
(d <= 8, n <= 32); beyond that a size error is raised instead of
approximating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import ore
from .errors import BlockShapeError, DegenerateHullError, DomainError, SizeError
from .exact import IntMat, det, kernel_basis, rank, snf
from .hyper import HypergeometricParams

Rat = Fraction

MAX_HULL_DIM = 8
MAX_HULL_POINTS = 32


@dataclass(frozen=True)
class GkzSystem:
    a_matrix: IntMat
    beta: tuple
    beta0: Rat

    def __init__(self, a_matrix: IntMat, beta: Sequence, beta0=0):
        beta = tuple(Fraction(b) for b in beta)
        if a_matrix.rows >= a_matrix.cols:
            raise DomainError(f"need d < n, got {a_matrix.rows}x{a_matrix.cols}")
        if len(beta) != a_matrix.rows:
            raise DomainError(f"beta length {len(beta)} != row count {a_matrix.rows}")
        object.__setattr__(self, "a_matrix", a_matrix)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "beta0", Fraction(beta0))


@dataclass(frozen=True)
class GaleData:
    b_matrix: IntMat
    kappa: tuple


@dataclass(frozen=True)
class Polytope:
    """Exact hull of the column points.

    facets are (primitive integer normal, integer offset) pairs with the
    inequality normal . x <= offset; faces is the lattice of proper nonempty
    faces as sorted tuples of vertex indices, facets included.
    """

    dim: int
    vertices: tuple
    facets: tuple
    faces: tuple


@dataclass(frozen=True)
class AssumptionReport:
    """The three admissibility checks, plus a corank note.

    failing_face lists the source-column indices on the first face whose
    columns were linearly dependent, if any. note flags corank > 1 input,
    where the emitted binomials are only a lattice-basis approximation of
    the toric ideal.
    """

    lattice_full: bool
    face_condition: bool
    origin_interior: bool
    failing_face: Optional[tuple] = None
    note: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.lattice_full and self.face_condition and self.origin_interior


def _columns_as_points(a: IntMat) -> list:
    return [a.col(j) for j in range(a.cols)]


def _affine_rank(points: Sequence[tuple]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[p[i] - base[i] for p in points[1:]] for i in range(len(base))]
    return rank(IntMat.from_rows(diffs, cols=len(points) - 1))


def convex_hull(a: IntMat) -> Polytope:
    d = a.rows
    if d > MAX_HULL_DIM or a.cols > MAX_HULL_POINTS:
        raise SizeError(f"hull limited to {MAX_HULL_DIM} dims and "
                        f"{MAX_HULL_POINTS} points, got {d}x{a.cols}")
    if a.cols == 0:
        raise DomainError("no columns to take a hull of")
    points = sorted(set(_columns_as_points(a)))
    if d == 0:
        return Polytope(dim=0, vertices=(points[0],), facets=(), faces=())
    adim = _affine_rank(points)
    if adim < d:
        raise DegenerateHullError(
            f"columns only span an affine subspace of dimension {adim} < {d}",
            affine_dim=adim)

    # Candidate hyperplanes through d affinely independent points; keep the
    # ones with every point on a single side.
    facets = set()
    for subset in itertools.combinations(points, d):
        base = subset[0]
        diffs = [[q[i] - base[i] for i in range(d)] for q in subset[1:]]
        kern = kernel_basis(IntMat.from_rows(diffs, cols=d))
        if kern.cols != 1:
            continue
        h = kern.col(0)
        c = sum(hi * xi for hi, xi in zip(h, base))
        vals = [sum(hi * xi for hi, xi in zip(h, p)) for p in points]
        if all(v <= c for v in vals):
            facets.add((h, c))
        if all(v >= c for v in vals):
            facets.add((tuple(-x for x in h), -c))
    facets = tuple(sorted(facets))

    def tight(p, facet):
        h, c = facet
        return sum(hi * xi for hi, xi in zip(h, p)) == c

    vertices = []
    for p in points:
        normals = [h for (h, c) in facets if tight(p, (h, c))]
        if normals and rank(IntMat.from_rows(list(zip(*normals)), cols=len(normals))) == d:
            vertices.append(p)
    vertices = tuple(sorted(vertices))

    facet_sets = [frozenset(i for i, v in enumerate(vertices) if tight(v, f))
                  for f in facets]
    # Proper faces: close the facet vertex sets under intersection.
    lattice = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for f in frontier:
            for g in lattice:
                h = f & g
                if h and h not in lattice and h not in new:
                    new.add(h)
        lattice |= new
        frontier = new
    faces = tuple(sorted((tuple(sorted(f)) for f in lattice), key=lambda f: (len(f), f)))
    return Polytope(dim=d, vertices=vertices, facets=facets, faces=faces)


def normalized_volume(a: IntMat) -> Rat:
    """d! times the Euclidean volume of the column hull.

    Pulling triangulation driven by the face lattice: every non-simplex
    face is coned from its least vertex over the maximal proper subfaces
    avoiding that vertex. The volume of each top simplex is an exact
    integer determinant.
    """
    poly = convex_hull(a)
    if poly.dim == 0:
        return Fraction(1)
    verts = poly.vertices
    face_sets = [frozenset(f) for f in poly.faces]
    memo: dict = {}

    def triangulate(face: frozenset) -> list:
        if face in memo:
            return memo[face]
        idx = sorted(face)
        if _affine_rank([verts[i] for i in idx]) == len(idx) - 1:
            memo[face] = [tuple(idx)]
            return memo[face]
        v0 = idx[0]
        subs = [g for g in face_sets if g < face]
        maximal = [g for g in subs if not any(g < h for h in subs)]
        out = []
        for g in maximal:
            if v0 in g:
                continue
            for s in triangulate(g):
                out.append((v0,) + s)
        memo[face] = out
        return out

    total = 0
    for simplex in triangulate(frozenset(range(len(verts)))):
        base = verts[simplex[0]]
        cols = [[verts[i][r] - base[r] for i in simplex[1:]] for r in range(poly.dim)]
        total += abs(det(IntMat.from_rows(cols, cols=poly.dim)))
    return Fraction(total)


def check_assumptions(a: IntMat) -> AssumptionReport:
    """Full lattice, face-wise column independence, origin interior."""
    d, n = a.rows, a.cols
    if d >= n:
        raise DomainError(f"need d < n, got {d}x{n}")
    lattice_full = all(x == 1 for x in snf(a).diagonal())
    note = "lattice-basis approximation" if n - rank(a) > 1 else None

    try:
        poly = convex_hull(a)
    except DegenerateHullError as e:
        return AssumptionReport(lattice_full=lattice_full, face_condition=False,
                                origin_interior=False,
                                failing_face=None,
                                note=note or f"degenerate hull: {e.detail}")

    cols = _columns_as_points(a)
    facet_vsets = [frozenset(i for i, v in enumerate(poly.vertices)
                             if sum(hi * xi for hi, xi in zip(h, v)) == c)
                   for (h, c) in poly.facets]
    face_condition = True
    failing: Optional[tuple] = None
    for face in poly.faces:
        fset = set(face)
        supp = [poly.facets[t] for t, vs in enumerate(facet_vsets) if fset <= vs]
        on_face = [j for j, p in enumerate(cols)
                   if all(sum(hi * xi for hi, xi in zip(h, p)) == c for (h, c) in supp)]
        if rank(a.submatrix_cols(on_face)) != len(on_face):
            face_condition = False
            failing = tuple(on_face)
            break
    origin_interior = all(c > 0 for (_, c) in poly.facets)
    return AssumptionReport(lattice_full=lattice_full, face_condition=face_condition,
                            origin_interior=origin_interior, failing_face=failing,
                            note=note)


def holonomic_rank(sys: GkzSystem) -> Rat:
    report = check_assumptions(sys.a_matrix)
    if not report.passed:
        failed = [name for name, ok in
                  [("full lattice", report.lattice_full),
                   ("face condition", report.face_condition),
                   ("origin interior", report.origin_interior)] if not ok]
        raise DomainError("admissibility fails: " + ", ".join(failed))
    return normalized_volume(sys.a_matrix)


def gale_dual(a: IntMat) -> GaleData:
    b = kernel_basis(a)
    return GaleData(b_matrix=b, kappa=tuple(Fraction(0) for _ in range(a.cols)))


def params_from_gale(g: GaleData):
    """Classical parameters from a corank-one Gale column.

    alpha entries (k - kappa_j)/b_j for b_j > 0, k = 0..b_j-1; beta entries
    the same with b_j < 0, k = 0..-b_j-1; eta = prod b_j^(b_j). Requires a
    single column with b_1 = 1 and kappa_1 = 0.
    """
    if g.b_matrix.cols != 1:
        raise DomainError(f"need a single Gale column, got {g.b_matrix.cols}")
    b = g.b_matrix.col(0)
    if b[0] != 1:
        raise DomainError(f"first Gale entry must be 1, got {b[0]}")
    if g.kappa[0] != 0:
        raise DomainError(f"first kappa entry must be 0, got {g.kappa[0]}")
    alpha, beta = [], []
    eta = Fraction(1)
    for bj, kj in zip(b, g.kappa):
        if bj > 0:
            alpha.extend((k - kj) / bj for k in range(bj))
        elif bj < 0:
            beta.extend((k - kj) / bj for k in range(-bj))
        if bj:
            eta *= Fraction(bj) ** bj
    return tuple(sorted(alpha)), tuple(sorted(beta)), eta


def _block_matrix(n: int, m: int) -> IntMat:
    # Rows: (1 | 0_{n-1} | e_i) for i < m, then (1 | -e_i | 0_m) for i < n-1.
    rows = []
    for i in range(m):
        rows.append([1] + [0] * (n - 1) + [1 if j == i else 0 for j in range(m)])
    for i in range(n - 1):
        rows.append([1] + [-1 if j == i else 0 for j in range(n - 1)] + [0] * m)
    return IntMat.from_rows(rows, cols=n + m)


def matrix_for_hyper(p: HypergeometricParams) -> GkzSystem:
    """Block matrix and parameter vector attached to (alpha; beta), alpha_1 = 0."""
    if p.n == 0:
        raise DomainError("need at least one alpha parameter")
    if p.alpha[0] != 0:
        raise DomainError(f"alpha_1 must be 0; apply a Kummer twist by "
                          f"{-p.alpha[0]} first")
    beta_vec = tuple(p.beta) + tuple(p.alpha[1:])
    return GkzSystem(a_matrix=_block_matrix(p.n, p.m), beta=beta_vec, beta0=0)


def lattice_binomials(sys: GkzSystem) -> list:
    """(u_plus, u_minus) positive/negative parts of each Gale column."""
    b = kernel_basis(sys.a_matrix)
    out = []
    for j in range(b.cols):
        w = b.col(j)
        out.append((tuple(max(x, 0) for x in w), tuple(max(-x, 0) for x in w)))
    return out


def gkz_rees_generators(sys: GkzSystem) -> list:
    """Generators in the lambda alphabet: box binomials, the z^2*dz
    operator, then one Euler operator per matrix row."""
    nv = sys.a_matrix.cols
    gens = []
    for up, um in lattice_binomials(sys):
        plus = ore.LambdaPoly.one(nv)
        minus = ore.LambdaPoly.one(nv)
        for j in range(nv):
            for _ in range(up[j]):
                plus = plus * ore.LambdaPoly.op_dee(nv, j)
            for _ in range(um[j]):
                minus = minus * ore.LambdaPoly.op_dee(nv, j)
        gens.append(plus - minus)
    phat = ore.LambdaPoly.op_dz(nv)
    for j in range(nv):
        phat = phat + ore.LambdaPoly.var_lam(nv, j) * ore.LambdaPoly.op_dee(nv, j)
    gens.append(phat - ore.LambdaPoly.var_z(nv).scale(sys.beta0))
    for i in range(sys.a_matrix.rows):
        euler = ore.LambdaPoly.scalar(nv, 0)
        for j in range(nv):
            aij = sys.a_matrix[i, j]
            if aij:
                term = ore.LambdaPoly.var_lam(nv, j) * ore.LambdaPoly.op_dee(nv, j)
                euler = euler + term.scale(aij)
        gens.append(euler - ore.LambdaPoly.var_z(nv).scale(sys.beta[i]))
    return gens


# -- reduction to the classical pair ---------------------------------------

@dataclass(frozen=True)
class ReductionResult:
    """(P, H) plus bookkeeping; iterates as the bare pair."""

    p_op: ore.OrePoly
    h_op: ore.OrePoly
    applied_sign: int
    params: HypergeometricParams

    def __iter__(self):
        yield self.p_op
        yield self.h_op


def _recognize_block_shape(a: IntMat):
    for n in range(1, a.cols + 1):
        m = a.cols - n
        if a.rows == n + m - 1 and a == _block_matrix(n, m):
            return n, m
    raise BlockShapeError(f"matrix is not the hypergeometric block shape: "
                          f"{a.tolist()}")


def _poly2_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for (z1, w1), c1 in f.items():
        for (z2, w2), c2 in g.items():
            key = (z1 + z2, w1 + w2)
            v = out.get(key, 0) + c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return out


def reduce_to_hyper(sys: GkzSystem) -> ReductionResult:
    """Eliminate the Euler operators and substitute lambda_1 = t, others 1.

    Works in the commutative subalgebra Q[z, l_1..l_N] with l_j the
    lambda_j-Euler operator z*lambda_j*d/d(lambda_j). The binomial,
    multiplied on the left by lambda_1*...*lambda_N, becomes a polynomial
    in the l_j with a lambda-monomial prefix; row i of the matrix rewrites
    l_{j_i} as a polynomial in (z, l_1) modulo the left ideal (subtracting
    a left multiple of the i-th Euler generator). The surviving variable
    maps as l_1 -> z*theta and the prefix as lambda_1 -> t. The sign
    (-1)^m normalizing the coefficient of t is applied at the end and
    recorded.
    """
    a = sys.a_matrix
    if sys.beta0 != 0:
        raise DomainError(f"reduction requires beta0 = 0, got {sys.beta0}")
    n, m = _recognize_block_shape(a)
    nv = a.cols

    # l_j rewrite table, each entry a polynomial in (z, l_1): keys
    # (z_exp, l1_exp). Row i has support {0, j} with a[i][j] = +-1.
    table = {0: {(0, 1): Fraction(1)}}
    for i in range(a.rows):
        support = [j for j in range(1, nv) if a[i, j]]
        if len(support) != 1 or a[i, 0] != 1:
            raise BlockShapeError(f"row {i} is not an elimination row")
        j = support[0]
        s = a[i, j]
        if s == 1:
            table[j] = {(1, 0): sys.beta[i], (0, 1): Fraction(-1)}
        elif s == -1:
            table[j] = {(0, 1): Fraction(1), (1, 0): -sys.beta[i]}
        else:
            raise BlockShapeError(f"row {i} has non-unit pivot {s}")
    if len(table) != nv:
        raise BlockShapeError("elimination rows do not cover every column")

    binomials = lattice_binomials(sys)
    if len(binomials) != 1:
        raise BlockShapeError(f"need corank one, got {len(binomials)} binomials")
    up, um = binomials[0]
    if any(x > 1 for x in up + um):
        raise BlockShapeError("binomial exponents must be 0 or 1")

    def half_to_op(exps: tuple) -> ore.OrePoly:
        # lambda_1..lambda_N times prod_{j in supp} D_j equals
        # (prod_{j not in supp} lambda_j) * prod_{j in supp} l_j; eliminate
        # the l_j, then map lambda_1 -> t, l_1 -> z*theta.
        t_exp = 0 if exps[0] else 1
        poly = {(0, 0): Fraction(1)}
        for j in range(nv):
            if exps[j]:
                poly = _poly2_mul(poly, table[j])
        out = ore.OrePoly.zero()
        for (zx, w), c in poly.items():
            out = out + ore.OrePoly.monomial(c, z=zx + w, t=t_exp, theta=w)
        return out

    h_raw = half_to_op(up) - half_to_op(um)
    applied_sign = (-1) ** m
    h_op = ore.negate_t(h_raw) if m % 2 else h_raw

    euler_sum = {}
    for j in range(nv):
        for key, c in table[j].items():
            v = euler_sum.get(key, 0) + c
            if v:
                euler_sum[key] = v
            else:
                euler_sum.pop(key, None)
    p_op = ore.OrePoly.op_dz()
    for (zx, w), c in euler_sum.items():
        p_op = p_op + ore.OrePoly.monomial(c, z=zx + w, theta=w)

    params = HypergeometricParams((Fraction(0),) + tuple(sys.beta[m:]),
                                  tuple(sys.beta[:m]))
    return ReductionResult(p_op=p_op, h_op=h_op, applied_sign=applied_sign,
                           params=params)
