"""Named invariant checks wiring the calculators against their oracles.

Every check is a pure function of a seeded RNG and a size bound, returning
(ok, detail). The runner executes them in declaration order so output is
deterministic for a fixed (bound, seed). These are the same dual-route
comparisons the test suite relies on: closed-form results against the
operator rewriting kernel, counting formulas against brute force, matrix
identities against symbolic expansion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import gkz, hodge, hyper, ore, rescale
from .errors import NotInLatticeError
from .exact import IntMat, det, kernel_basis, rank, snf


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


# -- random data helpers ---------------------------------------------------

def _rand_unit_fraction(rng: random.Random, max_den: int = 6) -> Fraction:
    den = rng.randrange(1, max_den + 1)
    return Fraction(rng.randrange(0, den), den)


def _rand_alpha(rng: random.Random, n: int) -> tuple:
    return tuple(sorted(_rand_unit_fraction(rng) for _ in range(n)))


def _rand_ctx(rng: random.Random, n: int) -> rescale.IrregularContext:
    return rescale.IrregularContext(_rand_alpha(rng, n))


def _rand_op(rng: random.Random, nterms: int = 3, with_delta: bool = True) -> ore.OrePoly:
    terms = {}
    for _ in range(nterms):
        m = ore.Mono(z=rng.randrange(0, 3), tau=rng.randrange(0, 3),
                     t=rng.randrange(-1, 2), theta=rng.randrange(0, 3),
                     dtau=rng.randrange(0, 2) if with_delta else 0,
                     dz=rng.randrange(0, 2) if with_delta else 0)
        c = Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
        if c:
            terms[m] = terms.get(m, 0) + c
    return ore.OrePoly({m: c for m, c in terms.items() if c})


# -- exact linear algebra --------------------------------------------------

def _rand_mat(rng: random.Random, rows: int, cols: int) -> IntMat:
    return IntMat.from_rows([[rng.randrange(-9, 10) for _ in range(cols)]
                             for _ in range(rows)], cols=cols)


def _check_snf(rng: random.Random, bound: int):
    trials = 10 * bound
    for _ in range(trials):
        a = _rand_mat(rng, rng.randrange(1, 5), rng.randrange(1, 5))
        res = snf(a)
        if res.u * a * res.v != res.s:
            return False, "U*A*V != S"
        if abs(det(res.u)) != 1 or abs(det(res.v)) != 1:
            return False, "transform not unimodular"
        diag = res.diagonal()
        for i in range(len(diag) - 1):
            if diag[i + 1] and diag[i] and diag[i + 1] % diag[i]:
                return False, f"divisibility broken: {diag}"
            if diag[i] == 0 and diag[i + 1] != 0:
                return False, f"zeros not trailing: {diag}"
    return True, f"{trials} matrices"


def _check_kernel(rng: random.Random, bound: int):
    trials = 10 * bound
    for _ in range(trials):
        a = _rand_mat(rng, rng.randrange(1, 4), rng.randrange(1, 5))
        k = kernel_basis(a)
        if k.cols != a.cols - rank(a):
            return False, "kernel dimension off"
        for j in range(k.cols):
            col = k.col(j)
            if any(sum(a[i, r] * col[r] for r in range(a.cols)) for i in range(a.rows)):
                return False, "A * kernel column != 0"
        if k.cols and not all(x == 1 for x in snf(k).diagonal()):
            return False, "kernel lattice not saturated"
    return True, f"{trials} matrices"


def _check_rank_routes(rng: random.Random, bound: int):
    trials = 10 * bound
    for _ in range(trials):
        a = _rand_mat(rng, rng.randrange(1, 5), rng.randrange(1, 5))
        if rank(a) != snf(a).rank():
            return False, "elimination rank != diagonal rank"
    return True, f"{trials} matrices"


# -- operator kernel -------------------------------------------------------

def _check_relations(rng: random.Random, bound: int):
    P = ore.OrePoly
    cases = [
        (ore.op_mul(P.op_theta(), P.var_t()),
         P.monomial(1, t=1, theta=1) + P.var_t()),
        (ore.op_mul(P.op_dz(), P.var_z()),
         P.monomial(1, z=1, dz=1) + P.monomial(1, z=2)),
        (ore.op_mul(P.op_dtau(), P.var_tau()),
         P.monomial(1, tau=1, dtau=1) + P.monomial(1, z=1, tau=1)),
        (ore.op_mul(P.op_dz(), P.op_dtau()),
         P.monomial(1, dtau=1, dz=1) + P.monomial(1, z=1, dtau=1)),
        (ore.op_mul(P.op_theta(), P.monomial(1, t=-1)),
         P.monomial(1, t=-1, theta=1) - P.monomial(1, t=-1)),
        (ore.op_mul(P.op_theta(), P.var_z()), P.monomial(1, z=1, theta=1)),
        (ore.op_mul(P.op_theta(), P.var_tau()), P.monomial(1, tau=1, theta=1)),
        (ore.op_mul(P.op_dz(), P.var_t()), P.monomial(1, t=1, dz=1)),
        (ore.op_mul(P.op_dtau(), P.var_t()), P.monomial(1, t=1, dtau=1)),
    ]
    for got, want in cases:
        if got != want:
            return False, f"relation broke: {ore.format_op(got)} != {ore.format_op(want)}"
    return True, f"{len(cases)} defining relations"


def _check_assoc(rng: random.Random, bound: int):
    trials = 125 * bound
    for _ in range(trials):
        a, b, c = (_rand_op(rng) for _ in range(3))
        if ore.op_mul(ore.op_mul(a, b), c) != ore.op_mul(a, ore.op_mul(b, c)):
            return False, "associativity failed"
    return True, f"{trials} triples"


def _check_theta_conj(rng: random.Random, bound: int):
    P = ore.OrePoly
    for k in range(-5, 6):
        lhs = ore.op_mul(P.op_theta(), P.monomial(1, t=k))
        rhs = ore.op_mul(P.monomial(1, t=k), P.op_theta() + P.scalar(k))
        if lhs != rhs:
            return False, f"theta * t^{k} != t^{k} (theta + {k})"
    return True, "k in -5..5"


def _check_nf_idempotent(rng: random.Random, bound: int):
    trials = 20 * bound
    done = 0
    for _ in range(trials):
        n = rng.randrange(1, min(bound, 4) + 1)
        gens = rescale.rescaled_generators(_rand_ctx(rng, n))
        op = _rand_op(rng)
        try:
            nf1 = ore.normal_form(op, gens, n)
        except NotInLatticeError:
            continue
        if ore.normal_form(nf1, gens, n) != nf1:
            return False, "normal form not idempotent"
        done += 1
    if done < trials // 4:
        return False, f"only {done}/{trials} inputs reducible"
    return True, f"{done} reducible inputs"


def _check_membership(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        n = rng.randrange(1, min(bound, 4) + 1)
        gens = rescale.rescaled_generators(_rand_ctx(rng, n))
        q = _rand_op(rng, nterms=2)
        for g in (gens.p_gen, gens.tau_r_gen, gens.tau_h_cleared):
            if not ore.normal_form(ore.op_mul(q, g), gens, n).is_zero():
                return False, "left multiple of a generator did not reduce to zero"
    return True, f"{trials} cofactors x 3 generators"


def _check_confluence(rng: random.Random, bound: int):
    trials = 20 * bound
    done = 0
    for _ in range(trials):
        n = rng.randrange(1, min(bound, 4) + 1)
        gens = rescale.rescaled_generators(_rand_ctx(rng, n))
        op = _rand_op(rng)
        try:
            r1 = ore.normal_form(op, gens, n, strategy="delta_z_first")
            r2 = ore.normal_form(op, gens, n, strategy="delta_tau_first")
        except NotInLatticeError:
            continue
        if r1 != r2:
            return False, "strategies disagree"
        done += 1
    if done < trials // 4:
        return False, f"only {done}/{trials} inputs reducible"
    return True, f"{done} inputs, two strategies"


# -- classical layer -------------------------------------------------------

def _rand_params(rng: random.Random, nmax: int = 3, mmax: int = 3,
                 unit: bool = False) -> hyper.HypergeometricParams:
    n = rng.randrange(0, nmax + 1)
    m = rng.randrange(0 if n else 1, mmax + 1)
    draw = (_rand_unit_fraction if unit
            else lambda r: Fraction(r.randrange(-8, 9), r.randrange(1, 5)))
    return hyper.HypergeometricParams([draw(rng) for _ in range(n)],
                                      [draw(rng) for _ in range(m)])


def _check_kummer(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        p = _rand_params(rng)
        eta = Fraction(rng.randrange(-6, 7), rng.randrange(1, 5))
        shifted = ore.substitute(hyper.hypergeometric_operator(p), theta_shift=eta)
        twisted = hyper.hypergeometric_operator(hyper.kummer_twist(p, -eta))
        if shifted != twisted:
            return False, f"theta shift by {eta} mismatched the twist"
    return True, f"{trials} (params, eta) pairs"


def _check_profiles(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        p = _rand_params(rng)
        prof = hyper.singularity_profile(p)
        if prof.euler_characteristic != -1:
            return False, "Euler characteristic != -1"
        if prof.irregular_point is None:
            if p.n != p.m or prof.irregularity != 0:
                return False, "regular profile on unequal type"
        elif prof.slope * prof.slope_multiplicity != 1 or prof.irregularity != 1:
            return False, "slope * multiplicity != irregularity 1"
        q = hyper.normalize_params(p)[0]
        if hyper.is_irreducible(p) != hyper.is_irreducible(q):
            return False, "irreducibility not normalization-invariant"
    return True, f"{trials} profiles"


def _check_fedorov_oracle(rng: random.Random, bound: int):
    trials = 50 * bound
    done = 0
    for _ in range(trials):
        n = rng.randrange(1, 9)
        p = hyper.HypergeometricParams(_rand_alpha(rng, n), _rand_alpha(rng, n))
        if not hyper.is_irreducible(p):
            continue
        spec = hodge.fedorov_numbers(p)
        brute = {}
        for k, a in enumerate(p.alpha):
            count = 0
            for b in p.beta:
                if b < a:
                    count += 1
            v = Fraction(count - (k + 1))
            brute[v] = brute.get(v, 0) + 1
        if dict(spec.jumps) != brute or spec.rank != n:
            return False, "pair counting disagreed"
        done += 1
    return True, f"{done} irreducible (n,n) inputs"


def _graded_slice_dim(ctx: rescale.IrregularContext, level: Fraction) -> int:
    piece = rescale.graded_piece(ctx, level)
    nu = rescale.v_step(ctx, level).nu
    return sum(1 for k in piece.contributing_indices if nu[k] == 0)


def _check_coherence(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        n = rng.randrange(1, 9)
        p = hyper.HypergeometricParams(_rand_alpha(rng, n), [])
        spectrum = dict(hodge.irregular_hodge_numbers(p).jumps)
        shift = hodge.filtration_shift(p)
        steps = hodge.irregular_filtration(p, window=1)
        ctx = rescale.IrregularContext(p.alpha)
        prev = 0
        for step in steps:
            inc = len(step.basis_indices) - prev
            prev = len(step.basis_indices)
            if spectrum.get(step.level + shift) != inc:
                return False, f"filtration increment at {step.level} off"
            if _graded_slice_dim(ctx, step.level) != inc:
                return False, f"graded slice at {step.level} off"
        if sum(spectrum.values()) != n or prev != n:
            return False, "rank accounting failed"
        unit_total = sum(len(rescale.graded_piece(ctx, s).contributing_indices)
                         for s in {lvl % 1 for lvl in
                                   hodge.unnormalized_jumps(p)})
        if unit_total != n:
            return False, "graded dimensions over a unit interval != n"
    return True, f"{trials} spectra"


# -- rescaled module -------------------------------------------------------

def _check_connection(rng: random.Random, bound: int):
    cap = min(bound, 5)
    trials = 3 * bound
    for _ in range(trials):
        ctx = _rand_ctx(rng, rng.randrange(1, cap + 1))
        if not rescale.verify_connection(ctx, bound=cap):
            return False, f"column check failed for {ctx.alpha}"
    ctx = _rand_ctx(rng, min(2, cap))
    mats = rescale.connection_matrices(ctx)
    bad = [list(row) for row in mats.ainf]
    bad[0][0] = bad[0][0] + rescale.LaurentPoly.monomial(1)
    mutated = rescale.ConnectionMatrices(a0=mats.a0, ainf_prime=mats.ainf_prime,
                                         ainf=tuple(tuple(r) for r in bad))
    if rescale.verify_connection(ctx, bound=cap, matrices=mutated):
        return False, "perturbed matrix passed"
    return True, f"{trials} contexts + mutation"


def _check_flatness(rng: random.Random, bound: int):
    cap = min(bound, 6)
    trials = 3 * bound
    for _ in range(trials):
        ctx = _rand_ctx(rng, rng.randrange(1, cap + 1))
        if not rescale.curvature_check(ctx):
            return False, f"curvature nonzero for {ctx.alpha}"
    ctx = rescale.IrregularContext([Fraction(0), Fraction(0)])
    mats = rescale.connection_matrices(ctx)
    tau = rescale.LaurentPoly.monomial(1, tau=1)
    zz = rescale.LaurentPoly.monomial(1, z=1)
    base = rescale._mat_add(rescale._mat_scale(mats.a0, tau),
                            rescale._mat_scale(mats.ainf, zz))
    f = rescale._mat_scale(base, rescale.LaurentPoly.monomial(1, z=-2))
    g = rescale._mat_scale(
        rescale._mat_sub(rescale._mat_scale(mats.ainf_prime, zz),
                         rescale._mat_scale(mats.a0, tau)),
        rescale.LaurentPoly.monomial(Fraction(1, 2), z=-1, t=-1))
    h_flipped = rescale._mat_scale(base, rescale.LaurentPoly.monomial(1, z=-1, tau=-1))
    if rescale.curvature_check(ctx, omega=(f, g, h_flipped)):
        return False, "sign-flipped form passed"
    return True, f"{trials} contexts + mutation"


def _check_vshift(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        ctx = _rand_ctx(rng, rng.randrange(1, 9))
        x = Fraction(rng.randrange(-12, 13), rng.randrange(1, 7))
        lo = rescale.v_step(ctx, x - 1).nu
        hi = rescale.v_step(ctx, x).nu
        if tuple(a - b for a, b in zip(lo, hi)) != (1,) * ctx.n:
            return False, f"shift law failed at {x}"
    return True, f"{trials} (ctx, index) pairs"


def _int_mat_rank(mat: tuple) -> int:
    size = len(mat)
    if size == 0:
        return 0
    return rank(IntMat.from_rows([list(r) for r in mat], cols=size))


def _nilpotent_partition(mat: tuple, n: int) -> tuple:
    """Jordan sizes of a nilpotent matrix from the ranks of its powers."""
    size = len(mat)
    if size == 0:
        return ()
    ranks = [size]
    cur = [list(r) for r in mat]
    while True:
        r = _int_mat_rank(tuple(tuple(x) for x in cur))
        ranks.append(r)
        if r == 0:
            break
        cur = [[sum(cur[i][k] * mat[k][j] for k in range(size)) for j in range(size)]
               for i in range(size)]
        if len(ranks) > n + 1:
            return (-1,)
    sizes = []
    for j in range(1, len(ranks)):
        blocks_ge_j = ranks[j - 1] - ranks[j]
        sizes.append(blocks_ge_j)
    out = []
    for j, count in enumerate(sizes):
        longer = sizes[j + 1] if j + 1 < len(sizes) else 0
        out.extend([j + 1] * (count - longer))
    return tuple(sorted(out, reverse=True))


def _check_jordan(rng: random.Random, bound: int):
    trials = 15 * bound
    for _ in range(trials):
        ctx = _rand_ctx(rng, rng.randrange(1, 9))
        level = rng.choice([Fraction(k) - ctx.gamma - ctx.n * ctx.alpha[k]
                            for k in range(ctx.n)])
        piece = rescale.graded_piece(ctx, level)
        part = _nilpotent_partition(piece.nilpotent, ctx.n)
        if part == (-1,):
            return False, "nilpotency index exceeded n"
        if part != rescale.jordan_block_sizes(ctx, piece):
            return False, f"rank route {part} != run lengths"
    return True, f"{trials} graded pieces"


def _check_restriction(rng: random.Random, bound: int):
    trials = 10 * bound
    for _ in range(trials):
        ctx = _rand_ctx(rng, rng.randrange(1, 7))
        got = rescale.classical_restriction(ctx)
        want = hyper.hypergeometric_operator(
            hyper.HypergeometricParams(ctx.alpha, []))
        if got != want:
            return False, f"restriction mismatch for {ctx.alpha}"
    return True, f"{trials} contexts"


# -- GKZ layer -------------------------------------------------------------

def _check_volume(rng: random.Random, bound: int):
    top = min(7, bound + 3)
    for n in range(2, top + 1):
        a = gkz._block_matrix(n, 0)
        if gkz.normalized_volume(a) != n:
            return False, f"ray matrix volume != {n}"
        if not gkz.check_assumptions(a).passed:
            return False, f"ray matrix failed admissibility at n={n}"
    if gkz.normalized_volume(IntMat.from_rows([[1, -1]], cols=2)) != 2:
        return False, "segment volume != 2"
    simplex = IntMat.from_rows([[1, 0, 0], [0, 1, 0]], cols=3)
    if gkz.normalized_volume(simplex) != 1:
        return False, "unit simplex volume != 1"
    square = IntMat.from_rows([[1, 1, -1, -1], [1, -1, 1, -1]], cols=4)
    if gkz.normalized_volume(square) != 8:
        return False, "square volume != 8"
    return True, f"ray matrices n=2..{top}, segment, simplex, square"


def _check_gale(rng: random.Random, bound: int):
    trials = 50 * bound
    for _ in range(trials):
        total = rng.randrange(1, 9)
        n = rng.randrange(1, total + 1)
        m = total - n
        alpha = (Fraction(0),) + _rand_alpha(rng, n - 1)
        p = hyper.HypergeometricParams(sorted(alpha), _rand_alpha(rng, m))
        sysm = gkz.matrix_for_hyper(p)
        g = gkz.gale_dual(sysm.a_matrix)
        kappa = ((Fraction(0),) + tuple(-a for a in p.alpha[1:]) + tuple(p.beta))
        al, be, eta = gkz.params_from_gale(gkz.GaleData(g.b_matrix, kappa))
        if al != p.alpha or be != p.beta or eta != (-1) ** m:
            return False, f"round trip lost parameters at ({n},{m})"
    return True, f"{trials} parameter sets"


def _check_reduction(rng: random.Random, bound: int):
    trials = 25 * bound
    for _ in range(trials):
        total = rng.randrange(1, 7)
        n = rng.randrange(1, total + 1)
        m = total - n
        alpha = tuple(sorted((Fraction(0),) + _rand_alpha(rng, n - 1)))
        beta = _rand_alpha(rng, m)
        p = hyper.HypergeometricParams(alpha, beta)
        res = gkz.reduce_to_hyper(gkz.matrix_for_hyper(p))
        want_p, want_h = rescale.rees_pair(alpha, beta)
        if res.p_op != want_p or res.h_op != want_h:
            return False, f"reduction mismatch at ({n},{m})"
        if res.applied_sign != (-1) ** m or res.params != p:
            return False, "reduction metadata wrong"
    return True, f"{trials} systems"


CHECKS = [
    ("exact_snf_reconstruction", _check_snf),
    ("exact_kernel_saturation", _check_kernel),
    ("exact_rank_two_routes", _check_rank_routes),
    ("ore_defining_relations", _check_relations),
    ("ore_associativity", _check_assoc),
    ("ore_theta_conjugation", _check_theta_conj),
    ("ore_normal_form_idempotent", _check_nf_idempotent),
    ("ore_ideal_membership", _check_membership),
    ("ore_confluence", _check_confluence),
    ("hyper_kummer_operator", _check_kummer),
    ("hyper_profile_accounting", _check_profiles),
    ("hodge_counting_oracle", _check_fedorov_oracle),
    ("hodge_coherence", _check_coherence),
    ("rescale_connection_columns", _check_connection),
    ("rescale_flatness", _check_flatness),
    ("rescale_vfilt_shift", _check_vshift),
    ("rescale_nilpotent_jordan", _check_jordan),
    ("rescale_restriction", _check_restriction),
    ("gkz_volume_rank", _check_volume),
    ("gkz_gale_round_trip", _check_gale),
    ("gkz_reduction_identity", _check_reduction),
]


def run_checks(bound: int = 4, seed: int = 0, names=None) -> list:
    chosen = [c for c in CHECKS if names is None or c[0] in names]
    out = []
    for name, fn in chosen:
        rng = random.Random(f"{seed}:{name}")
        try:
            ok, detail = fn(rng, bound)
        except Exception as e:  # a crash is a failure, not a stop
            ok, detail = False, f"{type(e).__name__}: {e}"
        out.append(CheckResult(name=name, ok=ok, detail=detail))
    return out
