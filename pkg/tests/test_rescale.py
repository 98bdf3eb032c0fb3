"""Rescaled module: generators, basis, connection, flatness, V-filtration."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperhodge import hyper, ore, rescale
from hyperhodge.errors import DomainError
from hyperhodge.ore import OrePoly
from hyperhodge.rescale import IrregularContext, LaurentPoly

F = Fraction


def _ctx(*alpha):
    return IrregularContext([F(a) for a in alpha])


_unit = st.fractions(min_value=0, max_value=1, max_denominator=6).filter(lambda x: x < 1)
_alphas = st.lists(_unit, min_size=1, max_size=5).map(sorted)


# -- context validation ----------------------------------------------------

def test_context_needs_at_least_one_parameter():
    with pytest.raises(DomainError):
        IrregularContext([])


def test_context_rejects_out_of_range():
    with pytest.raises(DomainError):
        IrregularContext([F(1)])
    with pytest.raises(DomainError):
        IrregularContext([F(-1, 2)])


def test_context_rejects_unsorted():
    with pytest.raises(DomainError):
        IrregularContext([F(1, 2), F(0)])


def test_context_gamma_is_minus_sum():
    ctx = _ctx(0, "1/4", "1/2")
    assert ctx.gamma == F(-3, 4)
    assert IrregularContext([F(0)], gamma=0).gamma == 0
    with pytest.raises(DomainError):
        IrregularContext([F(0), F(1, 2)], gamma=0)


# -- defining pair and generators ------------------------------------------

def test_rees_pair_rank_one():
    p, h = rescale.rees_pair([F(0)], [])
    assert p == OrePoly.op_dz() + OrePoly.monomial(1, z=1, theta=1)
    assert h == OrePoly.monomial(1, z=1, theta=1) - OrePoly.var_t()


def test_rees_pair_mixed_type():
    # (n,m) = (1,1): P has no z*theta term, gamma = beta_1
    p, h = rescale.rees_pair([F(0)], [F(1, 3)])
    assert p == OrePoly.op_dz() + OrePoly.monomial(F(1, 3), z=1)
    want_h = (OrePoly.monomial(1, z=1, theta=1)
              - OrePoly.var_t() * (OrePoly.monomial(1, z=1, theta=1)
                                   - OrePoly.monomial(F(1, 3), z=1)))
    assert h == want_h


def test_generators_rank_one():
    gens = rescale.rescaled_generators(_ctx(0))
    assert gens.p_gen == OrePoly.op_dz() + OrePoly.monomial(1, z=1, theta=1)
    assert gens.tau_r_gen == OrePoly.op_dz() + OrePoly.op_dtau()
    assert gens.tau_h_cleared == (OrePoly.monomial(1, z=1, theta=1)
                                  - OrePoly.monomial(1, tau=1, t=1))
    assert gens.cleared_tau_power == 1


def test_generators_rank_two_zero_params():
    gens = rescale.rescaled_generators(_ctx(0, 0))
    assert gens.tau_h_cleared == (OrePoly.monomial(1, z=2, theta=2)
                                  - OrePoly.monomial(1, tau=2, t=1))
    assert gens.cleared_tau_power == 2


def test_generator_gamma_coefficient():
    gens = rescale.rescaled_generators(_ctx(0, "1/2"))
    want = (OrePoly.op_dz() + OrePoly.monomial(2, z=1, theta=1)
            - OrePoly.monomial(F(1, 2), z=1))
    assert gens.p_gen == want


def test_q_basis_values():
    assert rescale.q_basis(_ctx(0)) == [OrePoly.one()]
    q = rescale.q_basis(_ctx(0, "1/2"))
    assert q[1] == OrePoly.monomial(-2, z=1, theta=1)
    q = rescale.q_basis(_ctx(0, 0, 0))
    assert q[2] == OrePoly.monomial(9, z=2, theta=2)


@given(_alphas)
@settings(max_examples=40, deadline=None)
def test_q_basis_theta_degrees(alpha):
    for k, q in enumerate(rescale.q_basis(IrregularContext(alpha))):
        assert q.theta_degree() == k
        assert not q.has_dz() and not q.has_dtau()


# -- Laurent coefficients --------------------------------------------------

def test_laurent_arithmetic():
    a = LaurentPoly.monomial(2, z=1, tau=-1)
    b = LaurentPoly.monomial(1, t=1)
    assert (a + b) - b == a
    assert a * b == LaurentPoly.monomial(2, z=1, tau=-1, t=1)
    assert (a - a).is_zero()
    assert -a == LaurentPoly.monomial(-2, z=1, tau=-1)


def test_laurent_diff():
    p = LaurentPoly.monomial(3, z=2, tau=-1)
    assert p.diff(0) == LaurentPoly.monomial(6, z=1, tau=-1)
    assert p.diff(1) == LaurentPoly.monomial(-3, z=2, tau=-2)
    assert p.diff(2).is_zero()


def test_laurent_str():
    assert str(LaurentPoly.monomial(4, t=1)) == "4*t"
    assert str(LaurentPoly.monomial(-1, t=1)) == "-t"
    assert str(LaurentPoly.zero()) == "0"
    assert str(LaurentPoly.monomial(1, z=-2) + LaurentPoly.monomial(F(1, 2))) == \
        "1/2 + z^-2"


# -- connection matrices ---------------------------------------------------

def _entries(mat):
    return [[str(e) for e in row] for row in mat]


def test_matrices_rank_one():
    m = rescale.connection_matrices(_ctx(0))
    assert _entries(m.a0) == [["-t"]]
    assert _entries(m.ainf_prime) == [["0"]]
    assert _entries(m.ainf) == [["0"]]


def test_matrices_rank_two_zero_params():
    m = rescale.connection_matrices(_ctx(0, 0))
    assert _entries(m.a0) == [["0", "4*t"], ["1", "0"]]
    assert _entries(m.ainf_prime) == [["0", "0"], ["0", "0"]]
    assert _entries(m.ainf) == [["0", "0"], ["0", "1"]]


def test_matrices_rank_two_half():
    m = rescale.connection_matrices(_ctx(0, "1/2"))
    assert _entries(m.ainf_prime) == [["0", "0"], ["0", "1"]]
    # diag(0,1) - gamma*I - ainf_prime with gamma = -1/2
    assert _entries(m.ainf) == [["1/2", "0"], ["0", "1/2"]]


def test_connection_verifies_against_ideal():
    assert rescale.verify_connection(_ctx(0)) is True
    assert rescale.verify_connection(_ctx(0, 0)) is True
    assert rescale.verify_connection(_ctx(0, "1/4")) is True
    ok, failure = rescale.verify_connection_report(_ctx(0, "1/3", "1/2"))
    assert ok and failure is None


def test_connection_bound_is_enforced():
    with pytest.raises(DomainError):
        rescale.verify_connection(_ctx(0, 0, 0), bound=2)


def test_perturbed_matrix_is_caught():
    ctx = _ctx(0, "1/4")
    mats = rescale.connection_matrices(ctx)
    bad = [list(row) for row in mats.ainf]
    bad[0][0] = bad[0][0] + LaurentPoly.monomial(1)
    mutated = rescale.ConnectionMatrices(a0=mats.a0, ainf_prime=mats.ainf_prime,
                                         ainf=tuple(tuple(r) for r in bad))
    ok, failure = rescale.verify_connection_report(ctx, matrices=mutated)
    assert not ok
    assert failure["direction"] in ("dt", "dz", "dtau")
    assert failure["column"] in (0, 1)


@given(_alphas)
@settings(max_examples=25, deadline=None)
def test_connection_verifies_on_random_contexts(alpha):
    assert rescale.verify_connection(IrregularContext(alpha), bound=5)


# -- flatness --------------------------------------------------------------

def test_curvature_vanishes():
    assert rescale.curvature_check(_ctx(0)) is True
    assert rescale.curvature_check(_ctx(0, 0)) is True
    assert rescale.curvature_check(_ctx(0, "1/6", "5/6")) is True


def test_curvature_catches_sign_flip():
    ctx = _ctx(0, 0)
    mats = rescale.connection_matrices(ctx)
    tau = LaurentPoly.monomial(1, tau=1)
    zz = LaurentPoly.monomial(1, z=1)
    base = rescale._mat_add(rescale._mat_scale(mats.a0, tau),
                            rescale._mat_scale(mats.ainf, zz))
    f = rescale._mat_scale(base, LaurentPoly.monomial(1, z=-2))
    g = rescale._mat_scale(
        rescale._mat_sub(rescale._mat_scale(mats.ainf_prime, zz),
                         rescale._mat_scale(mats.a0, tau)),
        LaurentPoly.monomial(F(1, 2), z=-1, t=-1))
    # dtau coefficient with the sign dropped
    h = rescale._mat_scale(base, LaurentPoly.monomial(1, z=-1, tau=-1))
    assert rescale.curvature_check(ctx, omega=(f, g, h)) is False


@given(_alphas)
@settings(max_examples=30, deadline=None)
def test_curvature_vanishes_on_random_contexts(alpha):
    assert rescale.curvature_check(IrregularContext(alpha))


# -- V-filtration ----------------------------------------------------------

def test_v_step_worked_example():
    ctx = _ctx(0, "1/4")
    assert ctx.gamma == F(-1, 4)
    assert rescale.v_step(ctx, F(1, 4)).nu == (0, 1)
    assert rescale.v_step(ctx, F(3, 4)).nu == (0, 0)


@given(_alphas, st.fractions(min_value=-6, max_value=6, max_denominator=6))
@settings(max_examples=100)
def test_v_step_shift_law(alpha, x):
    ctx = IrregularContext(alpha)
    lo = rescale.v_step(ctx, x - 1).nu
    hi = rescale.v_step(ctx, x).nu
    assert tuple(a - b for a, b in zip(lo, hi)) == (1,) * ctx.n


def test_graded_piece_repeated_parameter():
    piece = rescale.graded_piece(_ctx(0, 0), 0)
    assert piece.contributing_indices == (0, 1)
    assert piece.nilpotent == ((0, 0), (-1, 0))
    assert rescale.jordan_block_sizes(_ctx(0, 0), piece) == (2,)


def test_graded_piece_distinct_parameters():
    ctx = _ctx(0, "1/2")
    piece = rescale.graded_piece(ctx, F(1, 2))
    assert piece.contributing_indices == (0, 1)
    assert piece.nilpotent == ((0, 0), (0, 0))
    assert rescale.jordan_block_sizes(ctx, piece) == (1, 1)


def test_graded_piece_empty():
    piece = rescale.graded_piece(_ctx(0, 0), F(1, 3))
    assert piece.contributing_indices == ()
    assert piece.nilpotent == ()
    assert rescale.jordan_block_sizes(_ctx(0, 0), piece) == ()


def _mat_power_is_zero(mat, e):
    size = len(mat)
    cur = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for _ in range(e):
        cur = [[sum(cur[i][k] * mat[k][j] for k in range(size))
                for j in range(size)] for i in range(size)]
    return all(x == 0 for row in cur for x in row)


def test_nilpotency_on_random_pieces():
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randrange(1, 9)
        alpha = sorted(F(rng.randrange(0, 6), 6) for _ in range(n))
        ctx = IrregularContext(alpha)
        k = rng.randrange(n)
        level = F(k) - ctx.gamma - n * ctx.alpha[k]
        piece = rescale.graded_piece(ctx, level)
        assert k in piece.contributing_indices
        if piece.contributing_indices:
            assert _mat_power_is_zero(piece.nilpotent, n)
        sizes = rescale.jordan_block_sizes(ctx, piece)
        assert sum(sizes) == len(piece.contributing_indices)
        # block sizes are run lengths of equal parameter values
        for s in sizes:
            assert 1 <= s <= n


# -- restriction -----------------------------------------------------------

def test_restriction_recovers_classical_operator():
    for alpha in ([F(0)], [F(0), F(0)], [F(0), F(1, 4), F(1, 2)]):
        ctx = IrregularContext(alpha)
        want = hyper.hypergeometric_operator(
            hyper.HypergeometricParams(alpha, []))
        assert rescale.classical_restriction(ctx) == want


@given(_alphas)
@settings(max_examples=40, deadline=None)
def test_restriction_randomized(alpha):
    ctx = IrregularContext(alpha)
    want = hyper.hypergeometric_operator(hyper.HypergeometricParams(alpha, []))
    assert rescale.classical_restriction(ctx) == want


def test_restriction_via_raw_substitution():
    # the same computation spelled out with the substitution primitive
    ctx = _ctx(0, "1/3")
    h = rescale.rescaled_generators(ctx).tau_h_cleared
    restricted = ore.substitute(h, tau="z")
    shifted = OrePoly({m._replace(z=m.z - 2): c
                       for m, c in restricted.terms().items()})
    assert ore.substitute(shifted, z=1) == hyper.hypergeometric_operator(
        hyper.HypergeometricParams([F(0), F(1, 3)], []))
