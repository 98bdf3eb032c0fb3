"""Operator kernel: relations, products, normal forms, substitutions.

The ideal generators used by the reduction tests are rebuilt here by hand
from scratch, so agreement with the constructors elsewhere is itself part
of what the suite establishes.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hyperhodge import ore
from hyperhodge.errors import NotInLatticeError
from hyperhodge.ore import LambdaPoly, Mono, OrePoly

P = OrePoly


def _gens(alpha, gamma=None):
    """(P, R, tau-cleared H) assembled term by term for sorted alpha."""
    n = len(alpha)
    if gamma is None:
        gamma = -sum(Fraction(a) for a in alpha)
    p = P.op_dz() + P.monomial(n, z=1, theta=1) + P.monomial(gamma, z=1)
    r = P.op_dz() + P.op_dtau()
    h = P.one()
    for a in alpha:
        h = h * (P.monomial(1, z=1, theta=1) - P.monomial(Fraction(a), z=1))
    h = h - P.monomial(1, tau=n, t=1)
    return ore.IdealGenerators(p_gen=p, tau_r_gen=r, tau_h_cleared=h,
                               cleared_tau_power=n)


# -- defining relations ----------------------------------------------------

def test_theta_t_relation():
    assert ore.op_mul(P.op_theta(), P.var_t()) == P.monomial(1, t=1, theta=1) + P.var_t()


def test_dz_z_relation():
    assert ore.op_mul(P.op_dz(), P.var_z()) == P.monomial(1, z=1, dz=1) + P.monomial(1, z=2)


def test_dtau_tau_relation():
    got = ore.op_mul(P.op_dtau(), P.var_tau())
    assert got == P.monomial(1, tau=1, dtau=1) + P.monomial(1, z=1, tau=1)


def test_dz_dtau_relation():
    got = ore.op_mul(P.op_dz(), P.op_dtau())
    assert got == P.monomial(1, dtau=1, dz=1) + P.monomial(1, z=1, dtau=1)


def test_theta_inverse_t():
    got = ore.op_mul(P.op_theta(), P.monomial(1, t=-1))
    assert got == P.monomial(1, t=-1, theta=1) - P.monomial(1, t=-1)


@pytest.mark.parametrize("left, right", [
    (P.op_theta(), P.var_z()),
    (P.op_theta(), P.var_tau()),
    (P.op_dz(), P.var_t()),
    (P.op_dtau(), P.var_t()),
    (P.op_dtau(), P.var_z()),
])
def test_commuting_pairs(left, right):
    assert ore.op_mul(left, right) == ore.op_mul(right, left)


def test_theta_t_power_conjugation():
    for k in range(-5, 6):
        lhs = ore.op_mul(P.op_theta(), P.monomial(1, t=k))
        rhs = ore.op_mul(P.monomial(1, t=k), P.op_theta() + P.scalar(k))
        assert lhs == rhs


# -- product structure -----------------------------------------------------

_mono = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-1, 1),
                  st.integers(0, 2), st.integers(0, 1), st.integers(0, 1))
_coeff = st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool)
_ops = st.dictionaries(_mono, _coeff, min_size=1, max_size=3).map(
    lambda d: OrePoly({Mono(*m): c for m, c in d.items()}))


@given(_ops, _ops, _ops)
@settings(max_examples=120, deadline=None)
def test_product_is_associative(a, b, c):
    assert ore.op_mul(ore.op_mul(a, b), c) == ore.op_mul(a, ore.op_mul(b, c))


@given(_ops, _ops, _ops)
@settings(max_examples=60)
def test_product_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


def test_power_and_scale():
    theta = P.op_theta()
    assert theta ** 0 == P.one()
    assert theta ** 2 == ore.op_mul(theta, theta)
    assert theta.scale(Fraction(2, 3)) == P.monomial(Fraction(2, 3), theta=1)
    with pytest.raises(ValueError):
        theta ** -1


def test_scalar_coercion_in_arithmetic():
    assert P.op_theta() + 1 == 1 + P.op_theta()
    assert 2 * P.var_z() == P.var_z() * 2 == P.monomial(2, z=1)
    assert (1 - P.var_t()) == P.one() - P.var_t()
    with pytest.raises(TypeError):
        P.one() * "z"


def test_negative_operator_exponents_rejected():
    with pytest.raises(ValueError):
        OrePoly({Mono(z=-1): Fraction(1)})
    # tau and t denominators are fine
    assert OrePoly({Mono(tau=-2, t=-1): Fraction(1)}).coeff(Mono(tau=-2, t=-1)) == 1


def test_times_monomial_shifts_centrally():
    op = P.monomial(3, z=1, theta=2)
    assert op.times_monomial(Fraction(1, 2), tau=2, t=-1) == \
        P.monomial(Fraction(3, 2), z=1, tau=2, t=-1, theta=2)


def test_theta_poly_and_negate_t():
    assert ore.theta_poly([1, 0, 2]) == P.one() + P.monomial(2, theta=2)
    op = P.var_t() + P.monomial(1, t=2) + P.monomial(1, t=-1) + P.one()
    assert ore.negate_t(op) == -P.var_t() + P.monomial(1, t=2) - P.monomial(1, t=-1) + P.one()


# -- normal form -----------------------------------------------------------

def test_generators_reduce_to_zero():
    gens = _gens([Fraction(0), Fraction(1, 2)])
    for g in (gens.p_gen, gens.tau_r_gen, gens.tau_h_cleared):
        assert ore.normal_form(g, gens, 2).is_zero()


def test_single_rewrite_step_n1():
    # zero-parameter rank-1 case: H cleared is z*theta - tau*t, so
    # z*theta*tau rewrites in one step to tau^2*t
    gens = _gens([Fraction(0)])
    got = ore.normal_form(P.monomial(1, z=1, tau=1, theta=1), gens, 1)
    assert got == P.monomial(1, tau=2, t=1)


def test_low_z_degree_raises_not_in_lattice():
    gens = _gens([Fraction(0)])
    with pytest.raises(NotInLatticeError):
        ore.normal_form(P.op_theta(), gens, 1)


def test_negative_tau_rejected_before_reduction():
    gens = _gens([Fraction(0)])
    with pytest.raises(ValueError):
        ore.normal_form(P.monomial(1, tau=-1), gens, 1)


def test_unknown_strategy_rejected():
    gens = _gens([Fraction(0)])
    with pytest.raises(ValueError):
        ore.normal_form(P.one(), gens, 1, strategy="whatever")


def _random_op(rng, with_delta=True):
    terms = {}
    for _ in range(3):
        m = Mono(z=rng.randrange(0, 3), tau=rng.randrange(0, 3),
                 t=rng.randrange(-1, 2), theta=rng.randrange(0, 3),
                 dtau=rng.randrange(0, 2) if with_delta else 0,
                 dz=rng.randrange(0, 2) if with_delta else 0)
        c = Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
        if c:
            terms[m] = terms.get(m, 0) + c
    return OrePoly({m: c for m, c in terms.items() if c})


def _random_gens(rng):
    n = rng.randrange(1, 4)
    alpha = sorted(Fraction(rng.randrange(0, 6), 6) for _ in range(n))
    return _gens(alpha), n


def test_normal_form_is_idempotent():
    rng = random.Random(11)
    done = 0
    for _ in range(80):
        gens, n = _random_gens(rng)
        op = _random_op(rng)
        try:
            nf = ore.normal_form(op, gens, n)
        except NotInLatticeError:
            continue
        assert ore.normal_form(nf, gens, n) == nf
        assert not nf.has_dz() and not nf.has_dtau()
        assert nf.theta_degree() < n
        done += 1
    assert done >= 20


def test_two_elimination_orders_agree():
    rng = random.Random(12)
    done = 0
    for _ in range(80):
        gens, n = _random_gens(rng)
        op = _random_op(rng)
        try:
            r1 = ore.normal_form(op, gens, n, strategy="delta_z_first")
            r2 = ore.normal_form(op, gens, n, strategy="delta_tau_first")
        except NotInLatticeError:
            continue
        assert r1 == r2
        done += 1
    assert done >= 20


def test_left_multiples_reduce_to_zero():
    rng = random.Random(13)
    for _ in range(60):
        gens, n = _random_gens(rng)
        q = _random_op(rng)
        for g in (gens.p_gen, gens.tau_r_gen, gens.tau_h_cleared):
            assert ore.normal_form(ore.op_mul(q, g), gens, n).is_zero()


def test_reduction_difference_stays_in_ideal():
    # op - normal_form(op) reduces to zero again (membership restated)
    gens = _gens([Fraction(0), Fraction(1, 3)])
    op = P.monomial(2, z=3, tau=1, theta=2) + P.op_dz() * P.monomial(1, z=1)
    nf = ore.normal_form(op, gens, 2)
    assert ore.normal_form(op - nf, gens, 2).is_zero()


# -- substitution ----------------------------------------------------------

def test_tau_to_z_on_cleared_operator():
    gens = _gens([Fraction(0), Fraction(0)])
    got = ore.substitute(gens.tau_h_cleared, tau="z")
    assert got == P.monomial(1, z=2, theta=2) - P.monomial(1, z=2, t=1)


def test_tau_to_z_requires_delta_free():
    with pytest.raises(ValueError):
        ore.substitute(P.op_dtau(), tau="z")
    with pytest.raises(ValueError):
        ore.substitute(P.op_dz(), tau="z")


def test_tau_to_z_negative_exponent_guard():
    with pytest.raises(ValueError):
        ore.substitute(P.monomial(1, tau=-1), tau="z")


def test_scalar_substitutions():
    op = P.monomial(1, z=2, tau=1, t=-1)
    assert ore.substitute(op, tau=3) == P.monomial(3, z=2, t=-1)
    assert ore.substitute(op, z=Fraction(1, 2)) == P.monomial(Fraction(1, 4), tau=1, t=-1)
    assert ore.substitute(op, t=2) == P.monomial(Fraction(1, 2), z=2, tau=1)


def test_scalar_substitution_guards():
    with pytest.raises(ValueError):
        ore.substitute(P.op_dtau(), tau=1)
    with pytest.raises(ValueError):
        ore.substitute(P.op_dz(), z=1)
    with pytest.raises(ValueError):
        ore.substitute(P.op_theta(), t=1)
    with pytest.raises(ValueError):
        ore.substitute(P.monomial(1, tau=-1), tau=0)
    with pytest.raises(ValueError):
        ore.substitute(P.monomial(1, t=-1), t=0)


def test_theta_shift_zero_is_identity():
    op = P.monomial(1, theta=2) + P.var_t()
    assert ore.substitute(op, theta_shift=0) == op


def test_theta_shift_expands_binomially():
    got = ore.substitute(P.monomial(1, theta=2), theta_shift=Fraction(1, 2))
    want = (P.monomial(1, theta=2) + P.monomial(1, theta=1)
            + P.scalar(Fraction(1, 4)))
    assert got == want


@given(_ops, st.fractions(min_value=-3, max_value=3, max_denominator=4))
@settings(max_examples=60)
def test_theta_shift_is_an_algebra_map(op, eta):
    other = P.monomial(1, z=1, theta=1) + P.var_t()
    lhs = ore.substitute(ore.op_mul(op, other), theta_shift=eta)
    rhs = ore.op_mul(ore.substitute(op, theta_shift=eta),
                     ore.substitute(other, theta_shift=eta))
    assert lhs == rhs


# -- display ---------------------------------------------------------------

def test_format_uses_classical_symbols():
    op = P.monomial(1, theta=1) - P.var_t()
    assert ore.format_op(op) == "(t∂t) - t"
    assert ore.format_op(P.zero()) == "0"
    assert ore.format_op(P.op_dz() + P.op_dtau()) == "(zτ∂τ) + (z²∂z)"


def test_format_restores_cleared_tau_power():
    op = P.monomial(9, z=2, theta=2)
    assert ore.format_op(op) == "9·z^2·(t∂t)^2"
    assert ore.format_op(op, cleared_tau_power=2) == "9·z^2·τ^-2·(t∂t)^2"


def test_format_is_deterministic():
    op = P.var_t() - P.one() + P.monomial(Fraction(1, 3), z=1)
    assert ore.format_op(op) == ore.format_op(OrePoly(op.terms()))


# -- multivariate alphabet -------------------------------------------------

def _lam(j):
    return LambdaPoly.var_lam(2, j)


def _dee(j):
    return LambdaPoly.op_dee(2, j)


def test_lambda_euler_relation():
    # D_j lambda_j = lambda_j D_j + z for the scaled derivative
    got = _dee(0) * _lam(0)
    assert got == _lam(0) * _dee(0) + LambdaPoly.var_z(2)


def test_lambda_distinct_indices_commute():
    assert _dee(0) * _lam(1) == _lam(1) * _dee(0)
    assert _dee(0) * _dee(1) == _dee(1) * _dee(0)


def test_lambda_dz_relations():
    dz = LambdaPoly.op_dz(2)
    z = LambdaPoly.var_z(2)
    assert dz * z == z * dz + z * z
    assert dz * _dee(0) == _dee(0) * dz + z * _dee(0)
    assert dz * _lam(0) == _lam(0) * dz


def test_lambda_associativity():
    rng = random.Random(17)

    def rand():
        terms = {}
        for _ in range(2):
            m = ore.LMono(z=rng.randrange(0, 2),
                          lam=(rng.randrange(0, 2), rng.randrange(0, 2)),
                          dee=(rng.randrange(0, 2), rng.randrange(0, 2)),
                          dz=rng.randrange(0, 2))
            terms[m] = Fraction(rng.randrange(1, 4))
        return LambdaPoly(2, terms)

    for _ in range(60):
        a, b, c = rand(), rand(), rand()
        assert (a * b) * c == a * (b * c)


def test_lambda_substitution():
    op = _lam(0) * _lam(0) + _lam(1).scale(3)
    got = op.substitute_lambda({0: Fraction(1, 2), 1: 2})
    assert got == LambdaPoly.scalar(2, Fraction(1, 4)) + LambdaPoly.scalar(2, 6)


def test_lambda_substitution_guard():
    with pytest.raises(ValueError):
        (_dee(0) * _lam(0)).substitute_lambda({0: 1})


def test_lambda_format():
    op = _lam(0) * _dee(0) - LambdaPoly.var_z(2)
    assert ore.format_lambda_op(op) == "λ1·(z∂λ1) - z"
    assert ore.format_lambda_op(LambdaPoly(2)) == "0"
