import random
from itertools import combinations

import pytest

from qfodc.scalar import (
    FieldConfig,
    MINUS_ONE,
    ONE,
    Scalar,
    UnsupportedConfigError,
    ZERO,
    parse_scalar,
    q_binomial,
    q_factorial,
    q_int,
)

P = Scalar.p_power


def rand_scalar(rng, max_terms=3, max_exp=4, max_coef=6, laurent_only=False):
    def poly(allow_zero):
        out = {}
        for _ in range(rng.randint(0 if allow_zero else 1, max_terms)):
            out[rng.randint(-max_exp, max_exp)] = rng.randint(-max_coef, max_coef)
        return {e: c for e, c in out.items() if c}
    num = poly(True)
    if laurent_only:
        return Scalar(num)
    den = poly(False)
    while not den:
        den = poly(False)
    return Scalar(num, den)


def test_canonical_constants():
    assert ZERO.is_zero() and str(ZERO) == "0"
    assert ONE.is_one() and str(ONE) == "1"
    assert Scalar({0: 2}, {0: 4}) == Scalar.from_fraction(1, 2)
    assert Scalar({2: 2, 0: -2}, {1: 2}) == Scalar({1: 1, -1: -1})


def test_add_q_and_q_inverse():
    # q + q^{-1} = (q^2+1)/q, here with q = p^2 (the SL_q(2) ground field)
    q = FieldConfig.sl(2).q
    s = q + q.inverse()
    assert s == Scalar({4: 1, 0: 1}, {2: 1})
    assert str(s) == "(p^4+1)/p^2"


def test_mul_by_inverse_is_one():
    q = FieldConfig.sl(3).q
    lam = q - q.inverse()
    assert lam * lam.inverse() == ONE


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_field_laws_random():
    rng = random.Random(7)
    for _ in range(200):
        a, b, c = (rand_scalar(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + ZERO == a and a * ONE == a
        assert a - a == ZERO
        if not a.is_zero():
            assert a * a.inverse() == ONE


def test_canonicalization_idempotent():
    rng = random.Random(11)
    for _ in range(100):
        a = rand_scalar(rng)
        again = Scalar(dict(a.num), dict(a.den))
        assert again.num == a.num and again.den == a.den


def _to_sympy(s, sympy):
    import re
    txt = re.sub(r"(\d)p", r"\1*p", str(s)).replace("^", "**")
    return sympy.sympify(txt)


def test_canonical_against_sympy():
    sympy = pytest.importorskip("sympy")
    rng = random.Random(23)
    for _ in range(40):
        a = rand_scalar(rng)
        b = rand_scalar(rng)
        ours = a * b + a
        theirs = sympy.cancel(_to_sympy(a, sympy) * _to_sympy(b, sympy) + _to_sympy(a, sympy))
        assert sympy.simplify(_to_sympy(ours, sympy) - theirs) == 0


def test_parse_print_roundtrip():
    rng = random.Random(5)
    for _ in range(150):
        a = rand_scalar(rng)
        assert parse_scalar(str(a)) == a
    assert parse_scalar("(p^4+1)/p^2") == P(2) + P(-2)
    assert parse_scalar("-3p^2+1") == Scalar({2: -3, 0: 1})
    assert parse_scalar("5/2") == Scalar.from_fraction(5, 2)


def test_pow():
    q = FieldConfig.sl(2).q
    assert q ** 3 == P(6)
    assert q ** -2 == P(-4)
    assert q ** 0 == ONE


def test_eval_mod():
    a = Scalar({2: 1, 0: 1}, {1: 3})  # (p^2+1)/(3p)
    prime = 10 ** 9 + 7
    got = a.eval_mod(5, prime)
    assert got == (26 * pow(15, -1, prime)) % prime


# -- q-combinatorics --------------------------------------------------------

def test_q_int_basics():
    q = FieldConfig.sl(2).q
    assert q_int(1, q) == ONE
    assert q_int(0, q) == ZERO
    assert q_int(2, q) == q + q.inverse()
    assert q_int(-3, q) == -q_int(3, q)
    # matches the defining ratio

    for m in range(5):
        lhs = q_int(m, q) * (q - q.inverse())
        assert lhs == q ** m - q ** (-m)


def test_q_int_bad_base():
    for bad in (ZERO, ONE, MINUS_ONE):
        with pytest.raises(ValueError):
            q_int(2, bad)


def subset_q_binomial(m, k, q):
    """Independent oracle: symmetric q-binomial as a subset sum.

    [m k] = q^{-k(m-k)} * sum over k-subsets S of {0..m-1} of (q^2)^(sum S - C(k,2)).
    """
    total = ZERO
    for s in combinations(range(m), k):
        e = sum(s) - k * (k - 1) // 2
        total = total + (q * q) ** e
    return total * q ** (-k * (m - k))


def test_q_binomial_against_subset_oracle():
    q = FieldConfig.sl(2).q
    for m in range(7):
        for k in range(m + 1):
            assert q_binomial(m, k, q) == subset_q_binomial(m, k, q)


def test_q_binomial_examples():
    q = FieldConfig.sl(3).q
    assert q_binomial(5, 0, q) == ONE
    assert q_binomial(2, 1, q) == q + q.inverse()
    for m in range(6):
        for k in range(m + 1):
            b = q_binomial(m, k, q)
            assert b == q_binomial(m, m - k, q)
            assert b.is_laurent()
    assert q_factorial(3, q) == q_int(1, q) * q_int(2, q) * q_int(3, q)


def test_q_binomial_bad_args():
    q = FieldConfig.sl(2).q
    with pytest.raises(ValueError):
        q_binomial(2, 3, q)
    with pytest.raises(ValueError):
        q_binomial(-1, 0, q)
    with pytest.raises(ValueError):
        q_factorial(-2, q)


# -- field configuration ----------------------------------------------------

def test_config_a_series():
    cfg = FieldConfig.sl(3)
    assert cfg.q == P(3) and cfg.z == P(-1)
    assert cfg.z ** cfg.N == cfg.q.inverse()  # z^N = q^{-1} identically
    assert cfg.rank == 2 and cfg.zeta_order == 3
    assert cfg.q_i(1) == cfg.q


def test_config_c_series():
    cfg = FieldConfig.sp(2)
    assert cfg.N == 4 and cfg.rank == 2 and cfg.zeta_order == 2
    assert cfg.q == P(1)
    assert cfg.z == ONE and cfg.z * cfg.z == ONE
    assert FieldConfig.sp(1, z_choice=-1).z == MINUS_ONE
    assert cfg.d_i(1) == 1 and cfg.d_i(2) == 2
    assert cfg.cartan() == [[2, -2], [-1, 2]]


def test_config_rejects_bad_input():
    with pytest.raises(UnsupportedConfigError):
        FieldConfig.sl(1)
    with pytest.raises(UnsupportedConfigError):
        FieldConfig("C", 3, 1)
    with pytest.raises(UnsupportedConfigError):
        FieldConfig("B", 3, 3)
    with pytest.raises(UnsupportedConfigError):
        FieldConfig("C", 2, 1, z_choice=2)
