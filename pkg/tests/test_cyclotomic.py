import random

import pytest

from qfodc.cyclotomic import (
    CycRing,
    InvalidCharacterError,
    Zeta,
    admissible_zeta,
    all_admissible,
    cyclotomic_coeffs,
)
from qfodc.scalar import FieldConfig, ONE, Scalar, ZERO


def test_cyclotomic_coeffs():
    assert cyclotomic_coeffs(1) == [-1, 1]
    assert cyclotomic_coeffs(2) == [1, 1]
    assert cyclotomic_coeffs(3) == [1, 1, 1]
    assert cyclotomic_coeffs(4) == [1, 0, 1]
    assert cyclotomic_coeffs(6) == [1, -1, 1]


def test_root_powers_cycle():
    for order in (3, 4, 5, 6):
        ring = CycRing(order)
        z = ring.root_power(1)
        acc = ring.one
        seen = []
        for _ in range(order):
            acc = acc * z
            seen.append(acc)
        assert acc == ring.one  # z^order = 1
        assert all(not (a - ring.one).is_zero() for a in seen[:-1])


def test_ring_arithmetic_and_inverse():
    ring = CycRing(3)
    rng = random.Random(3)
    for _ in range(30):
        a = ring.from_coeffs([Scalar({rng.randint(-2, 2): rng.randint(1, 3)}),
                              Scalar({rng.randint(-2, 2): rng.randint(0, 2)})])
        b = ring.root_power(rng.randint(0, 2)) * Scalar.from_int(rng.randint(1, 5))
        assert (a + b) - b == a
        if not a.is_zero():
            assert (a.inverse() * a) == ring.one
        assert a * b == b * a


def test_scalar_coercion():
    ring = CycRing(3)
    z = ring.root_power(1)
    s = Scalar.p_power(2)
    assert (s * z) * z * z == ring.lift(s)   # s * z^3 = s
    assert (z + s) - z == ring.lift(s)


def test_zeta_normalization():
    assert Zeta(3, 0) == Zeta(1, 0)
    assert Zeta(4, 2) == Zeta(2, 1)
    assert Zeta(4, 2).value == Scalar.from_int(-1)
    assert Zeta(6, 2) == Zeta(3, 1)
    assert Zeta(2, 1).value == Scalar.from_int(-1)
    z3 = Zeta(3, 1)
    assert not z3.is_rational()
    assert z3.power_value(3) == ONE


def test_admissibility():
    sl2 = FieldConfig.sl(2)
    sl3 = FieldConfig.sl(3)
    sp1 = FieldConfig.sp(1)
    assert [str(z) for z in all_admissible(sl2)] == ["1", "-1"]
    assert len(all_admissible(sl3)) == 3
    assert [str(z) for z in all_admissible(sp1)] == ["1", "-1"]
    admissible_zeta(sl2, 2, 1)
    with pytest.raises(InvalidCharacterError):
        admissible_zeta(sl2, 4, 1)  # zeta = i is not admissible for SL_q(2)
    with pytest.raises(InvalidCharacterError):
        admissible_zeta(sp1, 3, 1)


def test_zeta_values_sum_to_zero():
    # 1 + w + w^2 = 0 for the cube roots
    ring = CycRing(3)
    zs = [Zeta(3, j) for j in range(3)]
    total = ring.zero
    for z in zs:
        v = z.value
        total = total + (ring.lift(v) if isinstance(v, Scalar) else v)
    assert total.is_zero()
