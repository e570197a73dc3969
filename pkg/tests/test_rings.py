"""Tests for the exact-arithmetic foundation."""

import random
from fractions import Fraction

import pytest
import sympy

from apfive.rings import (
    NON_SQUARE,
    PROBABLY_SQUARE,
    IntPoly,
    NumberField,
    PrimeField,
    QuotientRing,
    is_prime,
    mod_sqrt,
    nf_norm,
    nth_power_residues,
    qring_mul,
    resultant,
    square_class_test,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 53, 89, 97, 101, 157, 193]


# ---------------------------------------------------------------------------
# prime field and square roots


def test_prime_field_rejects_composite():
    with pytest.raises(ValueError):
        PrimeField(91)
    with pytest.raises(ValueError):
        PrimeField(1)


def test_field_inverse_and_division():
    F = PrimeField(89)
    for a in range(1, 89):
        assert F.mul(a, F.inv(a)) == 1
    assert F.div(8, 10) == 8 * pow(10, 87, 89) % 89
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_mod_sqrt_examples():
    assert mod_sqrt(2, PrimeField(7)) == frozenset({3, 4})
    assert mod_sqrt(0, PrimeField(13)) == frozenset({0})
    # oracle: exhaustive table of squares mod 23
    squares23 = {x * x % 23 for x in range(23)}
    assert 10 not in squares23
    assert mod_sqrt(10, PrimeField(23)) is None


def test_mod_sqrt_agrees_with_exhaustive_search():
    # spot-check a spread of primes below 2^14 against brute force
    for p in [3, 5, 13, 17, 29, 97, 101, 257, 641, 1009, 4099, 16381]:
        F = PrimeField(p)
        table = {}
        for r in range(p):
            table.setdefault(r * r % p, set()).add(r)
        for x in range(min(p, 60)):
            got = mod_sqrt(x, F)
            if x in table:
                assert got == frozenset(table[x])
            else:
                assert got is None


def test_mod_sqrt_roots_square_back():
    rng = random.Random(7)
    for p in [12289, 65537, 786433]:
        F = PrimeField(p)
        for _ in range(25):
            x = rng.randrange(p)
            roots = mod_sqrt(x, F)
            if roots is not None:
                for r in roots:
                    assert r * r % p == x


def test_nth_power_residues_examples():
    # oracle: enumerate x^11 mod 23 directly
    assert nth_power_residues(11, PrimeField(23)) == frozenset(
        pow(x, 11, 23) for x in range(1, 23)
    ) == frozenset({1, 22})
    # the eight 11th-power classes mod 89
    assert nth_power_residues(11, PrimeField(89)) == frozenset(
        {1, 89 - 1, 12, 89 - 12, 34, 89 - 34, 37, 89 - 37}
    )
    # oracle: enumerate x^7 mod 29
    assert nth_power_residues(7, PrimeField(29)) == frozenset({1, 12, 17, 28})


def test_nth_power_residues_structure():
    for n, p in [(7, 29), (7, 43), (11, 23), (11, 89), (13, 53), (13, 157)]:
        F = PrimeField(p)
        mu = nth_power_residues(n, F)
        assert len(mu) == (p - 1) // n
        # closed under multiplication and inversion
        for a in mu:
            assert F.inv(a) in mu
            for b in mu:
                assert a * b % p in mu


def test_nth_power_residues_precondition():
    with pytest.raises(ValueError):
        nth_power_residues(11, PrimeField(29))
    with pytest.raises(ValueError):
        nth_power_residues(4, PrimeField(13))


def test_is_prime_small_range():
    sieve = sympy.primerange(2, 2000)
    assert [n for n in range(2, 2000) if is_prime(n)] == list(sieve)


# ---------------------------------------------------------------------------
# integer polynomials and resultants


def test_intpoly_canonical_form():
    assert IntPoly([1, 2, 0, 0]).coeffs == (1, 2)
    assert IntPoly([0, 0]).coeffs == ()
    assert IntPoly([]).degree == -1
    assert IntPoly([5]).degree == 0
    p = IntPoly([1, 0, 3])
    assert p(2) == 13
    assert (p * p)(5) == p(5) ** 2


def test_resultant_examples():
    assert resultant(IntPoly([-2, 0, 1]), IntPoly([-4, 1])) == 14
    assert resultant(IntPoly([-1, 1]), IntPoly([-1, 1])) == 0
    # prod (alpha^2 - 2) over alpha = +-i equals (-3)(-3)
    assert resultant(IntPoly([1, 0, 1]), IntPoly([-2, 0, 1])) == 9


def test_resultant_rejects_zero_and_cap():
    with pytest.raises(ValueError):
        resultant(IntPoly([]), IntPoly([1, 1]))
    with pytest.raises(ValueError):
        resultant(IntPoly([1] + [0] * 300 + [1]), IntPoly([1, 1]))


def _random_poly(rng, max_deg):
    deg = rng.randint(0, max_deg)
    coeffs = [rng.randint(-9, 9) for _ in range(deg + 1)]
    if coeffs[-1] == 0:
        coeffs[-1] = 1
    return IntPoly(coeffs)


def _sylvester_resultant(f, g):
    """Independent oracle: determinant of the Sylvester matrix (f-rows first)."""
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    m, n = f.degree, g.degree
    if m == 0 and n == 0:
        return 1
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (m - 1 - i))
    return int(sympy.Matrix(rows).det())


def test_resultant_against_sylvester_oracle():
    rng = random.Random(2024)
    for _ in range(60):
        f = _random_poly(rng, 6)
        g = _random_poly(rng, 6)
        assert resultant(f, g) == _sylvester_resultant(f, g)


def test_resultant_swap_symmetry():
    rng = random.Random(11)
    for _ in range(40):
        f = _random_poly(rng, 6)
        g = _random_poly(rng, 6)
        sign = -1 if (f.degree % 2 == 1 and g.degree % 2 == 1) else 1
        assert resultant(f, g) == sign * resultant(g, f)


# ---------------------------------------------------------------------------
# number field norms


def test_nf_norm_examples():
    K = NumberField(IntPoly([-2, 0, 1]))
    assert nf_norm(K.elem([4, -1])) == 14  # (4 - sqrt2)(4 + sqrt2)
    assert nf_norm(K.one()) == 1
    # field norm of theta with theta^3 = -14 is the product of conjugates, -14
    K3 = NumberField(IntPoly([14, 0, 0, 1]))
    assert abs(nf_norm(K3.gen())) == 14
    assert nf_norm(K3.gen()) == -14


def test_nf_norm_rational_scalars():
    K = NumberField(IntPoly([1, 2, 0, 0, 1]))
    assert nf_norm(K.elem([3])) == 81
    assert nf_norm(K.elem([Fraction(1, 2)])) == Fraction(1, 16)
    assert nf_norm(K.zero()) == 0


def test_nf_norm_multiplicative():
    rng = random.Random(5)
    polys = [
        IntPoly([-2, 0, 1]),
        IntPoly([14, 0, 0, 1]),
        IntPoly([7, 0, 0, 0, 0, 1]),
        IntPoly([3, 1, 0, 2, 0, 0, 0, 1]),
        IntPoly([1, -1, 0, 0, 1, 0, 0, 0, 1]),
    ]
    for mp in polys:
        K = NumberField(mp)
        for _ in range(12):
            a = K.elem([rng.randint(-5, 5) for _ in range(K.degree)])
            b = K.elem([rng.randint(-5, 5) for _ in range(K.degree)])
            assert nf_norm(a * b) == nf_norm(a) * nf_norm(b)


def test_nf_norm_matches_conjugate_product():
    # independent oracle: numeric product over the complex roots
    import math

    K = NumberField(IntPoly([14, 0, 0, 1]))
    e = K.elem([5, -1, 1])
    roots = sympy.Poly([1, 0, 0, 14], sympy.symbols("x")).all_roots()
    prod = 1
    for r in roots:
        c = complex(r)
        prod *= 5 - c + c * c
    assert math.isclose(prod.real, float(nf_norm(e)), rel_tol=1e-9)
    assert abs(prod.imag) < 1e-6


# ---------------------------------------------------------------------------
# quotient rings


ZTHETA14 = QuotientRing(IntPoly([14, 0, 0, 1]))


def test_qring_mul_examples():
    th = ZTHETA14.gen()
    assert (qring_mul(th, qring_mul(th, th))).coords == (-14, 0, 0)
    assert (ZTHETA14.elem([1, 1]) ** 2).coords == (1, 2, 1)
    assert qring_mul(ZTHETA14.elem([5, -1, 1]), th).coords == (-14, 5, -1)


def test_qring_mismatched_rings():
    other = QuotientRing(IntPoly([-2, 0, 1]))
    with pytest.raises(ValueError):
        qring_mul(ZTHETA14.gen(), other.gen())


def test_qring_ring_axioms_random():
    rng = random.Random(31)
    R = ZTHETA14
    for _ in range(40):
        a = R.elem([rng.randint(-20, 20) for _ in range(3)])
        b = R.elem([rng.randint(-20, 20) for _ in range(3)])
        c = R.elem([rng.randint(-20, 20) for _ in range(3)])
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_qring_reduction_idempotent():
    R = ZTHETA14
    v = (3, -2, 7)
    assert R.reduce_coords(list(v)) == v
    long = [1, 2, 3, 4, 5, 6, 7]
    once = R.reduce_coords(long)
    assert R.reduce_coords(list(once)) == once
    # oracle: same reduction via sympy polynomial remainder
    x = sympy.symbols("x")
    rem = sympy.rem(sympy.Poly(list(reversed(long)), x).as_expr(), x**3 + 14, x)
    expected = sympy.Poly(rem, x).all_coeffs()[::-1]
    expected = tuple(int(c) for c in expected) + (0,) * (3 - len(expected))
    assert once == expected


def test_qring_pow_matches_repeated_mul():
    R = ZTHETA14
    a = R.elem([2, -1, 3])
    acc = R.one()
    for k in range(8):
        assert a**k == acc
        acc = acc * a


def test_square_class_examples():
    assert square_class_test(ZTHETA14.elem([1, 1]) ** 2) == PROBABLY_SQUARE
    assert square_class_test(ZTHETA14.one()) == PROBABLY_SQUARE
    R2 = QuotientRing(IntPoly([-2, 0, 1]))
    assert square_class_test(R2.gen(), 20) == NON_SQUARE


def test_square_class_soundness_on_squares():
    # never report non_square for an actual square
    rng = random.Random(99)
    rings = [ZTHETA14, QuotientRing(IntPoly([7, 0, 0, 0, 0, 1]))]
    for _ in range(1000):
        R = rings[rng.randrange(2)]
        h = R.elem([rng.randint(-30, 30) for _ in range(R.degree)])
        if h.is_zero:
            continue
        assert square_class_test(h * h, 6) == PROBABLY_SQUARE


def test_square_class_rejects_zero():
    with pytest.raises(ValueError):
        square_class_test(ZTHETA14.zero())
