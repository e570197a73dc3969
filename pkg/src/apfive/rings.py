"""Exact arithmetic foundation: prime fields, integer polynomials,
number-field elements with resultant-based norms, and quotient rings
Z[theta]/(f(theta)).

Everything here is arbitrary precision and pure; no floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "PrimeField",
    "IntPoly",
    "NumberField",
    "NumberFieldElem",
    "QuotientRing",
    "QuotientRingElem",
    "mod_sqrt",
    "nth_power_residues",
    "resultant",
    "nf_norm",
    "qring_mul",
    "square_class_test",
    "NON_SQUARE",
    "PROBABLY_SQUARE",
    "SplitPrimeExhaustedError",
    "is_prime",
]

# Degree guard for the subresultant resultant; the PRS algorithm is
# quadratic in the degree with fast coefficient growth, which is fine at
# the sizes used here but not for arbitrary input.
MAX_RESULTANT_DEGREE = 256

NON_SQUARE = "non_square"
PROBABLY_SQUARE = "probably_square"


class SplitPrimeExhaustedError(RuntimeError):
    """square_class_test ran out of usable split primes before a verdict."""


# ---------------------------------------------------------------------------
# primality (deterministic Miller-Rabin; moduli here are tiny, but keep it
# valid for anything below 3.3 * 10^24)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p; elements are plain ints in [0, p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def reduce(self, x: int) -> int:
        return x % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a % self.p), -e, self.p)
        return pow(a, e, self.p)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def legendre(self, a: int) -> int:
        """Quadratic character: 0 for a = 0, else +-1 (p odd)."""
        a %= self.p
        if a == 0:
            return 0
        if self.p == 2:
            return 1
        s = pow(a, (self.p - 1) // 2, self.p)
        return -1 if s == self.p - 1 else 1


def mod_sqrt(x: int, F: PrimeField) -> frozenset[int] | None:
    """All square roots of x in F_p, or None when x is a non-residue.

    Returns {0} for x = 0 and {r, p-r} otherwise (Tonelli-Shanks).
    """
    p = F.p
    x %= p
    if x == 0:
        return frozenset({0})
    if p == 2:
        return frozenset({x})
    if F.legendre(x) != 1:
        return None
    if p % 4 == 3:
        r = pow(x, (p + 1) // 4, p)
        return frozenset({r, p - r})
    # Tonelli-Shanks for p = 1 mod 4
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while F.legendre(z) != -1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(x, q, p)
    r = pow(x, (q + 1) // 2, p)
    while t != 1:
        t2 = t
        i = 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return frozenset({r, p - r})


def nth_power_residues(n: int, F: PrimeField) -> frozenset[int]:
    """The nonzero n-th powers in F_p, for prime n with p = 1 mod n.

    Equivalently the t-th roots of unity with t = (p-1)/n; the set has
    exactly t elements.
    """
    p = F.p
    if not is_prime(n):
        raise ValueError(f"exponent {n} is not prime")
    if p % n != 1:
        raise ValueError(f"p = {p} is not 1 mod n = {n}")
    mu = frozenset(pow(x, n, p) for x in range(1, p))
    assert len(mu) == (p - 1) // n
    return mu


# ---------------------------------------------------------------------------
# integer polynomials


def _strip(coeffs: Sequence) -> tuple:
    k = len(coeffs)
    while k > 0 and coeffs[k - 1] == 0:
        k -= 1
    return tuple(coeffs[:k])


class IntPoly:
    """Dense univariate polynomial, ascending coefficients, no trailing zeros.

    Coefficients are ints in normal use; Fractions are tolerated so the
    number-field layer can reuse the arithmetic.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip(list(coeffs))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, IntPoly) and other.coeffs == self.coeffs

    def __hash__(self) -> int:
        return hash(("IntPoly", self.coeffs))

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    def __neg__(self) -> "IntPoly":
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if not isinstance(other, IntPoly):
            return IntPoly([c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "IntPoly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        if self.is_zero:
            return "IntPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(f"{c}")
            elif i == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{i}")
        return "IntPoly(" + " + ".join(terms) + ")"


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b."""
    r = a
    lb = b.lc
    e = a.degree - b.degree + 1
    while not r.is_zero and r.degree >= b.degree:
        shift = r.degree - b.degree
        r = r * lb - (b * r.lc).shift(shift)
        e -= 1
    if e > 0:
        r = r * (lb**e)
    return r


def _exact_div_scalar(a: IntPoly, s) -> IntPoly:
    out = []
    for c in a.coeffs:
        q, rem = divmod(c, s)
        if rem != 0:
            raise ArithmeticError("non-exact division in subresultant PRS")
        out.append(q)
    return IntPoly(out)


def resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g) via the subresultant PRS.

    Sign convention: Res(f, g) = lc(f)^deg(g) * prod g(alpha_i) over the
    roots alpha_i of f, so Res(f, g) = (-1)^(deg f * deg g) Res(g, f).
    """
    if f.is_zero or g.is_zero:
        raise ValueError("resultant of the zero polynomial is undefined")
    if max(f.degree, g.degree) > MAX_RESULTANT_DEGREE:
        raise ValueError(f"degree above cap {MAX_RESULTANT_DEGREE}")
    sign = 1
    a, b = f, g
    if a.degree < b.degree:
        if (a.degree % 2 == 1) and (b.degree % 2 == 1):
            sign = -sign
        a, b = b, a
    if b.degree == 0:
        return sign * b.lc**a.degree
    g_ = 1
    h = 1
    while True:
        delta = a.degree - b.degree
        if (a.degree % 2 == 1) and (b.degree % 2 == 1):
            sign = -sign
        r = _pseudo_rem(a, b)
        a = b
        if r.is_zero:
            return 0
        b = _exact_div_scalar(r, g_ * h**delta)
        g_ = a.lc
        if delta > 0:
            num = g_**delta
            den = h ** (delta - 1)
            q, rem = divmod(num, den)
            if rem != 0:
                raise ArithmeticError("non-exact h update in subresultant PRS")
            h = q
        if b.degree == 0:
            num = b.lc**a.degree
            den = h ** (a.degree - 1)
            q, rem = divmod(num, den)
            if rem != 0:
                raise ArithmeticError("non-exact final division in subresultant PRS")
            return sign * q


# ---------------------------------------------------------------------------
# number fields Q[x]/(m) with rational coordinates


class NumberField:
    """Q(theta) presented by a monic integer minimal polynomial.

    Irreducibility is the caller's responsibility; nothing here checks it.
    """

    __slots__ = ("minpoly", "degree")

    def __init__(self, minpoly: IntPoly):
        if not minpoly.is_monic or minpoly.degree < 1:
            raise ValueError("minpoly must be monic of degree >= 1")
        self.minpoly = minpoly
        self.degree = minpoly.degree

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and other.minpoly == self.minpoly

    def __hash__(self) -> int:
        return hash(("NumberField", self.minpoly))

    def __repr__(self) -> str:
        return f"NumberField({self.minpoly!r})"

    def elem(self, coords: Iterable) -> "NumberFieldElem":
        cs = [Fraction(c) for c in coords]
        if len(cs) > self.degree:
            raise ValueError("too many coordinates")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return NumberFieldElem(self, tuple(cs))

    def zero(self) -> "NumberFieldElem":
        return self.elem(())

    def one(self) -> "NumberFieldElem":
        return self.elem((1,))

    def gen(self) -> "NumberFieldElem":
        if self.degree == 1:
            return self.elem((-self.minpoly.coeffs[0],))
        return self.elem((0, 1))

    def _reduce_product(self, prod: list) -> tuple:
        # synthetic division by the monic minpoly
        d = self.degree
        m = self.minpoly.coeffs
        work = list(prod)
        for k in range(len(work) - 1, d - 1, -1):
            c = work[k]
            if c == 0:
                continue
            work[k] = Fraction(0)
            for i in range(d):
                work[k - d + i] -= c * m[i]
        out = work[:d] + [Fraction(0)] * (d - min(d, len(work)))
        return tuple(out)


class NumberFieldElem:
    """Element of a NumberField in the power basis 1, theta, ..., theta^(d-1)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        if len(coords) != field.degree:
            raise ValueError("coordinate length must equal the field degree")
        self.field = field
        self.coords = coords

    def _check(self, other: "NumberFieldElem"):
        if self.field != other.field:
            raise ValueError("elements live in different fields")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NumberFieldElem)
            and other.field == self.field
            and other.coords == self.coords
        )

    def __hash__(self) -> int:
        return hash(("NumberFieldElem", self.field.minpoly, self.coords))

    def __add__(self, other: "NumberFieldElem") -> "NumberFieldElem":
        self._check(other)
        return NumberFieldElem(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "NumberFieldElem") -> "NumberFieldElem":
        self._check(other)
        return NumberFieldElem(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "NumberFieldElem":
        return NumberFieldElem(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other) -> "NumberFieldElem":
        if not isinstance(other, NumberFieldElem):
            c = Fraction(other)
            return NumberFieldElem(self.field, tuple(a * c for a in self.coords))
        self._check(other)
        a, b = self.coords, other.coords
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        return NumberFieldElem(self.field, self.field._reduce_product(prod))

    __rmul__ = __mul__

    def shift_int(self, c: int) -> "NumberFieldElem":
        """self - c for a rational integer c."""
        coords = list(self.coords)
        coords[0] -= c
        return NumberFieldElem(self.field, tuple(coords))

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def __repr__(self) -> str:
        return f"NumberFieldElem({self.coords})"


def nf_norm(e: NumberFieldElem):
    """Field norm of e down to Q; an int when the result is integral.

    Computed as Res(minpoly, numerator polynomial) / denominator^degree, the
    product of e over all embeddings, so it is exactly multiplicative.
    """
    den = 1
    for c in e.coords:
        den = den * c.denominator // _gcd(den, c.denominator)
    num = [int(c * den) for c in e.coords]
    g = IntPoly(num)
    if g.is_zero:
        return 0
    r = resultant(e.field.minpoly, g)
    val = Fraction(r, den**e.field.degree)
    return int(val) if val.denominator == 1 else val


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# quotient rings Z[theta]/(modpoly)


class QuotientRing:
    """Z[theta]/(f(theta)) for a monic integer f; coordinates stay integral."""

    __slots__ = ("modpoly", "degree")

    def __init__(self, modpoly: IntPoly):
        if not modpoly.is_monic or modpoly.degree < 1:
            raise ValueError("modpoly must be monic of degree >= 1")
        self.modpoly = modpoly
        self.degree = modpoly.degree

    def __eq__(self, other) -> bool:
        return isinstance(other, QuotientRing) and other.modpoly == self.modpoly

    def __hash__(self) -> int:
        return hash(("QuotientRing", self.modpoly))

    def __repr__(self) -> str:
        return f"QuotientRing({self.modpoly!r})"

    def elem(self, coords: Iterable[int]) -> "QuotientRingElem":
        cs = list(coords)
        if len(cs) > self.degree:
            raise ValueError("too many coordinates; reduce first")
        cs += [0] * (self.degree - len(cs))
        return QuotientRingElem(self, tuple(cs))

    def zero(self) -> "QuotientRingElem":
        return self.elem(())

    def one(self) -> "QuotientRingElem":
        return self.elem((1,))

    def gen(self) -> "QuotientRingElem":
        if self.degree == 1:
            return self.elem((-self.modpoly.coeffs[0],))
        return self.elem((0, 1))

    def reduce_coords(self, prod: Sequence[int]) -> tuple[int, ...]:
        """Reduce a coordinate vector of any length by theta^d = -(lower terms)."""
        d = self.degree
        m = self.modpoly.coeffs
        work = list(prod)
        for k in range(len(work) - 1, d - 1, -1):
            c = work[k]
            if c == 0:
                continue
            work[k] = 0
            for i in range(d):
                work[k - d + i] -= c * m[i]
        out = work[:d] + [0] * (d - min(d, len(work)))
        return tuple(out)


class QuotientRingElem:
    __slots__ = ("ring", "coords")

    def __init__(self, ring: QuotientRing, coords: tuple[int, ...]):
        if len(coords) != ring.degree:
            raise ValueError("coordinate length must equal the ring degree")
        self.ring = ring
        self.coords = coords

    def _check(self, other: "QuotientRingElem"):
        if self.ring != other.ring:
            raise ValueError("elements live in different quotient rings")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuotientRingElem)
            and other.ring == self.ring
            and other.coords == self.coords
        )

    def __hash__(self) -> int:
        return hash(("QuotientRingElem", self.ring.modpoly, self.coords))

    def __add__(self, other: "QuotientRingElem") -> "QuotientRingElem":
        self._check(other)
        return QuotientRingElem(
            self.ring, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "QuotientRingElem") -> "QuotientRingElem":
        self._check(other)
        return QuotientRingElem(
            self.ring, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "QuotientRingElem":
        return QuotientRingElem(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other) -> "QuotientRingElem":
        if isinstance(other, int):
            return QuotientRingElem(self.ring, tuple(a * other for a in self.coords))
        self._check(other)
        a, b = self.coords, other.coords
        prod = [0] * (2 * len(a) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
        return QuotientRingElem(self.ring, self.ring.reduce_coords(prod))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QuotientRingElem":
        if e < 0:
            raise ValueError("negative powers are not defined in the ring")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def norm(self):
        """Norm of the element viewed inside Q[x]/(modpoly)."""
        field = NumberField(self.ring.modpoly)
        return nf_norm(field.elem(self.coords))

    def __repr__(self) -> str:
        return f"QuotientRingElem({self.coords})"


def qring_mul(a: QuotientRingElem, b: QuotientRingElem) -> QuotientRingElem:
    """Product in Z[theta]/(modpoly); thin named wrapper over ``a * b``."""
    return a * b


def square_class_test(g: QuotientRingElem, prime_budget: int = 20) -> str:
    """Probabilistic square-class check in the fraction field.

    Reduces g at rational primes q where the modulus has a simple root and
    tests quadratic residuosity; one non-residue proves NON_SQUARE, while
    surviving `prime_budget` usable primes yields PROBABLY_SQUARE (advisory,
    never proof).
    """
    if g.is_zero:
        raise ValueError("square class of 0 is undefined")
    if prime_budget < 1:
        raise ValueError("prime_budget must be >= 1")
    m = g.ring.modpoly
    used = 0
    q = 2
    attempts = 0
    max_attempts = 200 * prime_budget
    while used < prime_budget:
        q = _next_prime(q)
        attempts += 1
        if attempts > max_attempts:
            raise SplitPrimeExhaustedError(
                f"no verdict after {attempts} candidate primes "
                f"({used} usable splits found)"
            )
        if q == 2:
            continue
        F = PrimeField(q)
        roots = [r for r in range(q) if m(r) % q == 0]
        if not roots:
            continue
        usable_here = False
        for r in roots:
            # skip ramified-looking roots: require a simple root mod q
            if _poly_derivative_at(m, r, q) == 0:
                continue
            v = 0
            for i, c in enumerate(g.coords):
                v = (v + c * pow(r, i, q)) % q
            if v == 0:
                continue
            usable_here = True
            if F.legendre(v) == -1:
                return NON_SQUARE
        if usable_here:
            used += 1
    return PROBABLY_SQUARE


def _poly_derivative_at(m: IntPoly, r: int, q: int) -> int:
    acc = 0
    for i, c in enumerate(m.coeffs):
        if i == 0:
            continue
        acc = (acc + i * c * pow(r, i - 1, q)) % q
    return acc


def _next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n
