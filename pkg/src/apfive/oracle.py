"""Brute-force solution oracle for (x-d)^5 + x^5 + (x+d)^5 = y^n, the
factorization-witness chain, and the residue checks behind "3 | ab".

Everything is exact big-integer arithmetic; perfect powers are detected by
integer n-th root extraction.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .rings import is_prime

__all__ = [
    "SolutionRecord",
    "FactorWitness",
    "ap_sum",
    "lhs_quartic",
    "nth_root",
    "search_solutions",
    "derive_witness",
    "three_divides_ab_check",
    "identity_fuzz",
    "sj_three_divides",
]


def ap_sum(x: int, d: int) -> int:
    """(x-d)^5 + x^5 + (x+d)^5, via the factored form x(3x^4+20x^2d^2+10d^4)."""
    return x * lhs_quartic(x, d)


def lhs_quartic(x: int, d: int) -> int:
    x2, d2 = x * x, d * d
    return 3 * x2 * x2 + 20 * x2 * d2 + 10 * d2 * d2


@dataclass(frozen=True)
class SolutionRecord:
    """An integer solution of the main equation; y = 0 solutions carry n = 2."""

    x: int
    d: int
    y: int
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("exponent must be >= 2")
        if math.gcd(self.x, self.d) != 1:
            raise ValueError(f"gcd(x, d) = {math.gcd(self.x, self.d)} != 1")
        if ap_sum(self.x, self.d) != self.y**self.n:
            raise ValueError(f"({self.x}, {self.d}, {self.y}, {self.n}) does not solve the equation")

    @property
    def family(self) -> tuple[int, int, int, int]:
        """(|x|, |d|, |y|, n), the shape quoted for solution families."""
        return (abs(self.x), abs(self.d), abs(self.y), self.n)


@dataclass(frozen=True)
class FactorWitness:
    """kappa = gcd(x, 10) and the integers (a, b, T) of the descent chain."""

    kappa: int
    a: int
    b: int
    T: int

    def check(self, rec: SolutionRecord) -> None:
        k, a, b, T, n = self.kappa, self.a, self.b, self.T, rec.n
        assert rec.x == k ** (n - 1) * a**n
        assert lhs_quartic(rec.x, rec.d) == k * b**n
        assert 7 * k ** (4 * n - 5) * a ** (4 * n) + b**n == (10 // k) * T * T
        assert T == rec.d**2 + rec.x**2
        assert math.gcd(k * a, b) == 1


def nth_root(v: int, n: int) -> int | None:
    """Exact integer r with r^n = v, or None. Negative v allowed for odd n."""
    if n < 1:
        raise ValueError("root index must be >= 1")
    if v == 0:
        return 0
    if v < 0:
        if n % 2 == 0:
            return None
        r = nth_root(-v, n)
        return None if r is None else -r
    if n == 1:
        return v
    if n == 2:
        r = math.isqrt(v)
        return r if r * r == v else None
    # float seed, then correct locally; v here always fits well inside a double
    r = max(1, round(v ** (1.0 / n)))
    while r**n > v:
        r -= 1
    while (r + 1) ** n <= v:
        r += 1
    return r if r**n == v else None


def _search_strip(args):
    x_lo, x_hi, box_d, nmax = args
    root_indices = [q for q in range(2, nmax + 1) if is_prime(q)]
    out = []
    for x in range(x_lo, x_hi):
        for d in range(-box_d, box_d + 1):
            if math.gcd(x, d) != 1:
                continue
            v = ap_sum(x, d)
            if v == 0:
                out.append((x, d, 0, 2))
                continue
            if any(nth_root(v, q) is not None for q in root_indices):
                # rare: collect every admissible exponent exactly
                for n in range(2, nmax + 1):
                    y = nth_root(v, n)
                    if y is not None:
                        out.append((x, d, y, n))
    return out


def search_solutions(box_x: int, box_d: int, nmax: int, jobs: int = 1) -> list[SolutionRecord]:
    """All coprime (x, d) with |x| <= box_x, |d| <= box_d whose power sum is
    an exact n-th power for some 2 <= n <= nmax, including y = 0.

    A composite-exponent power is a prime-exponent power, so strips test
    prime roots first and expand the full exponent list only on a hit. With
    jobs > 1 the strips run in separate processes; the merge is ordered and
    deterministic either way.
    """
    if box_x < 1 or box_d < 1 or nmax < 2:
        raise ValueError("bounds must be >= 1 and nmax >= 2")
    strips = []
    stripw = max(1, (2 * box_x + 1) // (4 * jobs)) if jobs > 1 else 2 * box_x + 1
    lo = -box_x
    while lo <= box_x:
        hi = min(lo + stripw, box_x + 1)
        strips.append((lo, hi, box_d, nmax))
        lo = hi
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_search_strip, strips))
    else:
        chunks = [_search_strip(s) for s in strips]
    tuples = sorted(t for chunk in chunks for t in chunk)
    return [SolutionRecord(*t) for t in tuples]


def derive_witness(rec: SolutionRecord) -> FactorWitness:
    """kappa, a, b, T for a solution with y != 0 and prime n; every witness
    invariant is asserted before returning."""
    if not is_prime(rec.n):
        raise ValueError(f"witness derivation needs prime n, got {rec.n}")
    if rec.y == 0 or rec.x == 0:
        raise ValueError("degenerate solution (xy = 0) has no factorization witness")
    n = rec.n
    kappa = math.gcd(rec.x, 10)
    an, rem = divmod(rec.x, kappa ** (n - 1))
    if rem != 0:
        raise ValueError(f"x = {rec.x} is not divisible by kappa^(n-1)")
    a = nth_root(an, n)
    if a is None:
        raise ValueError(f"x / kappa^(n-1) = {an} is not an n-th power")
    bn, rem = divmod(lhs_quartic(rec.x, rec.d), kappa)
    if rem != 0:
        raise ValueError("quartic factor is not divisible by kappa")
    b = nth_root(bn, n)
    if b is None:
        raise ValueError(f"quartic factor / kappa = {bn} is not an n-th power")
    w = FactorWitness(kappa=kappa, a=a, b=b, T=rec.d**2 + rec.x**2)
    w.check(rec)
    return w


def three_divides_ab_check() -> bool:
    """Exhaustive residue verification that 3 | ab for any solution.

    (i) mod 9: 3 | d is impossible (the quartic factor would have 3-adic
        valuation exactly 1, incompatible with kappa * b^n for n >= 2);
    (ii) mod 3, with 3 not dividing d: every class satisfying the quartic
        equation has 3 | x (hence 3 | a) or 3 | b;
    (iii) every nonzero y found by a small box search is divisible by 3.
    """
    # (i) 3 | d, 3 coprime to x: valuation of 3x^4 + 20x^2d^2 + 10d^4 is exactly 1
    for x in range(1, 9):
        if x % 3 == 0:
            continue
        for d in range(0, 9, 3):
            v = lhs_quartic(x, d) % 9
            if v % 3 != 0 or v == 0:
                return False  # valuation 0 or >= 2: the argument would break
    # (ii) 3 coprime to d: no class with x, b both units satisfies the equation
    for x in range(3):
        for d in (1, 2):
            for b in (1, 2):
                for kappa in (1, 2, 5, 10):
                    if x % 3 != 0 and b % 3 != 0:
                        # b^n mod 3 is b or b^2; neither may match
                        for bn in {b % 3, b * b % 3}:
                            if lhs_quartic(x, d) % 3 == kappa * bn % 3:
                                return False
    # (iii) spot check on actual solutions
    for rec in search_solutions(30, 30, 7):
        if rec.y != 0 and rec.y % 3 != 0:
            return False
    return True


def identity_fuzz(trials: int, seed: int | None = None) -> bool:
    """Random exact checks of the two algebraic identities behind the
    factorization chain."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    for _ in range(trials):
        x = rng.randint(-10**6, 10**6)
        d = rng.randint(-10**6, 10**6)
        if (x - d) ** 5 + x**5 + (x + d) ** 5 != x * lhs_quartic(x, d):
            return False
        if lhs_quartic(x, d) != 10 * (d * d + x * x) ** 2 - 7 * x**4:
            return False
    return True


def _sj_coeffs(j: int) -> tuple[int, int, int]:
    """Integer coefficients (c0, c2, c4) with
    S_j(x, d, 5) = (j*z/3) * (c0 z^4 + c2 z^2 d^2 + c4 d^4) for x = z - (j-1)d/2."""
    assert j % 2 == 1
    c0 = 3
    c2 = 5 * (j * j - 1) // 2
    c4 = (j * j - 1) * (3 * j * j - 7) // 16
    return c0, c2, c4


def sj_three_divides(j: int) -> bool | None:
    """For j = +-3 mod 18: verify the factored form of the j-term power sum
    symbolically and confirm 3 | y by mod-3 enumeration; None when the
    congruence class does not apply."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if j % 18 not in (3, 15):
        return None
    c0, c2, c4 = _sj_coeffs(j)
    # symbolic identity via exact evaluation on a grid large enough to pin a
    # polynomial of total degree 5 in (z, d)
    half = (j - 1) // 2
    for z in range(-6, 7):
        for d in range(-6, 7):
            direct = sum((z + (i - half) * d) ** 5 for i in range(j))
            factored = j * z * (c0 * z**4 + c2 * z * z * d * d + c4 * d**4)
            if 3 * direct != factored:
                return False
    # mod 3, with 3 coprime to d: the factored form vanishes
    for z in range(3):
        for d in (1, 2):
            if (j // 3) * z * (c0 * z**4 + c2 * z * z * d * d + c4 * d**4) % 3 != 0:
                return False
    return True
