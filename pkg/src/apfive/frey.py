"""The four Frey models attached to kappa = gcd(x, 10), their fixed levels,
and the residue-triple enumeration that feeds the Kraus sieve.

Over F_p the substitution (a^n, b^n, T) -> (a, b, T_{a,b}) makes the sieve
variables a, b range over the n-th power classes mu_n(F_p); the exponent n
survives only inside scalar factors like 2^(4n-11), evaluated mod p.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import EllipticCurveFp, ap_trace, discriminant
from .rings import PrimeField, is_prime, mod_sqrt, nth_power_residues

__all__ = [
    "KAPPAS",
    "FREY_LEVELS",
    "FreyModel",
    "FREY_MODELS",
    "SieveTriple",
    "KrausTraces",
    "frey_level",
    "instantiate",
    "solve_T",
    "sieve_triples",
    "kraus_trace_set",
]

KAPPAS = (1, 2, 5, 10)

# level N_E per kappa: 2^8*5^2*7, 2*5^2*7, 2^8*5*7, 2*5*7
FREY_LEVELS = {1: 44800, 2: 350, 5: 8960, 10: 70}


def frey_level(kappa: int) -> int:
    if kappa not in FREY_LEVELS:
        raise ValueError(f"kappa must be one of {KAPPAS}, got {kappa}")
    return FREY_LEVELS[kappa]


@dataclass(frozen=True)
class FreyModel:
    """Weierstrass coefficient recipe for one kappa, plus its level."""

    kappa: int
    level: int

    def coefficients(self, a: int, b: int, T: int, n: int, F: PrimeField):
        """(a1, a2, a3, a4, a6) of the reduced model over F, with (a, b)
        standing in for (a^n, b^n)."""
        p = F.p
        k = self.kappa
        if k == 1:
            # Y^2 = X^3 + 20 T X^2 + 10 b X
            return (0, 20 * T % p, 0, 10 * b % p, 0)
        if k == 2:
            # Y^2 + XY = X^3 + (5T-1)/4 X^2 + 35 * 2^(4n-11) * a^4 X
            a2 = F.div(5 * T - 1, 4)
            a4 = 35 * F.pow(2, 4 * n - 11) * F.pow(a, 4) % p
            return (1, a2, 0, a4, 0)
        if k == 5:
            # Y^2 = X^3 + 4 T X^2 + 2 b X
            return (0, 4 * T % p, 0, 2 * b % p, 0)
        # kappa == 10: Y^2 + XY = X^3 + (T-1)/4 X^2 + 7 * 10^(4n-11) * a^4 X
        a2 = F.div(T - 1, 4)
        a4 = 7 * F.pow(10, 4 * n - 11) * F.pow(a, 4) % p
        return (1, a2, 0, a4, 0)


FREY_MODELS = {k: FreyModel(k, FREY_LEVELS[k]) for k in KAPPAS}


@dataclass(frozen=True)
class SieveTriple:
    """Residues (a, b, T) with (10/kappa) T^2 = 7 kappa^(4n-5) a^4 + b in F_p."""

    a: int
    b: int
    T: int


def instantiate(kappa: int, a: int, b: int, T: int, n: int, F: PrimeField) -> EllipticCurveFp:
    """The curve E_{kappa,a,b,T} over F_p; requires p odd and p coprime to 70."""
    if kappa not in FREY_LEVELS:
        raise ValueError(f"kappa must be one of {KAPPAS}, got {kappa}")
    if F.p % 2 == 0 or 70 % F.p == 0:
        raise ValueError(f"p = {F.p} divides 70 or is even; unusable for the sieve")
    coeffs = FREY_MODELS[kappa].coefficients(a % F.p, b % F.p, T % F.p, n, F)
    return EllipticCurveFp(F, *coeffs)


def solve_T(kappa: int, n: int, F: PrimeField, a: int, b: int) -> frozenset[int]:
    """All T in F_p with (10/kappa) T^2 = 7 kappa^(4n-5) a^4 + b.

    Empty when the right side times kappa/10 is a non-residue; T = 0 is an
    admissible residue datum.
    """
    if kappa not in FREY_LEVELS:
        raise ValueError(f"kappa must be one of {KAPPAS}, got {kappa}")
    p = F.p
    if 10 % p == 0:
        raise ValueError(f"p = {p} divides 10")
    rhs = (7 * F.pow(kappa, 4 * n - 5) * F.pow(a, 4) + b) % p
    t_squared = F.div(rhs * kappa, 10)
    roots = mod_sqrt(t_squared, F)
    return frozenset() if roots is None else roots


def sieve_triples(kappa: int, n: int, F: PrimeField) -> list[SieveTriple]:
    """All (a, b, T) with a, b in mu_n(F_p) and T solving the defining relation."""
    if not is_prime(n):
        raise ValueError(f"n = {n} is not prime")
    mu = sorted(nth_power_residues(n, F))
    out = []
    for a in mu:
        for b in mu:
            for T in sorted(solve_T(kappa, n, F, a, b)):
                out.append(SieveTriple(a, b, T))
    return out


@dataclass(frozen=True)
class KrausTraces:
    """Trace set of the sieve curves, with singular instantiations kept aside."""

    traces: frozenset[int]
    singular: tuple[SieveTriple, ...]


def kraus_trace_set(kappa: int, n: int, F: PrimeField) -> KrausTraces:
    """{ a_p(E_{kappa,a,b,T}) } over all sieve triples at p.

    Requires p = 1 mod n and p coprime to 70n. Triples whose instantiated
    curve is singular at p are reported separately, never silently dropped.
    """
    p = F.p
    if p % n != 1:
        raise ValueError(f"p = {p} is not 1 mod n = {n}")
    if 70 % p == 0 or p == n:
        raise ValueError(f"p = {p} divides 70n")
    traces = set()
    singular = []
    for triple in sieve_triples(kappa, n, F):
        E = instantiate(kappa, triple.a, triple.b, triple.T, n, F)
        if discriminant(E) == 0:
            singular.append(triple)
        else:
            traces.add(ap_trace(E))
    return KrausTraces(frozenset(traces), tuple(singular))
