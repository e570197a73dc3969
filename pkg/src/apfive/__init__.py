"""Exact-arithmetic toolkit for the equation (x-d)^5 + x^5 + (x+d)^5 = y^n.

Subpackages cover prime-field and number-field arithmetic, elliptic curve
point counting, the four Frey models with their residue sieve, newform
eigenvalue data handling, the three-stage elimination pipeline and the
small-exponent verifications, plus a brute-force solution oracle and CLI.
"""

__version__ = "0.1.0"
