"""Exact Dunkl operators on multivariate polynomials.

Coefficients are kept as Fractions throughout, so commutativity and degree
properties can be asserted exactly; this module is the arithmetic oracle
behind the grid-based operator.  For the sign-flip groups the divided
difference (f - f o sigma_j)/<alpha, x> is exact polynomial division: the
numerator contains only monomials odd in x_j, and the sqrt(2) factors of
the normalized root cancel between <alpha, xi> and <alpha, x>.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .rootsys import ReflectionSetup

Monomial = Tuple[int, ...]


class Poly:
    """Sparse polynomial with exact rational coefficients."""

    def __init__(self, coeffs: Dict[Monomial, Fraction] | None = None, nvars: int = 1):
        self.nvars = nvars
        self.coeffs: Dict[Monomial, Fraction] = {}
        if coeffs:
            for mono, c in coeffs.items():
                c = Fraction(c)
                if c != 0:
                    if len(mono) != nvars:
                        raise ValueError("monomial arity mismatch")
                    self.coeffs[tuple(mono)] = c

    @classmethod
    def variable(cls, j: int, nvars: int) -> "Poly":
        mono = tuple(1 if i == j else 0 for i in range(nvars))
        return cls({mono: Fraction(1)}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    @classmethod
    def monomial(cls, exponents: Monomial, c=1) -> "Poly":
        return cls({tuple(exponents): Fraction(c)}, len(exponents))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out, self.nvars)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) - c
        return Poly(out, self.nvars)

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: Dict[Monomial, Fraction] = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    m = tuple(a + b for a, b in zip(m1, m2))
                    out[m] = out.get(m, Fraction(0)) + c1 * c2
            return Poly(out, self.nvars)
        return Poly({m: c * Fraction(other) for m, c in self.coeffs.items()}, self.nvars)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        """Degree of the zero polynomial is reported as -1."""
        return max((sum(m) for m in self.coeffs), default=-1)

    def partial(self, j: int) -> "Poly":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            if m[j] > 0:
                mm = list(m)
                mm[j] -= 1
                out[tuple(mm)] = out.get(tuple(mm), Fraction(0)) + c * m[j]
        return Poly(out, self.nvars)

    def reflect(self, j: int) -> "Poly":
        """Compose with sigma_j (flip the sign of variable j)."""
        return Poly({m: (-c if m[j] % 2 else c) for m, c in self.coeffs.items()},
                    self.nvars)

    def divide_by_variable(self, j: int) -> "Poly":
        """Exact division by x_j; requires every monomial to contain x_j."""
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            if m[j] == 0:
                raise ValueError("polynomial is not divisible by the variable")
            mm = list(m)
            mm[j] -= 1
            out[tuple(mm)] = c
        return Poly(out, self.nvars)

    def evaluate(self, x) -> float:
        total = 0.0
        for m, c in self.coeffs.items():
            term = float(c)
            for xj, e in zip(x, m):
                term *= xj ** e
            total += term
        return total

    def evaluate_many(self, pts):
        import numpy as np
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        out = np.zeros(len(pts))
        for m, c in self.coeffs.items():
            term = np.full(len(pts), float(c))
            for j, e in enumerate(m):
                if e:
                    term = term * pts[:, j] ** e
            out += term
        return out

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        parts = [f"{c}*x^{m}" for m, c in sorted(self.coeffs.items())]
        return "Poly(" + " + ".join(parts) + ")"


def dunkl_apply(setup: ReflectionSetup, xi, f: Poly) -> Poly:
    """T_xi f = d_xi f + sum_j gamma_j xi_j (f - f o sigma_j)/x_j, exact."""
    if f.nvars != setup.dimension:
        raise ValueError("polynomial arity does not match the setup dimension")
    xi = [Fraction(v) for v in xi]  # floats convert exactly (binary fractions)
    out = Poly(nvars=f.nvars)
    for j, xij in enumerate(xi):
        if xij != 0:
            out = out + xij * f.partial(j)
    for j, g in enumerate(setup.multiplicities):
        if g == 0 or xi[j] == 0:
            continue
        numer = f - f.reflect(j)
        if not numer.is_zero():
            out = out + (Fraction(g) * xi[j]) * numer.divide_by_variable(j)
    return out


def dunkl_apply_axis(setup: ReflectionSetup, j: int, f: Poly) -> Poly:
    """T_j f for the standard basis direction."""
    xi = [0] * setup.dimension
    xi[j] = 1
    return dunkl_apply(setup, xi, f)


def dunkl_laplacian(setup: ReflectionSetup, f: Poly) -> Poly:
    """Delta_k f = sum_j T_j^2 f, exact."""
    out = Poly(nvars=f.nvars)
    for j in range(setup.dimension):
        out = out + dunkl_apply_axis(setup, j, dunkl_apply_axis(setup, j, f))
    return out
