"""Closed-form test functions with exact derivatives, integrals and products.

Sampled grid functions are never differentiated numerically anywhere in
this package; any operation that needs a derivative, a boundary value or
an exact integral takes an :class:`AnalyticTestFunction` instead.  The
class stores a finite linear combination of *exponential-polynomial*
terms

    ``c * x**p * exp(z * x)``

with complex coefficient ``c``, integer power ``p >= 0`` and complex
exponent ``z``.  Oscillatory exponentials have ``z = i*rate``,
trigonometric terms enter as conjugate exponential pairs
(``cos(rate*x) = (e^{i rate x} + e^{-i rate x}) / 2`` and similarly for
``sin``), and real exponentials like ``e^{x/d}`` have a real ``z``.  The
represented class therefore covers finite combinations of
``c*e^{i rate x}``, ``c*cos(rate*x)``, ``c*sin(rate*x)``, polynomials and
real exponentials.

The family is closed under differentiation, antidifferentiation, complex
conjugation and pointwise products, and every definite integral over
``[0, d]`` has a closed form.  That closure is what lets the
verification suite evaluate operator identities without discretization
error.

Numerical caveat: antiderivatives of terms with a tiny non-zero exponent
carry ``1/z`` coefficients and lose relative accuracy near ``z == 0``;
use a true zero exponent (polynomial branch) for constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Term",
    "AnalyticTestFunction",
    "constant",
    "monomial",
    "exp_function",
    "real_exponential",
    "cos_function",
    "sin_function",
    "exp_poly_integral",
    "integral_exact",
    "inner_product_exact",
    "norm_exact",
]


@dataclass(frozen=True)
class Term:
    """One exponential-polynomial term ``coef * x**power * exp(exponent*x)``."""

    coef: complex
    power: int = 0
    exponent: complex = 0.0j

    def __post_init__(self) -> None:
        if self.power < 0:
            raise ValueError("power must be a non-negative integer")
        if not np.isfinite(self.coef) or not np.isfinite(self.exponent):
            raise ValueError("coefficient and exponent must be finite")


def _simplified(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: dict[tuple[int, complex], complex] = {}
    for t in terms:
        key = (t.power, complex(t.exponent))
        merged[key] = merged.get(key, 0.0 + 0.0j) + complex(t.coef)
    out = [
        Term(coef, power, exponent)
        for (power, exponent), coef in sorted(
            merged.items(), key=lambda kv: (kv[0][0], kv[0][1].real, kv[0][1].imag)
        )
        if coef != 0.0
    ]
    return tuple(out)


class AnalyticTestFunction:
    """Finite combination of exponential-polynomial terms on ``[0, d]``.

    Supports ``+``, ``-``, scalar ``*``, pointwise function products,
    exact :meth:`derivative`, the anchored antiderivative
    :meth:`antiderivative` (value 0 at ``x = 0``), complex
    :meth:`conjugate` and evaluation on scalars or arrays via call
    syntax.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Sequence[Term]):
        self.terms: tuple[Term, ...] = _simplified(terms)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        arr = np.asarray(x, dtype=np.float64)
        out = np.zeros(arr.shape, dtype=np.complex128)
        for t in self.terms:
            piece = t.coef * np.exp(t.exponent * arr)
            if t.power:
                piece = piece * arr**t.power
            out += piece
        if np.isscalar(x) or arr.ndim == 0:
            return complex(out)
        return out

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "AnalyticTestFunction") -> "AnalyticTestFunction":
        return AnalyticTestFunction(self.terms + other.terms)

    def __sub__(self, other: "AnalyticTestFunction") -> "AnalyticTestFunction":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "AnalyticTestFunction":
        return AnalyticTestFunction(
            [Term(scalar * t.coef, t.power, t.exponent) for t in self.terms]
        )

    def __mul__(self, other):
        if isinstance(other, AnalyticTestFunction):
            return self.product(other)
        return self.__rmul__(other)

    def product(self, other: "AnalyticTestFunction") -> "AnalyticTestFunction":
        """Exact pointwise product; powers add and exponents add."""
        terms = [
            Term(a.coef * b.coef, a.power + b.power, a.exponent + b.exponent)
            for a in self.terms
            for b in other.terms
        ]
        return AnalyticTestFunction(terms)

    def conjugate(self) -> "AnalyticTestFunction":
        return AnalyticTestFunction(
            [Term(np.conj(t.coef), t.power, np.conj(t.exponent)) for t in self.terms]
        )

    # -- calculus ------------------------------------------------------------

    def derivative(self) -> "AnalyticTestFunction":
        """Exact first derivative, term by term."""
        terms: list[Term] = []
        for t in self.terms:
            if t.power:
                terms.append(Term(t.coef * t.power, t.power - 1, t.exponent))
            if t.exponent != 0.0:
                terms.append(Term(t.coef * t.exponent, t.power, t.exponent))
        return AnalyticTestFunction(terms)

    def second_derivative(self) -> "AnalyticTestFunction":
        return self.derivative().derivative()

    def antiderivative(self) -> "AnalyticTestFunction":
        """The antiderivative ``F`` with ``F(0) = 0`` exactly.

        This is the running-integral operator acting on closed forms;
        composing it twice gives exact double integrals.
        """
        terms: list[Term] = []
        for t in self.terms:
            if t.exponent == 0.0:
                terms.append(Term(t.coef / (t.power + 1), t.power + 1, 0.0j))
                continue
            # By parts: int x^p e^{zx} = e^{zx} * sum_m a_m x^{p-m},
            # a_0 = 1/z, a_m = -(p - m + 1)/z * a_{m-1}.
            a = t.coef / t.exponent
            for m in range(t.power + 1):
                if m:
                    a = -a * (t.power - m + 1) / t.exponent
                terms.append(Term(a, t.power - m, t.exponent))
            # anchor so the value at x = 0 vanishes
            terms.append(Term(-a, 0, 0.0j))
        return AnalyticTestFunction(terms)

    def __repr__(self) -> str:
        return f"AnalyticTestFunction({list(self.terms)!r})"


# -- constructors -----------------------------------------------------------

def constant(value: complex) -> AnalyticTestFunction:
    return AnalyticTestFunction([Term(value, 0, 0.0j)])


def monomial(coef: complex, power: int) -> AnalyticTestFunction:
    """``coef * x**power``; test inputs use powers up to 2."""
    return AnalyticTestFunction([Term(coef, power, 0.0j)])


def exp_function(coef: complex, rate: float) -> AnalyticTestFunction:
    """Oscillatory exponential ``coef * exp(i * rate * x)`` with real rate."""
    return AnalyticTestFunction([Term(coef, 0, 1j * rate)])


def real_exponential(coef: complex, rate: float) -> AnalyticTestFunction:
    """Real-exponent term ``coef * exp(rate * x)``."""
    return AnalyticTestFunction([Term(coef, 0, complex(rate))])


def cos_function(coef: complex, rate: float) -> AnalyticTestFunction:
    """``coef * cos(rate * x)`` as a conjugate exponential pair."""
    half = 0.5 * coef
    return AnalyticTestFunction([Term(half, 0, 1j * rate), Term(half, 0, -1j * rate)])


def sin_function(coef: complex, rate: float) -> AnalyticTestFunction:
    """``coef * sin(rate * x)`` as a conjugate exponential pair."""
    half = coef / 2j
    return AnalyticTestFunction([Term(half, 0, 1j * rate), Term(-half, 0, -1j * rate)])


# -- exact integrals --------------------------------------------------------

def exp_poly_integral(power: int, exponent: complex, d: float) -> complex:
    """Closed form of ``integral_0^d x**power * exp(exponent*x) dx``.

    Uses the Maclaurin series in ``exponent * d`` when the by-parts
    recurrence would cancel catastrophically (``|exponent|*d < power + 4``),
    the recurrence otherwise.  Validated to ~1e-13 relative accuracy for
    ``power <= 8``.
    """
    z = complex(exponent)
    if z == 0.0:
        return d ** (power + 1) / (power + 1) + 0.0j
    if abs(z) * d < power + 4.0:
        total = 0.0 + 0.0j
        factor = 1.0 + 0.0j
        for m in range(200):
            total += factor * d ** (power + m + 1) / (power + m + 1)
            factor *= z / (m + 1)
            if m > abs(z) * d and abs(factor) * d ** (power + m + 2) < 1e-20 * abs(total):
                break
        return total
    phase = np.exp(z * d)
    value = (phase - 1.0) / z
    for q in range(1, power + 1):
        value = (d**q * phase - q * value) / z
    return complex(value)


def integral_exact(f: AnalyticTestFunction, d: float) -> complex:
    """Exact ``integral_0^d f``."""
    return sum(
        (t.coef * exp_poly_integral(t.power, t.exponent, d) for t in f.terms),
        start=0.0 + 0.0j,
    )


def inner_product_exact(f: AnalyticTestFunction, g: AnalyticTestFunction, d: float) -> complex:
    """Exact ``integral_0^d conj(f) * g``; antilinear in ``f``."""
    return integral_exact(f.conjugate() * g, d)


def norm_exact(f: AnalyticTestFunction, d: float) -> float:
    value = inner_product_exact(f, f, d)
    return float(np.sqrt(max(value.real, 0.0)))
