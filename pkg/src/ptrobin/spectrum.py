"""Spectra and eigenfunctions of the Robin Laplacian with imaginary coupling.

The operator acts as ``f -> -f''`` on ``[0, d]`` with boundary conditions
``f'(0) + i*alpha*f(0) = 0`` and ``f'(d) + i*alpha*f(d) = 0`` (real
``alpha``); its adjoint is the same operator with ``alpha -> -alpha``.
The generalized family adds a real Robin part ``beta``:
``f'(0) + (beta + i*alpha) f(0) = 0``, ``-f'(d) + (beta - i*alpha) f(d) = 0``.

For ``beta = 0`` everything is closed form: eigenvalues are ``alpha**2``
(index 0) and ``(j*pi/d)**2`` for ``j >= 1``, with eigenfunctions built
from cosine/sine modes.  The right and left families returned by
:func:`eigenfunction` and :func:`adjoint_eigenfunction` carry the special
normalization that makes them biorthonormal:

    ``B_0 = sqrt(1/d)``, ``B_j = sqrt(2/d)``,
    ``A_0 = sqrt(1/d) / q`` with ``q = (1 - exp(-2*i*alpha*d)) / (2*i*alpha*d)``,
    ``A_j = sqrt(2/d) * k_j**2 / (k_j**2 - alpha**2)``.

Values of ``alpha`` with ``alpha*d/pi`` a non-zero integer are degenerate
(two eigenvalues collide and the normalization blows up); eigenfunction
constructors refuse them while plain eigenvalue queries still work.

For ``beta != 0`` the eigenvalues ``k**2`` solve the transcendental
dispersion relation and :func:`solve_spectrum` locates them by bracketing
plus Newton polish, with a complex-plane Newton search to recover
conjugate pairs when the real-root count falls short.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .analytic import AnalyticTestFunction, constant, cos_function, exp_function, sin_function
from .grids import Grid

__all__ = [
    "ModelParams",
    "DegeneracyFlag",
    "DegeneracyError",
    "SpectralPair",
    "RootRecord",
    "check_nondegenerate",
    "require_nondegenerate",
    "eigenvalue",
    "wavenumber",
    "eigenfunction_coefficient",
    "adjoint_coefficient",
    "eigenfunction",
    "adjoint_eigenfunction",
    "neumann_mode",
    "dirichlet_mode",
    "spectral_pair",
    "dispersion",
    "dispersion_derivative",
    "dispersion_residual",
    "solve_spectrum",
    "closed_spectrum",
    "conjugate_pairing_defects",
    "eigen_mode_matrix",
    "adjoint_mode_matrix",
    "neumann_mode_matrix",
    "dirichlet_mode_matrix",
]

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters: imaginary Robin strength ``alpha``, real Robin
    strength ``beta`` and interval length ``d``."""

    alpha: float
    beta: float = 0.0
    d: float = math.pi

    def __post_init__(self) -> None:
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"interval length must be positive and finite, got {self.d}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("alpha and beta must be finite")


@dataclass(frozen=True)
class DegeneracyFlag:
    """Whether ``alpha*d/pi`` hits a non-zero integer ``m`` (within 1e-12)."""

    degenerate: bool
    m: int | None = None


class DegeneracyError(ValueError):
    """Raised when an operation requires a non-degenerate ``alpha``."""

    def __init__(self, flag: DegeneracyFlag, params: ModelParams):
        self.flag = flag
        super().__init__(
            f"alpha*d/pi = {params.alpha * params.d / math.pi:.15g} hits the "
            f"excluded integer m = {flag.m}; eigenfunction normalization is singular"
        )


def check_nondegenerate(params: ModelParams) -> DegeneracyFlag:
    """Flag exactly the excluded couplings (``alpha*d/pi`` in Z minus {0})."""
    t = params.alpha * params.d / math.pi
    m = round(t)
    if m != 0 and abs(t - m) <= DEGENERACY_TOL:
        return DegeneracyFlag(True, m)
    return DegeneracyFlag(False, None)


def require_nondegenerate(params: ModelParams) -> None:
    flag = check_nondegenerate(params)
    if flag.degenerate:
        raise DegeneracyError(flag, params)


def wavenumber(j: int, d: float) -> float:
    """Mode wavenumber ``j*pi/d`` for ``j >= 1``."""
    if j < 1:
        raise ValueError("wavenumber is defined for j >= 1")
    return j * math.pi / d


def eigenvalue(j: int, params: ModelParams) -> float:
    """Closed-form eigenvalue of the ``beta = 0`` operator.

    ``alpha**2`` for ``j = 0`` and ``(j*pi/d)**2`` for ``j >= 1``.
    """
    if j < 0:
        raise ValueError("index must be >= 0")
    if j == 0:
        return params.alpha**2
    return wavenumber(j, params.d) ** 2


def _limit_ratio(z: complex) -> complex:
    """``(1 - exp(-z)) / z`` with the removable singularity at 0 filled in."""
    if abs(z) < 1e-3:
        # Maclaurin series of (1 - e^{-z})/z
        total, term = 1.0 + 0.0j, 1.0 + 0.0j
        for m in range(1, 12):
            term *= -z / (m + 1)
            total += term
        return total
    return (1.0 - np.exp(-z)) / z


def adjoint_coefficient(j: int, params: ModelParams) -> float:
    """Normalization of the adjoint (left) family: ``sqrt(1/d)`` or ``sqrt(2/d)``."""
    if j < 0:
        raise ValueError("index must be >= 0")
    return math.sqrt((1.0 if j == 0 else 2.0) / params.d)


def eigenfunction_coefficient(j: int, params: ModelParams) -> complex:
    """Normalization of the right family making the two families biorthonormal.

    Solves ``A_j * conj(B_j) * <pairing factor> = 1`` in closed form; at
    ``alpha = 0`` the index-0 value is the limit ``sqrt(1/d)``.  Rejects
    degenerate ``alpha``, where the factor vanishes.
    """
    require_nondegenerate(params)
    alpha, d = params.alpha, params.d
    if j == 0:
        q = _limit_ratio(2j * alpha * d)
        return complex(math.sqrt(1.0 / d) / q)
    k = wavenumber(j, d)
    return complex(math.sqrt(2.0 / d) * k**2 / (k**2 - alpha**2))


def eigenfunction(j: int, params: ModelParams) -> AnalyticTestFunction:
    """Right eigenfunction: ``A_0 e^{-i alpha x}`` or
    ``A_j (cos(k_j x) - i (alpha/k_j) sin(k_j x))``."""
    a = eigenfunction_coefficient(j, params)
    if j == 0:
        return exp_function(a, -params.alpha)
    k = wavenumber(j, params.d)
    return cos_function(a, k) + sin_function(-1j * a * params.alpha / k, k)


def adjoint_eigenfunction(j: int, params: ModelParams) -> AnalyticTestFunction:
    """Left eigenfunction: ``sqrt(1/d) e^{i alpha x}`` or
    ``neumann_mode + i (alpha/k_j) dirichlet_mode``.  Defined for all alpha."""
    b = adjoint_coefficient(j, params)
    if j == 0:
        return exp_function(b, params.alpha)
    k = wavenumber(j, params.d)
    return cos_function(b, k) + sin_function(1j * b * params.alpha / k, k)


def neumann_mode(j: int, d: float) -> AnalyticTestFunction:
    """Normalized Neumann Laplacian mode: constant for ``j = 0``, else
    ``sqrt(2/d) cos(j pi x / d)``."""
    if j < 0:
        raise ValueError("index must be >= 0")
    if j == 0:
        return constant(math.sqrt(1.0 / d))
    return cos_function(math.sqrt(2.0 / d), wavenumber(j, d))


def dirichlet_mode(j: int, d: float) -> AnalyticTestFunction:
    """Normalized Dirichlet Laplacian mode ``sqrt(2/d) sin(j pi x / d)``, ``j >= 1``."""
    if j < 1:
        raise ValueError("Dirichlet modes start at j = 1")
    return sin_function(math.sqrt(2.0 / d), wavenumber(j, d))


@dataclass(frozen=True)
class SpectralPair:
    """Index, wavenumber, eigenvalue and the two normalization coefficients."""

    j: int
    k: float | None
    eigenvalue: complex
    coef_eigen: complex
    coef_adjoint: complex


def spectral_pair(j: int, params: ModelParams) -> SpectralPair:
    return SpectralPair(
        j=j,
        k=None if j == 0 else wavenumber(j, params.d),
        eigenvalue=complex(eigenvalue(j, params)),
        coef_eigen=eigenfunction_coefficient(j, params),
        coef_adjoint=adjoint_coefficient(j, params),
    )


# ---------------------------------------------------------------------------
# Dispersion relation of the generalized (alpha, beta) model
# ---------------------------------------------------------------------------

def dispersion(k: complex, params: ModelParams) -> complex:
    """``(k^2 - (alpha^2 + beta^2)) sin(kd) - 2 beta k cos(kd)``.

    Zeros (in ``k``) give the eigenvalues ``k^2``.  With ``beta = 0`` this
    reduces exactly to ``(k^2 - alpha^2) sin(kd)``.
    """
    a2b2 = params.alpha**2 + params.beta**2
    kd = k * params.d
    return (k * k - a2b2) * np.sin(kd) - 2.0 * params.beta * k * np.cos(kd)


def dispersion_derivative(k: complex, params: ModelParams) -> complex:
    a2b2 = params.alpha**2 + params.beta**2
    d, beta = params.d, params.beta
    kd = k * d
    return (
        2.0 * k * np.sin(kd)
        + (k * k - a2b2) * d * np.cos(kd)
        - 2.0 * beta * np.cos(kd)
        + 2.0 * beta * k * d * np.sin(kd)
    )


def dispersion_residual(k: complex, params: ModelParams) -> float:
    """``|dispersion(k)|``; the universal root-quality metric."""
    return float(abs(dispersion(k, params)))


@dataclass(frozen=True)
class RootRecord:
    """One located root of the dispersion relation.

    ``resolved`` is False when Newton failed to meet the residual target;
    such roots are reported with their last iterate, never dropped.
    """

    k: complex
    eigenvalue: complex
    residual: float
    resolved: bool = True


def _newton_polish(
    k: complex,
    params: ModelParams,
    residual_tol: float,
    max_iter: int = 100,
) -> tuple[complex, bool]:
    for _ in range(max_iter):
        f = dispersion(k, params)
        if abs(f) <= residual_tol * (1.0 + abs(k) ** 2):
            return k, True
        df = dispersion_derivative(k, params)
        if df == 0:
            break
        step = f / df
        k = k - step
        if abs(step) <= 1e-16 * (1.0 + abs(k)):
            break
    ok = dispersion_residual(k, params) <= residual_tol * (1.0 + abs(k) ** 2)
    return k, ok


def _bisect(a: float, b: float, fa: float, fb: float, params: ModelParams) -> float:
    for _ in range(90):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = dispersion(m, params).real
        if fm == 0.0:
            return m
        if (fa < 0) != (fm < 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def solve_spectrum(
    params: ModelParams,
    k_max: float,
    expect_complex: bool = False,
    residual_tol: float = 1e-12,
) -> list[RootRecord]:
    """All located eigenvalues ``k^2`` with ``k`` in ``(0, k_max]``.

    Real roots come from sign-change bracketing on a mesh of step
    ``pi/(8d)`` followed by bisection and Newton polish to
    ``|dispersion| < residual_tol * (1 + |k|^2)``.  The count of real
    roots is audited against the asymptotic density ``~ k_max*d/pi``;
    when roots are missing (or ``expect_complex`` is set) a Newton search
    seeded over a coarse complex grid recovers conjugate pairs.  Results
    are sorted by ``(Re k^2, Im k^2)``.
    """
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    step = math.pi / (8.0 * params.d)
    n_cells = max(int(math.ceil(k_max / step)), 8)
    mesh = np.linspace(step * 1e-3, k_max, n_cells + 1)
    values = dispersion(mesh.astype(complex), params).real

    records: list[RootRecord] = []
    seen_eigenvalues: list[complex] = []

    def remember(k: complex, resolved: bool) -> None:
        ev = k * k
        for prev in seen_eigenvalues:
            if abs(ev - prev) <= 1e-8 * (1.0 + abs(prev)):
                return
        seen_eigenvalues.append(ev)
        records.append(
            RootRecord(k=k, eigenvalue=ev, residual=dispersion_residual(k, params), resolved=resolved)
        )

    # real roots by bracketing
    for i in range(n_cells):
        a, b = float(mesh[i]), float(mesh[i + 1])
        fa, fb = float(values[i]), float(values[i + 1])
        if fa == 0.0:
            k0 = a
        elif (fa < 0) == (fb < 0):
            continue
        else:
            k0 = _bisect(a, b, fa, fb, params)
        k, ok = _newton_polish(complex(k0), params, residual_tol)
        # a real bracket must stay real
        k = complex(k.real, 0.0)
        ok = dispersion_residual(k, params) <= residual_tol * (1.0 + abs(k) ** 2)
        if 0 < k.real <= k_max * (1.0 + 1e-12):
            remember(k, ok)
    if values[-1] == 0.0:
        k, ok = _newton_polish(complex(float(mesh[-1])), params, residual_tol)
        remember(complex(k.real, 0.0), ok)

    n_real = len(records)
    expected = int(math.floor(k_max * params.d / math.pi + 1e-9)) + 1

    if expect_complex or n_real < expected:
        scale = math.pi / params.d
        # the dispersion relation has a structural zero at k = 0 that is not
        # an eigenvalue in general; Newton iterates drifting below the mesh
        # resolution are discarded
        k_floor = 0.25 * step
        re_seeds = list(np.arange(0.5 * scale, k_max + 0.25 * scale, 0.5 * scale))
        # suspected collisions: |F| dips to a local minimum without a sign
        # change (two nearby roots, real or complex, inside one cell)
        magnitudes = np.abs(dispersion(mesh.astype(complex), params))
        for i in range(1, n_cells):
            if (
                magnitudes[i] < magnitudes[i - 1]
                and magnitudes[i] < magnitudes[i + 1]
                and (values[i - 1] < 0) == (values[i + 1] < 0)
            ):
                re_seeds.append(float(mesh[i]))
        im_seeds = scale * np.array([0.05, 0.1, 0.3, 0.6, 1.0, 1.8])
        for re in re_seeds:
            for im in im_seeds:
                k, ok = _newton_polish(complex(re, im), params, residual_tol)
                if not ok or abs(k) < k_floor:
                    continue
                if abs(k.imag) <= 1e-9 * (1.0 + abs(k)):
                    k = complex(k.real, 0.0)
                    if 0 < k.real <= k_max * (1.0 + 1e-12):
                        remember(k, True)
                    continue
                if k.imag < 0:
                    k = np.conj(k)
                if not (-1e-9 <= k.real <= k_max * (1.0 + 1e-12)):
                    continue
                partner, partner_ok = _newton_polish(np.conj(k), params, residual_tol)
                remember(complex(k), True)
                if partner_ok:
                    remember(complex(partner), True)

    records.sort(key=lambda r: (r.eigenvalue.real, r.eigenvalue.imag))
    return records


def closed_spectrum(params: ModelParams, j_max: int) -> list[RootRecord]:
    """The ``beta = 0`` spectrum by the closed formula, as root records."""
    out = []
    for j in range(j_max + 1):
        k = abs(params.alpha) if j == 0 else wavenumber(j, params.d)
        out.append(
            RootRecord(
                k=complex(k),
                eigenvalue=complex(eigenvalue(j, params)),
                residual=dispersion_residual(complex(k), params),
            )
        )
    return out


def conjugate_pairing_defects(records: list[RootRecord], tol: float = 1e-9) -> list[RootRecord]:
    """Complex eigenvalues whose conjugate partner is missing beyond ``tol``."""
    defects = []
    evs = [r.eigenvalue for r in records]
    for r in records:
        if abs(r.eigenvalue.imag) <= tol * (1.0 + abs(r.eigenvalue)):
            continue
        target = np.conj(r.eigenvalue)
        if not any(abs(e - target) <= tol * (1.0 + abs(target)) for e in evs):
            defects.append(r)
    return defects


# ---------------------------------------------------------------------------
# Vectorized mode matrices (rows j = 0..j_max sampled on a grid)
# ---------------------------------------------------------------------------

def _trig_tables(j_max: int, grid: Grid) -> tuple[NDArray, NDArray, NDArray]:
    ks = np.arange(1, j_max + 1) * math.pi / grid.d
    phases = np.outer(ks, grid.nodes)
    return ks, np.cos(phases), np.sin(phases)


def adjoint_mode_matrix(params: ModelParams, j_max: int, grid: Grid) -> NDArray[np.complex128]:
    """Samples of the left family, shape ``(j_max + 1, n + 1)``."""
    out = np.empty((j_max + 1, grid.n + 1), dtype=np.complex128)
    out[0] = adjoint_coefficient(0, params) * np.exp(1j * params.alpha * grid.nodes)
    if j_max >= 1:
        ks, cos_t, sin_t = _trig_tables(j_max, grid)
        b = adjoint_coefficient(1, params)
        out[1:] = b * (cos_t + (1j * params.alpha / ks)[:, None] * sin_t)
    return out


def eigen_mode_matrix(params: ModelParams, j_max: int, grid: Grid) -> NDArray[np.complex128]:
    """Samples of the right family, shape ``(j_max + 1, n + 1)``."""
    require_nondegenerate(params)
    out = np.empty((j_max + 1, grid.n + 1), dtype=np.complex128)
    out[0] = eigenfunction_coefficient(0, params) * np.exp(-1j * params.alpha * grid.nodes)
    if j_max >= 1:
        ks, cos_t, sin_t = _trig_tables(j_max, grid)
        amps = math.sqrt(2.0 / grid.d) * ks**2 / (ks**2 - params.alpha**2)
        out[1:] = amps[:, None] * (cos_t - (1j * params.alpha / ks)[:, None] * sin_t)
    return out


def neumann_mode_matrix(j_max: int, grid: Grid) -> NDArray[np.float64]:
    """Samples of the Neumann modes, shape ``(j_max + 1, n + 1)``."""
    out = np.empty((j_max + 1, grid.n + 1))
    out[0] = math.sqrt(1.0 / grid.d)
    if j_max >= 1:
        _, cos_t, _ = _trig_tables(j_max, grid)
        out[1:] = math.sqrt(2.0 / grid.d) * cos_t
    return out


def dirichlet_mode_matrix(j_max: int, grid: Grid) -> NDArray[np.float64]:
    """Samples of the Dirichlet modes, shape ``(j_max, n + 1)`` for rows 1..j_max."""
    _, _, sin_t = _trig_tables(j_max, grid)
    return math.sqrt(2.0 / grid.d) * sin_t
