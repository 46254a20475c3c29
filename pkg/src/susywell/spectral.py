"""Finite-difference spectra of the partner potentials on a box.

Three-point Laplacian on a uniform interior grid; Dirichlet walls are
implicit in the truncation. Purely real diagonals go through the exact
symmetric-tridiagonal solver (LAPACK bisection / inverse iteration);
complex diagonals fall back to a dense general eigensolver that is
validated against the symmetric path on real cases.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, eig, eigh_tridiagonal

from .errors import ConvergenceFailure, InsufficientEigenvalues
from .serialize import json_text

# residual gate, scaled by the matrix norm (see eigenvalues())
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Grid1D:
    """Uniform interior grid: nodes x_min + j h, j = 1..n, h = span/(n+1)."""

    x_min: float
    x_max: float
    n_interior: int

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValueError(f"empty interval [{self.x_min!r}, {self.x_max!r}]")
        if self.n_interior < 16:
            raise ValueError(f"n_interior must be >= 16, got {self.n_interior!r}")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_interior + 1)

    @property
    def points(self) -> np.ndarray:
        h = self.spacing
        return self.x_min + h * np.arange(1, self.n_interior + 1)


@dataclass(frozen=True)
class DiscretizedHamiltonian:
    """Tridiagonal H: diagonal 2/h^2 + V(x_j), off-diagonal -1/h^2."""

    grid: Grid1D
    diagonal: np.ndarray
    off_diagonal: float

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.diagonal.imag == 0.0))

    @property
    def norm_inf(self) -> float:
        return float(np.max(np.abs(self.diagonal)) + 2.0 * abs(self.off_diagonal))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out


def discretize(potential, grid: Grid1D) -> DiscretizedHamiltonian:
    """Sample the potential on the interior nodes and build H.

    Endpoints are never evaluated; a node inside a pole's exclusion radius
    surfaces as SingularPoint from the potential callable itself.
    """
    xs = grid.points
    values = np.asarray(potential(xs), dtype=np.complex128)
    if values.shape != xs.shape:
        raise ValueError("potential must return one value per grid node")
    if not np.all(np.isfinite(values.real) & np.isfinite(values.imag)):
        bad = int(np.flatnonzero(~np.isfinite(values.real) | ~np.isfinite(values.imag))[0])
        raise ValueError(f"potential not finite at grid node x={float(xs[bad])!r}")
    h = grid.spacing
    return DiscretizedHamiltonian(grid, 2.0 / h**2 + values, -1.0 / h**2)


@dataclass(frozen=True)
class SpectrumReport:
    """Lowest eigenvalues (sorted by real part, then imaginary part).

    residuals are ||H v - lambda v|| / ||v|| per eigenpair; scaled_residuals
    divide that by max(1, ||H||_inf), which is the gated quantity.
    """

    eigenvalues: np.ndarray
    max_imag: float
    grid_sizes_used: tuple[int, ...]
    richardson_estimates: tuple[float, ...] = ()
    residuals: np.ndarray = field(default_factory=lambda: np.empty(0))
    scaled_residuals: np.ndarray = field(default_factory=lambda: np.empty(0))

    def to_payload(self) -> dict:
        return {
            "eigenvalues": [[ev.real, ev.imag] for ev in self.eigenvalues],
            "max_imag": self.max_imag,
            "grid_sizes_used": list(self.grid_sizes_used),
            "richardson_estimates": list(self.richardson_estimates),
        }

    def to_json(self) -> str:
        return json_text(self.to_payload()) + "\n"


def eigenvalues(
    ham: DiscretizedHamiltonian, count: int, method: str = "auto"
) -> SpectrumReport:
    """The `count` eigenvalues of smallest real part, with eigenvectors
    checked against the residual gate.

    method: "auto" picks "symmetric" for purely real diagonals and "dense"
    otherwise; "symmetric" (exact tridiagonal bisection) refuses complex
    input; "dense" works for both and exists so the two paths can be
    cross-validated on real cases.
    """
    n = ham.grid.n_interior
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count!r}")
    if method == "auto":
        method = "symmetric" if ham.is_real else "dense"
    if method == "symmetric":
        if not ham.is_real:
            raise ValueError("symmetric path requires a purely real diagonal")
        try:
            w, v = eigh_tridiagonal(
                ham.diagonal.real,
                np.full(n - 1, ham.off_diagonal),
                select="i",
                select_range=(0, count - 1),
            )
        except LinAlgError as exc:
            raise ConvergenceFailure(
                f"tridiagonal eigensolver failed: {exc}", {"n": n, "count": count}
            ) from exc
        w = w.astype(np.complex128)
    elif method == "dense":
        dense = np.diag(ham.diagonal)
        band = np.full(n - 1, ham.off_diagonal)
        dense[np.arange(n - 1), np.arange(1, n)] = band
        dense[np.arange(1, n), np.arange(n - 1)] = band
        try:
            wall, vall = eig(dense)
        except LinAlgError as exc:
            raise ConvergenceFailure(
                f"dense eigensolver failed: {exc}", {"n": n, "count": count}
            ) from exc
        order = np.lexsort((wall.imag, wall.real))[:count]
        w = wall[order]
        v = vall[:, order]
    else:
        raise ValueError(f"unknown method {method!r}")

    resid = np.empty(count)
    for j in range(count):
        vec = v[:, j].astype(np.complex128)
        resid[j] = float(
            np.linalg.norm(ham.matvec(vec) - w[j] * vec) / np.linalg.norm(vec)
        )
    scaled = resid / max(1.0, ham.norm_inf)
    if np.any(scaled > RESIDUAL_TOL):
        worst = float(np.max(scaled))
        raise ConvergenceFailure(
            f"eigenpair residual {worst:.3e} exceeds gate {RESIDUAL_TOL:g}",
            {"n": n, "count": count, "residuals": resid.tolist(), "method": method},
        )
    return SpectrumReport(
        eigenvalues=w,
        max_imag=float(np.max(np.abs(w.imag))),
        grid_sizes_used=(n,),
        residuals=resid,
        scaled_residuals=scaled,
    )


def richardson_extrapolate(spacings, values) -> float:
    """Eliminate the h^2, h^4, ... error terms from grid-refined values.

    Solves the small Vandermonde system value(h) = c0 + c2 h^2 + c4 h^4 + ...
    exactly, so non-dyadic spacing ratios are handled without bias.
    """
    hs = np.asarray(spacings, dtype=np.float64)
    vals = np.asarray(values, dtype=np.float64)
    if hs.size != vals.size or hs.size < 2:
        raise ValueError("need matching spacing/value lists of length >= 2")
    system = np.vander(hs**2, hs.size, increasing=True)
    return float(np.linalg.solve(system, vals)[0])


def richardson_spectrum(
    potential,
    x_min: float,
    x_max: float,
    count: int,
    grid_sizes,
    method: str = "auto",
) -> SpectrumReport:
    """Spectra on several grids plus Richardson-extrapolated estimates.

    The reported eigenvalues/residuals come from the finest grid; the
    extrapolation acts on the real parts of each tracked level.
    """
    sizes = sorted(int(n) for n in grid_sizes)
    if len(sizes) < 2:
        raise ValueError("need at least two grid sizes")
    reports = []
    spacings = []
    for n in sizes:
        grid = Grid1D(x_min, x_max, n)
        reports.append(eigenvalues(discretize(potential, grid), count, method))
        spacings.append(grid.spacing)
    estimates = tuple(
        richardson_extrapolate(spacings, [r.eigenvalues[j].real for r in reports])
        for j in range(count)
    )
    finest = reports[-1]
    return SpectrumReport(
        eigenvalues=finest.eigenvalues,
        max_imag=finest.max_imag,
        grid_sizes_used=tuple(sizes),
        richardson_estimates=estimates,
        residuals=finest.residuals,
        scaled_residuals=finest.scaled_residuals,
    )


def well_spectrum_analytic(n: int) -> int:
    """n-th level of the unit box with the floor shifted to zero: n(n+2)."""
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n!r}")
    return n * (n + 2)


def remainder_spectrum(n: int, k_base: float = 1.0) -> float:
    """Energy of level n by telescoping the constant remainders.

    Sum_{j=1..n} alpha (alpha + 2 k_j), alpha = k_base,
    k_j = k_base + (j-1) alpha. Exact integers for integer k_base.
    """
    if n < 0:
        raise ValueError(f"level index must be >= 0, got {n!r}")
    alpha = float(k_base)
    ks = k_base + alpha * np.arange(n)
    return float(np.sum(alpha * (alpha + 2.0 * ks)))


@dataclass(frozen=True)
class IsospectralResult:
    matched: int
    max_error: float
    passed: bool


def isospectral_check(
    base: SpectrumReport,
    partner: SpectrumReport,
    shift: int = 1,
    tol: float = 1e-4,
) -> IsospectralResult:
    """Pair partner level j with base level j + shift and compare.

    Raises InsufficientEigenvalues when the base report is too short to
    pair even one level.
    """
    n_base = len(base.eigenvalues)
    n_partner = len(partner.eigenvalues)
    matched = min(n_partner, n_base - shift)
    if matched <= 0:
        raise InsufficientEigenvalues(
            f"cannot pair: base has {n_base} eigenvalues, shift {shift}"
        )
    diffs = np.abs(
        partner.eigenvalues[:matched] - base.eigenvalues[shift : shift + matched]
    )
    max_error = float(np.max(diffs))
    return IsospectralResult(matched, max_error, bool(max_error <= tol))


class PTPhase(enum.Enum):
    UNBROKEN = "unbroken"
    BROKEN = "broken"


def reality_classification(report: SpectrumReport, tol: float | None = None) -> PTPhase:
    """Unbroken when every reported eigenvalue is real within tolerance.

    Default tolerance: 1e-6 * max(1, largest |Re lambda|).
    """
    if tol is None:
        scale = max(1.0, float(np.max(np.abs(report.eigenvalues.real), initial=0.0)))
        tol = 1e-6 * scale
    return PTPhase.UNBROKEN if report.max_imag <= tol else PTPhase.BROKEN
