"""Finite-difference discretization and symmetric tridiagonal eigensolver.

Second-order central differences of -c d^2/dx^2 + V(x) on a uniform grid,
with two boundary treatments:

* dirichlet: endpoints excluded, x_i = x_min + (i+1) h, h = L / (n+1);
* periodic:  x_i = x_min + i h, h = L / n, with a corner coupling closing
  the ring.

Eigenpairs come from LAPACK's Sturm-sequence bisection plus inverse
iteration (``?stebz``/``?stein`` via :func:`scipy.linalg.eigh_tridiagonal`).
Periodic rings are not handed to LAPACK directly: they are split into even
and odd reflection-parity sectors, each again a plain symmetric tridiagonal
problem.  The split keeps the kernel purely tridiagonal and makes the double
degeneracy of travelling-wave pairs explicit.  It requires the sampled
potential to be reflection symmetric about x_min, which holds for every
periodic problem this package builds.

A small pure-Python Sturm counter is included so tests can confirm the
eigenvalue counts independently of LAPACK.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import ConvergenceFailure, PotentialSingular

DIRICHLET = "dirichlet"
PERIODIC = "periodic"

POTENTIAL_CAP = 1e12
CLUSTER_RTOL = 1e-9


@dataclass(frozen=True)
class Grid:
    """Uniform mesh on (x_min, x_max) with the boundary-dependent point layout."""

    x_min: float
    x_max: float
    n_points: int
    boundary: str = DIRICHLET

    def __post_init__(self):
        if self.boundary not in (DIRICHLET, PERIODIC):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.n_points < 16:
            raise ValueError(f"need at least 16 points, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ValueError(f"empty interval ({self.x_min}, {self.x_max})")
        if self.boundary == PERIODIC and self.n_points % 2 != 0:
            raise ValueError("periodic grids need an even point count (parity split)")

    @property
    def h(self) -> float:
        length = self.x_max - self.x_min
        if self.boundary == DIRICHLET:
            return length / (self.n_points + 1)
        return length / self.n_points

    @property
    def points(self) -> np.ndarray:
        if self.boundary == DIRICHLET:
            return self.x_min + self.h * np.arange(1, self.n_points + 1)
        return self.x_min + self.h * np.arange(self.n_points)

    def refined(self) -> "Grid":
        """The grid with spacing h/2 under the same boundary convention."""
        if self.boundary == DIRICHLET:
            return Grid(self.x_min, self.x_max, 2 * self.n_points + 1, self.boundary)
        return Grid(self.x_min, self.x_max, 2 * self.n_points, self.boundary)


@dataclass(frozen=True)
class DiscretizedOperator:
    """Symmetric (tridiagonal + optional corner) matrix for -c u'' + V u."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    boundary: str
    corner_coupling: float | None
    grid: Grid
    prefactor: float

    @property
    def n(self) -> int:
        return self.diagonal.shape[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        if self.boundary == PERIODIC:
            out[0] += self.corner_coupling * v[-1]
            out[-1] += self.corner_coupling * v[0]
        return out

    def inf_norm(self) -> float:
        row = np.abs(self.diagonal).copy()
        row[:-1] += np.abs(self.off_diagonal)
        row[1:] += np.abs(self.off_diagonal)
        if self.boundary == PERIODIC:
            row[0] += abs(self.corner_coupling)
            row[-1] += abs(self.corner_coupling)
        return float(np.max(row))


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues with unit discrete-L2 eigenvectors.

    ``eigenvectors[:, j]`` belongs to ``eigenvalues[j]`` and satisfies
    h * sum(v**2) = 1.  ``convergence_estimate`` is filled by :func:`refine`
    (absolute extrapolation delta per eigenvalue, None otherwise).
    ``degenerate_clusters`` lists index groups equal to relative 1e-9.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    grid: Grid
    convergence_estimate: np.ndarray | None = None
    degenerate_clusters: list = field(default_factory=list)


def _evaluate_potential(potential, x: np.ndarray) -> np.ndarray:
    try:
        v = np.asarray(potential(x), dtype=float)
    except (TypeError, ValueError):
        v = np.array([float(potential(xi)) for xi in x])
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape).astype(float)
    return v


def discretize(potential, grid: Grid, *, prefactor: float = 1.0) -> DiscretizedOperator:
    """Central-difference matrix of -prefactor * d^2/dx^2 + V on the grid.

    Raises PotentialSingular when |V| exceeds 1e12 at a grid point or is not
    finite there; the caller must move the domain off the singularity.
    """
    x = grid.points
    v = _evaluate_potential(potential, x)
    bad = ~np.isfinite(v) | (np.abs(v) > POTENTIAL_CAP)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PotentialSingular(
            f"potential is {v[i]!r} at x = {x[i]!r}; shrink or shift the domain"
        )
    h = grid.h
    kin = prefactor / h**2
    diag = 2.0 * kin + v
    off = np.full(grid.n_points - 1, -kin)
    corner = -kin if grid.boundary == PERIODIC else None
    return DiscretizedOperator(diag, off, grid.boundary, corner, grid, prefactor)


def sturm_count_below(diagonal: np.ndarray, off_diagonal: np.ndarray, x: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal matrix below x.

    Classic negative-pivot count of the shifted LDL^T recurrence; reference
    implementation for tests, not used by the production solve path.
    """
    count = 0
    q = float(diagonal[0]) - x
    if q < 0.0:
        count += 1
    tiny = 1e-300
    for i in range(1, len(diagonal)):
        if q == 0.0:
            q = tiny
        q = (float(diagonal[i]) - x) - float(off_diagonal[i - 1]) ** 2 / q
        if q < 0.0:
            count += 1
    return count


def _solve_sector(diag: np.ndarray, off: np.ndarray, k: int):
    try:
        return eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - degenerate cluster
        raise ConvergenceFailure(str(exc)) from exc


def _symmetrized_ring_diagonal(diag: np.ndarray) -> np.ndarray:
    tail = diag[1:]
    mismatch = float(np.max(np.abs(tail - tail[::-1]))) if tail.size else 0.0
    scale = max(1.0, float(np.max(np.abs(diag))))
    if mismatch > 1e-6 * scale:
        raise ValueError(
            "periodic solves need a reflection-symmetric potential about x_min "
            f"(max asymmetry {mismatch:.3e})"
        )
    out = diag.copy()
    out[1:] = 0.5 * (tail + tail[::-1])
    return out


def _eigen_periodic(op: DiscretizedOperator, k: int):
    """Even/odd reflection-parity split of the ring into two tridiagonals."""
    n = op.n
    m = n // 2
    diag = _symmetrized_ring_diagonal(op.diagonal)
    coupling = float(op.off_diagonal[0])

    d_even = diag[: m + 1].copy()
    e_even = np.full(m, coupling)
    e_even[0] = math.sqrt(2.0) * coupling
    e_even[-1] = math.sqrt(2.0) * coupling
    k_even = min(k, m + 1)
    w_even, u_even = _solve_sector(d_even, e_even, k_even)

    d_odd = diag[1:m].copy()
    e_odd = np.full(m - 2, coupling)
    k_odd = min(k, m - 1)
    w_odd, u_odd = _solve_sector(d_odd, e_odd, k_odd)

    merged = sorted(
        [(w, "even", j) for j, w in enumerate(w_even)]
        + [(w, "odd", j) for j, w in enumerate(w_odd)],
        key=lambda t: (t[0], t[1]),
    )[:k]

    eigenvalues = np.array([t[0] for t in merged])
    vectors = np.empty((n, k))
    for col, (_, sector, j) in enumerate(merged):
        full = np.empty(n)
        if sector == "even":
            u = u_even[:, j]
            full[0] = math.sqrt(2.0) * u[0]
            full[m] = math.sqrt(2.0) * u[m]
            full[1:m] = u[1:m]
            full[m + 1:] = u[1:m][::-1]
        else:
            u = u_odd[:, j]
            full[0] = 0.0
            full[m] = 0.0
            full[1:m] = u
            full[m + 1:] = -u[::-1]
        vectors[:, col] = full / np.linalg.norm(full)
    return eigenvalues, vectors


def _clusters(eigenvalues: np.ndarray) -> list:
    groups = []
    current = [0]
    for i in range(1, len(eigenvalues)):
        ref = max(1.0, abs(eigenvalues[i]), abs(eigenvalues[current[0]]))
        if abs(eigenvalues[i] - eigenvalues[current[0]]) <= CLUSTER_RTOL * ref:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return groups


def eigen_lowest(op: DiscretizedOperator, k: int) -> EigenResult:
    """The k smallest eigenpairs of the discretized operator.

    Eigenvectors are normalized to unit discrete L2 norm (h-weighted).
    """
    if not 1 <= k <= op.n // 4:
        raise ValueError(f"k must satisfy 1 <= k <= n/4 = {op.n // 4}, got {k}")
    if op.boundary == PERIODIC:
        w, v = _eigen_periodic(op, k)
    else:
        w, v = _solve_sector(op.diagonal, op.off_diagonal, k)
    v = v / math.sqrt(op.grid.h)
    return EigenResult(w, v, op.grid, None, _clusters(w))


def refine(op_factory, grid: Grid, k: int) -> EigenResult:
    """Solve at h and h/2 and Richardson-extrapolate the h^2 error away.

    ``op_factory`` maps a Grid to a DiscretizedOperator.  The returned
    eigenvalues are the extrapolated ones; eigenvectors and grid are from the
    fine solve; ``convergence_estimate[j] = |extrapolated_j - fine_j|``.
    """
    coarse = eigen_lowest(op_factory(grid), k)
    fine_grid = grid.refined()
    fine = eigen_lowest(op_factory(fine_grid), k)
    extrapolated = (4.0 * fine.eigenvalues - coarse.eigenvalues) / 3.0
    estimate = np.abs(extrapolated - fine.eigenvalues)
    return EigenResult(
        extrapolated,
        fine.eigenvectors,
        fine_grid,
        estimate,
        _clusters(extrapolated),
    )


def observed_order(e_h: float, e_h2: float, e_h4: float) -> float:
    """Convergence order from eigenvalues at spacings h, h/2, h/4."""
    return math.log2(abs(e_h - e_h2) / abs(e_h2 - e_h4))


def sign_changes(v: np.ndarray, threshold_frac: float = 1e-8) -> int:
    """Count strict sign alternations of a vector, ignoring near-zero entries."""
    cutoff = threshold_frac * float(np.max(np.abs(v)))
    signs = np.sign(v[np.abs(v) > cutoff])
    return int(np.sum(signs[1:] * signs[:-1] < 0))
