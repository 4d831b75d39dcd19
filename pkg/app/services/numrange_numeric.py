"""
Numerical-range boundaries of finite matrices via the support-function sweep.

For each angle alpha the largest eigenvalue of the Hermitian part of
exp(-i alpha) T is the support value, and its eigenvector gives a boundary
point. Consecutive support lines are intersected to rebuild the boundary.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from scipy import linalg as sla
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from app.core.exceptions import ConvergenceError, DomainError
from app.models.numrange import BoundaryPolyline, SupportSample
from app.models.operator import OperatorMatrix
from config import settings

logger = structlog.get_logger(__name__)

MatrixLike = Union[OperatorMatrix, np.ndarray]

# Angles closer than this are treated as the same grid point.
ANGLE_MATCH_TOLERANCE = 1e-9

# Rows of the point-to-segment distance table processed at once.
_HAUSDORFF_CHUNK = 512


def _entries(T: MatrixLike) -> np.ndarray:
    return T.entries if isinstance(T, OperatorMatrix) else np.asarray(T, dtype=complex)


def angle_grid(n: int) -> np.ndarray:
    """Uniform angles 2 pi i / n, i = 0..n-1."""
    if n < 1:
        raise DomainError(f"Angle grid needs at least one angle, got {n}")
    return 2.0 * np.pi * np.arange(n) / n


def hermitian_part(T: MatrixLike, alpha: float) -> np.ndarray:
    """H(alpha) = (exp(-i alpha) T + (exp(-i alpha) T)^*) / 2."""
    rotated = np.exp(-1j * alpha) * _entries(T)
    return 0.5 * (rotated + rotated.conj().T)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # Make the largest component real and positive so repeated runs agree.
    pivot = v[np.argmax(np.abs(v))]
    return v * (abs(pivot) / pivot) if pivot != 0 else v


def top_eigenpair(
    H: np.ndarray,
    tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> Tuple[float, np.ndarray]:
    """
    Largest eigenvalue of a Hermitian matrix and a unit eigenvector.

    Dense matrices up to settings.dense_eigen_max_n use a full Hermitian
    solve restricted to the top index; larger ones use Lanczos iteration
    started from a fixed pseudo-random vector.

    Raises:
        ConvergenceError: If the iteration cap is hit or the residual
            ||H v - lambda v|| exceeds tol * ||H||
    """
    tol = settings.eigen_tolerance if tol is None else tol
    max_iterations = settings.eigen_max_iterations if max_iterations is None else max_iterations
    H = np.asarray(H)
    n = H.shape[0]

    if n <= settings.dense_eigen_max_n:
        values, vectors = sla.eigh(H, subset_by_index=[n - 1, n - 1])
        lam, v = float(values[0]), vectors[:, 0]
    else:
        rng = np.random.default_rng(0)
        v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        try:
            values, vectors = eigsh(H, k=1, which="LA", v0=v0, tol=tol, maxiter=max_iterations)
        except ArpackNoConvergence as exc:
            best = math.inf
            for value, vector in zip(exc.eigenvalues, exc.eigenvectors.T):
                best = min(best, float(np.linalg.norm(H @ vector - value * vector)))
            raise ConvergenceError("Lanczos iteration did not converge", best) from exc
        lam, v = float(values[0]), vectors[:, 0]

    v = _fix_phase(v / np.linalg.norm(v))
    residual = float(np.linalg.norm(H @ v - lam * v))
    scale = max(float(np.linalg.norm(H, 1)), 1.0)
    if residual > 10.0 * tol * scale:
        raise ConvergenceError("Eigenpair residual above tolerance", residual)
    return lam, v


def _sample_at(entries: np.ndarray, alpha: float, tol: Optional[float]) -> SupportSample:
    try:
        lam, v = top_eigenpair(hermitian_part(entries, alpha), tol=tol)
    except ConvergenceError as exc:
        raise ConvergenceError(str(exc.args[0]), exc.best_residual, angle=alpha) from exc
    point = complex(np.vdot(v, entries @ v))
    return SupportSample(alpha=float(alpha), lam=lam, point=point)


def support_function(
    T: MatrixLike,
    angles: Sequence[float],
    threads: Optional[int] = None,
    tol: Optional[float] = None,
) -> List[SupportSample]:
    """
    Support values and boundary points of W(T) at the given angles.

    Args:
        T: Square matrix
        angles: Nonempty list of angles in radians
        threads: Worker count, defaults to settings.effective_threads()
        tol: Eigen tolerance, defaults to settings.eigen_tolerance

    Returns:
        Samples sorted by angle

    Raises:
        DomainError: If angles is empty
        ConvergenceError: Naming the angle whose eigen-solve failed
    """
    ordered = sorted(float(a) for a in angles)
    if not ordered:
        raise DomainError("Support sweep needs at least one angle")
    entries = _entries(T)
    workers = threads or settings.effective_threads()

    start_time = time.time()
    if workers == 1 or len(ordered) == 1:
        samples = [_sample_at(entries, alpha, tol) for alpha in ordered]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            samples = list(pool.map(lambda alpha: _sample_at(entries, alpha, tol), ordered))
    elapsed_ms = int((time.time() - start_time) * 1000)

    logger.info("Support sweep finished", n=entries.shape[0], angles=len(ordered), threads=workers, elapsed_ms=elapsed_ms)
    return samples


def support_values(samples: Sequence[SupportSample]) -> np.ndarray:
    return np.array([s.lam for s in samples], dtype=float)


def support_point_residual(samples: Sequence[SupportSample]) -> float:
    """max |Re(exp(-i alpha) point) - lambda| over the samples."""
    return max(abs((np.exp(-1j * s.alpha) * s.point).real - s.lam) for s in samples)


def hull_from_support(samples: Sequence[SupportSample]) -> BoundaryPolyline:
    """
    Intersect consecutive support lines x cos(alpha) + y sin(alpha) = lambda.

    Raises:
        DomainError: If fewer than three samples are given, two consecutive
            angles are closer than settings.parallel_line_threshold, or the
            angles leave a gap of pi or more
    """
    if len(samples) < 3:
        raise DomainError(f"Hull reconstruction needs at least 3 samples, got {len(samples)}")
    alpha = np.array([s.alpha for s in samples]) % (2.0 * np.pi)
    order = np.argsort(alpha, kind="stable")
    alpha = alpha[order]
    lam = support_values(samples)[order]

    alpha_next = np.roll(alpha, -1)
    lam_next = np.roll(lam, -1)
    gaps = (alpha_next - alpha) % (2.0 * np.pi)
    if np.min(gaps) < settings.parallel_line_threshold:
        raise DomainError(f"Consecutive support lines are nearly parallel (gap {np.min(gaps):.3e})")
    if np.max(gaps) >= np.pi:
        raise DomainError("Support angles leave a gap of pi or more; the hull is unbounded")

    det = np.sin(alpha_next - alpha)
    x = (lam * np.sin(alpha_next) - lam_next * np.sin(alpha)) / det
    y = (np.cos(alpha) * lam_next - np.cos(alpha_next) * lam) / det
    return BoundaryPolyline(points=x + 1j * y, closed=True)


def polyline_from_points(points: Sequence[complex], closed: bool = True) -> BoundaryPolyline:
    return BoundaryPolyline(points=np.asarray(points, dtype=complex), closed=closed)


def _point_to_segments(points: np.ndarray, starts: np.ndarray, ends: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest of the given segments."""
    edges = ends - starts
    lengths2 = np.abs(edges) ** 2
    safe = np.where(lengths2 > 0.0, lengths2, 1.0)
    nearest = np.empty(points.size, dtype=float)
    for lo in range(0, points.size, _HAUSDORFF_CHUNK):
        chunk = points[lo:lo + _HAUSDORFF_CHUNK, None]
        offset = chunk - starts[None, :]
        t = np.real(offset * np.conj(edges)[None, :]) / safe[None, :]
        t = np.clip(np.where(lengths2[None, :] > 0.0, t, 0.0), 0.0, 1.0)
        nearest[lo:lo + _HAUSDORFF_CHUNK] = np.min(np.abs(offset - t * edges[None, :]), axis=1)
    return nearest


def hausdorff(A: BoundaryPolyline, B: BoundaryPolyline) -> float:
    """Symmetric Hausdorff distance, measured from vertices to segments."""
    a_starts, a_ends = A.segments()
    b_starts, b_ends = B.segments()
    forward = np.max(_point_to_segments(A.points, b_starts, b_ends))
    backward = np.max(_point_to_segments(B.points, a_starts, a_ends))
    return float(max(forward, backward))


def symmetry_defect(samples: Sequence[SupportSample], p: int) -> float:
    """
    max over the grid of |Lambda(alpha) - Lambda(alpha + 2 pi / p)|.

    Raises:
        DomainError: If p < 1 or some shifted angle is not on the grid
    """
    if p < 1:
        raise DomainError(f"Rotation order must be positive, got p={p}")
    two_pi = 2.0 * np.pi
    alpha = np.array([s.alpha for s in samples]) % two_pi
    lam = support_values(samples)
    order = np.argsort(alpha)
    alpha, lam = alpha[order], lam[order]

    shifted = (alpha + two_pi / p) % two_pi
    index = np.searchsorted(alpha, shifted)
    best = np.empty(alpha.size, dtype=int)
    best_gap = np.full(alpha.size, np.inf)
    for candidate in (index - 1, index % alpha.size):
        candidate = candidate % alpha.size
        gap = np.abs(alpha[candidate] - shifted)
        gap = np.minimum(gap, two_pi - gap)
        better = gap < best_gap
        best[better] = candidate[better]
        best_gap[better] = gap[better]
    if np.max(best_gap) > ANGLE_MATCH_TOLERANCE:
        raise DomainError(f"Angle grid is not closed under rotation by 2*pi/{p}")
    return float(np.max(np.abs(lam - lam[best])))


def is_convex(polyline: BoundaryPolyline, tol: Optional[float] = None) -> bool:
    """True when all turns along the closed polyline have one orientation, up to tol."""
    tol = settings.convexity_tolerance if tol is None else tol
    pts = polyline.points
    if pts.size < 3:
        return True
    edges = np.roll(pts, -1) - pts
    edges = edges[np.abs(edges) > tol]
    turns = np.imag(np.conj(edges) * np.roll(edges, -1))
    return bool(np.all(turns >= -tol) or np.all(turns <= tol))
