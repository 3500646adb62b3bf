"""Dense complex-matrix primitives: Kronecker products, column-stacking
vectorization, bipartite realignment, tolerance-based numerical rank,
Schmidt rank, span dimension, and proportionality testing.

Conventions used throughout the package:

* Matrices are 2-D ``numpy.ndarray`` objects with ``complex128`` entries.
* Vectorization stacks successive *columns*, so ``vectorize(m)[k*rows + r]
  == m[r, k]``.
* In every Kronecker product the *first* factor is the slow index:
  ``kron(a, b)[(i1, i2), (j1, j2)] == a[i1, j1] * b[i2, j2]`` with composite
  row index ``i1 * b.rows + i2``.
* ``realign_bipartite`` is indexed so that for a single product term the
  identity ``realign(kron(a, b)) == vectorize(b) @ vectorize(a).T`` holds
  exactly, and consequently for any weighted sum of product terms the
  realignment factors as (B columns) x diag(coefficients) x (A columns)^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, NumericError, ShapeError, SizeBudgetError

# Hard cap on the number of entries any single matrix produced by kron/assemble
# may have.  Guards against accidentally tensoring up astronomically large
# operators; generous enough for every family this package targets.
MAX_MATRIX_ELEMENTS = 1 << 24

_EPS = float(np.finfo(np.float64).eps)


def as_matrix(m) -> np.ndarray:
    """Coerce input to a 2-D complex ndarray, rejecting non-finite entries."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise NumericError("matrix contains non-finite entries")
    return arr


@dataclass(frozen=True)
class TolerancePolicy:
    """Cutoff policy for numerical rank decisions.

    ``relative_rank_threshold`` is the fraction of the largest singular value
    below which singular values count as zero.  ``None`` selects the
    dimension-scaled default ``max(rows, cols) * eps * 1e3`` (about
    ``1e-12 * dim``).  ``absolute_floor`` is an unconditional lower cutoff.
    """

    relative_rank_threshold: float | None = None
    absolute_floor: float = 1e-14

    def __post_init__(self):
        rel = self.relative_rank_threshold
        if rel is not None and not (0.0 <= rel < 1.0):
            raise ValueError(f"relative_rank_threshold must lie in [0, 1), got {rel}")
        if self.absolute_floor < 0.0:
            raise ValueError("absolute_floor must be nonnegative")

    def relative_for(self, rows: int, cols: int) -> float:
        if self.relative_rank_threshold is not None:
            return self.relative_rank_threshold
        return max(rows, cols) * _EPS * 1e3

    def cutoff(self, sigma_max: float, rows: int, cols: int) -> float:
        return max(self.relative_for(rows, cols) * sigma_max, self.absolute_floor)

    def to_dict(self) -> dict:
        return {
            "relative_rank_threshold": self.relative_rank_threshold,
            "absolute_floor": self.absolute_floor,
        }


DEFAULT_TOLERANCE = TolerancePolicy()


def kron(a, b) -> np.ndarray:
    """Kronecker product with the first factor as the slow index."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.size * b.size > MAX_MATRIX_ELEMENTS:
        raise SizeBudgetError(
            f"kron result would have {a.size * b.size} entries "
            f"(budget {MAX_MATRIX_ELEMENTS})"
        )
    return np.kron(a, b)


def vectorize(m) -> np.ndarray:
    """Column-stack a matrix into a (rows*cols, 1) column vector."""
    m = as_matrix(m)
    return m.reshape(-1, 1, order="F")


def unvectorize(v, shape: tuple[int, int]) -> np.ndarray:
    """Inverse of :func:`vectorize` for a target (rows, cols) shape."""
    arr = np.asarray(v, dtype=np.complex128).reshape(-1)
    rows, cols = shape
    if arr.size != rows * cols:
        raise ShapeError(f"cannot reshape length-{arr.size} vector to {shape}")
    return arr.reshape((rows, cols), order="F")


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))


def _svdvals(m: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericError(
            f"SVD failed on {m.shape[0]}x{m.shape[1]} matrix "
            f"(frobenius norm {np.linalg.norm(m):.3e}): {exc}"
        ) from exc


def numerical_rank(m, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Count singular values above the policy cutoff."""
    m = as_matrix(m)
    if m.size == 0:
        return 0
    sigma = _svdvals(m)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0
    cut = tol.cutoff(float(sigma[0]), *m.shape)
    return int(np.count_nonzero(sigma > cut))


def realign_bipartite(s, dims: tuple[int, int, int, int]) -> np.ndarray:
    """Reshuffle a bipartite operator so its rank equals the Schmidt rank.

    ``dims`` is ``(a_out, a_in, b_out, b_in)`` with the A party as the slow
    tensor index of ``s``.  The output has shape ``(b_out*b_in, a_out*a_in)``
    and satisfies ``out[vec(b_out,b_in) index of (k,l), vec(a_out,a_in) index
    of (m,n)] == s[(m,k), (n,l)]``, so each A-indexed block of ``s`` becomes
    one column of the result.
    """
    s = as_matrix(s)
    a_out, a_in, b_out, b_in = dims
    if min(dims) < 1:
        raise ShapeError(f"dimensions must be positive, got {dims}")
    if s.shape != (a_out * b_out, a_in * b_in):
        raise ShapeError(
            f"matrix shape {s.shape} does not match dims {dims} "
            f"(expected {(a_out * b_out, a_in * b_in)})"
        )
    blocks = s.reshape(a_out, b_out, a_in, b_in)
    # Row of the result is the column-stacked (k, l) pair, column the
    # column-stacked (m, n) pair; both match the vectorize() layout.
    return blocks.transpose(3, 1, 2, 0).reshape(b_out * b_in, a_out * a_in)


def schmidt_rank(
    s, dims: tuple[int, int, int, int], tol: TolerancePolicy = DEFAULT_TOLERANCE
) -> int:
    """Numerical rank of the bipartite realignment of ``s``."""
    return numerical_rank(realign_bipartite(s, dims), tol)


def span_dimension(matrices, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> int:
    """Dimension of the linear span of a list of same-shaped matrices."""
    mats = [as_matrix(m) for m in matrices]
    if not mats:
        return 0
    shape = mats[0].shape
    for m in mats[1:]:
        if m.shape != shape:
            raise ShapeError(f"span members disagree in shape: {shape} vs {m.shape}")
    stacked = np.hstack([vectorize(m) for m in mats])
    return numerical_rank(stacked, tol)


def proportional(a, b, tol: float = 1e-10) -> complex | None:
    """Return ``lam`` with ``a ~= lam * b`` (Frobenius-relative), else None.

    The scalar is read off at the largest-magnitude entry of ``b`` to avoid
    dividing by near-zeros.  Both inputs must be nonzero.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    norm_a = frobenius(a)
    norm_b = frobenius(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise DegenerateInputError("proportionality is undefined for a zero matrix")
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    lam = complex(a[idx] / b[idx])
    if frobenius(a - lam * b) <= tol * norm_a:
        return lam
    return None
