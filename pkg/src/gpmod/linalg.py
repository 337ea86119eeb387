"""Exact dense linear algebra over a prime field.

All matrices are numpy int64 arrays with entries reduced modulo the field
prime p.  Zero-row and zero-column matrices are legal and denote maps to or
from the zero space.  Every routine is a deterministic function of its
inputs: pivots are always the leftmost nonzero column and the smallest
eligible row, so bases, projections and solutions are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoSolution, ShapeError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p; p must be prime and lie in [2, 2**31)."""

    p: int = 101

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p < 2**31 or not _is_prime(self.p):
            raise ValueError(f"field modulus must be a prime in [2, 2**31), got {self.p!r}")


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of F_p^n given by a matrix whose columns are independent."""

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def as_matrix(data, p: int) -> np.ndarray:
    """Coerce nested sequences or an array to an int64 matrix reduced mod p."""
    a = np.asarray(data, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got ndim={a.ndim}")
    return np.mod(a, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p.

    The inner dimension is split into chunks small enough that every
    intermediate sum stays below 2**63, so the result is exact for any
    prime below 2**31.
    """
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    k = a.shape[1]
    if k == 0:
        return zeros(a.shape[0], b.shape[1])
    step = max(1, (2**62) // max(1, (p - 1) ** 2))
    if k <= step:
        return (a @ b) % p
    acc = zeros(a.shape[0], b.shape[1])
    for i in range(0, k, step):
        acc = (acc + a[:, i : i + step] @ b[i : i + step, :]) % p
    return acc


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...], int]:
    """Reduced row-echelon form with unit pivots.

    Returns (reduced, pivot column indices, rank).  Pivot choice is the
    leftmost nonzero column, smallest row index.
    """
    r = np.mod(np.asarray(a, dtype=np.int64), p).copy()
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        inv = pow(int(r[row, col]), p - 2, p)
        r[row] = (r[row] * inv) % p
        others = np.nonzero(r[:, col])[0]
        others = others[others != row]
        if others.size:
            r[others] = (r[others] - np.outer(r[others, col], r[row])) % p
        pivots.append(col)
        row += 1
    return r, tuple(pivots), row


def rank(a: np.ndarray, p: int) -> int:
    return rref(a, p)[2]


def kernel_basis(a: np.ndarray, p: int) -> SubspaceBasis:
    """Basis of {v : a v = 0}, one column per free variable of the rref."""
    reduced, pivots, rk = rref(a, p)
    cols = a.shape[1]
    pivot_set = set(pivots)
    free = [j for j in range(cols) if j not in pivot_set]
    basis = zeros(cols, len(free))
    for k, j in enumerate(free):
        basis[j, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-int(reduced[i, j])) % p
    return SubspaceBasis(cols, basis)


def image_basis(a: np.ndarray, p: int) -> SubspaceBasis:
    """Basis of the column space: the original columns at pivot positions."""
    _, pivots, _ = rref(a, p)
    return SubspaceBasis(a.shape[0], np.mod(a[:, list(pivots)], p))


def cokernel(a: np.ndarray, p: int) -> tuple[int, np.ndarray]:
    """Quotient by the column space of a.

    Returns (dim, projection) where projection has full row rank
    rows(a) - rank(a) and projection @ a = 0.
    """
    left_null = kernel_basis(a.T % p, p)
    projection = left_null.basis.T.copy()
    return projection.shape[0], projection


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve a @ x = b, free variables set to 0.  Raises NoSolution."""
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"solve row mismatch: {a.shape} vs {b.shape}")
    aug = np.hstack([a, b]) % p
    reduced, pivots, _ = rref(aug, p)
    na = a.shape[1]
    if any(c >= na for c in pivots):
        raise NoSolution("right-hand side is outside the column span")
    x = zeros(na, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = reduced[i, na:]
    return x


def solve_left(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve x @ a = b (same pivot-variable convention, via transposes)."""
    return solve(a.T % p, b.T % p, p).T.copy()


def is_isomorphism(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] == rank(a, p)


def block_diag(blocks: list[np.ndarray]) -> np.ndarray:
    """Block-diagonal assembly; the empty list gives the 0 x 0 matrix."""
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def hstack(blocks: list[np.ndarray], rows: int) -> np.ndarray:
    """Horizontal concatenation that tolerates the empty list."""
    if not blocks:
        return zeros(rows, 0)
    return np.hstack(blocks)


def vstack(blocks: list[np.ndarray], cols: int) -> np.ndarray:
    if not blocks:
        return zeros(0, cols)
    return np.vstack(blocks)
