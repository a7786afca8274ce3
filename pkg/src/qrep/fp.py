"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced modulo p. Zero-sized
matrices (0 x n, n x 0, 0 x 0) are legal everywhere and behave as empty
linear maps. All operations are pure; a `PrimeField` instance only carries
the modulus and is safe to share between threads.

The row reduction kernel is JIT-compiled; everything else is thin numpy
assembly around it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import numpy as np
from numba import njit

DEFAULT_PRIME = 5


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@njit(cache=True)
def _rref_inplace(a: np.ndarray, p: int):  # pragma: no cover - compiled
    """Reduce `a` to reduced row echelon form modulo p, in place.

    Returns (rank, pivots) with `pivots` an int64 array of length rank.
    """
    rows, cols = a.shape
    cap = rows if rows < cols else cols
    pivots = np.empty(cap, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                pr = i
                break
        if pr == -1:
            continue
        if pr != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[pr, j]
                a[pr, j] = t
        # scalar inverse by Fermat's little theorem
        x = a[r, c]
        inv = 1
        e = p - 2
        while e:
            if e & 1:
                inv = inv * x % p
            x = x * x % p
            e >>= 1
        if inv != 1:
            for j in range(cols):
                a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            f = a[i, c]
            if i != r and f != 0:
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a (small) prime p."""

    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"modulus must be prime, got {self.p}")

    # -- construction -----------------------------------------------------

    def mat(self, data, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Normalize `data` to an int64 matrix with entries in [0, p)."""
        a = np.asarray(data, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise ValueError(f"expected a matrix, got ndim={a.ndim}")
        return np.ascontiguousarray(a % self.p)

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.p

    # -- elimination -------------------------------------------------------

    def rref(self, a: np.ndarray) -> tuple[int, list[int], np.ndarray]:
        """Reduced row echelon form: (rank, pivot columns, reduced matrix)."""
        r = self.mat(a).copy()
        rank, piv = _rref_inplace(r, self.p)
        return int(rank), [int(c) for c in piv], r

    def rank(self, a: np.ndarray) -> int:
        r = self.mat(a).copy()
        rank, _ = _rref_inplace(r, self.p)
        return int(rank)

    def kernel_basis(self, a: np.ndarray) -> np.ndarray:
        """Columns form a basis of the null space {x : a x = 0}.

        Shape (cols, cols - rank).
        """
        a = self.mat(a)
        cols = a.shape[1]
        rank, piv, red = self.rref(a)
        free = [c for c in range(cols) if c not in set(piv)]
        basis = self.zeros(cols, len(free))
        for k, fc in enumerate(free):
            basis[fc, k] = 1
            for i, pc in enumerate(piv):
                basis[pc, k] = (-red[i, fc]) % self.p
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One solution x of a x = b (b a matrix), or None if inconsistent."""
        a = self.mat(a)
        b = self.mat(b)
        if a.shape[0] != b.shape[0]:
            raise ValueError("row count mismatch")
        na = a.shape[1]
        aug = np.hstack([a, b])
        rank, piv, red = self.rref(aug)
        x = self.zeros(na, b.shape[1])
        for i, c in enumerate(piv):
            if c >= na:
                return None
            x[c] = red[i, na:]
        return x

    def coords(self, basis: np.ndarray, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of `vectors` in a full-column-rank `basis`."""
        x = self.solve(basis, vectors)
        if x is None:
            raise ValueError("vectors do not lie in the span of the basis")
        return x

    # -- subspaces ---------------------------------------------------------

    def column_span_basis(self, a: np.ndarray) -> np.ndarray:
        """Canonical basis (as columns) of the column space of `a`."""
        a = self.mat(a)
        rank, _, red = self.rref(a.T)
        return np.ascontiguousarray(red[:rank].T)

    def subspace_sum(self, bases: Sequence[np.ndarray], ambient: int) -> np.ndarray:
        """Basis of the sum of the column spans, inside F_p^ambient."""
        mats = [self.mat(b) for b in bases]
        for b in mats:
            if b.shape[0] != ambient:
                raise ValueError("ambient dimension mismatch")
        if not mats:
            return self.zeros(ambient, 0)
        return self.column_span_basis(np.hstack(mats))

    def subspace_dim(self, basis: np.ndarray) -> int:
        return self.rank(basis)

    def complement_basis(self, span: np.ndarray, ambient: int) -> np.ndarray:
        """Standard basis vectors completing the span to all of F_p^ambient."""
        span = self.mat(span)
        if span.shape[0] != ambient:
            raise ValueError("ambient dimension mismatch")
        _, piv, _ = self.rref(np.hstack([span, self.eye(ambient)]))
        extra = [c - span.shape[1] for c in piv if c >= span.shape[1]]
        basis = self.zeros(ambient, len(extra))
        for k, idx in enumerate(extra):
            basis[idx, k] = 1
        return basis

    def quotient_projection(self, span: np.ndarray, ambient: int) -> np.ndarray:
        """A full-row-rank matrix q with ker q = column span of `span`."""
        span = self.mat(span)
        if span.shape[0] != ambient:
            raise ValueError("ambient dimension mismatch")
        return np.ascontiguousarray(self.kernel_basis(span.T).T)

    # -- enumeration (used by brute-force closure oracles) ------------------

    def iter_vectors(self, n: int) -> Iterator[np.ndarray]:
        """All vectors of F_p^n in lexicographic order."""
        for tup in product(range(self.p), repeat=n):
            yield np.array(tup, dtype=np.int64)

    def count_subspaces(self, n: int) -> int:
        """Number of linear subspaces of F_p^n (sum of Gaussian binomials)."""
        total = 0
        for r in range(n + 1):
            num = 1
            den = 1
            for k in range(r):
                num *= self.p ** (n - k) - 1
                den *= self.p ** (r - k) - 1
            total += num // den
        return total

    def iter_subspaces(self, n: int) -> Iterator[np.ndarray]:
        """All subspaces of F_p^n, each as a canonical column-basis matrix.

        Enumerates reduced row echelon patterns: rank ascending, then pivot
        columns and free entries lexicographically. Deterministic.
        """
        for r in range(n + 1):
            for piv in combinations(range(n), r):
                pivset = set(piv)
                cells = [
                    (i, j)
                    for i in range(r)
                    for j in range(piv[i] + 1, n)
                    if j not in pivset
                ]
                for values in product(range(self.p), repeat=len(cells)):
                    rows = self.zeros(r, n)
                    for i in range(r):
                        rows[i, piv[i]] = 1
                    for (i, j), val in zip(cells, values):
                        rows[i, j] = val
                    yield np.ascontiguousarray(rows.T)


def iter_coefficient_vectors(p: int, n: int) -> Iterable[tuple[int, ...]]:
    """All coefficient tuples of F_p^n, lexicographically."""
    return product(range(p), repeat=n)
