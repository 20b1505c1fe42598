"""Dense exact linear algebra over a prime field F_p.

Matrices are plain ``numpy`` integer arrays holding residues in ``[0, p)``.
Vectors are rows: a subspace is stored as the row space of a matrix in
reduced row-echelon form, which makes it a canonical representative.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

DTYPE = np.int64


class FieldMismatchError(ValueError):
    """Raised when objects defined over different primes are combined."""


def as_matrix(m, p: int, cols: Optional[int] = None) -> np.ndarray:
    a = np.array(m, dtype=DTYPE)
    if a.ndim == 1:
        if a.size == 0 and cols is not None:
            return np.zeros((0, cols), dtype=DTYPE)
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    return a % p


def as_rows(v, ambient_dim: int, p: int) -> np.ndarray:
    """View ``v`` (one vector or a stack of row vectors) as a 2-d array mod p."""
    a = np.asarray(v, dtype=DTYPE)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2 or a.shape[1] != ambient_dim:
        raise ValueError(f"expected vectors of length {ambient_dim}, got shape {a.shape}")
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    # entries stay below p**2 * inner, far from int64 overflow at desk scale
    return (a @ b) % p


def rref(m, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form of ``m`` over F_p and its pivot columns."""
    a = np.array(m, dtype=DTYPE) % p
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * pow(lead, -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, tuple(pivots)


def rank(m, p: int) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def kernel_matrix(m, p: int) -> np.ndarray:
    """Rows form a basis of ``{x : m @ x = 0}`` (not yet reduced)."""
    a = np.asarray(m, dtype=DTYPE)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return identity(cols)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-r[row, f]) % p
    return basis


def kernel_basis(m, p: int) -> "Subspace":
    a = np.asarray(m, dtype=DTYPE)
    return Subspace(kernel_matrix(a, p), a.shape[1], p)


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """Return ``x`` with ``a @ x == b`` or ``None`` when inconsistent.

    Free variables are set to zero, so the particular solution is
    deterministic.
    """
    a = np.asarray(a, dtype=DTYPE) % p
    b = np.asarray(b, dtype=DTYPE) % p
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}")
    n = a.shape[1]
    if a.shape[0] == 0:
        return zeros(n, b.shape[1])
    aug, pivots = rref(np.hstack([a, b]), p)
    if pivots and pivots[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for row, pc in enumerate(pivots):
        x[pc] = aug[row, n:]
    return x


def inverse(m, p: int) -> np.ndarray:
    a = np.asarray(m, dtype=DTYPE)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug, pivots = rref(np.hstack([a, identity(n)]), p)
    if pivots[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return aug[:, n:]


def matrix_power(m: np.ndarray, k: int, p: int) -> np.ndarray:
    result = identity(m.shape[0])
    base = m % p
    while k:
        if k & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        k >>= 1
    return result


class Subspace:
    """Row space of a matrix, kept in reduced row-echelon form.

    Two ``Subspace`` objects spanning the same space have identical
    ``basis`` arrays, so equality and hashing are by value.
    """

    __slots__ = ("basis", "pivots", "ambient_dim", "p", "_key")

    def __init__(self, vectors, ambient_dim: int, p: int):
        v = np.asarray(vectors, dtype=DTYPE)
        if v.size == 0:
            v = zeros(0, ambient_dim)
        else:
            v = v.reshape(-1, ambient_dim) % p
        r, pivots = rref(v, p)
        self.basis = r[: len(pivots)]
        self.basis.setflags(write=False)
        self.pivots = pivots
        self.ambient_dim = ambient_dim
        self.p = p
        self._key = None

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(zeros(0, ambient_dim), ambient_dim, p)

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(identity(ambient_dim), ambient_dim, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check(self, other: "Subspace") -> None:
        if self.p != other.p:
            raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
        if self.ambient_dim != other.ambient_dim:
            raise ValueError(f"ambient mismatch: {self.ambient_dim} vs {other.ambient_dim}")

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.ambient_dim, self.basis.tobytes())
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.p == other.p and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"

    def contains(self, v) -> bool:
        v = as_rows(v, self.ambient_dim, self.p)
        if self.dim == 0:
            return not v.any()
        return rank(np.vstack([self.basis, v]), self.p) == self.dim

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        return other.dim == 0 or self.contains(other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # x @ U == y @ W  <=>  (x, -y) in ker of [U; W]^T
        stacked = np.vstack([self.basis, (-other.basis) % self.p])
        ker = kernel_matrix(stacked.T, self.p)
        if ker.shape[0] == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        return Subspace(matmul(ker[:, : self.dim], self.basis, self.p), self.ambient_dim, self.p)

    def complement(self) -> np.ndarray:
        """Unit vectors at the non-pivot coordinates (a canonical complement)."""
        free = [c for c in range(self.ambient_dim) if c not in set(self.pivots)]
        comp = zeros(len(free), self.ambient_dim)
        for i, c in enumerate(free):
            comp[i, c] = 1
        return comp

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of the rows of ``v`` in terms of ``basis``."""
        v = as_rows(v, self.ambient_dim, self.p)
        if self.dim == 0:
            if v.any():
                raise ValueError("vector not in subspace")
            return zeros(v.shape[0], 0)
        # the basis is in rref, so coordinates are read off the pivot columns
        coords = v[:, list(self.pivots)]
        if not np.array_equal(matmul(coords, self.basis, self.p), v):
            raise ValueError("vector not in subspace")
        return coords


def subspace_ops(u: Subspace, v: Subspace) -> tuple[Subspace, Subspace]:
    """Sum and intersection of two subspaces of the same ambient space."""
    return u + v, u.intersection(v)


def span(vectors: Sequence, ambient_dim: int, p: int) -> Subspace:
    return Subspace(vectors, ambient_dim, p)


class Echelon:
    """Incrementally grown echelon basis, for greedy independence tests."""

    def __init__(self, ambient_dim: int, p: int):
        self.ambient_dim = ambient_dim
        self.p = p
        self.rows: dict[int, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=DTYPE).reshape(-1) % self.p
        for c in sorted(self.rows):
            if v[c]:
                v = (v - v[c] * self.rows[c]) % self.p
        return v

    def add(self, v) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for k, row in self.rows.items():
            if row[c]:
                self.rows[k] = (row - row[c] * v) % self.p
        self.rows[c] = v
        return True

    def subspace(self) -> Subspace:
        if not self.rows:
            return Subspace.zero(self.ambient_dim, self.p)
        return Subspace(np.vstack([self.rows[c] for c in sorted(self.rows)]), self.ambient_dim, self.p)


def extend_to_basis(sub: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Greedy: indices of ``candidates`` rows that extend the row space of ``sub``."""
    ech = Echelon(candidates.shape[1], p)
    for row in as_rows(sub, candidates.shape[1], p) if np.asarray(sub).size else ():
        ech.add(row)
    return [i for i, row in enumerate(candidates) if ech.add(row)]
