"""Exact dense linear algebra over a prime field F_p.

Matrices are immutable ``int64`` numpy arrays reduced mod p. The prime is kept
below 2**16 so that a dot product of two rows never leaves the int64 range.
Every basis-producing function returns a canonical (RREF-derived) basis, so two
runs on equal input agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from constants import MAX_PRIME


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def check_prime(p: int) -> int:
    """Return ``p`` if it is an accepted modulus, raise ``ValueError`` otherwise."""
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus {p!r} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"modulus {p} is too large (must be below {MAX_PRIME})")
    return int(p)


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise ValueError(f"{self.value} is not reduced mod {self.p}")

    def __int__(self) -> int:
        return self.value

    def __add__(self, other: FpScalar) -> FpScalar:
        return FpScalar((self.value + other.value) % self.p, self.p)

    def __mul__(self, other: FpScalar) -> FpScalar:
        return FpScalar((self.value * other.value) % self.p, self.p)

    def inverse(self) -> FpScalar:
        return FpScalar(pow(self.value, -1, self.p), self.p)


class FpMatrix:
    """Dense matrix over F_p acting on column vectors.

    ``0 x n`` and ``n x 0`` matrices are legal and stand for maps to and from
    the zero space.
    """

    __slots__ = ("_data", "p")

    def __init__(self, data, p: int, shape: tuple[int, int] | None = None):
        arr = np.array(data, dtype=np.int64)
        if arr.size == 0 and (shape is not None or arr.ndim != 2):
            arr = np.zeros(shape if shape is not None else (0, 0), dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be two-dimensional, got shape {arr.shape}")
        if shape is not None and arr.shape != tuple(shape):
            raise ValueError(f"matrix data has shape {arr.shape}, expected {tuple(shape)}")
        arr %= p
        arr.setflags(write=False)
        self._data = arr
        self.p = p

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> FpMatrix:
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> FpMatrix:
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def from_columns(cls, columns: Sequence[np.ndarray], rows: int, p: int) -> FpMatrix:
        """Stack 1-D vectors of length ``rows`` as columns; no vectors gives ``rows x 0``."""
        if not columns:
            return cls.zeros(rows, 0, p)
        return cls(np.column_stack([np.asarray(c, dtype=np.int64).reshape(rows) for c in columns]), p)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def T(self) -> FpMatrix:
        return FpMatrix(self._data.T, self.p)

    def entry(self, i: int, j: int) -> FpScalar:
        return FpScalar(int(self._data[i, j]), self.p)

    def __getitem__(self, key) -> FpMatrix:
        block = self._data[key]
        if block.ndim != 2:
            raise IndexError("matrix slicing must keep both axes; use entry() for scalars")
        return FpMatrix(block, self.p, shape=block.shape)

    def _check(self, other: FpMatrix) -> None:
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"moduli differ: {self.p} vs {other.p}")

    def __matmul__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix(self._data @ other._data, self.p, shape=(self.rows, other.cols))

    def __add__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix(self._data + other._data, self.p, shape=self.shape)

    def __sub__(self, other: FpMatrix) -> FpMatrix:
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"cannot subtract {other.shape} from {self.shape}")
        return FpMatrix(self._data - other._data, self.p, shape=self.shape)

    def __neg__(self) -> FpMatrix:
        return FpMatrix(-self._data, self.p, shape=self.shape)

    def scale(self, c: int) -> FpMatrix:
        return FpMatrix(self._data * (int(c) % self.p), self.p, shape=self.shape)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and np.array_equal(self._data, other._data)

    def __hash__(self) -> int:
        return hash((self.shape, self.p, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self._data.tolist()}, p={self.p}, shape={self.shape})"

    def is_zero(self) -> bool:
        return not self._data.any()

    def rank(self) -> int:
        return len(rref(self)[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> FpMatrix:
        if self.rows != self.cols:
            raise ValueError(f"non-square matrix {self.shape} has no inverse")
        inv = solve(self, FpMatrix.identity(self.rows, self.p))
        if inv is None:
            raise ValueError("matrix is singular")
        return inv

    def tolist(self) -> list[list[int]]:
        return self._data.tolist()


def hstack(blocks: Sequence[FpMatrix], rows: int, p: int) -> FpMatrix:
    if not blocks:
        return FpMatrix.zeros(rows, 0, p)
    return FpMatrix(np.hstack([b.data for b in blocks]), p, shape=(rows, sum(b.cols for b in blocks)))


def vstack(blocks: Sequence[FpMatrix], cols: int, p: int) -> FpMatrix:
    if not blocks:
        return FpMatrix.zeros(0, cols, p)
    return FpMatrix(np.vstack([b.data for b in blocks]), p, shape=(sum(b.rows for b in blocks), cols))


def block_diag(blocks: Iterable[FpMatrix], p: int) -> FpMatrix:
    blocks = list(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.rows, c:c + b.cols] = b.data
        r += b.rows
        c += b.cols
    return FpMatrix(out, p, shape=(rows, cols))


def kron(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Kronecker product; works when either factor has an empty axis."""
    out = np.einsum("ij,kl->ikjl", a.data, b.data).reshape(a.rows * b.rows, a.cols * b.cols)
    return FpMatrix(out, a.p, shape=(a.rows * b.rows, a.cols * b.cols))


def rref(M: FpMatrix) -> tuple[FpMatrix, list[int]]:
    """Gauss-Jordan elimination mod p; returns the reduced form and its pivot columns."""
    p = M.p
    R = np.array(M.data, dtype=np.int64)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return FpMatrix(R, p, shape=(rows, cols)), pivots


def nullspace_basis(M: FpMatrix) -> FpMatrix:
    """Columns form the canonical basis of {x : Mx = 0}, one per free column."""
    R, pivots = rref(M)
    n = M.cols
    taken = set(pivots)
    free = [j for j in range(n) if j not in taken]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = -R.data[i, f]
    return FpMatrix(basis, M.p, shape=(n, len(free)))


def image_basis(M: FpMatrix) -> FpMatrix:
    """Canonical basis of the column space: the nonzero rows of rref(M^T), as columns."""
    R, pivots = rref(M.T)
    return FpMatrix(R.data[:len(pivots)].T, M.p, shape=(M.rows, len(pivots)))


def complement_basis(S: FpMatrix, n: int) -> FpMatrix:
    """Identity columns completing the span of ``S`` (an ``n x k`` matrix) to F_p^n."""
    _, pivots = rref(FpMatrix(S.data.T, S.p, shape=(S.cols, n)))
    taken = set(pivots)
    cols = [j for j in range(n) if j not in taken]
    basis = np.zeros((n, len(cols)), dtype=np.int64)
    for k, j in enumerate(cols):
        basis[j, k] = 1
    return FpMatrix(basis, S.p, shape=(n, len(cols)))


def quotient_projection(S: FpMatrix, n: int) -> tuple[FpMatrix, FpMatrix]:
    """Projection F_p^n -> F_p^n / span(S) and the section through the canonical complement.

    Returns ``(pi, section)`` with ``pi @ S == 0`` and ``pi @ section == I``.
    """
    span = image_basis(S)
    section = complement_basis(span, n)
    full = hstack([span, section], n, S.p)
    inverse = full.inverse()
    pi = inverse[span.cols:, :]
    return pi, section


def solve(A: FpMatrix, B: FpMatrix) -> FpMatrix | None:
    """Return X with A @ X == B, or None when some column of B is outside the image of A.

    Free variables are set to zero, so the witness is deterministic.
    """
    if A.rows != B.rows:
        raise ValueError(f"row mismatch: A is {A.shape}, B is {B.shape}")
    if A.p != B.p:
        raise ValueError(f"moduli differ: {A.p} vs {B.p}")
    R, pivots = rref(hstack([A, B], A.rows, A.p))
    if any(c >= A.cols for c in pivots):
        return None
    X = np.zeros((A.cols, B.cols), dtype=np.int64)
    for i, c in enumerate(pivots):
        X[c] = R.data[i, A.cols:]
    return FpMatrix(X, A.p, shape=(A.cols, B.cols))


def solve_vector(A: FpMatrix, b: np.ndarray) -> np.ndarray | None:
    """``solve`` for a single right-hand side given as a 1-D vector."""
    X = solve(A, FpMatrix(np.asarray(b, dtype=np.int64).reshape(A.rows, 1), A.p, shape=(A.rows, 1)))
    return None if X is None else X.data[:, 0].copy()


class LinearSolver:
    """``solve_vector`` against one fixed matrix, for many right-hand sides.

    The first solve is a plain elimination. From the second on, the row
    operations ``E`` with ``E @ A == rref(A)`` are kept, so each solve is one
    matrix-vector product. Witnesses agree with ``solve_vector``.
    """

    __slots__ = ("A", "_ops", "_pivots", "_calls")

    def __init__(self, A: FpMatrix):
        self.A = A
        self._ops: np.ndarray | None = None
        self._pivots: list[int] = []
        self._calls = 0

    def _factor(self) -> None:
        A = self.A
        R, pivots = rref(hstack([A, FpMatrix.identity(A.rows, A.p)], A.rows, A.p))
        self._pivots = [c for c in pivots if c < A.cols]
        self._ops = R.data[:, A.cols:]

    def solve_vector(self, b: np.ndarray) -> np.ndarray | None:
        self._calls += 1
        if self._ops is None:
            if self._calls == 1:
                return solve_vector(self.A, b)
            self._factor()
        A = self.A
        y = (self._ops @ (np.asarray(b, dtype=np.int64).reshape(A.rows) % A.p)) % A.p
        rank = len(self._pivots)
        if y[rank:].any():
            return None
        x = np.zeros(A.cols, dtype=np.int64)
        x[self._pivots] = y[:rank]
        return x
