"""Immutable GF(2) matrices and vectors plus the operations built on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class ParameterError(ValueError):
    """Raised for dimension mismatches and out-of-range parameters."""


def _as_bits(data, ndim: int) -> np.ndarray:
    arr = np.array(data, dtype=np.int64, copy=True)
    if arr.size == 0:
        arr = arr.reshape((0,) * ndim if arr.ndim != ndim else arr.shape)
    if arr.ndim != ndim:
        raise ParameterError(f"expected {ndim}-d bit array, got shape {arr.shape}")
    if arr.size and ((arr < 0) | (arr > 1)).any():
        raise ParameterError("entries must be 0 or 1")
    out = arr.astype(np.uint8)
    out.flags.writeable = False
    return out


class Gf2Matrix:
    """A rows x cols matrix over F2. Entries are frozen after construction."""

    __slots__ = ("bits",)

    def __init__(self, data):
        if isinstance(data, Gf2Matrix):
            self.bits = data.bits
        else:
            self.bits = _as_bits(data, 2)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def random(cls, rng: np.random.Generator, rows: int, cols: int) -> Gf2Matrix:
        return cls(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return self.bits.shape

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def T(self) -> Gf2Matrix:
        return Gf2Matrix(self.bits.T)

    def rank(self) -> int:
        return rank(self)

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        return add(self, other)

    __sub__ = __add__

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            return matvec(self, other)
        return matmul(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Matrix) and self.shape == other.shape and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash((self.shape, self.bits.tobytes()))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.bits.tolist()})"


class Gf2Vector:
    """A length-n vector over F2."""

    __slots__ = ("bits",)

    def __init__(self, data):
        if isinstance(data, Gf2Vector):
            self.bits = data.bits
        else:
            self.bits = _as_bits(data, 1)

    @classmethod
    def zeros(cls, n: int) -> Gf2Vector:
        return cls(np.zeros(n, dtype=np.uint8))

    def __len__(self) -> int:
        return self.bits.shape[0]

    def __add__(self, other: Gf2Vector) -> Gf2Vector:
        return add(self, other)

    __sub__ = __add__

    def __eq__(self, other) -> bool:
        return isinstance(other, Gf2Vector) and len(self) == len(other) and bool(
            np.array_equal(self.bits, other.bits)
        )

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def __iter__(self):
        return iter(self.bits.tolist())

    def __repr__(self) -> str:
        return f"Gf2Vector({self.bits.tolist()})"


# raw-array helpers; the simulator works on these directly


def mat_bits(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of 0/1 arrays mod 2 via a float BLAS product.

    float32 holds integers exactly up to 2**24, which bounds the inner
    dimension; longer products fall back to float64.
    """
    if a.shape[-1] != b.shape[0]:
        raise ParameterError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.uint8)
    ft = np.float32 if a.shape[-1] < 1 << 24 else np.float64
    prod = a.astype(ft) @ b.astype(ft)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


def rank_bits(a: np.ndarray, backend: str | None = None) -> int:
    a = np.asarray(a, dtype=np.uint8)
    if a.ndim != 2:
        raise ParameterError("rank needs a 2-d array")
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0
    words = _kernels.pack_rows(a)
    return len(_kernels.rref_packed(words, a.shape[1], backend))


def rref_bits(a: np.ndarray, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``a``; returns (nonzero rows, pivot columns)."""
    a = np.asarray(a, dtype=np.uint8)
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.zeros((0, cols), dtype=np.uint8), np.zeros(0, dtype=np.int64)
    words = _kernels.pack_rows(a)
    piv = _kernels.rref_packed(words, cols, backend)
    r = len(piv)
    return _kernels.unpack_rows(words[:r], cols), np.asarray(piv, dtype=np.int64)


@dataclass(frozen=True)
class SolutionSet:
    """Affine solution set ``particular + span(kernel)`` of a GF(2) system.

    ``particular`` is None when the system is inconsistent; ``kernel`` rows are
    a basis of the null space of the coefficient matrix either way.
    """

    particular: np.ndarray | None
    kernel: np.ndarray

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def kernel_dim(self) -> int:
        return self.kernel.shape[0]

    def contains(self, x) -> bool:
        if self.particular is None:
            return False
        x = np.asarray(x.bits if isinstance(x, Gf2Vector) else x, dtype=np.uint8)
        diff = (x ^ self.particular).reshape(1, -1)
        if not diff.any():
            return True
        if self.kernel_dim == 0:
            return False
        return rank_bits(np.vstack([self.kernel, diff])) == self.kernel_dim


def solve_bits(a: np.ndarray, b: np.ndarray, backend: str | None = None) -> SolutionSet:
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8).reshape(-1)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ParameterError(f"right-hand side has length {b.shape[0]}, expected {rows}")
    aug = np.concatenate([a, b[:, None]], axis=1)
    red, piv = rref_bits(aug, backend)
    if len(piv) and piv[-1] == cols:
        particular = None
        red, piv = red[:-1], piv[:-1]
    else:
        particular = np.zeros(cols, dtype=np.uint8)
        particular[piv] = red[:, cols]
    free = np.setdiff1d(np.arange(cols), piv)
    kernel = np.zeros((free.size, cols), dtype=np.uint8)
    if free.size:
        kernel[np.arange(free.size), free] = 1
        # x_pivot = sum over free f of red[i, f] * x_f
        kernel[:, piv] = red[:, free].T
    return SolutionSet(particular, kernel)


# public operations on the frozen types


def shift_channel_matrix(q: int, n: int) -> Gf2Matrix:
    """Return S**(q-n), the q x q map keeping the top n input levels.

    Level 0 is the most significant. Input levels 0..n-1 land on output
    positions q-n..q-1; the remaining levels are discarded.
    """
    if q < 0 or n < 0 or n > q:
        raise ParameterError(f"need 0 <= n <= q, got n={n}, q={q}")
    m = np.zeros((q, q), dtype=np.uint8)
    shift = q - n
    idx = np.arange(n)
    m[idx + shift, idx] = 1
    return Gf2Matrix(m)


def down_shift(q: int) -> Gf2Matrix:
    """The elementary down-shift S with ones on the first sub-diagonal."""
    if q < 0:
        raise ParameterError("q must be nonnegative")
    return Gf2Matrix(np.eye(q, k=-1, dtype=np.uint8))


def matrix_power(m: Gf2Matrix, k: int) -> Gf2Matrix:
    if m.rows != m.cols:
        raise ParameterError("matrix power needs a square matrix")
    out = Gf2Matrix.identity(m.rows)
    for _ in range(k):
        out = matmul(out, m)
    return out


def rank(m: Gf2Matrix) -> int:
    return rank_bits(Gf2Matrix(m).bits)


def matmul(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix(mat_bits(a.bits, b.bits))


def matvec(a: Gf2Matrix, v: Gf2Vector) -> Gf2Vector:
    if a.cols != len(v):
        raise ParameterError(f"matrix has {a.cols} columns, vector has length {len(v)}")
    return Gf2Vector(mat_bits(a.bits, v.bits.reshape(-1, 1)).reshape(-1))


def add(a, b):
    if type(a) is not type(b) or a.bits.shape != b.bits.shape:
        raise ParameterError(f"cannot add shapes {a.bits.shape} and {b.bits.shape}")
    return type(a)(a.bits ^ b.bits)


def vstack(*mats: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix(np.vstack([m.bits for m in mats]))


def hstack(*mats: Gf2Matrix) -> Gf2Matrix:
    return Gf2Matrix(np.hstack([m.bits for m in mats]))


def solve_all(a: Gf2Matrix, b: Gf2Vector) -> SolutionSet:
    """Exact solution set of a x = b. Inconsistency is a result, not an error."""
    if a.rows != len(b):
        raise ParameterError(f"matrix has {a.rows} rows, right-hand side has length {len(b)}")
    return solve_bits(a.bits, b.bits)


def kernel_dim(a: Gf2Matrix) -> int:
    return a.cols - rank(a)


# slow reference path, kept for differential testing


def rank_reference(m) -> int:
    """Textbook elimination on Python-int row bitsets."""
    bits = m.bits if isinstance(m, Gf2Matrix) else np.asarray(m)
    rows = [int("".join(str(int(v)) for v in row[::-1]) or "0", 2) for row in bits]
    r = 0
    for col in range(bits.shape[1] if bits.ndim == 2 else 0):
        pivot = next((i for i in range(r, len(rows)) if (rows[i] >> col) & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(len(rows)):
            if i != r and (rows[i] >> col) & 1:
                rows[i] ^= rows[r]
        r += 1
    return r
