"""Exact linear algebra over Q and F_p.

Everything is dense numpy storage.  Rationals are ``gmpy2.mpq`` objects in
object arrays; prime-field residues live in int64 arrays reduced mod p.
Linear maps follow the usual convention: a ``Matrix`` of shape
(dim codomain, dim domain), with tensor products flattened lexicographically
(e_i (x) e_j has index i*d2 + j).
"""

from __future__ import annotations

from functools import reduce
from math import prod
from typing import Iterable, Sequence

import gmpy2
import numpy as np

__all__ = [
    "Field", "Rationals", "PrimeField", "QQ", "GF", "field_from_spec",
    "Matrix", "Tensor3", "Subspace", "QuotientSpace", "Wires",
    "rref", "kernel", "quotient_by", "kron", "flip",
]

_INT64_SAFE = (1 << 63) - 1


class Field:
    """Common interface of the two exact backends."""

    dtype: object
    spec: str

    def __call__(self, value):
        raise NotImplementedError

    def __repr__(self):
        return f"<field {self.spec}>"

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        flat = [self(x) for x in arr.ravel()]
        out = np.empty(len(flat), dtype=self.dtype)
        out[:] = flat
        return out.reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def eye(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = self.one
        return a

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def nonzero(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr != 0, dtype=bool)

    def format(self, x) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError


class Rationals(Field):
    dtype = object
    spec = "Q"

    def __init__(self):
        self.zero = gmpy2.mpq(0)
        self.one = gmpy2.mpq(1)

    @property
    def characteristic(self) -> int:
        return 0

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (float, np.floating)):
            raise TypeError("floating-point scalars are not exact")
        if isinstance(value, np.integer):
            value = int(value)
        return gmpy2.mpq(value)

    def zeros(self, shape) -> np.ndarray:
        return np.full(shape, self.zero, dtype=object)

    def dot(self, a, b):
        return _object_dot(a, b, self.zero)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / gmpy2.mpq(x)

    def format(self, x) -> str:
        x = gmpy2.mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def parse(self, text: str):
        text = text.strip()
        num, _, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if den else 1
        except ValueError:
            raise ValueError(f"not a rational literal: {text!r}") from None
        if d == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return gmpy2.mpq(n, d)


class PrimeField(Field):
    """F_p for a prime p < 2**31 (residues fit comfortably in int64)."""

    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if p < 2 or not gmpy2.is_prime(p, 50):
            raise ValueError(f"{p} is not prime")
        if p >= 1 << 31:
            raise ValueError("prime modulus must be below 2**31")
        self.p = p
        self.spec = f"Fp:{p}"
        self.zero = 0
        self.one = 1
        # number of products that can be summed before int64 overflow
        self._chunk = max(1, _INT64_SAFE // ((p - 1) ** 2 or 1))

    @property
    def characteristic(self) -> int:
        return self.p

    def __call__(self, value):
        if isinstance(value, str):
            value = QQ.parse(value)
        if isinstance(value, (float, np.floating)):
            raise TypeError("floating-point scalars are not exact")
        if isinstance(value, np.integer):
            value = int(value)
        q = gmpy2.mpq(value)
        num = int(q.numerator) % self.p
        den = int(q.denominator) % self.p
        if den == 0:
            raise ZeroDivisionError(f"{value} has no residue mod {self.p}")
        return num * pow(den, -1, self.p) % self.p

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        return np.array([self(x) for x in arr.ravel()], dtype=np.int64).reshape(arr.shape)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def normalize(self, arr):
        return np.mod(arr, self.p)

    def dot(self, a, b):
        k = a.shape[1]
        if k <= self._chunk:
            return np.mod(a @ b, self.p)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, k, self._chunk):
            out = np.mod(out + np.mod(a[:, s:s + self._chunk] @ b[s:s + self._chunk], self.p), self.p)
        return out

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def format(self, x) -> str:
        return str(int(x) % self.p)

    def parse(self, text: str):
        text = text.strip()
        try:
            v = int(text)
        except ValueError:
            raise ValueError(f"not a residue literal: {text!r}") from None
        if not 0 <= v < self.p:
            raise ValueError(f"residue {v} out of range for p={self.p}")
        return v


QQ = Rationals()
_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def field_from_spec(spec: str) -> Field:
    """Parse "Q", "q", "Fp:<p>" or "fp:<p>"."""
    s = spec.strip()
    if s.lower() == "q":
        return QQ
    head, _, tail = s.partition(":")
    if head.lower() == "fp" and tail:
        try:
            return GF(int(tail))
        except ValueError as e:
            raise ValueError(f"bad field spec {spec!r}: {e}") from None
    raise ValueError(f"bad field spec {spec!r}")


def _object_dot(a: np.ndarray, b: np.ndarray, zero) -> np.ndarray:
    # Structure maps are mostly zeros; only touch contraction indices where
    # both sides have support.
    m, k = a.shape
    n = b.shape[1]
    out = np.full((m, n), zero, dtype=object)
    if m == 0 or n == 0 or k == 0:
        return out
    amask = np.asarray(a != 0, dtype=bool)
    bmask = np.asarray(b != 0, dtype=bool)
    live = np.flatnonzero(amask.any(axis=0) & bmask.any(axis=1))
    if len(live) * 4 > k and amask.mean() > 0.3 and bmask.mean() > 0.3:
        return np.dot(a, b)
    for j in live:
        rows = np.flatnonzero(amask[:, j])
        cols = np.flatnonzero(bmask[j])
        out[np.ix_(rows, cols)] += np.multiply.outer(a[rows, j], b[j, cols])
    return out


class Matrix:
    """Immutable exact matrix: a linear map codomain x domain."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray):
        a = np.asarray(a, dtype=field.dtype)
        if a.ndim != 2:
            raise ValueError("Matrix needs a 2-d array")
        a.setflags(write=False)
        self.field = field
        self.a = a

    @classmethod
    def from_rows(cls, field: Field, rows, cols: int | None = None) -> "Matrix":
        rows = list(rows)
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, field.array(rows))

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        return cls(field, field.zeros((rows, cols)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, field.eye(n))

    @classmethod
    def column(cls, field: Field, values) -> "Matrix":
        return cls(field, field.array(list(values)).reshape(-1, 1))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def entries(self) -> list:
        return list(self.a.ravel())

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, self.a.T.copy())

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field.spec} vs {other.field.spec}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        return Matrix(self.field, self.field.dot(self.a, other.a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.normalize(self.a + other.a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return Matrix(self.field, self.field.normalize(self.a - other.a))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.field.normalize(-self.a))

    def scale(self, s) -> "Matrix":
        return Matrix(self.field, self.field.normalize(self.a * self.field(s)))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.field.nonzero(self.a).any()

    def __getitem__(self, key):
        return self.a[key]

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in row) for row in self.a)
        return f"Matrix[{self.field.spec}]({self.rows}x{self.cols}: {body})"

    def power(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse().power(-k)
        out = Matrix.identity(self.field, self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return len(_rref(self.field, self.a)[1])

    def inverse(self) -> "Matrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("only square matrices are invertible")
        aug = np.concatenate([self.a, self.field.eye(n)], axis=1)
        r, piv = _rref(self.field, aug)
        if piv[:n] != list(range(n)) or (len(piv) > n and piv[n] < n):
            raise np.linalg.LinAlgError("matrix is singular")
        return Matrix(self.field, r[:, n:].copy())

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def _rref(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination; leftmost column, lowest row index pivots."""
    A = np.array(a, dtype=field.dtype, copy=True)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(field.nonzero(A[r:, c]))
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = field.normalize(A[r] * field.inv(A[r, c]))
        others = np.flatnonzero(field.nonzero(A[:, c]))
        others = others[others != r]
        if others.size:
            A[others] = field.normalize(A[others] - np.multiply.outer(A[others, c], A[r]))
        pivots.append(c)
        r += 1
    return A, pivots


def rref(m: Matrix) -> Matrix:
    return Matrix(m.field, _rref(m.field, m.a)[0])


def rref_pivots(m: Matrix) -> tuple[Matrix, list[int]]:
    r, piv = _rref(m.field, m.a)
    return Matrix(m.field, r), piv


class Subspace:
    """A subspace of k^n, stored as RREF basis rows."""

    def __init__(self, field: Field, ambient_dim: int, basis: np.ndarray, pivots: Sequence[int]):
        basis = np.asarray(basis, dtype=field.dtype).reshape(len(pivots), ambient_dim)
        basis.setflags(write=False)
        self.field = field
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors) -> "Subspace":
        """Span of the columns of a Matrix, or of an iterable of vectors."""
        if isinstance(vectors, Matrix):
            rows = vectors.a.T
        else:
            vecs = [field.array(list(v)) for v in vectors]
            rows = np.array(vecs, dtype=field.dtype).reshape(len(vecs), ambient_dim) if vecs \
                else field.zeros((0, ambient_dim))
        if rows.shape[1] != ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        r, piv = _rref(field, rows)
        return cls(field, ambient_dim, r[:len(piv)], piv)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def inclusion(self) -> Matrix:
        """ambient x dim matrix whose columns are the basis vectors."""
        return Matrix(self.field, self.basis.T.copy())

    def coordinates(self, vectors: Matrix) -> Matrix:
        """Coordinates of columns assumed to lie in the subspace."""
        return Matrix(self.field, vectors.a[list(self.pivots), :].copy())

    def residual(self, vectors: Matrix) -> Matrix:
        return vectors - self.inclusion() @ self.coordinates(vectors)

    def contains(self, vectors: Matrix) -> bool:
        return self.residual(vectors).is_zero()

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.pivots == other.pivots and bool(np.all(self.basis == other.basis)))

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def kernel(m: Matrix) -> Subspace:
    field = m.field
    r, piv = _rref(field, m.a)
    n = m.cols
    free = [c for c in range(n) if c not in set(piv)]
    vecs = field.zeros((len(free), n))
    for t, f in enumerate(free):
        vecs[t, f] = field.one
        for i, p in enumerate(piv):
            vecs[t, p] = field.normalize(-r[i, f])
    rr, pp = _rref(field, vecs)
    return Subspace(field, n, rr[:len(pp)], pp)


class QuotientSpace:
    """k^n / relations, coordinatized by the non-pivot ambient coordinates."""

    def __init__(self, relations: Subspace):
        field = relations.field
        n = relations.ambient_dim
        piv = set(relations.pivots)
        free = [c for c in range(n) if c not in piv]
        section = field.zeros((n, len(free)))
        project = field.zeros((len(free), n))
        for j, c in enumerate(free):
            section[c, j] = field.one
            project[j, c] = field.one
        for i, p in enumerate(relations.pivots):
            project[:, p] = field.normalize(-relations.basis[i, free])
        self.field = field
        self.ambient_dim = n
        self.relations = relations
        self.free = tuple(free)
        self.dim = len(free)
        self.project = Matrix(field, project)
        self.section = Matrix(field, section)

    def __repr__(self):
        return f"QuotientSpace(dim={self.dim}, ambient={self.ambient_dim})"


def quotient_by(field: Field, ambient_dim: int, relation_vectors) -> QuotientSpace:
    return QuotientSpace(Subspace.span(field, ambient_dim, relation_vectors))


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    f = a.field
    return Matrix(f, f.normalize(np.kron(a.a, b.a)))


def kron_all(mats: Iterable[Matrix]) -> Matrix:
    return reduce(kron, mats)


def flip(field: Field, m: int, n: int) -> Matrix:
    """e_i (x) e_j -> e_j (x) e_i for dims m, n."""
    out = field.zeros((m * n, m * n))
    for i in range(m):
        for j in range(n):
            out[j * m + i, i * n + j] = field.one
    return Matrix(field, out)


class Tensor3:
    """Rank-3 array of structure constants, entries [i][j][k]."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray):
        a = np.asarray(a, dtype=field.dtype)
        if a.ndim != 3:
            raise ValueError("Tensor3 needs a 3-d array")
        a.setflags(write=False)
        self.field = field
        self.a = a

    @property
    def shape(self):
        return self.a.shape

    @property
    def entries(self) -> list:
        return list(self.a.ravel())

    @classmethod
    def from_binary(cls, m: Matrix, d1: int, d2: int) -> "Tensor3":
        """From a map V1 (x) V2 -> W: entry [i][j][k] = coefficient of w_k in f(e_i (x) e_j)."""
        return cls(m.field, m.a.T.reshape(d1, d2, m.rows))

    def binary(self) -> Matrix:
        d1, d2, d3 = self.shape
        return Matrix(self.field, self.a.reshape(d1 * d2, d3).T.copy())

    @classmethod
    def from_split(cls, m: Matrix, d2: int, d3: int) -> "Tensor3":
        """From a map V -> W1 (x) W2: entry [i][j][k] = coefficient of e_j (x) e_k in f(v_i)."""
        return cls(m.field, m.a.T.reshape(m.cols, d2, d3))

    def split(self) -> Matrix:
        d1, d2, d3 = self.shape
        return Matrix(self.field, self.a.reshape(d1, d2 * d3).T.copy())

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    __hash__ = None


class Wires:
    """A batch of tensors in V_1 (x) ... (x) V_r, one per column.

    This is how Sweedler-style formulas are evaluated on every basis tuple at
    once: start from the identity on the domain, then apply structure maps to
    chosen tensor legs and permute legs.  ``matrix()`` returns the resulting
    linear map with the legs flattened lexicographically.
    """

    __slots__ = ("field", "arr", "dims")

    def __init__(self, field: Field, arr: np.ndarray, dims: Sequence[int]):
        self.field = field
        self.dims = tuple(dims)
        self.arr = arr.reshape(self.dims + (arr.shape[-1],))

    @classmethod
    def identity(cls, field: Field, dims: Sequence[int]) -> "Wires":
        n = prod(dims)
        return cls(field, field.eye(n), dims)

    @classmethod
    def of(cls, m: Matrix, dims: Sequence[int]) -> "Wires":
        if prod(dims) != m.rows:
            raise ValueError(f"dims {tuple(dims)} do not multiply to {m.rows}")
        return cls(m.field, m.a, dims)

    @property
    def batch(self) -> int:
        return self.arr.shape[-1]

    def apply(self, f: Matrix, at: int, n: int = 1, out: Sequence[int] | None = None) -> "Wires":
        """Apply f to legs at..at+n-1; the result occupies legs of sizes ``out``."""
        dims = self.dims
        src = dims[at:at + n]
        if prod(src) != f.cols:
            raise ValueError(f"map with {f.cols} inputs applied to legs {src}")
        out = (f.rows,) if out is None else tuple(out)
        if prod(out) != f.rows:
            raise ValueError(f"output legs {out} do not match {f.rows} rows")
        moved = np.moveaxis(self.arr, list(range(at, at + n)), list(range(n)))
        rest = moved.shape[n:]
        flat = np.ascontiguousarray(moved).reshape(f.cols, prod(rest))
        res = self.field.dot(f.a, flat).reshape(out + rest)
        res = np.moveaxis(res, list(range(len(out))), list(range(at, at + len(out))))
        return Wires(self.field, res, dims[:at] + out + dims[at + n:])

    def permute(self, *order: int) -> "Wires":
        if sorted(order) != list(range(len(self.dims))):
            raise ValueError(f"bad leg permutation {order}")
        arr = np.transpose(self.arr, tuple(order) + (len(self.dims),))
        return Wires(self.field, arr, [self.dims[i] for i in order])

    def insert(self, vec: Matrix, at: int) -> "Wires":
        """Tensor in the constant vector ``vec`` (a column) as a new leg."""
        v = vec.a.reshape(-1)
        arr = np.multiply.outer(v, self.arr)
        arr = self.field.normalize(arr)
        arr = np.moveaxis(arr, 0, at)
        return Wires(self.field, arr, self.dims[:at] + (len(v),) + self.dims[at:])

    def merge(self, at: int, n: int) -> "Wires":
        """Regard legs at..at+n-1 as one leg."""
        d = self.dims
        return Wires(self.field, self.arr, d[:at] + (prod(d[at:at + n]),) + d[at + n:])

    def matrix(self) -> Matrix:
        return Matrix(self.field, np.ascontiguousarray(self.arr).reshape(prod(self.dims), self.batch))
