"""Monoidal Hom-algebras, Hom-coalgebras, Hom-bialgebras and Hom-Hopf algebras.

A structure on H (dim d) is stored as linear maps in the lexicographic tensor
basis: ``mul`` is d x d^2, ``comul`` is d^2 x d, ``counit`` is 1 x d, ``unit``
is d x 1.  The verifiers evaluate each axiom on every basis tuple at once by
pushing the identity through the relevant Sweedler formula (see
``exactlin.Wires``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (AutAntipodeError, AutNotBialgebraMapError, AutNotInvertibleError,
                     ShapeError, SingularAntipodeError)
from .exactlin import Field, Matrix, Tensor3, Wires, kernel

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    witness: tuple | None = None  # (basis index tuple, residual vector)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class VerificationReport:
    """Ordered list of axiom checks."""

    checks: list[Check] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def strict_passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def add(self, name: str, ok: bool, witness=None, detail: str = "") -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, witness, detail))
        return ok

    def skip(self, name: str, detail: str) -> None:
        self.checks.append(Check(name, SKIP, None, detail))

    def extend(self, other: "VerificationReport", prefix: str = "") -> "VerificationReport":
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.witness, c.detail))
        return self

    def invertible(self, name: str, m: Matrix, detail: str = "") -> bool:
        """Record whether a square map is invertible; the witness is a nonzero kernel vector."""
        if m.is_invertible():
            return self.add(name, True, detail=detail)
        if m.rows != m.cols:
            return self.add(name, False, detail=f"not square: {m.shape}")
        v = kernel(m).basis[0]
        first = int(np.flatnonzero(m.field.nonzero(v))[0])
        return self.add(name, False, ((first,), [m.field.format(x) for x in v]), detail or "kernel vector")

    def compare(self, name: str, lhs: Matrix, rhs: Matrix, dims: Sequence[int]) -> bool:
        """Record whether two maps agree; the witness is the first basis tuple where they differ."""
        if lhs.shape != rhs.shape:
            return self.add(name, False, detail=f"shape {lhs.shape} vs {rhs.shape}")
        return self.add(name, *witness_of(lhs - rhs, dims))

    def __repr__(self):
        lines = [f"{c.status:4}  {c.name}" for c in self.checks]
        return "VerificationReport(\n  " + "\n  ".join(lines) + "\n)"


def witness_of(residual: Matrix, dims: Sequence[int]) -> tuple[bool, tuple | None]:
    nz = residual.field.nonzero(residual.a)
    cols = np.flatnonzero(nz.any(axis=0))
    if cols.size == 0:
        return True, None
    col = int(cols[0])
    idx = tuple(int(i) for i in np.unravel_index(col, tuple(dims))) if dims else (col,)
    return False, (idx, [residual.field.format(x) for x in residual.a[:, col]])


def _square(m: Matrix, d: int, what: str):
    if m.shape != (d, d):
        raise ShapeError(f"{what} must be {d}x{d}, got {m.shape}")


@dataclass(frozen=True, eq=False)
class HomAlgebra:
    field: Field
    dim: int
    mul: Matrix     # d x d^2
    unit: Matrix    # d x 1
    alpha: Matrix

    def __post_init__(self):
        d = self.dim
        if self.mul.shape != (d, d * d):
            raise ShapeError(f"mul must be {d}x{d * d}, got {self.mul.shape}")
        if self.unit.shape != (d, 1):
            raise ShapeError(f"unit must be {d}x1, got {self.unit.shape}")
        _square(self.alpha, d, "alpha")

    @property
    def mul_tensor(self) -> Tensor3:
        return Tensor3.from_binary(self.mul, self.dim, self.dim)

    @cached_property
    def alpha_inv(self) -> Matrix:
        return self.alpha.inverse()


@dataclass(frozen=True, eq=False)
class HomCoalgebra:
    field: Field
    dim: int
    comul: Matrix   # d^2 x d
    counit: Matrix  # 1 x d
    gamma: Matrix

    def __post_init__(self):
        d = self.dim
        if self.comul.shape != (d * d, d):
            raise ShapeError(f"comul must be {d * d}x{d}, got {self.comul.shape}")
        if self.counit.shape != (1, d):
            raise ShapeError(f"counit must be 1x{d}, got {self.counit.shape}")
        _square(self.gamma, d, "gamma")

    @property
    def comul_tensor(self) -> Tensor3:
        return Tensor3.from_split(self.comul, self.dim, self.dim)

    @cached_property
    def gamma_inv(self) -> Matrix:
        return self.gamma.inverse()


@dataclass(frozen=True, eq=False)
class HomBialgebra:
    algebra: HomAlgebra
    coalgebra: HomCoalgebra

    def __post_init__(self):
        if self.algebra.dim != self.coalgebra.dim or self.algebra.field != self.coalgebra.field:
            raise ShapeError("algebra and coalgebra live on different spaces")


@dataclass(frozen=True, eq=False)
class HomHopfAlgebra:
    """(H, alpha, m, eta, Delta, epsilon, S)."""

    bialgebra: HomBialgebra
    antipode: Matrix
    name: str = ""

    def __post_init__(self):
        _square(self.antipode, self.dim, "antipode")

    @classmethod
    def build(cls, field: Field, mul: Matrix, unit: Matrix, comul: Matrix, counit: Matrix,
              antipode: Matrix, alpha: Matrix, name: str = "") -> "HomHopfAlgebra":
        d = alpha.rows
        alg = HomAlgebra(field, d, mul, unit, alpha)
        coalg = HomCoalgebra(field, d, comul, counit, alpha)
        return cls(HomBialgebra(alg, coalg), antipode, name)

    # convenient views
    @property
    def algebra(self) -> HomAlgebra:
        return self.bialgebra.algebra

    @property
    def coalgebra(self) -> HomCoalgebra:
        return self.bialgebra.coalgebra

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def mul(self) -> Matrix:
        return self.algebra.mul

    @property
    def unit(self) -> Matrix:
        return self.algebra.unit

    @property
    def comul(self) -> Matrix:
        return self.coalgebra.comul

    @property
    def counit(self) -> Matrix:
        return self.coalgebra.counit

    @property
    def alpha(self) -> Matrix:
        return self.algebra.alpha

    @property
    def alpha_inv(self) -> Matrix:
        return self.algebra.alpha_inv

    @property
    def S(self) -> Matrix:
        return self.antipode

    @cached_property
    def S_inv(self) -> Matrix:
        return antipode_inverse(self)

    @property
    def id(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    def wires(self, n: int) -> Wires:
        return Wires.identity(self.field, [self.dim] * n)

    def basis_vector(self, i: int) -> Matrix:
        v = self.field.zeros((self.dim, 1))
        v[i, 0] = self.field.one
        return Matrix(self.field, v)

    def replace(self, **changes) -> "HomHopfAlgebra":
        """New instance with some structure maps swapped out (no cached state carried over)."""
        parts = dict(mul=self.mul, unit=self.unit, comul=self.comul, counit=self.counit,
                     antipode=self.antipode, alpha=self.alpha, name=self.name)
        gamma = changes.pop("gamma", None)
        parts.update(changes)
        h = HomHopfAlgebra.build(self.field, **parts)
        if gamma is not None:
            coalg = HomCoalgebra(self.field, self.dim, h.comul, h.counit, gamma)
            h = HomHopfAlgebra(HomBialgebra(h.algebra, coalg), h.antipode, h.name)
        return h

    def __repr__(self):
        return f"HomHopfAlgebra({self.name or 'unnamed'}, dim={self.dim}, field={self.field.spec})"


def _comul(w: Wires, h, at: int) -> Wires:
    d = h.dim
    return w.apply(h.comul, at, out=(d, d))


def verify_hom_algebra(a: HomAlgebra) -> VerificationReport:
    rep = VerificationReport()
    d, m, al = a.dim, a.mul, a.alpha
    W1 = Wires.identity(a.field, [d])
    W2 = Wires.identity(a.field, [d, d])
    W3 = Wires.identity(a.field, [d, d, d])
    rep.invertible("alpha invertible", al)
    rep.compare("alpha multiplicative", (al @ m), W2.apply(al, 0).apply(al, 1).apply(m, 0, 2).matrix(), [d, d])
    rep.compare("alpha unital", al @ a.unit, a.unit, [1])
    lhs = W3.apply(m, 1, 2).apply(al, 0).apply(m, 0, 2).matrix()
    rhs = W3.apply(m, 0, 2).apply(al, 1).apply(m, 0, 2).matrix()
    rep.compare("hom-associativity", lhs, rhs, [d, d, d])
    rep.compare("weak unit right", W1.insert(a.unit, 1).apply(m, 0, 2).matrix(), al, [d])
    rep.compare("weak unit left", W1.insert(a.unit, 0).apply(m, 0, 2).matrix(), al, [d])
    return rep


def verify_hom_coalgebra(c: HomCoalgebra, reindexing: bool = True) -> VerificationReport:
    rep = VerificationReport()
    d, D, g, e = c.dim, c.comul, c.gamma, c.counit
    W1 = Wires.identity(c.field, [d])
    dd = (d, d)
    rep.compare("gamma comultiplicative", D @ g, W1.apply(D, 0, out=dd).apply(g, 0).apply(g, 1).matrix(), [d])
    rep.compare("gamma counital", e @ g, e, [d])
    if not rep.invertible("gamma invertible", g):
        for name in ("hom-coassociativity", "weak counit right", "weak counit left", "coassociativity reindexing"):
            rep.skip(name, "needs gamma^-1")
        return rep
    gi = c.gamma_inv
    base = W1.apply(D, 0, out=dd)
    lhs = base.apply(gi, 0).apply(D, 1, out=dd).matrix()
    rhs = base.apply(D, 0, out=dd).apply(gi, 2).matrix()
    rep.compare("hom-coassociativity", lhs, rhs, [d])
    rep.compare("weak counit right", base.apply(e, 1, out=()).matrix(), gi, [d])
    rep.compare("weak counit left", base.apply(e, 0, out=()).matrix(), gi, [d])
    if reindexing:
        # h1 (x) h211 (x) h212 (x) h22 = a(h11) (x) a^-1(h12) (x) a^-1(h21) (x) h22
        lhs = base.apply(D, 1, out=dd).apply(D, 1, out=dd).matrix()
        rhs = base.apply(D, 0, out=dd).apply(D, 2, out=dd).apply(g, 0).apply(gi, 1).apply(gi, 2).matrix()
        rep.compare("coassociativity reindexing", lhs, rhs, [d])
    return rep


def verify_hom_bialgebra(b: HomBialgebra) -> VerificationReport:
    rep = VerificationReport()
    rep.extend(verify_hom_algebra(b.algebra))
    rep.extend(verify_hom_coalgebra(b.coalgebra))
    a, c = b.algebra, b.coalgebra
    d, m, D, e, u = a.dim, a.mul, c.comul, c.counit, a.unit
    rep.add("shared automorphism", a.alpha == c.gamma)
    W2 = Wires.identity(a.field, [d, d])
    dd = (d, d)
    rhs = W2.apply(D, 0, out=dd).apply(D, 2, out=dd).permute(0, 2, 1, 3).apply(m, 0, 2).apply(m, 1, 2).matrix()
    rep.compare("comul multiplicative", D @ m, rhs, [d, d])
    rep.compare("comul unital", D @ u, Wires.of(u, [d]).insert(u, 1).matrix(), [1])
    rep.compare("counit multiplicative", e @ m, W2.apply(e, 0, out=()).apply(e, 0, out=()).matrix(), [d, d])
    rep.compare("counit unital", e @ u, Matrix.identity(a.field, 1), [1])
    return rep


def convolution(f: Matrix, g: Matrix, h: HomHopfAlgebra) -> Matrix:
    """f * g = m o (f (x) g) o Delta."""
    return _comul(h.wires(1), h, 0).apply(f, 0).apply(g, 1).apply(h.mul, 0, 2).matrix()


def verify_hom_hopf(h: HomHopfAlgebra) -> VerificationReport:
    rep = verify_hom_bialgebra(h.bialgebra)
    d, S, al, m, e, u = h.dim, h.S, h.alpha, h.mul, h.counit, h.unit
    W1, W2 = h.wires(1), h.wires(2)
    rep.compare("antipode commutes with alpha", S @ al, al @ S, [d])
    eta_eps = u @ e
    rep.compare("convolution S*id", convolution(S, h.id, h), eta_eps, [d])
    rep.compare("convolution id*S", convolution(h.id, S, h), eta_eps, [d])
    rep.compare("antipode anti-multiplicative", S @ m,
                W2.permute(1, 0).apply(S, 0).apply(S, 1).apply(m, 0, 2).matrix(), [d, d])
    rep.compare("antipode unital", S @ u, u, [1])
    rep.compare("antipode anti-comultiplicative", h.comul @ S,
                _comul(W1, h, 0).permute(1, 0).apply(S, 0).apply(S, 1).matrix(), [d])
    rep.compare("counit of antipode", e @ S, e, [d])
    return rep


def antipode_inverse(h: HomHopfAlgebra) -> Matrix:
    try:
        return h.S.inverse()
    except np.linalg.LinAlgError:
        raise SingularAntipodeError("antipode is singular: braiding inverses unavailable "
                                    "(prebraided only)") from None


def yau_twist(classical: HomHopfAlgebra, aut: Matrix, name: str | None = None) -> HomHopfAlgebra:
    """Twist a classical Hopf algebra (alpha = id) along a Hopf automorphism."""
    d = classical.dim
    if classical.alpha != classical.id:
        raise ValueError("yau_twist expects a classical input (alpha = id)")
    _square(aut, d, "automorphism")
    if not aut.is_invertible():
        raise AutNotInvertibleError("automorphism is not invertible")
    check = VerificationReport()
    m, D = classical.mul, classical.comul
    W2 = classical.wires(2)
    check.compare("multiplicative", aut @ m, W2.apply(aut, 0).apply(aut, 1).apply(m, 0, 2).matrix(), [d, d])
    check.compare("unital", aut @ classical.unit, classical.unit, [1])
    check.compare("comultiplicative", D @ aut,
                  _comul(classical.wires(1), classical, 0).apply(aut, 0).apply(aut, 1).matrix(), [d])
    check.compare("counital", classical.counit @ aut, classical.counit, [d])
    if not check.passed:
        bad = ", ".join(c.name for c in check.failures)
        raise AutNotBialgebraMapError(f"automorphism is not a bialgebra map ({bad})")
    if classical.S @ aut != aut @ classical.S:
        raise AutAntipodeError("automorphism does not commute with the antipode")
    return HomHopfAlgebra.build(classical.field, aut @ m, classical.unit, D @ aut.inverse(),
                                classical.counit, classical.S, aut,
                                name if name is not None else classical.name)


def adjoint_right_map(h: HomHopfAlgebra) -> Matrix:
    """g (x) h -> (S(h1) a^-1(g)) a(h2), domain legs (g, h)."""
    w = _comul(h.wires(2), h, 1).permute(1, 0, 2)
    w = w.apply(h.S, 0).apply(h.alpha_inv, 1).apply(h.alpha, 2)
    return w.apply(h.mul, 0, 2).apply(h.mul, 0, 2).matrix()


def adjoint_left_map(h: HomHopfAlgebra) -> Matrix:
    """h (x) g -> a(h1) (a^-1(g) S(h2)), domain legs (h, g)."""
    w = _comul(h.wires(2), h, 0).permute(0, 2, 1)
    w = w.apply(h.alpha, 0).apply(h.alpha_inv, 1).apply(h.S, 2)
    return w.apply(h.mul, 1, 2).apply(h.mul, 0, 2).matrix()


def adjoint_right(h: HomHopfAlgebra) -> Tensor3:
    return Tensor3.from_binary(adjoint_right_map(h), h.dim, h.dim)


def adjoint_left(h: HomHopfAlgebra) -> Tensor3:
    return Tensor3.from_binary(adjoint_left_map(h), h.dim, h.dim)


def verify_module_algebra_right(h: HomHopfAlgebra, action: Matrix | None = None) -> VerificationReport:
    """(aa')<b = (a<b1)(a'<b2) and 1<b = eps(b)1 for a right action of H on itself."""
    act = adjoint_right_map(h) if action is None else action
    d, m = h.dim, h.mul
    rep = VerificationReport()
    W3 = h.wires(3)
    lhs = W3.apply(m, 0, 2).apply(act, 0, 2).matrix()
    rhs = _comul(W3, h, 2).permute(0, 2, 1, 3).apply(act, 0, 2).apply(act, 1, 2).apply(m, 0, 2).matrix()
    rep.compare("module algebra multiplicative", lhs, rhs, [d, d, d])
    rep.compare("module algebra unital", h.wires(1).insert(h.unit, 0).apply(act, 0, 2).matrix(),
                h.unit @ h.counit, [d])
    return rep


def verify_module_algebra_left(h: HomHopfAlgebra, action: Matrix | None = None) -> VerificationReport:
    """b>(aa') = (b1>a)(b2>a') and b>1 = eps(b)1 for a left action of H on itself."""
    act = adjoint_left_map(h) if action is None else action
    d, m = h.dim, h.mul
    rep = VerificationReport()
    W3 = h.wires(3)
    lhs = W3.apply(m, 1, 2).apply(act, 0, 2).matrix()
    rhs = _comul(W3, h, 0).permute(0, 2, 1, 3).apply(act, 0, 2).apply(act, 1, 2).apply(m, 0, 2).matrix()
    rep.compare("module algebra multiplicative", lhs, rhs, [d, d, d])
    rep.compare("module algebra unital", h.wires(1).insert(h.unit, 1).apply(act, 0, 2).matrix(),
                h.unit @ h.counit, [d])
    return rep
