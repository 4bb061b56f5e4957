"""Desk-scale instances: group algebras, cyclic and Sweedler twists, regular
(co)modules, trivial and graded YD modules, and perturbations for negative tests.
"""

from __future__ import annotations

import dataclasses
from math import gcd

import numpy as np

from .errors import UnverifiedInputError
from .exactlin import QQ, Field, Matrix, Tensor3
from .homcore import HomHopfAlgebra, yau_twist

__all__ = [
    "group_algebra", "cyclic_twist", "cyclic_automorphism", "sweedler", "sweedler_twist",
    "sweedler_automorphism", "regular_module", "regular_comodule", "regular_bicovariant",
    "trivial_yd", "graded_yd", "perturb", "InstanceDescriptor", "INSTANCES", "build_instance",
]


def _zeros(field, *shape):
    return field.zeros(shape)


def group_algebra(n: int, field: Field = QQ) -> HomHopfAlgebra:
    """k[C_n] on the basis g^0, ..., g^{n-1}, with alpha = id."""
    if n < 1:
        raise ValueError("n must be at least 1")
    one = field.one
    mul = _zeros(field, n, n * n)
    comul = _zeros(field, n * n, n)
    S = _zeros(field, n, n)
    for i in range(n):
        for j in range(n):
            mul[(i + j) % n, i * n + j] = one
        comul[i * n + i, i] = one
        S[(-i) % n, i] = one
    unit = _zeros(field, n, 1)
    unit[0, 0] = one
    counit = field.array([[1] * n])
    M = lambda a: Matrix(field, a)  # noqa: E731
    return HomHopfAlgebra.build(field, M(mul), M(unit), M(comul), M(counit), M(S),
                                Matrix.identity(field, n), name=f"group_algebra(n={n})")


def cyclic_automorphism(n: int, k: int, field: Field = QQ) -> Matrix:
    """g^i -> g^{ki}."""
    a = _zeros(field, n, n)
    for i in range(n):
        a[(k * i) % n, i] = field.one
    return Matrix(field, a)


def cyclic_twist(n: int, k: int, field: Field = QQ) -> HomHopfAlgebra:
    if gcd(k, n) != 1:
        raise ValueError(f"gcd(k, n) must be 1, got k={k}, n={n}")
    return yau_twist(group_algebra(n, field), cyclic_automorphism(n, k, field),
                     name=f"cyclic_twist(n={n}, k={k})")


# Sweedler's algebra on the basis 1, g, x, gx (indices 0..3):
# g^2 = 1, x^2 = 0, xg = -gx, Delta(x) = x(x)1 + g(x)x, S(x) = -gx.

def _sweedler_word(word: str) -> tuple[int, int]:
    """Reduce a word in g, x to (sign, basis index) or (0, 0) if zero."""
    sign, gs, xs = 1, 0, 0
    for ch in word:
        if ch == "g":
            # moving g left past the x's already present
            if xs % 2:
                sign = -sign
            gs += 1
        else:
            xs += 1
    if xs > 1:
        return 0, 0
    return sign, (gs % 2) + 2 * xs


_SW_WORDS = ["", "g", "x", "gx"]


def sweedler(field: Field = QQ) -> HomHopfAlgebra:
    if field.characteristic == 2:
        raise ValueError("Sweedler's algebra needs characteristic different from 2")
    d = 4
    mul = _zeros(field, d, d * d)
    for i, a in enumerate(_SW_WORDS):
        for j, b in enumerate(_SW_WORDS):
            s, k = _sweedler_word(a + b)
            if s:
                mul[k, i * d + j] = field(s)
    comul = _zeros(field, d * d, d)
    # Delta(1)=1(x)1, Delta(g)=g(x)g, Delta(x)=x(x)1+g(x)x, Delta(gx)=gx(x)g+1(x)gx
    for (col, terms) in [(0, [(0, 0)]), (1, [(1, 1)]), (2, [(2, 0), (1, 2)]), (3, [(3, 1), (0, 3)])]:
        for a, b in terms:
            comul[a * d + b, col] = field.one
    S = _zeros(field, d, d)
    S[0, 0] = field.one
    S[1, 1] = field.one
    S[3, 2] = field(-1)   # S(x) = -gx
    S[2, 3] = field.one   # S(gx) = x
    unit = _zeros(field, d, 1)
    unit[0, 0] = field.one
    counit = field.array([[1, 1, 0, 0]])
    M = lambda a: Matrix(field, a)  # noqa: E731
    return HomHopfAlgebra.build(field, M(mul), M(unit), M(comul), M(counit), M(S),
                                Matrix.identity(field, d), name="sweedler")


def sweedler_automorphism(c, field: Field = QQ) -> Matrix:
    """g -> g, x -> c x (so gx -> c gx)."""
    c = field(c)
    if c == 0:
        raise ValueError("scaling c must be nonzero")
    return Matrix(field, field.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, c, 0], [0, 0, 0, c]]))


def sweedler_twist(c, field: Field = QQ) -> HomHopfAlgebra:
    aut = sweedler_automorphism(c, field)
    return yau_twist(sweedler(field), aut, name=f"sweedler_twist(c={field.format(field(c))})")


def regular_module(h: HomHopfAlgebra, side: str = "right"):
    """H acting on itself by the twisted multiplication, mu = alpha."""
    from .homrep import HomRepresentation
    kw = {"right_action": h.mul} if side == "right" else {"left_action": h.mul}
    return HomRepresentation(h, h.alpha, name=f"regular_module({side})", **kw)


def regular_comodule(h: HomHopfAlgebra, side: str = "right"):
    """H coacting on itself by the twisted comultiplication, mu = alpha."""
    from .homrep import HomRepresentation
    kw = {"right_coaction": h.comul} if side == "right" else {"left_coaction": h.comul}
    return HomRepresentation(h, h.alpha, name=f"regular_comodule({side})", **kw)


def regular_bicovariant(h: HomHopfAlgebra):
    """H with both multiplications and both coactions given by Delta."""
    from .homrep import HomRepresentation
    return HomRepresentation(h, h.alpha, left_action=h.mul, right_action=h.mul,
                             left_coaction=h.comul, right_coaction=h.comul, name="regular_bicovariant")


def trivial_yd(h: HomHopfAlgebra):
    """k with x<h = eps(h)x and x -> x (x) 1."""
    from .yd import YDModule
    f = h.field
    return YDModule(h, Matrix.identity(f, 1), h.counit, h.unit, name="trivial_yd")


def graded_yd(n: int, d: int, chi, field: Field = QQ, k: int = 1):
    """One-dimensional v<g^i = chi^i v, v -> v (x) g^d over cyclic_twist(n, k)."""
    from .yd import YDModule, verify_yd
    chi = field(chi)
    if int_pow(field, chi, n) != field.one:
        raise ValueError("chi must be an n-th root of unity")
    h = cyclic_twist(n, k, field)
    action = field.array([[int_pow(field, chi, i) for i in range(n)]])
    coaction = field.zeros((n, 1))
    coaction[d % n, 0] = field.one
    v = YDModule(h, Matrix.identity(field, 1), Matrix(field, action), Matrix(field, coaction),
                 name=f"graded_yd(n={n}, d={d}, chi={field.format(chi)}, k={k})")
    rep = verify_yd(v)
    if not rep.passed:
        detail = "; ".join(f"{c.name}: {c.witness}" for c in rep.failures)
        raise UnverifiedInputError(f"graded data is not Yetter-Drinfeld: {detail}", rep)
    return v


def int_pow(field: Field, x, e: int):
    out = field.one
    for _ in range(e):
        out = field(out * x)
    return out


def perturb(structure, tensor_name: str, index, delta=1, seed: int | None = None):
    """Copy of ``structure`` with one structure constant shifted by ``delta``.

    ``index`` is a flat index into the named matrix (row-major), or None to
    pick one from a seeded generator.
    """
    mat = getattr(structure, tensor_name)
    f = mat.field
    if index is None:
        index = int(np.random.default_rng(seed).integers(mat.a.size))
    if not 0 <= index < mat.a.size:
        raise IndexError(f"index {index} out of range for {tensor_name} of size {mat.a.size}")
    a = np.array(mat.a, copy=True)
    flat = a.reshape(-1)
    flat[index] = f(flat[index] + f(delta))
    new = Matrix(f, a)
    return structure.replace(**{tensor_name: new})


@dataclasses.dataclass(frozen=True)
class InstanceDescriptor:
    name: str
    parameters: tuple  # ((name, value), ...)

    def params(self) -> dict:
        return dict(self.parameters)


def _need(params, key, conv=int):
    if key not in params:
        raise ValueError(f"missing parameter {key!r}")
    return conv(params[key])


INSTANCES = {
    "group_algebra": ("n", "Hopf algebra k[C_n], alpha = id"),
    "cyclic_twist": ("n k", "Yau twist of k[C_n] by g -> g^k"),
    "sweedler": ("", "Sweedler's 4-dimensional Hopf algebra"),
    "sweedler_twist": ("c", "Yau twist of Sweedler's algebra by x -> c x"),
    "regular_module": ("base side", "H acting on itself"),
    "regular_comodule": ("base side", "H coacting on itself"),
    "regular_bicovariant": ("base", "H as a bicovariant bimodule over itself"),
    "trivial_yd": ("base", "the unit YD module k"),
    "graded_yd": ("n d chi k", "one-dimensional graded YD module over cyclic_twist(n, k)"),
}


def build_instance(name: str, params: dict, field: Field = QQ):
    """Construct a catalog instance from string parameters (CLI grammar)."""
    if name == "group_algebra":
        return group_algebra(_need(params, "n"), field)
    if name == "cyclic_twist":
        return cyclic_twist(_need(params, "n"), _need(params, "k"), field)
    if name == "sweedler":
        return sweedler(field)
    if name == "sweedler_twist":
        return sweedler_twist(field(_need(params, "c", str)), field)
    if name == "graded_yd":
        return graded_yd(_need(params, "n"), _need(params, "d"), field(_need(params, "chi", str)),
                         field, int(params.get("k", 1)))
    if name in ("regular_module", "regular_comodule", "regular_bicovariant", "trivial_yd"):
        base = params.get("base", "sweedler_twist:c=2")
        bname, _, bargs = base.partition(":")
        bparams = dict(kv.split("=", 1) for kv in bargs.split(",") if kv)
        h = build_instance(bname, bparams, field)
        if not isinstance(h, HomHopfAlgebra):
            raise ValueError(f"base {base!r} is not a Hopf algebra")
        side = params.get("side", "right")
        if side not in ("left", "right"):
            raise ValueError("side must be left or right")
        if name == "regular_module":
            return regular_module(h, side)
        if name == "regular_comodule":
            return regular_comodule(h, side)
        if name == "regular_bicovariant":
            return regular_bicovariant(h)
        return trivial_yd(h)
    raise ValueError(f"unknown instance {name!r}")
