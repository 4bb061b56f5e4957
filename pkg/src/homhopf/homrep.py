"""Hom-modules, Hom-comodules, covariant Hom-bimodules and their coinvariants.

Leg conventions for a representation M of dimension n over H of dimension d:
left action  H(x)M -> M   (n x dn)
right action M(x)H -> M   (n x nd)
left coaction  M -> H(x)M (dn x n), m -> m(-1) (x) m(0)
right coaction M -> M(x)H (nd x n), m -> m[0] (x) m[1]
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import ShapeError, StructuralError, UnverifiedInputError
from .exactlin import Matrix, Subspace, Tensor3, Wires, kernel, kron
from .homcore import HomHopfAlgebra, VerificationReport

STRUCTURES = ("left_action", "right_action", "left_coaction", "right_coaction")
RESPECT_ORDER = ("automorphism",) + STRUCTURES


@dataclass(frozen=True)
class CovarianceFlags:
    is_bimodule: bool
    is_left_covariant: bool
    is_right_covariant: bool
    is_bicovariant: bool


@dataclass(frozen=True, eq=False)
class HomRepresentation:
    over: HomHopfAlgebra
    mu: Matrix
    left_action: Matrix | None = None
    right_action: Matrix | None = None
    left_coaction: Matrix | None = None
    right_coaction: Matrix | None = None
    name: str = ""

    def __post_init__(self):
        n, d = self.mu.rows, self.over.dim
        if self.mu.shape != (n, n):
            raise ShapeError(f"mu must be square, got {self.mu.shape}")
        expected = {"left_action": (n, d * n), "right_action": (n, n * d),
                    "left_coaction": (d * n, n), "right_coaction": (n * d, n)}
        for key, shape in expected.items():
            m = getattr(self, key)
            if m is not None and m.shape != shape:
                raise ShapeError(f"{key} must be {shape[0]}x{shape[1]}, got {m.shape}")
            if m is not None and m.field != self.over.field:
                raise ShapeError(f"{key} lives over {m.field.spec}, not {self.over.field.spec}")

    @property
    def dim(self) -> int:
        return self.mu.rows

    @property
    def field(self):
        return self.over.field

    @cached_property
    def mu_inv(self) -> Matrix:
        return self.mu.inverse()

    @property
    def id(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    def has(self, *names: str) -> bool:
        return all(getattr(self, k) is not None for k in names)

    def need(self, *names: str) -> None:
        missing = [k for k in names if getattr(self, k) is None]
        if missing:
            raise ValueError(f"representation lacks {', '.join(missing)}")

    def tensor(self, name: str) -> Tensor3:
        m = getattr(self, name)
        d, n = self.over.dim, self.dim
        if name == "left_action":
            return Tensor3.from_binary(m, d, n)
        if name == "right_action":
            return Tensor3.from_binary(m, n, d)
        if name == "left_coaction":
            return Tensor3.from_split(m, d, n)
        return Tensor3.from_split(m, n, d)

    def replace(self, **changes) -> "HomRepresentation":
        parts = dict(over=self.over, mu=self.mu, name=self.name,
                     **{k: getattr(self, k) for k in STRUCTURES})
        parts.update(changes)
        return HomRepresentation(**parts)

    @cached_property
    def flags(self) -> CovarianceFlags:
        return covariance_flags(self)

    def __repr__(self):
        present = [k for k in STRUCTURES if getattr(self, k) is not None]
        return f"HomRepresentation({self.name or 'unnamed'}, dim={self.dim}, {'+'.join(present)})"


def _w(field, *dims) -> Wires:
    return Wires.identity(field, dims)


def _mu_check(rep: VerificationReport, m: HomRepresentation) -> bool:
    return rep.invertible("mu invertible", m.mu)


def verify_module(m: HomRepresentation, side: str) -> VerificationReport:
    h, n = m.over, m.dim
    d, F = h.dim, m.field
    rep = VerificationReport()
    if side == "right":
        m.need("right_action")
        act = m.right_action
        _mu_check(rep, m)
        W = _w(F, n, d, d)
        lhs = W.apply(h.mul, 1, 2).apply(m.mu, 0).apply(act, 0, 2).matrix()
        rhs = W.apply(act, 0, 2).apply(h.alpha, 1).apply(act, 0, 2).matrix()
        rep.compare("right module associativity", lhs, rhs, [n, d, d])
        rep.compare("right module unit", _w(F, n).insert(h.unit, 1).apply(act, 0, 2).matrix(), m.mu, [n])
        W2 = _w(F, n, d)
        rep.compare("right action morphism", m.mu @ act, W2.apply(m.mu, 0).apply(h.alpha, 1).apply(act, 0, 2).matrix(),
                    [n, d])
    elif side == "left":
        m.need("left_action")
        act = m.left_action
        _mu_check(rep, m)
        W = _w(F, d, d, n)
        lhs = W.apply(act, 1, 2).apply(h.alpha, 0).apply(act, 0, 2).matrix()
        rhs = W.apply(h.mul, 0, 2).apply(m.mu, 1).apply(act, 0, 2).matrix()
        rep.compare("left module associativity", lhs, rhs, [d, d, n])
        rep.compare("left module unit", _w(F, n).insert(h.unit, 0).apply(act, 0, 2).matrix(), m.mu, [n])
        W2 = _w(F, d, n)
        rep.compare("left action morphism", m.mu @ act, W2.apply(h.alpha, 0).apply(m.mu, 1).apply(act, 0, 2).matrix(),
                    [d, n])
    else:
        raise ValueError("side must be 'left' or 'right'")
    return rep


def verify_comodule(m: HomRepresentation, side: str) -> VerificationReport:
    h, n = m.over, m.dim
    d, F = h.dim, m.field
    rep = VerificationReport()
    if side == "right":
        m.need("right_coaction")
        co = m.right_coaction
        if not _mu_check(rep, m) or not h.alpha.is_invertible():
            rep.skip("right comodule coassociativity", "needs invertible mu and alpha")
        else:
            base = Wires.of(co, [n, d])
            lhs = base.apply(m.mu_inv, 0).apply(h.comul, 1, out=(d, d)).matrix()
            rhs = base.apply(co, 0, out=(n, d)).apply(h.alpha_inv, 2).matrix()
            rep.compare("right comodule coassociativity", lhs, rhs, [n])
            rep.compare("right comodule counit", base.apply(h.counit, 1, out=()).matrix(), m.mu_inv, [n])
        rep.compare("right coaction morphism", co @ m.mu, Wires.of(co, [n, d]).apply(m.mu, 0).apply(h.alpha, 1).matrix(),
                    [n])
    elif side == "left":
        m.need("left_coaction")
        co = m.left_coaction
        if not _mu_check(rep, m) or not h.alpha.is_invertible():
            rep.skip("left comodule coassociativity", "needs invertible mu and alpha")
        else:
            base = Wires.of(co, [d, n])
            lhs = base.apply(h.comul, 0, out=(d, d)).apply(m.mu_inv, 2).matrix()
            rhs = base.apply(co, 1, out=(d, n)).apply(h.alpha_inv, 0).matrix()
            rep.compare("left comodule coassociativity", lhs, rhs, [n])
            rep.compare("left comodule counit", base.apply(h.counit, 0, out=()).matrix(), m.mu_inv, [n])
        rep.compare("left coaction morphism", co @ m.mu, Wires.of(co, [d, n]).apply(h.alpha, 0).apply(m.mu, 1).matrix(),
                    [n])
    else:
        raise ValueError("side must be 'left' or 'right'")
    return rep


def verify_bimodule(m: HomRepresentation) -> VerificationReport:
    m.need("left_action", "right_action")
    h, n = m.over, m.dim
    d = h.dim
    rep = VerificationReport()
    rep.extend(verify_module(m, "left"))
    rep.extend(verify_module(m, "right"))
    W = _w(m.field, d, n, d)
    lhs = W.apply(m.left_action, 0, 2).apply(h.alpha, 1).apply(m.right_action, 0, 2).matrix()
    rhs = W.apply(m.right_action, 1, 2).apply(h.alpha, 0).apply(m.left_action, 0, 2).matrix()
    rep.compare("bimodule compatibility", lhs, rhs, [d, n, d])
    return _dedupe(rep)


def _dedupe(rep: VerificationReport) -> VerificationReport:
    seen, out = set(), VerificationReport()
    for c in rep.checks:
        if c.name not in seen:
            seen.add(c.name)
            out.checks.append(c)
    return out


def _covariance(m: HomRepresentation, coaction: Matrix, out_dims, name: str, rep: VerificationReport,
                left: bool):
    h, n = m.over, m.dim
    d = h.dim
    psi, phi = m.left_action, m.right_action
    W = _w(m.field, d, n, d)
    lhs = W.apply(psi, 0, 2).apply(h.alpha, 1).apply(phi, 0, 2).apply(coaction, 0, out=out_dims).matrix()
    # h1, h2, c1, c2, g1, g2 with (c1, c2) = coaction(m)
    w = W.apply(coaction, 1, out=out_dims).apply(h.comul, 0, out=(d, d)).apply(h.comul, 4, out=(d, d))
    w = w.permute(0, 2, 4, 1, 3, 5)
    if left:
        # (c1, c2) = (m(-1), m(0)): first leg multiplies in H, second acts on M
        w = w.apply(h.mul, 1, 2).apply(h.alpha, 0).apply(h.mul, 0, 2)
        w = w.apply(phi, 2, 2).apply(h.alpha, 1).apply(psi, 1, 2)
    else:
        w = w.apply(phi, 1, 2).apply(h.alpha, 0).apply(psi, 0, 2)
        w = w.apply(h.mul, 2, 2).apply(h.alpha, 1).apply(h.mul, 1, 2)
    rep.compare(name, lhs, w.matrix(), [d, n, d])


def verify_left_covariant(m: HomRepresentation) -> VerificationReport:
    m.need("left_action", "right_action", "left_coaction")
    rep = verify_bimodule(m)
    rep.extend(verify_comodule(m, "left"))
    _covariance(m, m.left_coaction, (m.over.dim, m.dim), "left covariance", rep, left=True)
    return rep


def verify_right_covariant(m: HomRepresentation) -> VerificationReport:
    m.need("left_action", "right_action", "right_coaction")
    rep = verify_bimodule(m)
    rep.extend(verify_comodule(m, "right"))
    _covariance(m, m.right_coaction, (m.dim, m.over.dim), "right covariance", rep, left=False)
    return rep


def hom_commutativity(m: HomRepresentation) -> VerificationReport:
    h, n = m.over, m.dim
    d = h.dim
    rep = VerificationReport()
    lhs = Wires.of(m.left_coaction, [d, n]).apply(m.right_coaction, 1, out=(n, d)).matrix()
    rhs = Wires.of(m.right_coaction, [n, d]).apply(m.left_coaction, 0, out=(d, n))
    rhs = rhs.apply(h.alpha, 0).apply(h.alpha_inv, 2).matrix()
    rep.compare("hom-commutativity", lhs, rhs, [n])
    return rep


def verify_bicovariant(m: HomRepresentation) -> VerificationReport:
    m.need(*STRUCTURES)
    rep = verify_left_covariant(m)
    rep.extend(verify_right_covariant(m))
    rep = _dedupe(rep)
    if m.over.alpha.is_invertible():
        rep.extend(hom_commutativity(m))
    else:
        rep.skip("hom-commutativity", "alpha not invertible")
    return rep


def covariance_flags(m: HomRepresentation) -> CovarianceFlags:
    bim = m.has("left_action", "right_action") and verify_bimodule(m).passed
    left = bim and m.has("left_coaction") and verify_left_covariant(m).passed
    right = bim and m.has("right_coaction") and verify_right_covariant(m).passed
    bi = left and right and hom_commutativity(m).passed
    return CovarianceFlags(bim, left, right, bi)


def _require(m: HomRepresentation, flag: str, what: str):
    if not getattr(m.flags, flag):
        raise UnverifiedInputError(f"{what} requires a verified input ({flag} is false)")


def coinvariants_left(m: HomRepresentation) -> Subspace:
    m.need("left_coaction")
    d, n = m.over.dim, m.dim
    trivial = Wires.of(m.mu_inv, [n]).insert(m.over.unit, 0).matrix()
    return kernel(m.left_coaction - trivial)


def coinvariants_right(m: HomRepresentation) -> Subspace:
    m.need("right_coaction")
    n = m.dim
    trivial = Wires.of(m.mu_inv, [n]).insert(m.over.unit, 1).matrix()
    return kernel(m.right_coaction - trivial)


def projector_left(m: HomRepresentation, check: bool = True) -> Matrix:
    """P_L(m) = S(m(-1)) m(0)."""
    if check:
        _require(m, "is_left_covariant", "projector_left")
    h = m.over
    return Wires.of(m.left_coaction, [h.dim, m.dim]).apply(h.S, 0).apply(m.left_action, 0, 2).matrix()


def projector_right(m: HomRepresentation, check: bool = True) -> Matrix:
    """P_R(m) = m[0] S(m[1])."""
    if check:
        _require(m, "is_right_covariant", "projector_right")
    h = m.over
    return Wires.of(m.right_coaction, [m.dim, h.dim]).apply(h.S, 1).apply(m.right_action, 0, 2).matrix()


def adjoint_right_on(m: HomRepresentation) -> Matrix:
    """m (x) h -> (S(h1) mu^-1(m)) alpha(h2) on a bimodule."""
    h, n = m.over, m.dim
    d = h.dim
    w = _w(m.field, n, d).apply(h.comul, 1, out=(d, d)).permute(1, 0, 2)
    w = w.apply(h.S, 0).apply(m.mu_inv, 1).apply(h.alpha, 2)
    return w.apply(m.left_action, 0, 2).apply(m.right_action, 0, 2).matrix()


def adjoint_left_on(m: HomRepresentation) -> Matrix:
    """h (x) m -> alpha(h1) (mu^-1(m) S(h2)) on a bimodule."""
    h, n = m.over, m.dim
    d = h.dim
    w = _w(m.field, d, n).apply(h.comul, 0, out=(d, d)).permute(0, 2, 1)
    w = w.apply(h.alpha, 0).apply(m.mu_inv, 1).apply(h.S, 2)
    return w.apply(m.right_action, 1, 2).apply(m.left_action, 0, 2).matrix()


def _restrict(sub: Subspace, image: Matrix, what: str) -> Matrix:
    res = sub.residual(image)
    if not res.is_zero():
        raise StructuralError(f"{what} leaves the coinvariant subspace")
    return sub.coordinates(image)


def induced_right_action_map(m: HomRepresentation, coinv: Subspace | None = None) -> Matrix:
    """m < h := P_L(mh) = ad_R(h) m on the left coinvariants, in their RREF basis."""
    _require(m, "is_left_covariant", "induced_right_action")
    C = coinv or coinvariants_left(m)
    d = m.over.dim
    start = kron(C.inclusion(), Matrix.identity(m.field, d))
    proj = projector_left(m) @ m.right_action @ start
    adj = adjoint_right_on(m) @ start
    if proj != adj:
        raise StructuralError("projection and adjoint forms of the induced action disagree")
    return _restrict(C, proj, "induced right action")


def induced_left_action_map(m: HomRepresentation, coinv: Subspace | None = None) -> Matrix:
    """h > m := P_R(hm) = ad_L(h) m on the right coinvariants."""
    _require(m, "is_right_covariant", "induced_left_action")
    C = coinv or coinvariants_right(m)
    d = m.over.dim
    start = kron(Matrix.identity(m.field, d), C.inclusion())
    proj = projector_right(m) @ m.left_action @ start
    adj = adjoint_left_on(m) @ start
    if proj != adj:
        raise StructuralError("projection and adjoint forms of the induced action disagree")
    return _restrict(C, proj, "induced left action")


def induced_right_action(m: HomRepresentation) -> Tensor3:
    C = coinvariants_left(m)
    return Tensor3.from_binary(induced_right_action_map(m, C), C.dim, m.over.dim)


def induced_left_action(m: HomRepresentation) -> Tensor3:
    C = coinvariants_right(m)
    return Tensor3.from_binary(induced_left_action_map(m, C), m.over.dim, C.dim)


def coinvariant_module_left(m: HomRepresentation) -> tuple[HomRepresentation, Subspace]:
    """^{coH}M as a right Hom-module under the induced action."""
    C = coinvariants_left(m)
    act = induced_right_action_map(m, C)
    mu = _restrict(C, m.mu @ C.inclusion(), "mu")
    return HomRepresentation(m.over, mu, right_action=act, name=f"coinv_left({m.name})"), C


def coinvariant_module_right(m: HomRepresentation) -> tuple[HomRepresentation, Subspace]:
    """M^{coH} as a left Hom-module under the induced action."""
    C = coinvariants_right(m)
    act = induced_left_action_map(m, C)
    mu = _restrict(C, m.mu @ C.inclusion(), "mu")
    return HomRepresentation(m.over, mu, left_action=act, name=f"coinv_right({m.name})"), C


def free_left_covariant(h: HomHopfAlgebra, n: HomRepresentation, check: bool = True) -> HomRepresentation:
    """H (x) N for a right Hom-module N."""
    n.need("right_action")
    if check and not verify_module(n, "right").passed:
        raise UnverifiedInputError("free_left_covariant needs a verified right module")
    d, k, F = h.dim, n.dim, h.field
    left = _w(F, d, d, k).apply(h.alpha_inv, 0).apply(h.mul, 0, 2).apply(n.mu, 1).matrix()
    right = _w(F, d, k, d).apply(h.comul, 2, out=(d, d)).permute(0, 2, 1, 3)
    right = right.apply(h.mul, 0, 2).apply(n.right_action, 1, 2).matrix()
    co = _w(F, d, k).apply(h.comul, 0, out=(d, d)).apply(h.alpha, 0).apply(n.mu_inv, 2).matrix()
    return HomRepresentation(h, kron(h.alpha, n.mu), left_action=left, right_action=right,
                             left_coaction=co, name=f"free_left({n.name})")


def free_right_covariant(h: HomHopfAlgebra, n: HomRepresentation, check: bool = True) -> HomRepresentation:
    """N (x) H for a left Hom-module N."""
    n.need("left_action")
    if check and not verify_module(n, "left").passed:
        raise UnverifiedInputError("free_right_covariant needs a verified left module")
    d, k, F = h.dim, n.dim, h.field
    right = _w(F, k, d, d).apply(n.mu, 0).apply(h.alpha_inv, 2).apply(h.mul, 1, 2).matrix()
    left = _w(F, d, k, d).apply(h.comul, 0, out=(d, d)).permute(0, 2, 1, 3)
    left = left.apply(n.left_action, 0, 2).apply(h.mul, 1, 2).matrix()
    co = _w(F, k, d).apply(n.mu_inv, 0).apply(h.comul, 1, out=(d, d)).apply(h.alpha, 2).matrix()
    return HomRepresentation(h, kron(n.mu, h.alpha), left_action=left, right_action=right,
                             right_coaction=co, name=f"free_right({n.name})")


def theta(m: HomRepresentation) -> tuple[Matrix, Matrix]:
    """theta: H (x) ^{coH}M -> M, h (x) u -> hu, and its inverse
    vartheta(m) = m(-1) (x) S(m(0)(-1)) m(0)(0), in coinvariant coordinates."""
    _require(m, "is_left_covariant", "theta")
    h = m.over
    C = coinvariants_left(m)
    if h.dim * C.dim != m.dim:
        raise StructuralError(f"dim H * dim coinvariants = {h.dim * C.dim} != dim M = {m.dim}")
    th = m.left_action @ kron(h.id, C.inclusion())
    P = projector_left(m)
    coords = C.coordinates(P)
    vt = Wires.of(m.left_coaction, [h.dim, m.dim]).apply(coords, 1).matrix()
    return th, vt


def theta_right(m: HomRepresentation) -> tuple[Matrix, Matrix]:
    """theta': M^{coH} (x) H -> M, u (x) h -> uh, and its inverse m -> P_R(m[0]) (x) m[1]."""
    _require(m, "is_right_covariant", "theta_right")
    h = m.over
    C = coinvariants_right(m)
    if h.dim * C.dim != m.dim:
        raise StructuralError(f"dim coinvariants * dim H = {h.dim * C.dim} != dim M = {m.dim}")
    th = m.right_action @ kron(C.inclusion(), h.id)
    coords = C.coordinates(projector_right(m))
    vt = Wires.of(m.right_coaction, [m.dim, h.dim]).apply(coords, 0).matrix()
    return th, vt


def is_morphism(f: Matrix, src: HomRepresentation, dst: HomRepresentation, respect) -> VerificationReport:
    h = src.over
    d, n, k = h.dim, src.dim, dst.dim
    F = src.field
    rep = VerificationReport()
    if f.shape != (k, n):
        raise ShapeError(f"morphism must be {k}x{n}, got {f.shape}")
    respect = set(respect)
    unknown = respect - set(RESPECT_ORDER)
    if unknown:
        raise ValueError(f"unknown structures {sorted(unknown)}")
    for key in RESPECT_ORDER:
        if key not in respect:
            continue
        if key == "automorphism":
            rep.compare("intertwines automorphism", f @ src.mu, dst.mu @ f, [n])
            continue
        src.need(key)
        dst.need(key)
        s, t = getattr(src, key), getattr(dst, key)
        if key == "left_action":
            rep.compare("left linear", f @ s, t @ kron(h.id, f), [d, n])
        elif key == "right_action":
            rep.compare("right linear", f @ s, t @ kron(f, h.id), [n, d])
        elif key == "left_coaction":
            rep.compare("left colinear", kron(h.id, f) @ s, t @ f, [n])
        else:
            rep.compare("right colinear", kron(f, h.id) @ s, t @ f, [n])
    if {"left_action", "right_action"} <= respect:
        W = _w(F, d, n, d)
        lhs = W.apply(src.left_action, 0, 2).apply(h.alpha, 1).apply(src.right_action, 0, 2).apply(f, 0).matrix()
        rhs = W.apply(f, 1).apply(dst.right_action, 1, 2).apply(h.alpha, 0).apply(dst.left_action, 0, 2).matrix()
        rep.compare("bimodule morphism compatibility", lhs, rhs, [d, n, d])
    return rep


def direct_sum(a: HomRepresentation, b: HomRepresentation) -> tuple[HomRepresentation, dict]:
    """A (+) B with the structures both carry, plus inclusion/projection matrices."""
    h, F = a.over, a.field
    n, k, d = a.dim, b.dim, h.dim
    N = n + k
    i1 = Matrix(F, F.eye(N)[:, :n].copy())
    i2 = Matrix(F, F.eye(N)[:, n:].copy())
    p1, p2 = i1.T, i2.T
    hid = h.id

    def blockmu(x, y):
        return i1 @ x @ p1 + i2 @ y @ p2

    parts = {}
    for key in STRUCTURES:
        x, y = getattr(a, key), getattr(b, key)
        if x is None or y is None:
            continue
        if key == "left_action":
            parts[key] = i1 @ x @ kron(hid, p1) + i2 @ y @ kron(hid, p2)
        elif key == "right_action":
            parts[key] = i1 @ x @ kron(p1, hid) + i2 @ y @ kron(p2, hid)
        elif key == "left_coaction":
            parts[key] = kron(hid, i1) @ x @ p1 + kron(hid, i2) @ y @ p2
        else:
            parts[key] = kron(i1, hid) @ x @ p1 + kron(i2, hid) @ y @ p2
    s = HomRepresentation(h, blockmu(a.mu, b.mu), name=f"({a.name}+{b.name})", **parts)
    return s, {"i1": i1, "i2": i2, "p1": p1, "p2": p2}
