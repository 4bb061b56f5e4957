"""Yetter-Drinfeld Hom-modules (right-right), their braided tensor category, and
the braided monoidal equivalence with bicovariant Hom-bimodules.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from itertools import combinations

from .covmonoidal import _zero_check, associator, free_bicovariant, tensor_morphisms, tensor_over_h
from .errors import ShapeError, SingularAntipodeError, StructuralError, UnverifiedInputError
from .exactlin import Matrix, Subspace, Tensor3, Wires, kernel, kron
from .homcore import HomHopfAlgebra, VerificationReport
from .homrep import (HomRepresentation, coinvariants_left, induced_right_action_map, is_morphism,
                     theta, verify_comodule, verify_module)


@dataclass(frozen=True, eq=False)
class YDModule:
    over: HomHopfAlgebra
    mu: Matrix
    action: Matrix      # dim x dim*d, legs (v, h)
    coaction: Matrix    # dim*d x dim, v -> v(0) (x) v(1)
    name: str = ""

    def __post_init__(self):
        n, d = self.mu.rows, self.over.dim
        if self.mu.shape != (n, n):
            raise ShapeError(f"mu must be square, got {self.mu.shape}")
        if self.action.shape != (n, n * d):
            raise ShapeError(f"action must be {n}x{n * d}, got {self.action.shape}")
        if self.coaction.shape != (n * d, n):
            raise ShapeError(f"coaction must be {n * d}x{n}, got {self.coaction.shape}")

    @property
    def dim(self) -> int:
        return self.mu.rows

    @property
    def field(self):
        return self.over.field

    @property
    def id(self) -> Matrix:
        return Matrix.identity(self.field, self.dim)

    @cached_property
    def mu_inv(self) -> Matrix:
        return self.mu.inverse()

    @property
    def action_tensor(self) -> Tensor3:
        return Tensor3.from_binary(self.action, self.dim, self.over.dim)

    @property
    def coaction_tensor(self) -> Tensor3:
        return Tensor3.from_split(self.coaction, self.dim, self.over.dim)

    def as_right_module(self) -> HomRepresentation:
        return HomRepresentation(self.over, self.mu, right_action=self.action, name=self.name)

    @cached_property
    def representation(self) -> HomRepresentation:
        return HomRepresentation(self.over, self.mu, right_action=self.action,
                                 right_coaction=self.coaction, name=self.name)

    def replace(self, **changes) -> "YDModule":
        parts = dict(over=self.over, mu=self.mu, action=self.action, coaction=self.coaction, name=self.name)
        parts.update(changes)
        return YDModule(**parts)

    def __repr__(self):
        return f"YDModule({self.name or 'unnamed'}, dim={self.dim}, over={self.over.name})"


def yd_condition_maps(v: YDModule, alternate: bool = False) -> tuple[Matrix, Matrix]:
    """Both sides of the twisted YD condition as maps V (x) H -> V (x) H."""
    h = v.over
    d, n = h.dim, v.dim
    ai = h.alpha_inv
    base = Wires.identity(v.field, [n, d])
    w = base.apply(v.coaction, 0, out=(n, d)).apply(h.comul, 2, out=(d, d)).permute(0, 2, 1, 3)
    w = w.apply(ai, 1)
    if alternate:
        # v(0) < a^-1(h1) (x) a(v(1)) h2
        w = w.apply(h.alpha, 2)
    else:
        # v(0) < a^-1(h1) (x) v(1) a^-1(h2)
        w = w.apply(ai, 3)
    lhs = w.apply(v.action, 0, 2).apply(h.mul, 1, 2).matrix()
    r = base.apply(h.comul, 1, out=(d, d)).permute(0, 2, 1).apply(v.action, 0, 2)
    r = r.apply(v.coaction, 0, out=(n, d)).permute(0, 2, 1).apply(h.mul, 1, 2)
    if not alternate:
        # (v < h2)(0) (x) a^-1(h1 (v < h2)(1))
        r = r.apply(ai, 1)
    return lhs, r.matrix()


def verify_yd(v: YDModule) -> VerificationReport:
    rep = VerificationReport()
    rep.extend(verify_module(v.representation, "right"))
    com = verify_comodule(v.representation, "right")
    rep.extend(VerificationReport([c for c in com.checks if c.name != "mu invertible"]))
    if not v.over.alpha.is_invertible():
        rep.skip("yd condition", "alpha not invertible")
        return rep
    dims = [v.dim, v.over.dim]
    ok7 = rep.compare("yd condition", *yd_condition_maps(v), dims)
    alt = VerificationReport()
    ok3 = alt.compare("yd condition (alternate form)", *yd_condition_maps(v, alternate=True), dims)
    rep.extend(alt)
    rep.add("yd forms agree", ok3 == ok7, detail=f"displayed form {ok7}, alternate form {ok3}")
    return rep


@dataclass
class CoactionSolutions:
    """Linear solution space of the YD and colinearity constraints, and the
    coactions among its basic points that also satisfy the comodule laws."""

    space: Subspace          # coordinates (t, coaction entries), counit law scaled by t
    affine_dim: int          # dimension of the t = 1 slice, -1 if empty
    candidates: list = dc_field(default_factory=list)
    coactions: list = dc_field(default_factory=list)
    truncated: bool = False


def yd_solve_coactions(h: HomHopfAlgebra, action, mu: Matrix, max_candidates: int = 20000) -> CoactionSolutions:
    """All coactions making (V, action, mu) Yetter-Drinfeld, as far as the
    linear constraints plus a search over basic points can find them."""
    F = h.field
    act = action.binary() if isinstance(action, Tensor3) else action
    n, d = mu.rows, h.dim
    U = n * d * n
    module = HomRepresentation(h, mu, right_action=act)
    if not verify_module(module, "right").passed:
        raise UnverifiedInputError("yd_solve_coactions needs a verified right module")
    mu_inv = mu.inverse()

    def residuals(X: Matrix, t) -> Matrix:
        v = YDModule(h, mu, act, X)
        lhs, rhs = yd_condition_maps(v)
        colin = X @ mu - kron(mu, h.alpha) @ X
        counit = Wires.of(X, [n, d]).apply(h.counit, 1, out=()).matrix() - mu_inv.scale(t)
        parts = [lhs - rhs, colin, counit]
        return Matrix(F, _vstack(F, [p.a.reshape(-1, 1) for p in parts]))

    cols = [residuals(Matrix.zeros(F, n * d, n), F.one)]
    for k in range(U):
        E = F.zeros((n * d * n,))
        E[k] = F.one
        cols.append(residuals(Matrix(F, E.reshape(n * d, n)), F.zero))
    A = Matrix(F, _hstack(F, [c.a for c in cols]))
    space = kernel(A)
    sol = CoactionSolutions(space, -1)
    if n == 0:
        sol.affine_dim = 0
        X = Matrix.zeros(F, 0, 0)
        sol.candidates = [X]
        sol.coactions = [X]
        return sol
    if not space.pivots or space.pivots[0] != 0:
        return sol
    p = Matrix(F, space.basis[0, 1:].reshape(-1, 1).copy())
    D = Matrix(F, space.basis[1:, 1:].T.copy())
    f = D.cols
    sol.affine_dim = f
    points = []
    if f == 0:
        points.append(p)
    else:
        for count, Z in enumerate(combinations(range(U), f)):
            if count >= max_candidates:
                sol.truncated = True
                break
            sub = Matrix(F, D.a[list(Z), :].copy())
            if not sub.is_invertible():
                continue
            c = -(sub.inverse() @ Matrix(F, p.a[list(Z), :].copy()))
            x = p + D @ c
            if not any(x == q for q in points):
                points.append(x)
    for x in points:
        X = Matrix(F, x.a.reshape(n * d, n).copy())
        sol.candidates.append(X)
        if verify_yd(YDModule(h, mu, act, X)).passed:
            sol.coactions.append(X)
    return sol


def _vstack(F, arrs):
    import numpy as np
    return np.concatenate(arrs, axis=0) if arrs else F.zeros((0, 1))


def _hstack(F, arrs):
    import numpy as np
    return np.concatenate(arrs, axis=1)


def _require_yd(*vs: YDModule):
    for v in vs:
        if not _verified(v):
            raise UnverifiedInputError(f"{v.name or 'input'} is not a verified YD module")


@lru_cache(maxsize=512)
def _verified(v: YDModule) -> bool:
    return verify_yd(v).passed


@lru_cache(maxsize=512)
def yd_tensor(m: YDModule, n: YDModule) -> YDModule:
    """(m (x) n) < h = m < h1 (x) n < h2, coaction (m(0) (x) n(0)) (x) m(1) n(1)."""
    _require_yd(m, n)
    h = m.over
    d, a, b = h.dim, m.dim, n.dim
    W = Wires.identity(m.field, [a, b, d])
    act = W.apply(h.comul, 2, out=(d, d)).permute(0, 2, 1, 3).apply(m.action, 0, 2).apply(n.action, 1, 2)
    co = Wires.identity(m.field, [a, b]).apply(m.coaction, 0, out=(a, d)).apply(n.coaction, 2, out=(b, d))
    co = co.permute(0, 2, 1, 3).apply(h.mul, 2, 2)
    return YDModule(h, kron(m.mu, n.mu), act.matrix(), co.matrix(), name=f"({m.name} (x) {n.name})")


@lru_cache(maxsize=64)
def yd_unit(h: HomHopfAlgebra) -> YDModule:
    from .catalog import trivial_yd
    return trivial_yd(h)


def yd_associator(m: YDModule, n: YDModule, p: YDModule) -> Matrix:
    """(m (x) n) (x) p -> mu(m) (x) (n (x) pi^-1(p)) on flat tensors."""
    return kron(kron(m.mu, n.id), p.mu_inv)


def yd_unit_left(m: YDModule) -> Matrix:
    return m.mu


def yd_unit_right(m: YDModule) -> Matrix:
    return m.mu


def yd_braiding(m: YDModule, n: YDModule) -> Matrix:
    """m (x) n -> nu(n(0)) (x) mu^-1(m) < n(1)."""
    h = m.over
    d, a, b = h.dim, m.dim, n.dim
    w = Wires.identity(m.field, [a, b]).apply(n.coaction, 1, out=(b, d)).apply(n.mu, 1).apply(m.mu_inv, 0)
    return w.permute(1, 0, 2).apply(m.action, 1, 2).matrix()


def yd_braiding_inverse(m: YDModule, n: YDModule) -> Matrix:
    """n (x) m -> mu^-1(m) < S^-1(n(1)) (x) nu(n(0)).  Needs S invertible."""
    h = m.over
    Si = h.S_inv
    d, a, b = h.dim, m.dim, n.dim
    w = Wires.identity(m.field, [b, a]).apply(n.coaction, 0, out=(b, d)).apply(Si, 1).apply(m.mu_inv, 2)
    return w.permute(2, 1, 0).apply(m.action, 0, 2).apply(n.mu, 1).matrix()


def yd_braiding_checks(m: YDModule, n: YDModule) -> VerificationReport:
    _require_yd(m, n)
    c = yd_braiding(m, n)
    src, dst = yd_tensor(m, n), yd_tensor(n, m)
    rep = is_morphism(c, src.representation, dst.representation,
                      {"automorphism", "right_action", "right_coaction"})
    try:
        ci = yd_braiding_inverse(m, n)
    except SingularAntipodeError:
        rep.skip("c o c^-1 = id", "antipode not invertible: prebraided only")
        rep.skip("c^-1 o c = id", "antipode not invertible: prebraided only")
        return rep
    rep.compare("c o c^-1 = id", c @ ci, dst.id, [dst.dim])
    rep.compare("c^-1 o c = id", ci @ c, src.id, [src.dim])
    return rep


def yd_hexagons(m: YDModule, n: YDModule, p: YDModule) -> VerificationReport:
    c, a = yd_braiding, yd_associator
    rep = VerificationReport()
    lhs = kron(n.id, c(m, p)) @ a(n, m, p) @ kron(c(m, n), p.id)
    rhs = a(n, p, m) @ c(m, yd_tensor(n, p)) @ a(m, n, p)
    rep.compare("hexagon 1", lhs, rhs, [m.dim, n.dim, p.dim])
    lhs = a(p, m, n).inverse() @ c(yd_tensor(m, n), p) @ a(m, n, p).inverse()
    rhs = kron(c(m, p), n.id) @ a(m, p, n).inverse() @ kron(m.id, c(n, p))
    rep.compare("hexagon 2", lhs, rhs, [m.dim, n.dim, p.dim])
    return rep


def yd_monoidal_checks(m: YDModule, n: YDModule, p: YDModule, q: YDModule | None = None) -> VerificationReport:
    """Associator intertwining, units, triangle and (given q) pentagon for the YD tensor product."""
    a = yd_associator
    rep = VerificationReport()
    src = yd_tensor(yd_tensor(m, n), p).representation
    dst = yd_tensor(m, yd_tensor(n, p)).representation
    rep.add("associator invertible", a(m, n, p).is_invertible())
    rep.extend(is_morphism(a(m, n, p), src, dst, {"automorphism", "right_action", "right_coaction"}),
               prefix="associator ")
    k = yd_unit(m.over)
    for side, t in (("left", yd_tensor(k, m)), ("right", yd_tensor(m, k))):
        rep.add(f"{side} unit invertible", m.mu.is_invertible())
        rep.extend(is_morphism(m.mu, t.representation, m.representation,
                               {"automorphism", "right_action", "right_coaction"}), prefix=f"{side} unit ")
    rep.compare("triangle", kron(m.id, yd_unit_left(n)) @ a(m, k, n), kron(yd_unit_right(m), n.id),
                [m.dim, n.dim])
    if q is not None:
        lhs = a(m, n, yd_tensor(p, q)) @ a(yd_tensor(m, n), p, q)
        rhs = kron(m.id, a(n, p, q)) @ a(m, yd_tensor(n, p), q) @ kron(a(m, n, p), q.id)
        rep.compare("pentagon", lhs, rhs, [m.dim, n.dim, p.dim, q.dim])
    return rep


@lru_cache(maxsize=512)
def functor_F(v: YDModule) -> HomRepresentation:
    _require_yd(v)
    return free_bicovariant(v.over, v, check=False)


def functor_G(m: HomRepresentation) -> YDModule:
    """Left coinvariants with the induced right action and the restricted right coaction."""
    return _functor_G(m)[0]


@lru_cache(maxsize=512)
def _functor_G(m: HomRepresentation):
    if not m.flags.is_bicovariant:
        raise UnverifiedInputError("functor_G needs a verified bicovariant bimodule")
    h = m.over
    C = coinvariants_left(m)
    act = induced_right_action_map(m, C)
    incl = C.inclusion()
    mu_img = m.mu @ incl
    if not C.contains(mu_img):
        raise StructuralError("mu does not preserve the coinvariants")
    mu = C.coordinates(mu_img)
    image = m.right_coaction @ incl
    target = kron(incl, h.id)
    coords = kron(C.coordinates(m.id), h.id) @ image
    if target @ coords != image:
        raise StructuralError("right coaction leaves coinvariants (x) H")
    return YDModule(h, mu, act, coords, name=f"G({m.name})"), C


def gf_identification(v: YDModule) -> Matrix:
    """V -> G(F(V)), n -> 1 (x) nu^-1(n), in the coinvariant basis."""
    Fv = functor_F(v)
    _, C = _functor_G(Fv)
    j = Wires.of(v.mu_inv, [v.dim]).insert(v.over.unit, 0).matrix()
    if not C.contains(j):
        raise StructuralError("1 (x) V is not inside the coinvariants")
    return C.coordinates(j)


def fg_identification(m: HomRepresentation) -> Matrix:
    """theta: F(G(M)) = H (x) coH M -> M."""
    return theta(m)[0]


def equivalence_round_trips(v: YDModule, m: HomRepresentation | None = None) -> VerificationReport:
    rep = VerificationReport()
    Fv = functor_F(v)
    g = functor_G(Fv)
    j = gf_identification(v)
    rep.add("G(F(V)) identification invertible", j.is_invertible())
    rep.extend(is_morphism(j, v.representation, g.representation,
                           {"automorphism", "right_action", "right_coaction"}), prefix="G(F(V)) ")
    target = Fv if m is None else m
    th = fg_identification(target)
    FG = functor_F(functor_G(target))
    rep.add("F(G(M)) identification invertible", th.is_invertible())
    from .homrep import STRUCTURES
    rep.extend(is_morphism(th, FG, target, {"automorphism", *STRUCTURES}), prefix="F(G(M)) ")
    return rep


def phi2_ambient(v: YDModule, w: YDModule) -> Matrix:
    """(g (x) v) (x) (h (x) w) -> g alpha(h1) (x) (mu^-1(v) < h2 (x) w)."""
    h = v.over
    d, a, b = h.dim, v.dim, w.dim
    x = Wires.identity(v.field, [d, a, d, b]).apply(h.comul, 2, out=(d, d))
    x = x.apply(h.alpha, 2).apply(v.mu_inv, 1).permute(0, 2, 1, 3, 4)
    return x.apply(h.mul, 0, 2).apply(v.action, 1, 2).matrix()


def phi2(v: YDModule, w: YDModule) -> tuple[Matrix, Matrix]:
    """phi_2(V, W): F(V) (x)_H F(W) -> F(V (x) W) and its inverse."""
    h = v.over
    T = tensor_over_h(functor_F(v), functor_F(w))
    amb = phi2_ambient(v, w)
    rep = VerificationReport()
    if not _zero_check(rep, "phi2 descent", amb @ T.relations):
        raise StructuralError("phi2 is not well defined", rep.failures[0].witness)
    fwd = amb @ T.section
    inv = Wires.identity(v.field, [h.dim, v.dim, w.dim]).apply(h.alpha_inv, 0).insert(h.unit, 2).matrix()
    return fwd, T.project @ inv


def phi2_checks(v: YDModule, w: YDModule) -> VerificationReport:
    from .homrep import STRUCTURES
    f, g = phi2(v, w)
    T = tensor_over_h(functor_F(v), functor_F(w))
    tgt = functor_F(yd_tensor(v, w))
    rep = VerificationReport()
    rep.compare("phi2 o phi2^-1 = id", f @ g, tgt.id, [tgt.dim])
    rep.compare("phi2^-1 o phi2 = id", g @ f, T.structure.id, [T.dim])
    rep.add("rank phi2 = dim H dim V dim W", f.rank() == v.over.dim * v.dim * w.dim,
            detail=f"rank {f.rank()}")
    rep.extend(is_morphism(f, T.structure, tgt, {"automorphism", *STRUCTURES}), prefix="phi2 ")
    return rep


def phi2_coherence(u: YDModule, v: YDModule, w: YDModule) -> VerificationReport:
    """phi2(U,V(x)W) (id (x) phi2(V,W)) a = (id_H (x) a) phi2(U(x)V,W) (phi2(U,V) (x) id)."""
    h = u.over
    Fu, Fv, Fw = functor_F(u), functor_F(v), functor_F(w)
    vw, uv = yd_tensor(v, w), yd_tensor(u, v)
    T_vw = tensor_over_h(Fv, Fw)
    T_uv = tensor_over_h(Fu, Fv)
    lhs = (phi2(u, vw)[0]
           @ tensor_morphisms(Fu.id, phi2(v, w)[0], tensor_over_h(Fu, T_vw.structure),
                              tensor_over_h(Fu, functor_F(vw)))
           @ associator(Fu, Fv, Fw))
    rhs = (kron(h.id, yd_associator(u, v, w))
           @ phi2(uv, w)[0]
           @ tensor_morphisms(phi2(u, v)[0], Fw.id, tensor_over_h(T_uv.structure, Fw),
                              tensor_over_h(functor_F(uv), Fw)))
    rep = VerificationReport()
    rep.compare("phi2 coherence", lhs, rhs, [lhs.cols])
    return rep


def verify_braided_equivalence(v: YDModule, w: YDModule) -> VerificationReport:
    """phi2(W,V) c_{F(V),F(W)} phi2(V,W)^-1 = id_H (x) c_{V,W}."""
    from .covmonoidal import braiding_bicov
    _require_yd(v, w)
    h = v.over
    rep = VerificationReport()
    c = braiding_bicov(functor_F(v), functor_F(w))
    lhs = phi2(w, v)[0] @ c @ phi2(v, w)[1]
    rhs = kron(h.id, yd_braiding(v, w))
    rep.compare("braided equivalence", lhs, rhs, [h.dim, v.dim, w.dim])
    try:
        h.S_inv
        rep.add("antipode invertible (braided)", True)
    except SingularAntipodeError:
        rep.skip("antipode invertible (braided)", "prebraided only")
    return rep


def yd_direct_sum(a: YDModule, b: YDModule) -> tuple[YDModule, dict]:
    from .homrep import direct_sum
    s, maps = direct_sum(a.representation, b.representation)
    return YDModule(a.over, s.mu, s.right_action, s.right_coaction, name=s.name), maps
