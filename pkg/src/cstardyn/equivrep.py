"""Equivariant representations of finite commutative C*-dynamical systems.

A representation is a pair (rho, v) on a sectional module: rho is a unital
*-representation of C^n by fiber-preserving operators, and v(g) moves fiber
g^{-1}x to fiber x through a matrix u[g][x] of shape (d_x, d_{g^{-1}x}).
Storing v in this normal form bakes in relation (iii) of the definition; the
remaining relations are verified numerically by :func:`verify_equivariant`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import DEFAULT_TOL, System, act_on_algebra
from .hilbmod import (
    ModuleOperator,
    ModuleVector,
    SectionalModule,
    basis_vectors,
    canonical_rep,
    internal_tensor,
    module_action,
    module_norm,
    trivial_module,
)
from .numutil import max_abs, nearest_unitary, null_space
from .reporting import CheckReport


class NotPositiveDefiniteError(ValueError):
    """Raised when a construction requires a positive definite multiplier."""

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__(f"multiplier is not positive definite: {certificate}")


@dataclass(frozen=True, eq=False)
class EquivariantRep:
    """Representation data.  ``rho[k]`` is the generator rho(e_k); for each
    group element g, ``v_mats[g][x]`` is the matrix of v(g) from fiber g^{-1}x
    into fiber x.  ``regular_base`` is set when the module is a direct sum of
    group-indexed copies of a base module (slot h occupies rows
    [h*d_x, (h+1)*d_x) of fiber x)."""

    system: System
    module: SectionalModule
    rho: tuple[ModuleOperator, ...]
    v_mats: tuple[tuple[np.ndarray, ...], ...]
    regular_base: Optional[SectionalModule] = None

    def __post_init__(self):
        n = self.module.n_points
        if self.system.n_points != n:
            raise ValueError("module base and system space disagree")
        if len(self.rho) != n:
            raise ValueError("rho needs one generator per point")
        order = self.system.group.order
        if len(self.v_mats) != order:
            raise ValueError("v needs one family of matrices per group element")
        dims = self.module.fiber_dims
        mats = []
        for g in range(order):
            per_point = []
            for x in range(n):
                src = self.system.action.apply_inv(g, x)
                m = np.asarray(self.v_mats[g][x], dtype=complex).reshape(dims[x], dims[src])
                per_point.append(m)
            mats.append(tuple(per_point))
        object.__setattr__(self, "v_mats", tuple(mats))

    def rho_operator(self, a: np.ndarray) -> ModuleOperator:
        a = np.asarray(a, dtype=complex).reshape(self.module.n_points)
        blocks = []
        for x, d in enumerate(self.module.fiber_dims):
            acc = np.zeros((d, d), dtype=complex)
            for k, gen in enumerate(self.rho):
                acc = acc + a[k] * gen.blocks[x]
            blocks.append(acc)
        return ModuleOperator(self.module, tuple(blocks))

    def apply_rho(self, a: np.ndarray, vec: ModuleVector) -> ModuleVector:
        return self.rho_operator(a).apply(vec)

    def apply_v(self, g: int, vec: ModuleVector) -> ModuleVector:
        if vec.module != self.module:
            raise ValueError("vector lives on a different module")
        comps = []
        for x in self.module.space.points():
            src = self.system.action.apply_inv(g, x)
            comps.append(self.v_mats[g][x] @ vec.components[src])
        return ModuleVector(self.module, tuple(comps))

    def v_full_matrix(self, g: int) -> np.ndarray:
        """v(g) as one total_dim x total_dim matrix in fiber-block coordinates."""
        dims = self.module.fiber_dims
        off = self.module.offsets()
        out = np.zeros((self.module.total_dim, self.module.total_dim), dtype=complex)
        for x in self.module.space.points():
            src = self.system.action.apply_inv(g, x)
            out[off[x] : off[x] + dims[x], off[src] : off[src] + dims[src]] = self.v_mats[g][x]
        return out

    def rho_full_matrix(self, a: np.ndarray) -> np.ndarray:
        op = self.rho_operator(a)
        dims = self.module.fiber_dims
        off = self.module.offsets()
        out = np.zeros((self.module.total_dim, self.module.total_dim), dtype=complex)
        for x in self.module.space.points():
            out[off[x] : off[x] + dims[x], off[x] : off[x] + dims[x]] = op.blocks[x]
        return out


@dataclass(frozen=True, eq=False)
class CyclicVector:
    rep: EquivariantRep
    vector: ModuleVector

    def __post_init__(self):
        if self.vector.module != self.rep.module:
            raise ValueError("vector lives on a different module")


def verify_equivariant(rep: EquivariantRep, tol: float = DEFAULT_TOL) -> CheckReport:
    """Residual report for the representation and equivariance laws.

    Checks: rho unital / multiplicative / self-adjoint on generators, the
    three defining relations, v(e) = id, v a homomorphism, and the isometry
    consequence on a spanning set.  Failures are reported, never raised.
    """
    report = CheckReport()
    sys_, mod = rep.system, rep.module
    n, order = mod.n_points, sys_.group.order
    dims = mod.fiber_dims
    eye = [np.eye(d, dtype=complex) for d in dims]

    res = 0.0
    for x in range(n):
        total = sum(gen.blocks[x] for gen in rep.rho) if n else eye[x]
        res = max(res, max_abs(total - eye[x]))
    report.add("rho unital", res, tol)

    res = 0.0
    for k in range(n):
        for l in range(n):
            for x in range(n):
                prod = rep.rho[k].blocks[x] @ rep.rho[l].blocks[x]
                target = rep.rho[k].blocks[x] if k == l else np.zeros_like(prod)
                res = max(res, max_abs(prod - target))
    report.add("rho multiplicative", res, tol)

    res = max(
        max_abs(gen.blocks[x] - gen.blocks[x].conj().T) for gen in rep.rho for x in range(n)
    )
    report.add("rho self-adjoint", res, tol)

    # relation (i): rho(alpha_g(e_k)) v(g) = v(g) rho(e_k), per fiber
    res = 0.0
    for g in range(order):
        for k in range(n):
            gk = sys_.action.apply(g, k)
            for x in range(n):
                src = sys_.action.apply_inv(g, x)
                lhs = rep.rho[gk].blocks[x] @ rep.v_mats[g][x]
                rhs = rep.v_mats[g][x] @ rep.rho[k].blocks[src]
                res = max(res, max_abs(lhs - rhs))
    report.add("relation (i) covariance", res, tol)

    # relation (ii) is equivalent to every matrix of v being unitary
    res = 0.0
    for g in range(order):
        for x in range(n):
            u = rep.v_mats[g][x]
            src = sys_.action.apply_inv(g, x)
            res = max(res, max_abs(u.conj().T @ u - np.eye(dims[src])))
            res = max(res, max_abs(u @ u.conj().T - eye[x]))
    report.add("relation (ii) inner products", res, tol)

    # relation (iii) on the basis: v(g)(xi.a) = (v(g)xi).alpha_g(a)
    res = 0.0
    basis = basis_vectors(mod)
    for g in range(order):
        for k in range(n):
            a = np.zeros(n)
            a[k] = 1.0
            ag = act_on_algebra(sys_.action, g, a)
            for xi in basis:
                lhs = rep.apply_v(g, module_action(xi, a))
                rhs = module_action(rep.apply_v(g, xi), ag)
                res = max(res, max_abs(lhs.flat() - rhs.flat()))
    report.add("relation (iii) module action", res, tol)

    res = 0.0
    e = sys_.group.identity
    for x in range(n):
        res = max(res, max_abs(rep.v_mats[e][x] - eye[x]))
    report.add("v(e) identity", res, tol)

    res = 0.0
    for g in range(order):
        for h in range(order):
            gh = sys_.group.mul(g, h)
            for x in range(n):
                src_g = sys_.action.apply_inv(g, x)
                lhs = rep.v_mats[gh][x]
                rhs = rep.v_mats[g][x] @ rep.v_mats[h][src_g]
                res = max(res, max_abs(lhs - rhs))
    report.add("v homomorphism", res, tol)

    res = 0.0
    for g in range(order):
        for xi in basis:
            res = max(res, abs(module_norm(rep.apply_v(g, xi)) - module_norm(xi)))
    report.add("v isometric", res, tol)
    return report


def trivial_rep(system: System) -> EquivariantRep:
    """(multiplication, alpha) on C^n over itself: every fiber is a line and
    v permutes the lines according to the action."""
    mod = trivial_module(system.space)
    rho = tuple(canonical_rep(mod))
    one = np.ones((1, 1), dtype=complex)
    v_mats = tuple(
        tuple(one.copy() for _ in range(system.n_points)) for _ in range(system.group.order)
    )
    return EquivariantRep(system, mod, rho, v_mats)


def regular_rep(rep: EquivariantRep) -> EquivariantRep:
    """The group-indexed amplification: module = direct sum of one copy of the
    original module per group element, rho acting slotwise and
    (v(g) xi)(h) = v(g) xi(g^{-1}h)."""
    sys_ = rep.system
    order = sys_.group.order
    base = rep.module
    dims = tuple(order * d for d in base.fiber_dims)
    mod = SectionalModule(base.space, dims)

    rho = []
    for k in range(base.n_points):
        blocks = [np.kron(np.eye(order), rep.rho[k].blocks[x]) for x in base.space.points()]
        rho.append(ModuleOperator(mod, tuple(blocks)))

    v_mats = []
    for g in range(order):
        slot_perm = np.zeros((order, order))
        for h in range(order):
            slot_perm[h, sys_.group.mul(sys_.group.inv(g), h)] = 1.0
        per_point = tuple(np.kron(slot_perm, rep.v_mats[g][x]) for x in base.space.points())
        v_mats.append(per_point)
    return EquivariantRep(sys_, mod, tuple(rho), tuple(v_mats), regular_base=base)


def slot_embed(regular: EquivariantRep, h: int, vec: ModuleVector) -> ModuleVector:
    """Place a base-module vector into slot h of a regular-type module."""
    base = regular.regular_base
    if base is None:
        raise ValueError("representation does not carry a slot structure")
    if vec.module != base:
        raise ValueError("vector must live on the base module")
    order = regular.system.group.order
    comps = []
    for x, d in enumerate(base.fiber_dims):
        c = np.zeros(order * d, dtype=complex)
        c[h * d : (h + 1) * d] = vec.components[x]
        comps.append(c)
    return ModuleVector(regular.module, tuple(comps))


def slot_restrict(regular: EquivariantRep, vec: ModuleVector, slots: Sequence[int]) -> ModuleVector:
    """Zero every group-indexed slot outside ``slots``."""
    base = regular.regular_base
    if base is None:
        raise ValueError("representation does not carry a slot structure")
    order = regular.system.group.order
    keep = set(int(s) for s in slots)
    comps = []
    for x, d in enumerate(base.fiber_dims):
        c = vec.components[x].copy()
        for h in range(order):
            if h not in keep:
                c[h * d : (h + 1) * d] = 0.0
        comps.append(c)
    return ModuleVector(regular.module, tuple(comps))


def direct_sum_reps(reps: Sequence[EquivariantRep]) -> EquivariantRep:
    if not reps:
        raise ValueError("direct sum of an empty family is not defined")
    sys_ = reps[0].system
    if any(r.system != sys_ for r in reps):
        raise ValueError("summands must share the system")
    n = sys_.n_points
    dims = tuple(sum(r.module.fiber_dims[x] for r in reps) for x in range(n))
    mod = SectionalModule(sys_.space, dims)

    def blockdiag(mats):
        rows = sum(m.shape[0] for m in mats)
        cols = sum(m.shape[1] for m in mats)
        out = np.zeros((rows, cols), dtype=complex)
        r = c = 0
        for m in mats:
            out[r : r + m.shape[0], c : c + m.shape[1]] = m
            r += m.shape[0]
            c += m.shape[1]
        return out

    rho = tuple(
        ModuleOperator(
            mod, tuple(blockdiag([r.rho[k].blocks[x] for r in reps]) for x in range(n))
        )
        for k in range(n)
    )
    v_mats = tuple(
        tuple(blockdiag([r.v_mats[g][x] for r in reps]) for x in range(n))
        for g in range(sys_.group.order)
    )
    return EquivariantRep(sys_, mod, rho, v_mats)


def tensor_rep(r1: EquivariantRep, r2: EquivariantRep, tol: float = DEFAULT_TOL):
    """The tensor product representation on the internal tensor product of the
    modules: rho acts on the left factor, v acts diagonally.

    Returns ``(rep, tensor_product)`` so callers can embed simple tensors.
    """
    if r1.system != r2.system:
        raise ValueError("tensor factors must share the system")
    sys_ = r1.system
    tp = internal_tensor(r1.module, r2.rho, r2.module, tol)
    mod = tp.module
    n = mod.n_points

    rho = []
    for k in range(n):
        big = r1.rho_full_matrix(np.eye(n)[k])
        blocks = []
        for m in range(n):
            d2 = r2.module.fiber_dims[m]
            op = np.kron(big, np.eye(d2))
            blocks.append(tp.coord[m] @ op @ tp.coord_pinv[m])
        rho.append(ModuleOperator(mod, tuple(blocks)))

    v_mats = []
    for g in range(sys_.group.order):
        big1 = r1.v_full_matrix(g)
        per_point = []
        for x in range(n):
            src = sys_.action.apply_inv(g, x)
            op = np.kron(big1, r2.v_mats[g][x])
            per_point.append(tp.coord[x] @ op @ tp.coord_pinv[src])
        v_mats.append(tuple(per_point))
    rep = EquivariantRep(sys_, mod, tuple(rho), tuple(v_mats))
    return rep, tp


def fell_absorption_unitary(rep: EquivariantRep, tol: float = DEFAULT_TOL):
    """The absorption unitary W from (module tensor group-amplified algebra)
    onto the group-amplified module, W(x (x) xi)(g) = x . xi(g).

    Returns ``(w_blocks, report, tensor_rep_pair, regular)`` where
    ``w_blocks[x]`` maps tensor fiber x onto the amplified fiber x.  The
    report covers isometry, surjectivity, linearity over the algebra and both
    intertwining relations.
    """
    sys_ = rep.system
    n = rep.module.n_points
    order = sys_.group.order
    areg = regular_rep(trivial_rep(sys_))
    trep, tp = tensor_rep(rep, areg, tol)
    reg = regular_rep(rep)

    fiber_of = [p for p in rep.module.space.points() for _ in range(rep.module.fiber_dims[p])]
    idx_in_fiber = [i for p in rep.module.space.points() for i in range(rep.module.fiber_dims[p])]
    D1 = rep.module.total_dim

    w_blocks = []
    for p in range(n):
        d_p = rep.module.fiber_dims[p]
        S = np.zeros((order * d_p, D1 * order), dtype=complex)
        for i in range(D1):
            if fiber_of[i] != p:
                continue
            for a in range(order):
                S[a * d_p + idx_in_fiber[i], i * order + a] = 1.0
        w_blocks.append(S @ tp.coord_pinv[p])

    report = CheckReport()
    res_iso = res_surj = 0.0
    for p in range(n):
        w = w_blocks[p]
        res_iso = max(res_iso, max_abs(w.conj().T @ w - np.eye(w.shape[1])))
        res_surj = max(res_surj, max_abs(w @ w.conj().T - np.eye(w.shape[0])))
    report.add("isometry", res_iso, tol)
    report.add("surjectivity", res_surj, tol)

    dim_t = trep.module.total_dim
    dim_r = reg.module.total_dim
    report.add("dimension match", float(abs(dim_t - dim_r)), 0.5)

    res = 0.0
    for k in range(n):
        for p in range(n):
            lhs = w_blocks[p] @ trep.rho[k].blocks[p]
            rhs = reg.rho[k].blocks[p] @ w_blocks[p]
            res = max(res, max_abs(lhs - rhs))
    report.add("intertwines rho", res, tol)

    res = 0.0
    for g in range(order):
        for p in range(n):
            src = sys_.action.apply_inv(g, p)
            lhs = w_blocks[p] @ trep.v_mats[g][p]
            rhs = reg.v_mats[g][p] @ w_blocks[src]
            res = max(res, max_abs(lhs - rhs))
    report.add("intertwines v", res, tol)

    # A-linearity of W on a seeded spanning sample of simple tensors
    rng = np.random.default_rng(7)
    res = 0.0
    for _ in range(4):
        x1 = _random_vector(rep.module, rng)
        x2 = _random_vector(areg.module, rng)
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        z = tp.embed(x1, module_action(x2, a))
        lhs = _apply_blocks(w_blocks, reg.module, z)
        rhs = module_action(_apply_blocks(w_blocks, reg.module, tp.embed(x1, x2)), a)
        res = max(res, max_abs(lhs.flat() - rhs.flat()))
    report.add("algebra linearity", res, tol)
    return w_blocks, report, (trep, tp), reg


def _apply_blocks(blocks: Sequence[np.ndarray], target: SectionalModule, vec: ModuleVector) -> ModuleVector:
    return ModuleVector(target, tuple(blocks[x] @ vec.components[x] for x in target.space.points()))


def _random_vector(module: SectionalModule, rng) -> ModuleVector:
    return ModuleVector(
        module,
        tuple(rng.normal(size=d) + 1j * rng.normal(size=d) for d in module.fiber_dims),
    )


def is_cyclic(rep: EquivariantRep, vec: ModuleVector, tol: float = DEFAULT_TOL) -> bool:
    """Whether span{(rho(a) v(g) vec) . b} over the algebra basis and group
    exhausts the module (exact integer rank per fiber)."""
    n = rep.module.n_points
    order = rep.system.group.order
    translates = [rep.apply_v(g, vec) for g in range(order)]
    for p in range(n):
        d = rep.module.fiber_dims[p]
        if d == 0:
            continue
        cols = []
        for g in range(order):
            for k in range(n):
                cols.append(rep.rho[k].blocks[p] @ translates[g].components[p])
        m = np.stack(cols, axis=1)
        s = np.linalg.svd(m, compute_uv=False)
        rank = int((s > tol * (1.0 + (s[0] if len(s) else 0.0))).sum())
        if rank < d:
            return False
    return True


def gns_from_pd(multiplier, tol: float = DEFAULT_TOL):
    """Reconstruct an equivariant representation with a cyclic vector whose
    diagonal coefficient reproduces a positive definite multiplier.

    The module is spanned by symbols [g, e_j, e_m] (the would-be vectors
    rho(e_j) v(g) xi . e_m) with gram
    ``<[g,a,b],[g',a',b']> = b* alpha_g(T_{g^{-1}g'}(alpha_g^{-1}(a* a'))) b'``,
    which the equivariance relations force for any realization.  Fiber m
    keeps the symbols with right label e_m; null directions are cut off at
    ``tol * (1 + lambda_max)``.  The construction is validated against the
    coefficient it produces; a residual beyond tolerance raises rather than
    being patched over.
    """
    from .multiplier import coefficient, is_positive_definite, multiplier_distance

    cert = is_positive_definite(multiplier, tol)
    if not cert.verdict:
        raise NotPositiveDefiniteError(cert)

    sys_ = multiplier.system
    n = sys_.n_points
    order = sys_.group.order
    act = sys_.action
    S = order * n  # symbols (g, j) per fiber

    def sym(g: int, j: int) -> int:
        return g * n + j

    # fiber-p gram over symbols: delta_{jj'} [alpha_g(T_{g^{-1}g'}(e_{g^{-1}j}))]_p
    coord, pinv, dims = [], [], []
    for p in range(n):
        G = np.zeros((S, S), dtype=complex)
        for g in range(order):
            ginv = sys_.group.inv(g)
            for gp in range(order):
                k = sys_.group.mul(ginv, gp)
                for j in range(n):
                    col = multiplier.mats[k][:, act.apply(ginv, j)]
                    G[sym(g, j), sym(gp, j)] = col[act.apply(ginv, p)]
        G = (G + G.conj().T) / 2
        lam, V = np.linalg.eigh(G)
        cutoff = tol * (1.0 + max(lam.max(), 0.0))
        keep = lam > cutoff
        lk, Vk = lam[keep], V[:, keep]
        dims.append(int(keep.sum()))
        coord.append(np.sqrt(lk)[:, None] * Vk.conj().T)
        pinv.append(Vk / np.sqrt(lk)[None, :])

    mod = SectionalModule(sys_.space, tuple(dims))

    rho = []
    for c in range(n):
        proj = np.zeros(S)
        for g in range(order):
            proj[sym(g, c)] = 1.0
        blocks = tuple(coord[p] @ (proj[:, None] * pinv[p]) for p in range(n))
        rho.append(ModuleOperator(mod, blocks))

    v_mats = []
    for h in range(order):
        P = np.zeros((S, S))
        for g in range(order):
            for j in range(n):
                P[sym(sys_.group.mul(h, g), act.apply(h, j)), sym(g, j)] = 1.0
        per_point = []
        for x in range(n):
            src = act.apply_inv(h, x)
            per_point.append(coord[x] @ P @ pinv[src])
        v_mats.append(tuple(per_point))

    rep = EquivariantRep(sys_, mod, tuple(rho), tuple(v_mats))

    e = sys_.group.identity
    c0 = np.zeros(S, dtype=complex)
    for j in range(n):
        c0[sym(e, j)] = 1.0
    xi = ModuleVector(mod, tuple(coord[p] @ c0 for p in range(n)))

    realized = coefficient(rep, xi, xi)
    gap = multiplier_distance(realized, multiplier)
    scale = 1.0 + max(max_abs(m) for m in multiplier.mats)
    # cutting a null direction perturbs the coefficient by at most the
    # cutoff times the symbol count, so allow that much slack over tol
    if gap > S * tol * scale:
        raise ArithmeticError(
            f"reconstruction does not reproduce the multiplier (residual {gap:.3e}); "
            "refusing to return an unvalidated representation"
        )
    return rep, CyclicVector(rep, xi)


def unitarily_equivalent(
    r1: EquivariantRep,
    r2: EquivariantRep,
    tol: float = DEFAULT_TOL,
    attempts: int = 8,
    seed: int = 11,
) -> Optional[list[np.ndarray]]:
    """Per-fiber unitaries intertwining two representations, or None.

    Solves the linear intertwiner equations on the generators of rho and v,
    then projects random null-space elements to the nearest per-fiber unitary
    and keeps a solution that satisfies the equations within tolerance.
    """
    if r1.system != r2.system or r1.module.fiber_dims != r2.module.fiber_dims:
        return None
    sys_ = r1.system
    n = r1.module.n_points
    dims = r1.module.fiber_dims
    var_off = [0]
    for d in dims:
        var_off.append(var_off[-1] + d * d)
    nvars = var_off[-1]
    if nvars == 0:
        return [np.zeros((0, 0), dtype=complex) for _ in range(n)]

    rows = []
    for x in range(n):
        d = dims[x]
        if d == 0:
            continue
        for k in range(n):
            # W_x A - B W_x = 0
            A = r1.rho[k].blocks[x]
            B = r2.rho[k].blocks[x]
            block = np.zeros((d * d, nvars), dtype=complex)
            block[:, var_off[x] : var_off[x + 1]] = np.kron(np.eye(d), A.T) - np.kron(B, np.eye(d))
            rows.append(block)
    for g in range(sys_.group.order):
        for x in range(n):
            y = sys_.action.apply_inv(g, x)
            dx, dy = dims[x], dims[y]
            if dx * dy == 0:
                continue
            U1 = r1.v_mats[g][x]
            U2 = r2.v_mats[g][x]
            block = np.zeros((dx * dy, nvars), dtype=complex)
            block[:, var_off[x] : var_off[x + 1]] += np.kron(np.eye(dx), U1.T)
            block[:, var_off[y] : var_off[y + 1]] -= np.kron(U2, np.eye(dy))
            rows.append(block)
    M = np.concatenate(rows, axis=0) if rows else np.zeros((0, nvars))
    basis = null_space(M, tol)
    if basis.shape[1] == 0:
        return None

    scale = 1.0 + max(
        [max_abs(b) for r in (r1, r2) for op in r.rho for b in op.blocks]
        + [max_abs(u) for r in (r1, r2) for fam in r.v_mats for u in fam],
    )
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        c = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
        w = basis @ c
        mats, ok = [], True
        for x in range(n):
            d = dims[x]
            W = w[var_off[x] : var_off[x + 1]].reshape(d, d)
            U = nearest_unitary(W)
            if U is None:
                ok = False
                break
            mats.append(U)
        if not ok:
            continue
        if _intertwiner_residual(r1, r2, mats) <= tol * scale:
            return mats
    return None


def _intertwiner_residual(r1: EquivariantRep, r2: EquivariantRep, mats: Sequence[np.ndarray]) -> float:
    sys_ = r1.system
    n = r1.module.n_points
    res = 0.0
    for x in range(n):
        for k in range(n):
            res = max(res, max_abs(mats[x] @ r1.rho[k].blocks[x] - r2.rho[k].blocks[x] @ mats[x]))
    for g in range(sys_.group.order):
        for x in range(n):
            y = sys_.action.apply_inv(g, x)
            res = max(res, max_abs(mats[x] @ r1.v_mats[g][x] - r2.v_mats[g][x] @ mats[y]))
    return res
