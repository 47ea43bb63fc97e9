"""The reduced crossed product of a finite system as a concrete matrix algebra.

The regular covariant representation acts on C^n amplified over the group;
the integrated form of the convolution algebra lands in a matrix algebra of
dimension n * |G| with basis Lambda(e_j . delta_g).  For a finite group the
image of the integrated form is the reduced crossed product, and amenability
collapses the full/reduced distinction, so this one object serves both.
Multipliers act on it through their induced maps, whose complete positivity
is certified by a single basis-gram check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_TOL, System, act_on_algebra
from .multiplier import Multiplier, PdCertificate
from .numutil import max_abs, matrix_rank, null_space
from .reporting import CheckReport


class NotInAlgebraError(ValueError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"matrix lies outside the algebra (projection residual {residual:.3e})")


@dataclass(frozen=True, eq=False)
class CovariantRep:
    """A covariant pair on C^dim: pi_mats are the images of the basis
    idempotents, u_mats the group unitaries."""

    system: System
    dim: int
    pi_mats: tuple[np.ndarray, ...]
    u_mats: tuple[np.ndarray, ...]

    def __post_init__(self):
        n = self.system.n_points
        order = self.system.group.order
        if len(self.pi_mats) != n or len(self.u_mats) != order:
            raise ValueError("wrong number of generator matrices")
        pi = tuple(np.asarray(m, dtype=complex).reshape(self.dim, self.dim) for m in self.pi_mats)
        u = tuple(np.asarray(m, dtype=complex).reshape(self.dim, self.dim) for m in self.u_mats)
        object.__setattr__(self, "pi_mats", pi)
        object.__setattr__(self, "u_mats", u)

    def pi(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=complex).reshape(self.system.n_points)
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for j, m in enumerate(self.pi_mats):
            out += a[j] * m
        return out


def verify_covariant(rep: CovariantRep, tol: float = DEFAULT_TOL) -> CheckReport:
    report = CheckReport()
    sys_ = rep.system
    n, order, d = sys_.n_points, sys_.group.order, rep.dim
    eye = np.eye(d)

    res = max_abs(sum(rep.pi_mats) - eye)
    for j in range(n):
        res = max(res, max_abs(rep.pi_mats[j] - rep.pi_mats[j].conj().T))
        for k in range(n):
            target = rep.pi_mats[j] if j == k else np.zeros((d, d))
            res = max(res, max_abs(rep.pi_mats[j] @ rep.pi_mats[k] - target))
    report.add("pi representation", res, tol)

    res = 0.0
    for g in range(order):
        u = rep.u_mats[g]
        res = max(res, max_abs(u @ u.conj().T - eye))
        for h in range(order):
            res = max(res, max_abs(rep.u_mats[sys_.group.mul(g, h)] - u @ rep.u_mats[h]))
    report.add("u unitary homomorphism", res, tol)

    res = 0.0
    for g in range(order):
        for j in range(n):
            a = np.zeros(n)
            a[j] = 1.0
            lhs = rep.pi(act_on_algebra(sys_.action, g, a))
            rhs = rep.u_mats[g] @ rep.pi_mats[j] @ rep.u_mats[g].conj().T
            res = max(res, max_abs(lhs - rhs))
    report.add("covariance", res, tol)
    return report


def regular_covariant(system: System) -> CovariantRep:
    """The regular covariant pair built from the diagonal representation of
    C^n on itself: on the group amplification,
    (pi(a) xi)(h) = diag(alpha_h^{-1}(a)) xi(h) and (u(g) xi)(h) = xi(g^{-1}h).
    Row index is h * n + x."""
    n = system.n_points
    order = system.group.order
    d = n * order
    pi_mats = []
    for j in range(n):
        diag = np.zeros(d)
        for h in range(order):
            for x in range(n):
                # (alpha_h^{-1} e_j)_x = 1 iff h.x = j
                if system.action.apply(h, x) == j:
                    diag[h * n + x] = 1.0
        pi_mats.append(np.diag(diag).astype(complex))
    u_mats = []
    for g in range(order):
        u = np.zeros((d, d), dtype=complex)
        for h in range(order):
            src = system.group.mul(system.group.inv(g), h)
            u[h * n : (h + 1) * n, src * n : (src + 1) * n] = np.eye(n)
        u_mats.append(u)
    return CovariantRep(system, d, tuple(pi_mats), tuple(u_mats))


def convolve(system: System, f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """(f1 * f2)(g) = sum_h f1(h) alpha_h(f2(h^{-1} g)); functions are arrays
    of shape (|G|, n)."""
    order, n = system.group.order, system.n_points
    f1 = np.asarray(f1, dtype=complex).reshape(order, n)
    f2 = np.asarray(f2, dtype=complex).reshape(order, n)
    out = np.zeros((order, n), dtype=complex)
    for g in range(order):
        for h in range(order):
            out[g] += f1[h] * act_on_algebra(system.action, h, f2[system.group.mul(system.group.inv(h), g)])
    return out


def involution(system: System, f: np.ndarray) -> np.ndarray:
    """f*(g) = alpha_g(f(g^{-1}))^* (conjugation on C^n)."""
    order, n = system.group.order, system.n_points
    f = np.asarray(f, dtype=complex).reshape(order, n)
    out = np.zeros((order, n), dtype=complex)
    for g in range(order):
        out[g] = act_on_algebra(system.action, g, f[system.group.inv(g)]).conj()
    return out


def delta_function(system: System, g: int, a: np.ndarray) -> np.ndarray:
    """The finitely supported function a . delta_g."""
    out = np.zeros((system.group.order, system.n_points), dtype=complex)
    out[g] = np.asarray(a, dtype=complex)
    return out


def integrated_form(rep: CovariantRep, f: np.ndarray) -> np.ndarray:
    """Lambda(f) = sum_g pi(f(g)) u(g)."""
    sys_ = rep.system
    f = np.asarray(f, dtype=complex).reshape(sys_.group.order, sys_.n_points)
    out = np.zeros((rep.dim, rep.dim), dtype=complex)
    for g in sys_.group.elements():
        out += rep.pi(f[g]) @ rep.u_mats[g]
    return out


@dataclass(frozen=True, eq=False)
class ReducedCrossedProduct:
    """Concrete realization with basis b[g * n + j] = Lambda(e_j . delta_g).

    ``mult_table[a, b]`` holds the coordinates of the product of two basis
    elements, ``adjoint_table[a]`` those of an adjoint; ``gram_coords`` caches
    the coordinates of all basis products b_a^* b_b for the complete
    positivity check.
    """

    system: System
    rep: CovariantRep
    basis: np.ndarray            # (N, D, D)
    mult_table: np.ndarray       # (N, N, N)
    adjoint_table: np.ndarray    # (N, N)
    gram_coords: np.ndarray      # (N, N, N)
    _solver: np.ndarray          # pseudoinverse of the flattened basis

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    def index(self, g: int, j: int) -> int:
        return g * self.system.n_points + j

    def from_coords(self, coords: np.ndarray) -> np.ndarray:
        return np.tensordot(np.asarray(coords, dtype=complex), self.basis, axes=1)


def build_reduced(system: System, tol: float = DEFAULT_TOL) -> ReducedCrossedProduct:
    """Assemble the reduced crossed product: basis, structure constants,
    adjoints, and the cached product coordinates.

    Verifies linear independence of the basis and closure of products and
    adjoints within tolerance.
    """
    rep = regular_covariant(system)
    n, order, d = system.n_points, system.group.order, rep.dim
    N = n * order
    basis = np.empty((N, d, d), dtype=complex)
    for g in range(order):
        for j in range(n):
            a = np.zeros(n)
            a[j] = 1.0
            basis[g * n + j] = integrated_form(rep, delta_function(system, g, a))

    flat = basis.reshape(N, d * d)
    if matrix_rank(flat, tol) != N:
        raise ArithmeticError("integrated-form basis is linearly dependent")
    solver = np.linalg.pinv(flat)

    def coords_of(mat: np.ndarray) -> np.ndarray:
        c = mat.reshape(d * d) @ solver
        residual = max_abs(mat.reshape(d * d) - c @ flat)
        if residual > tol * (1.0 + max_abs(mat)):
            raise NotInAlgebraError(residual)
        return c

    mult_table = np.empty((N, N, N), dtype=complex)
    for a in range(N):
        for b in range(N):
            mult_table[a, b] = coords_of(basis[a] @ basis[b])
    adjoint_table = np.empty((N, N), dtype=complex)
    for a in range(N):
        adjoint_table[a] = coords_of(basis[a].conj().T)

    gram_coords = np.empty((N, N, N), dtype=complex)
    for a in range(N):
        star = np.tensordot(adjoint_table[a], basis, axes=1)
        for b in range(N):
            gram_coords[a, b] = coords_of(star @ basis[b])

    return ReducedCrossedProduct(system, rep, basis, mult_table, adjoint_table, gram_coords, solver)


def fourier_coefficients(rcp: ReducedCrossedProduct, m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Recover f with Lambda(f) = m by solving in the basis; the conditional
    expectation onto each group coordinate.  Raises NotInAlgebraError when the
    matrix does not lie in the span."""
    d = rcp.ambient_dim
    m = np.asarray(m, dtype=complex).reshape(d, d)
    coords = m.reshape(d * d) @ rcp._solver
    flat = rcp.basis.reshape(rcp.dim, d * d)
    residual = max_abs(m.reshape(d * d) - coords @ flat)
    if residual > tol * (1.0 + max_abs(m)):
        raise NotInAlgebraError(residual)
    n = rcp.system.n_points
    return coords.reshape(rcp.system.group.order, n)


def induced_map(rcp: ReducedCrossedProduct, t: Multiplier) -> np.ndarray:
    """Coordinate matrix of Lambda(f) -> Lambda(T . f): block diagonal over
    the group, block g acting on the algebra index by the standard matrix of
    T_g."""
    if t.system != rcp.system:
        raise ValueError("multiplier lives on a different system")
    n = rcp.system.n_points
    order = rcp.system.group.order
    N = rcp.dim
    phi = np.zeros((N, N), dtype=complex)
    for g in range(order):
        phi[g * n : (g + 1) * n, g * n : (g + 1) * n] = t.mats[g]
    return phi


def apply_induced(rcp: ReducedCrossedProduct, phi: np.ndarray, m: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply a coordinate map to an algebra element given as an ambient matrix."""
    coords = fourier_coefficients(rcp, m, tol).reshape(rcp.dim)
    return rcp.from_coords(np.asarray(phi, dtype=complex) @ coords)


def is_completely_positive(
    rcp: ReducedCrossedProduct, phi: np.ndarray, tol: float = DEFAULT_TOL
) -> PdCertificate:
    """Complete positivity of a coordinate map on the algebra.

    Builds the block matrix [phi(b_a^* b_b)] over the full basis, represented
    in the ambient (faithful) representation, and tests it PSD; positivity of
    [phi(x_i^* x_j)] for arbitrary tuples follows by congruence with the
    coefficient matrix of the x_i in the basis.
    """
    N = rcp.dim
    D = rcp.ambient_dim
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (N, N):
        raise ValueError(f"coordinate map must be {N} x {N}")
    big = np.empty((N * D, N * D), dtype=complex)
    for a in range(N):
        for b in range(N):
            block = rcp.from_coords(phi @ rcp.gram_coords[a, b])
            big[a * D : (a + 1) * D, b * D : (b + 1) * D] = block
    scale = 1.0 + max_abs(big)
    hd = max_abs(big - big.conj().T)
    herm = (big + big.conj().T) / 2
    lam, vecs = np.linalg.eigh(herm)
    verdict = hd <= tol * scale and lam[0] >= -tol * scale
    return PdCertificate(
        verdict=bool(verdict),
        min_eigenvalue=float(lam[0]),
        hermitian_defect=float(hd),
        eigenvector=None if verdict else vecs[:, 0],
    )


def center_dimension(rcp: ReducedCrossedProduct, tol: float = DEFAULT_TOL) -> int:
    """Dimension of the center, from the null space of the commutator system."""
    N = rcp.dim
    rows = []
    for a in range(N):
        # z b_a - b_a z = 0 in coordinates: sum_g z_g (mult[g,a] - mult[a,g])
        block = np.empty((N, N), dtype=complex)
        for g in range(N):
            block[:, g] = rcp.mult_table[g, a] - rcp.mult_table[a, g]
        rows.append(block)
    m = np.concatenate(rows, axis=0)
    return null_space(m, tol).shape[1]


def is_commutative(rcp: ReducedCrossedProduct, tol: float = DEFAULT_TOL) -> bool:
    N = rcp.dim
    scale = 1.0 + max_abs(rcp.basis)
    for a in range(N):
        for b in range(a + 1, N):
            if max_abs(rcp.basis[a] @ rcp.basis[b] - rcp.basis[b] @ rcp.basis[a]) > tol * scale:
                return False
    return True
