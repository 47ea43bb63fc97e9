"""Finite groups, finite spaces, permutation actions and the PSD primitive.

Conventions used throughout the package:

* group elements are dense indices ``0 .. order-1``;
* a group action is stored as one permutation of the base points per group
  element, so applying the action never introduces rounding;
* complex scalars are numpy ``complex128``; the default tolerance for every
  numerical check is ``DEFAULT_TOL``;
* the algebra ``A = C(Omega)`` of an ``n``-point space is the vector space
  ``C^n`` with entrywise product, and ``(alpha_g a)_x = a_{g^{-1} x}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mult[g, h]`` is the index of the product g*h.  The identity index and
    the inverse table are derived (and validated) at construction time.
    """

    order: int
    mult: np.ndarray
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FiniteGroup)
            and self.order == other.order
            and np.array_equal(self.mult, other.mult)
        )

    def __post_init__(self):
        mult = np.asarray(self.mult, dtype=np.intp)
        if self.order < 1:
            raise ValueError("group order must be >= 1")
        if mult.shape != (self.order, self.order):
            raise ValueError(f"mult table must be {self.order}x{self.order}")
        if mult.min() < 0 or mult.max() >= self.order:
            raise ValueError("mult table entries out of range")
        object.__setattr__(self, "mult", _freeze(mult))

        identity = None
        for e in range(self.order):
            if np.array_equal(mult[e], np.arange(self.order)) and np.array_equal(
                mult[:, e], np.arange(self.order)
            ):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no two-sided identity")
        object.__setattr__(self, "identity", identity)

        inverse = np.full(self.order, -1, dtype=np.intp)
        for g in range(self.order):
            left = np.flatnonzero(mult[:, g] == identity)
            right = np.flatnonzero(mult[g, :] == identity)
            if len(left) != 1 or len(right) != 1 or left[0] != right[0]:
                raise ValueError(f"element {g} has no two-sided inverse")
            inverse[g] = left[0]
        object.__setattr__(self, "inverse", _freeze(inverse))

        # associativity by exhaustive scan: (gh)k == g(hk)
        m = mult
        lhs = m[m, :]            # lhs[g,h,k] = (gh)k
        rhs = m[:, m]            # rhs[g,h,k] = g(hk)
        if not np.array_equal(lhs, rhs):
            raise ValueError("multiplication table is not associative")

    def mul(self, g: int, h: int) -> int:
        return int(self.mult[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])

    def elements(self) -> range:
        return range(self.order)


def cyclic_group(n: int) -> FiniteGroup:
    """Z_n with addition mod n; identity is 0."""
    if n < 1:
        raise ValueError(f"cyclic group order must be >= 1, got {n}")
    idx = np.arange(n)
    return FiniteGroup(n, (idx[:, None] + idx[None, :]) % n)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n as a multiplication table over all permutations of n letters.

    Element 0 is the identity.  Composition convention: (p*q)(x) = p(q(x)).
    Intended for small n (the table is n! x n!).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    mult = np.empty((order, order), dtype=np.intp)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mult[i, j] = index[tuple(p[q[x]] for x in range(n))]
    return FiniteGroup(order, mult)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product with elements packed as a*|G2| + b."""
    o1, o2 = g1.order, g2.order
    mult = np.empty((o1 * o2, o1 * o2), dtype=np.intp)
    for a1, b1 in itertools.product(range(o1), range(o2)):
        for a2, b2 in itertools.product(range(o1), range(o2)):
            mult[a1 * o2 + b1, a2 * o2 + b2] = g1.mult[a1, a2] * o2 + g2.mult[b1, b2]
    return FiniteGroup(o1 * o2, mult)


@dataclass(frozen=True)
class FiniteSpace:
    """A finite base space of n points; its function algebra is C^n."""

    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("space must have at least one point")

    def points(self) -> range:
        return range(self.size)


@dataclass(frozen=True, eq=False)
class GroupAction:
    """An action of a finite group on a finite space by permutations.

    ``perm[g, x]`` is the point g.x; the map g -> perm[g] must be a
    homomorphism into the symmetric group of the space.
    """

    group: FiniteGroup
    space: FiniteSpace
    perm: np.ndarray

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupAction)
            and self.group == other.group
            and self.space == other.space
            and np.array_equal(self.perm, other.perm)
        )

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.intp)
        n = self.space.size
        if perm.shape != (self.group.order, n):
            raise ValueError(f"perm must have shape ({self.group.order}, {n})")
        for g in self.group.elements():
            if not np.array_equal(np.sort(perm[g]), np.arange(n)):
                raise ValueError(f"perm[{g}] is not a permutation")
        if not np.array_equal(perm[self.group.identity], np.arange(n)):
            raise ValueError("identity does not act trivially")
        for g in self.group.elements():
            for h in self.group.elements():
                if not np.array_equal(perm[self.group.mul(g, h)], perm[g][perm[h]]):
                    raise ValueError(f"perm is not a homomorphism at ({g}, {h})")
        object.__setattr__(self, "perm", _freeze(perm))

    def apply(self, g: int, x: int) -> int:
        """The point g.x."""
        return int(self.perm[g, x])

    def apply_inv(self, g: int, x: int) -> int:
        """The point g^{-1}.x."""
        return int(self.perm[self.group.inv(g), x])


@dataclass(frozen=True, eq=False)
class System:
    """A finite C*-dynamical system: C^n with a finite group acting by
    the automorphisms induced from a point permutation action."""

    action: GroupAction

    def __eq__(self, other) -> bool:
        return isinstance(other, System) and self.action == other.action

    @property
    def group(self) -> FiniteGroup:
        return self.action.group

    @property
    def space(self) -> FiniteSpace:
        return self.action.space

    @property
    def n_points(self) -> int:
        return self.action.space.size


def trivial_action(group: FiniteGroup, n: int) -> GroupAction:
    space = FiniteSpace(n)
    perm = np.tile(np.arange(n), (group.order, 1))
    return GroupAction(group, space, perm)


def cyclic_shift_action(n: int) -> GroupAction:
    """Z_n acting on n points by g.x = x + g mod n."""
    group = cyclic_group(n)
    idx = np.arange(n)
    perm = (idx[None, :] + idx[:, None]) % n
    return GroupAction(group, FiniteSpace(n), perm)


def act_on_algebra(action: GroupAction, g: int, a: np.ndarray) -> np.ndarray:
    """The induced *-automorphism: (alpha_g a)_x = a_{g^{-1} x}."""
    a = np.asarray(a, dtype=complex)
    n = action.space.size
    if a.shape != (n,):
        raise ValueError(f"algebra element must be a vector of length {n}")
    src = action.perm[action.group.inv(g)]
    return a[src]


def basis_image_under_action(action: GroupAction, g: int, k: int) -> int:
    """alpha_g(e_k) = e_{g.k}: the index of the image basis idempotent."""
    return action.apply(g, k)


def is_psd(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Whether a square complex matrix is positive semidefinite.

    Hermitian within ``tol * (1 + max|entry|)`` entrywise, and the minimal
    eigenvalue of the Hermitian part is >= -tol * (1 + max|entry|).  The
    relative scaling makes the zero matrix pass exactly.
    """
    verdict, _ = psd_certificate(m, tol)
    return verdict


def psd_certificate(m: np.ndarray, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """PSD verdict together with the minimal eigenvalue of the Hermitian part.

    Returns ``(False, -inf)`` when the matrix is not Hermitian within
    tolerance (no eigenvalue certificate applies in that case).
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    if m.shape[0] == 0:
        return True, 0.0
    scale = 1.0 + np.abs(m).max()
    if np.abs(m - m.conj().T).max() > tol * scale:
        return False, -np.inf
    lam = float(np.linalg.eigvalsh((m + m.conj().T) / 2.0).min())
    return lam >= -tol * scale, lam
