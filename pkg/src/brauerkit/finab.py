"""Finite abelian groups in invariant-factor coordinates.

A group is a product Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... and every
d_i >= 2; elements are coordinate tuples.  Subgroups are canonicalized by
embedding the group into (Z/N)^k, N the exponent, scaling coordinate i by
N/d_i, and taking the Howell form of the generator rows over Z/N.  Equal
subgroups therefore have equal ``canonical_generators``, independent of the
generating set they came from.

Any operation that has to walk a whole group refuses once the order passes
an enumeration cap (default 10**7, always overridable per call).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd, lcm, prod

import numpy as np

from .zmodlinalg import howell_form, integer_kernel, smith_normal_form

__all__ = [
    "DEFAULT_ENUMERATION_CAP",
    "CapExceededError",
    "NonHomocyclicError",
    "FinAbGroup",
    "GroupElement",
    "Subgroup",
    "element_order",
    "is_primitive",
    "subgroup_from_generators",
    "is_bicyclic_rr",
    "cartier_dual",
    "count_solutions",
]

DEFAULT_ENUMERATION_CAP = 10_000_000


class CapExceededError(RuntimeError):
    """An enumeration would visit more elements than the configured cap."""


class NonHomocyclicError(ValueError):
    """The operation only makes sense for groups (Z/r)^k."""


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group given by its invariant factor chain."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        facs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        for d in facs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(facs, facs[1:]):
            if b % a:
                raise ValueError(f"broken divisibility chain: {a} does not divide {b}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def is_homocyclic(self, r: int | None = None) -> bool:
        if not self.invariant_factors:
            return False
        first = self.invariant_factors[0]
        if any(d != first for d in self.invariant_factors):
            return False
        return r is None or first == r

    def element(self, coords) -> GroupElement:
        return GroupElement(self, tuple(int(c) for c in coords))

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP):
        """All elements, last coordinate varying fastest."""
        if self.order > cap:
            raise CapExceededError(f"group order {self.order} exceeds cap {cap}")
        for coords in product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(self, coords)

    def coordinate_table(self, cap: int = DEFAULT_ENUMERATION_CAP) -> np.ndarray:
        """(order x rank) int64 array of all coordinate rows, in elements() order."""
        if self.order > cap:
            raise CapExceededError(f"group order {self.order} exceeds cap {cap}")
        n = self.order
        k = self.rank
        out = np.zeros((n, k), dtype=np.int64)
        idx = np.arange(n)
        stride = n
        for j, d in enumerate(self.invariant_factors):
            stride //= d
            out[:, j] = (idx // stride) % d
        return out

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class GroupElement:
    parent: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        facs = self.parent.invariant_factors
        if len(self.coords) != len(facs):
            raise ValueError(
                f"element has {len(self.coords)} coordinates, group has rank {len(facs)}"
            )
        object.__setattr__(
            self, "coords", tuple(int(c) % d for c, d in zip(self.coords, facs))
        )

    def _check_same_parent(self, other: GroupElement):
        if self.parent != other.parent:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check_same_parent(other)
        return GroupElement(
            self.parent, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check_same_parent(other)
        return GroupElement(
            self.parent, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(self.parent, tuple(-a for a in self.coords))

    def __mul__(self, scalar: int) -> GroupElement:
        return GroupElement(self.parent, tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


def element_order(x: GroupElement) -> int:
    """Least m >= 1 with m*x = 0."""
    return reduce(
        lcm,
        (d // gcd(d, c) for d, c in zip(x.parent.invariant_factors, x.coords)),
        1,
    )


def is_primitive(x: GroupElement, r: int) -> bool:
    """Whether x has maximal order r in a homocyclic group (Z/r)^k."""
    if not x.parent.is_homocyclic(r):
        raise NonHomocyclicError(f"parent {x.parent} is not homocyclic of exponent {r}")
    return element_order(x) == r


def _scales(parent: FinAbGroup) -> list[int]:
    N = parent.exponent
    return [N // d for d in parent.invariant_factors]


def _embed_rows(parent: FinAbGroup, elems) -> np.ndarray:
    scales = _scales(parent)
    N = parent.exponent
    rows = [
        [(c * s) % N if N > 1 else 0 for c, s in zip(e.coords, scales)] for e in elems
    ]
    return np.array(rows, dtype=np.int64).reshape(len(rows), parent.rank)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup in canonical (scaled-embedding Howell) presentation.

    Build these with :func:`subgroup_from_generators`; two Subgroup values of
    the same parent are equal iff they are the same subgroup.
    """

    parent: FinAbGroup
    canonical_generators: tuple[tuple[int, ...], ...]
    order: int

    def _modulus(self) -> int:
        return max(self.parent.exponent, 2)

    def contains(self, x: GroupElement) -> bool:
        if x.parent != self.parent:
            raise ValueError("element belongs to a different group")
        if not self.canonical_generators:
            return x.is_zero()
        row = _embed_rows(self.parent, [x])
        stacked = np.vstack([np.array(self.canonical_generators, dtype=np.int64), row])
        H = howell_form(stacked, self._modulus())
        return tuple(map(tuple, H.tolist())) == self.canonical_generators

    def generators(self) -> list[GroupElement]:
        """Canonical generators pulled back to group coordinates."""
        scales = _scales(self.parent)
        out = []
        for row in self.canonical_generators:
            coords = tuple(v // s if s else 0 for v, s in zip(row, scales))
            out.append(GroupElement(self.parent, coords))
        return out

    def elements(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[GroupElement]:
        if self.order > cap:
            raise CapExceededError(f"subgroup order {self.order} exceeds cap {cap}")
        N = self._modulus()
        rows = [np.array(rw, dtype=np.int64) for rw in self.canonical_generators]
        pivots = [int(rw[np.flatnonzero(rw)[0]]) for rw in rows]
        span: set[tuple[int, ...]] = set()
        k = self.parent.rank
        for combo in product(*(range(N // p) for p in pivots)):
            v = np.zeros(k, dtype=np.int64)
            for c, rw in zip(combo, rows):
                v = (v + c * rw) % N
            span.add(tuple(v.tolist()))
        assert len(span) == self.order
        scales = _scales(self.parent)
        elems = [
            GroupElement(
                self.parent, tuple(v // s if s else 0 for v, s in zip(vec, scales))
            )
            for vec in sorted(span)
        ]
        return elems

    def invariant_factors(self) -> tuple[int, ...]:
        """Isomorphism type of the subgroup, as an invariant factor chain."""
        gens = self.generators()
        k = len(gens)
        if k == 0:
            return ()
        n = self.parent.rank
        rel = np.zeros((n, k + n), dtype=object)
        for j, g in enumerate(gens):
            for i, c in enumerate(g.coords):
                rel[i, j] = int(c)
        for i, d in enumerate(self.parent.invariant_factors):
            rel[i, k + i] = int(d)
        ker = integer_kernel(rel)
        lam = ker[:, :k]
        _, D, _ = smith_normal_form(lam)
        diag = [int(D[i, i]) for i in range(min(D.shape))]
        assert all(diag), "relation lattice must have full rank"
        facs = tuple(d for d in diag if d > 1)
        assert prod(facs) == self.order
        return facs


def subgroup_from_generators(parent: FinAbGroup, gens) -> Subgroup:
    """Subgroup generated by ``gens``; canonical regardless of generator order."""
    gens = list(gens)
    for g in gens:
        if g.parent != parent:
            raise ValueError("generator belongs to a different group")
    if parent.rank == 0 or not gens:
        return Subgroup(parent, (), 1)
    N = max(parent.exponent, 2)
    rows = _embed_rows(parent, gens)
    H = howell_form(rows, N)
    order = 1
    for row in H:
        p = int(row[np.flatnonzero(row)[0]])
        order *= N // p
    return Subgroup(parent, tuple(map(tuple, H.tolist())), order)


def is_bicyclic_rr(sigma: GroupElement, tau: GroupElement, r: int) -> bool:
    """Whether sigma and tau generate a subgroup isomorphic to (Z/r)^2.

    Requires a homocyclic parent of exponent r; equivalent to both elements
    being primitive with their joint span of order r^2.
    """
    if sigma.parent != tau.parent:
        raise ValueError("elements belong to different groups")
    if not sigma.parent.is_homocyclic(r):
        raise NonHomocyclicError(
            f"parent {sigma.parent} is not homocyclic of exponent {r}"
        )
    if not (is_primitive(sigma, r) and is_primitive(tau, r)):
        return False
    return subgroup_from_generators(sigma.parent, [sigma, tau]).order == r * r


def cartier_dual(G: FinAbGroup | Subgroup) -> FinAbGroup:
    """Dual group Hom(G, C*); same invariant factors, so an involution."""
    facs = G.invariant_factors() if isinstance(G, Subgroup) else G.invariant_factors
    return FinAbGroup(facs)


def count_solutions(parent: FinAbGroup, k: int, c: GroupElement) -> int:
    """Number of x in the group with k*x = c.

    Either 0 or the order of the k-torsion subgroup, coordinatewise.
    """
    if c.parent != parent:
        raise ValueError("target belongs to a different group")
    total = 1
    for d, ci in zip(parent.invariant_factors, c.coords):
        g = gcd(k, d)
        if ci % g:
            return 0
        total *= g
    return total
