"""Vanishing submodules of alternating forms and bicyclic restriction kernels.

Operations here answer, in exact arithmetic over Z/r:

* which alternating forms vanish on every isotropic pair of the standard
  pairing (``compute_G``), optionally restricted to pairs that generate a
  (Z/r)^2 subgroup;
* which forms die under restriction to a given subgroup
  (``restriction_kernel``);
* the intersection of those restriction kernels over a family of bicyclic
  subgroups (``bogomolov_intersection``), the family being either explicit
  or the streamed family of all isotropic bicyclic pairs.

All of it is linear algebra on the g(2g-1) upper-triangular coefficients:
a pair (x, y) imposes the single linear constraint
sum_{i<j} v_ij (x_i y_j - x_j y_i) = 0 on a coefficient vector v, and a
subgroup imposes the constraints of its generator pairs (enough, by
bilinearity).  Constraint row spans are accumulated in Howell form, so every
result is canonical and runs are deterministic.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import product
from math import gcd

import numpy as np

from .finab import (
    DEFAULT_ENUMERATION_CAP,
    GroupElement,
    Subgroup,
    is_bicyclic_rr,
    subgroup_from_generators,
)
from .sympl import AltForm, SymplecticSpace, upper_index_pairs, weil_form
from .zmodlinalg import howell_form, solve_mod

__all__ = [
    "MODE_ALL_PAIRS",
    "MODE_PRIMITIVE_PAIRS",
    "FormSubmodule",
    "BicyclicFamily",
    "compute_G",
    "restriction_kernel",
    "isotropic_bicyclics",
    "all_bicyclics",
    "bogomolov_intersection",
    "InclusionReport",
    "verify_main_inclusions",
]

MODE_ALL_PAIRS = "all-pairs"
MODE_PRIMITIVE_PAIRS = "primitive-pairs"


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class FormSubmodule:
    """Submodule of the alternating forms on a space, in canonical form.

    ``generators`` are Howell-form rows of flattened coefficient vectors
    (upper_index_pairs order) over Z/r, so two values are equal iff they are
    the same submodule.  ``order`` counts the forms in the span and divides
    r^(g(2g-1)).
    """

    space: SymplecticSpace
    generators: tuple[tuple[int, ...], ...]
    order: int

    @classmethod
    def from_rows(cls, space: SymplecticSpace, rows) -> FormSubmodule:
        r = space.r
        m = space.form_rank
        arr = np.asarray(rows, dtype=np.int64).reshape(-1, m)
        H = howell_form(arr, r)
        order = 1
        for row in H:
            p = int(row[np.flatnonzero(row)[0]])
            order *= r // p
        return cls(space, tuple(map(tuple, H.tolist())), order)

    @classmethod
    def from_forms(cls, space: SymplecticSpace, forms) -> FormSubmodule:
        return cls.from_rows(space, [f.vector() for f in forms])

    @classmethod
    def full(cls, space: SymplecticSpace) -> FormSubmodule:
        return cls.from_rows(space, np.eye(space.form_rank, dtype=np.int64))

    @classmethod
    def trivial(cls, space: SymplecticSpace) -> FormSubmodule:
        return cls.from_rows(space, np.zeros((0, space.form_rank), dtype=np.int64))

    @classmethod
    def weil_span(cls, space: SymplecticSpace) -> FormSubmodule:
        return cls.from_forms(space, [weil_form(space)])

    @property
    def rank(self) -> int:
        return len(self.generators)

    def contains_vector(self, vec) -> bool:
        row = np.asarray(vec, dtype=np.int64).reshape(1, self.space.form_rank)
        if not self.generators:
            return not (row % self.space.r).any()
        stacked = np.vstack([np.array(self.generators, dtype=np.int64), row])
        H = howell_form(stacked, self.space.r)
        return tuple(map(tuple, H.tolist())) == self.generators

    def contains(self, form: AltForm) -> bool:
        if form.space != self.space:
            raise ValueError("form lives on a different space")
        return self.contains_vector(form.vector())

    def is_submodule_of(self, other: FormSubmodule) -> bool:
        if other.space != self.space:
            raise ValueError("submodules of different spaces")
        return all(other.contains_vector(row) for row in self.generators)

    def vectors(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[tuple[int, ...]]:
        """Every coefficient vector in the span, sorted."""
        if self.order > cap:
            raise ValueError(f"span of {self.order} forms exceeds cap {cap}")
        r = self.space.r
        m = self.space.form_rank
        rows = [np.array(rw, dtype=np.int64) for rw in self.generators]
        pivots = [int(rw[np.flatnonzero(rw)[0]]) for rw in rows]
        span: set[tuple[int, ...]] = set()
        for combo in product(*(range(r // p) for p in pivots)):
            v = np.zeros(m, dtype=np.int64)
            for c, rw in zip(combo, rows):
                v = (v + c * rw) % r
            span.add(tuple(v.tolist()))
        assert len(span) == self.order
        return sorted(span)

    def forms(self, cap: int = DEFAULT_ENUMERATION_CAP) -> list[AltForm]:
        return [AltForm.from_vector(self.space, v) for v in self.vectors(cap)]


# ---------------------------------------------------------------------------
# constraint machinery


def _pair_indices(space: SymplecticSpace) -> tuple[np.ndarray, np.ndarray]:
    pairs = upper_index_pairs(space.dim)
    return (
        np.array([i for i, _ in pairs], dtype=np.int64),
        np.array([j for _, j in pairs], dtype=np.int64),
    )


def _minor_rows(
    x: np.ndarray, Y: np.ndarray, I: np.ndarray, J: np.ndarray, r: int
) -> np.ndarray:
    """Constraint rows of the pairs (x, y), y running over the rows of Y."""
    return (x[I] * Y[:, J] - x[J] * Y[:, I]) % r


def _kernel_submodule(space: SymplecticSpace, constraint_rows) -> FormSubmodule:
    m = space.form_rank
    A = np.asarray(constraint_rows, dtype=np.int64).reshape(-1, m)
    if A.shape[0] == 0:
        return FormSubmodule.full(space)
    _, kernel = solve_mod(A, np.zeros(A.shape[0], dtype=np.int64), space.r)
    return FormSubmodule.from_rows(space, kernel)


def _streamed_constraint_kernel(
    space: SymplecticSpace,
    *,
    require_isotropic: bool,
    require_bicyclic: bool,
    cap: int,
    lower: FormSubmodule | None,
) -> FormSubmodule:
    """Kernel of the constraints of all selected element pairs.

    Pairs are scanned once in a fixed order.  The kernel only shrinks as
    constraints accumulate, and when ``lower`` is a submodule known to
    satisfy every selected constraint the scan may stop exactly when the
    running kernel reaches it.
    """
    r = space.r
    X = space.group.coordinate_table(cap)
    I, J = _pair_indices(space)
    Cfull = weil_form(space).full_matrix()
    primes = _prime_factors(r)
    m = space.form_rank
    acc = np.zeros((0, m), dtype=np.int64)
    for i in range(X.shape[0]):
        x = X[i]
        rest = X[i + 1 :]
        if rest.shape[0] == 0:
            break
        if require_isotropic:
            evals = (rest @ ((x @ Cfull) % r)) % r
            rest = rest[evals == 0]
            if rest.shape[0] == 0:
                continue
        rows = _minor_rows(x, rest, I, J, r)
        if require_bicyclic:
            mask = np.ones(rows.shape[0], dtype=bool)
            for p in primes:
                mask &= (rows % p).any(axis=1)
            rows = rows[mask]
        rows = rows[rows.any(axis=1)]
        if rows.shape[0] == 0:
            continue
        rows = np.unique(rows, axis=0)
        acc = howell_form(np.vstack([acc, rows]), r)
        if lower is not None:
            kern = _kernel_submodule(space, acc)
            if kern == lower:
                return kern
    return _kernel_submodule(space, acc)


def compute_G(
    space: SymplecticSpace,
    mode: str = MODE_ALL_PAIRS,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> FormSubmodule:
    """Forms vanishing wherever the standard pairing vanishes.

    ``all-pairs`` constrains by every pair (x, y) with e(x, y) = 0;
    ``primitive-pairs`` only by those pairs whose span is (Z/r)^2.  The
    standard pairing itself always satisfies the constraints, so its span is
    a valid early-termination bound for the shrinking kernel.
    """
    if mode not in (MODE_ALL_PAIRS, MODE_PRIMITIVE_PAIRS):
        raise ValueError(f"unknown mode {mode!r}")
    return _streamed_constraint_kernel(
        space,
        require_isotropic=True,
        require_bicyclic=(mode == MODE_PRIMITIVE_PAIRS),
        cap=cap,
        lower=FormSubmodule.weil_span(space),
    )


def restriction_kernel(space: SymplecticSpace, subgroup: Subgroup) -> FormSubmodule:
    """Forms whose restriction to the subgroup vanishes identically.

    Constraints on a generating set suffice: an alternating bilinear form
    vanishes on A x A iff it vanishes on all pairs of generators of A.
    """
    if subgroup.parent != space.group:
        raise ValueError("subgroup does not sit in the space's module")
    gens = np.array(
        [g.coords for g in subgroup.generators()], dtype=np.int64
    ).reshape(-1, space.dim)
    I, J = _pair_indices(space)
    rows = []
    for i in range(gens.shape[0]):
        rows.append(_minor_rows(gens[i], gens[i + 1 :], I, J, space.r))
    stacked = (
        np.vstack(rows) if rows else np.zeros((0, space.form_rank), dtype=np.int64)
    )
    return _kernel_submodule(space, stacked)


@dataclass(frozen=True)
class BicyclicFamily:
    """Deduplicated family of (Z/r)^2 subgroups with per-member provenance."""

    space: SymplecticSpace
    members: tuple[Subgroup, ...]
    provenance: tuple[str, ...]

    def __post_init__(self):
        if len(self.members) != len(self.provenance):
            raise ValueError("one provenance tag per member")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def with_pair(
        self, sigma: GroupElement, tau: GroupElement
    ) -> BicyclicFamily:
        """Family extended by the subgroup generated by a user-supplied pair."""
        if not is_bicyclic_rr(sigma, tau, self.space.r):
            raise ValueError("pair does not generate a (Z/r)^2 subgroup")
        member = subgroup_from_generators(self.space.group, [sigma, tau])
        if member in self.members:
            return self
        return BicyclicFamily(
            self.space,
            self.members + (member,),
            self.provenance + ("user-supplied",),
        )


def _enumerate_bicyclics(
    space: SymplecticSpace, isotropic_only: bool, cap: int
) -> BicyclicFamily:
    r = space.r
    X = space.group.coordinate_table(cap)
    I, J = _pair_indices(space)
    Cfull = weil_form(space).full_matrix()
    primes = _prime_factors(r)
    group = space.group
    tag = "isotropic-pair" if isotropic_only else "bicyclic-pair"
    seen: set[tuple[tuple[int, ...], ...]] = set()
    members: list[Subgroup] = []
    prov: list[str] = []
    for i in range(X.shape[0]):
        x = X[i]
        rest = X[i + 1 :]
        if rest.shape[0] == 0:
            break
        rows = _minor_rows(x, rest, I, J, r)
        mask = np.ones(rows.shape[0], dtype=bool)
        for p in primes:
            mask &= (rows % p).any(axis=1)
        if isotropic_only:
            evals = (rest @ ((x @ Cfull) % r)) % r
            mask &= evals == 0
        for idx in np.flatnonzero(mask):
            sub = subgroup_from_generators(
                group, [group.element(x), group.element(rest[idx])]
            )
            if sub.canonical_generators not in seen:
                seen.add(sub.canonical_generators)
                members.append(sub)
                prov.append(tag)
    return BicyclicFamily(space, tuple(members), tuple(prov))


def isotropic_bicyclics(
    space: SymplecticSpace, cap: int = DEFAULT_ENUMERATION_CAP
) -> BicyclicFamily:
    """All subgroups generated by a pair (x, y) with span (Z/r)^2 and
    e(x, y) = 0, each listed once.  Cost grows like r^{4g}; intended for
    small spaces."""
    return _enumerate_bicyclics(space, isotropic_only=True, cap=cap)


def all_bicyclics(
    space: SymplecticSpace, cap: int = DEFAULT_ENUMERATION_CAP
) -> BicyclicFamily:
    """Every (Z/r)^2 subgroup, isotropically generated or not."""
    return _enumerate_bicyclics(space, isotropic_only=False, cap=cap)


def bogomolov_intersection(
    space: SymplecticSpace,
    family: BicyclicFamily | None = None,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> FormSubmodule:
    """Intersection of restriction kernels over a family of bicyclic subgroups.

    With an explicit family, the generator-pair constraints of every member
    are stacked into one linear system (an empty family leaves the whole
    form module).  With ``family=None`` the isotropic bicyclic family is
    streamed without being materialized; a member contributes exactly the
    constraint of one generating pair, since on a bicyclic subgroup a form
    is determined by its value on any generating pair up to units.  The
    standard pairing lies in every isotropic restriction kernel, so its span
    again bounds the shrinking kernel from below and ends the scan early.
    """
    if family is None:
        return _streamed_constraint_kernel(
            space,
            require_isotropic=True,
            require_bicyclic=True,
            cap=cap,
            lower=FormSubmodule.weil_span(space),
        )
    if family.space != space:
        raise ValueError("family belongs to a different space")
    r = space.r
    m = space.form_rank
    I, J = _pair_indices(space)
    acc = np.zeros((0, m), dtype=np.int64)
    pending: list[np.ndarray] = []
    pending_rows = 0
    for member in family.members:
        gens = np.array(
            [g.coords for g in member.generators()], dtype=np.int64
        ).reshape(-1, space.dim)
        for i in range(gens.shape[0]):
            rows = _minor_rows(gens[i], gens[i + 1 :], I, J, r)
            rows = rows[rows.any(axis=1)]
            if rows.shape[0]:
                pending.append(rows)
                pending_rows += rows.shape[0]
        if pending_rows >= 1024:
            acc = howell_form(np.vstack([acc, *pending]), r)
            pending, pending_rows = [], 0
    if pending:
        acc = howell_form(np.vstack([acc, *pending]), r)
    return _kernel_submodule(space, acc)


@dataclass(frozen=True)
class InclusionReport:
    """Machine-readable summary of the main inclusion checks for one space.

    G refers to compute_G (per mode), G' to the streamed intersection of
    isotropic bicyclic restriction kernels, and the span of the standard
    pairing e is the expected value of both.
    """

    g: int
    r: int
    form_rank: int
    weil_span_order: int
    g_order_all_pairs: int | None
    g_order_primitive_pairs: int | None
    gprime_order: int
    e_in_gprime: bool
    gprime_subset_g_all: bool | None
    gprime_subset_g_primitive: bool | None
    g_all_equals_weil_span: bool | None
    g_primitive_equals_weil_span: bool | None
    gprime_equals_weil_span: bool

    def as_dict(self) -> dict:
        return asdict(self)

    def inclusion_flags(self) -> dict[str, bool]:
        """The pass/fail flags that gate an overall verification run."""
        flags = {"e_in_gprime": self.e_in_gprime}
        for name in (
            "gprime_subset_g_all",
            "gprime_subset_g_primitive",
            "g_all_equals_weil_span",
            "g_primitive_equals_weil_span",
        ):
            value = getattr(self, name)
            if value is not None:
                flags[name] = value
        return flags


def verify_main_inclusions(
    space: SymplecticSpace,
    cap: int = DEFAULT_ENUMERATION_CAP,
    mode: str = "both",
) -> InclusionReport:
    """Run the inclusion checks on one space and report every outcome."""
    if mode not in ("both", MODE_ALL_PAIRS, MODE_PRIMITIVE_PAIRS):
        raise ValueError(f"unknown mode {mode!r}")
    e_span = FormSubmodule.weil_span(space)
    gprime = bogomolov_intersection(space, None, cap)
    e_vec = weil_form(space).vector()
    g_all = (
        compute_G(space, MODE_ALL_PAIRS, cap)
        if mode in ("both", MODE_ALL_PAIRS)
        else None
    )
    g_prim = (
        compute_G(space, MODE_PRIMITIVE_PAIRS, cap)
        if mode in ("both", MODE_PRIMITIVE_PAIRS)
        else None
    )
    return InclusionReport(
        g=space.g,
        r=space.r,
        form_rank=space.form_rank,
        weil_span_order=e_span.order,
        g_order_all_pairs=None if g_all is None else g_all.order,
        g_order_primitive_pairs=None if g_prim is None else g_prim.order,
        gprime_order=gprime.order,
        e_in_gprime=gprime.contains_vector(e_vec),
        gprime_subset_g_all=None if g_all is None else gprime.is_submodule_of(g_all),
        gprime_subset_g_primitive=(
            None if g_prim is None else gprime.is_submodule_of(g_prim)
        ),
        g_all_equals_weil_span=None if g_all is None else g_all == e_span,
        g_primitive_equals_weil_span=None if g_prim is None else g_prim == e_span,
        gprime_equals_weil_span=gprime == e_span,
    )
