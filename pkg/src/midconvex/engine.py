"""Midconvexity predicate, closure operator, and the decomposition pipelines.

A set X in an Abelian group is midconvex when for all members x, y every z
with 2z = x + y is again a member. Depending on 2-torsion the halving set of
x + y can be empty, a single point, or several points, so the predicate
deliberately includes the x = y pairs; dropping them is wrong in groups with
2-torsion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Iterable

from .errors import CapExceeded, NotMidconvex, NotMidconvexTrace, WindowTooSmall
from .groups import FiniteAbelianGroup, GroupElement, GroupSubset, index_is_odd, is_subgroup
from .intsets import IntWindowSet, decompose_trace, is_order_convex
from .rationals import (
    QIntervalSpec,
    Rational,
    RationalGroupDescriptor,
    RationalMidconvexDescription,
    cyclic_chain,
    is_two_pure,
)


@dataclass(frozen=True)
class MidconvexWitness:
    """A violating triple: x, y members, 2z = x + y, z not a member."""

    x: GroupElement
    y: GroupElement
    z: GroupElement


@dataclass(frozen=True)
class PeriodicDecomposition:
    """X as subgroup + base, with the subgroup of odd index in the group."""

    subgroup: GroupSubset
    base: GroupElement
    odd_index: bool

    @property
    def index(self) -> int:
        return self.subgroup.group.order // self.subgroup.size


# -- finite groups -------------------------------------------------------


def midconvex_witness(group: FiniteAbelianGroup, subset: GroupSubset) -> MidconvexWitness | None:
    """First violating triple in enumeration order, or None when midconvex."""
    mask = subset.mask
    missing = ~mask
    idxs = list(subset.indices())
    for xi in idxs:
        for yi in idxs:
            s = group.add_index(xi, yi)
            bad = group.halving_index_mask(s) & missing
            if bad:
                zi = (bad & -bad).bit_length() - 1
                return MidconvexWitness(group.element_at(xi), group.element_at(yi), group.element_at(zi))
    return None


def is_midconvex(group: FiniteAbelianGroup, subset: GroupSubset) -> bool:
    return midconvex_witness(group, subset) is None


def midconvex_closure(group: FiniteAbelianGroup, subset: GroupSubset) -> GroupSubset:
    """Least midconvex superset, by a worklist fixpoint over halving sets."""
    mask = subset.mask
    members = list(subset.indices())
    work = list(members)
    while work:
        a = work.pop()
        for b in list(members):
            s = group.add_index(a, b)
            new = group.halving_index_mask(s) & ~mask
            while new:
                low = new & -new
                zi = low.bit_length() - 1
                mask |= low
                members.append(zi)
                work.append(zi)
                new ^= low
    return GroupSubset(group, mask)


def trace_in_group(
    group: FiniteAbelianGroup, subset: GroupSubset, x: GroupElement, g: GroupElement
) -> IntWindowSet:
    """Residues n mod ord(g) with x + n*g in X, as a periodic window set."""
    if x not in subset:
        raise ValueError("trace base point must be a member")
    d = g.order()
    point = x
    residues = []
    for n in range(d):
        if point in subset:
            residues.append(n)
        point = point + g
    return IntWindowSet.from_residues(d, residues)


def theorem1_violation(
    group: FiniteAbelianGroup, subset: GroupSubset
) -> tuple[GroupElement, GroupElement, NotMidconvexTrace] | None:
    """First (x, g) whose trace admits no interval-and-odd-subgroup split."""
    for x in subset.members():
        for g in group:
            trace = trace_in_group(group, subset, x, g)
            try:
                decompose_trace(trace)
            except NotMidconvexTrace as exc:
                return (x, g, exc)
    return None


def verify_theorem1(group: FiniteAbelianGroup, subset: GroupSubset) -> bool:
    """True iff every trace of the set decomposes; equals is_midconvex."""
    return theorem1_violation(group, subset) is None


def decompose_periodic(
    group: FiniteAbelianGroup, subset: GroupSubset, x: GroupElement
) -> PeriodicDecomposition:
    """Split X as (X - x) + x with X - x a subgroup of odd index.

    For midconvex X this succeeds and the subgroup does not depend on the
    choice of the base point; otherwise NotMidconvex reports the reason.
    """
    if x not in subset:
        raise ValueError("decomposition base point must be a member")
    xi = group.index_of(x)
    shifted = 0
    for i in subset.indices():
        shifted |= 1 << group.sub_index(i, xi)
    candidate = GroupSubset(group, shifted)
    if not is_subgroup(candidate):
        raise NotMidconvex("X - x is not a subgroup")
    if not index_is_odd(candidate):
        raise NotMidconvex(
            f"X - x has even index {group.order // candidate.size}"
        )
    return PeriodicDecomposition(candidate, x, True)


def doubling_claim_check(
    group: FiniteAbelianGroup, subset: GroupSubset, x: GroupElement
) -> bool:
    """True iff X - x is closed under doubling; holds for midconvex X."""
    xi = group.index_of(x)
    shifted = 0
    for i in subset.indices():
        shifted |= 1 << group.sub_index(i, xi)
    for a in GroupSubset(group, shifted).indices():
        if not shifted >> group.add_index(a, a) & 1:
            return False
    return True


def lemma1_holds_in_group(
    group: FiniteAbelianGroup, subset: GroupSubset, x: GroupElement, y: GroupElement
) -> bool:
    """Order-convexity of the trace along y - x, lifted over two periods.

    The trace of a finite-group set is periodic; the periodic set it denotes
    is order-convex in the integers only when it is everything, and a window
    of two periods is wide enough to exhibit any gap.
    """
    if x == y:
        raise ValueError("lemma check needs two distinct members")
    trace = trace_in_group(group, subset, x, y - x)
    d = trace.period
    assert d is not None
    lifted = IntWindowSet.from_predicate(0, 2 * d - 1, trace.contains)
    return is_order_convex(lifted)


# -- subgroups of the rationals ------------------------------------------


class FiniteRationalSet:
    """Membership oracle backed by an explicit finite set of rationals."""

    def __init__(self, points: Iterable[Rational]):
        self.points = frozenset(Fraction(p) for p in points)

    def contains(self, r: Rational) -> bool:
        return Fraction(r) in self.points


def _as_oracle(x) -> object:
    if hasattr(x, "contains"):
        return x
    return FiniteRationalSet(x)


def is_midconvex_q_finite(
    group: RationalGroupDescriptor, points: Iterable[Rational]
) -> tuple[Fraction, Fraction, Fraction] | None:
    """Exact midconvexity check of a finite set inside a rational group.

    Returns the first violating (x, y, z) with z = (x+y)/2 in the ambient
    group but outside the set, scanning pairs in increasing order.
    """
    pts = sorted(Fraction(p) for p in points)
    pset = set(pts)
    for i, x in enumerate(pts):
        for y in pts[i:]:
            z = (x + y) / 2
            if z not in pset and group.contains(z):
                return (x, y, z)
    return None


def decompose_rational(
    group: RationalGroupDescriptor,
    points,
    x: Rational,
    x2: Rational,
    depth: int,
    window: Rational,
    *,
    lattice_cap: int = 500_000,
) -> RationalMidconvexDescription:
    """Recover an interval-and-subgroup description of a midconvex set.

    Builds the chain of cyclic groups seeded with {x, x2}, decomposes the
    window-exact trace of the set on each lattice, checks that the interval
    and the subgroup both grow monotonically across refinements, and returns
    the description at the deepest level. An inverted prime of the ambient
    group makes it into the recovered subgroup exactly when its most recent
    refinement strictly enlarged the subgroup, so the result is a finite-depth
    approximation of the limit subgroup; membership is certified on the
    sampled lattices inside the window.

    `window` is the rational radius around x that is examined at every level;
    it must cover x2.
    """
    oracle = _as_oracle(points)
    x, x2 = Fraction(x), Fraction(x2)
    if x >= x2:
        raise ValueError("need two base points with x < x2")
    if not (oracle.contains(x) and oracle.contains(x2)):
        raise ValueError("base points must be members of the set")
    radius = Fraction(window)
    if radius < x2 - x:
        raise WindowTooSmall(f"window radius {radius} does not cover x2 - x = {x2 - x}")

    chain = cyclic_chain(group, (x, x2), depth)
    primes = sorted(group.primes)
    grew_last: dict[int, bool] = {}
    prev_lower = prev_upper = prev_gen = None
    lower = upper = h_gen = None

    for step, g in enumerate(chain):
        k_max = floor(radius / g)
        if 2 * k_max + 1 > lattice_cap:
            raise CapExceeded(
                f"level {step} lattice has {2 * k_max + 1} points, cap is {lattice_cap}"
            )
        members = [k for k in range(-k_max, k_max + 1) if oracle.contains(x + k * g)]
        trace = IntWindowSet.from_members(-k_max, k_max, members)
        try:
            dec = decompose_trace(trace)
        except NotMidconvexTrace as exc:
            raise NotMidconvex(f"level {step} (lattice step {g}): {exc.reason}") from exc
        m = dec.subgroup.modulus
        assert m >= 1, "two base points guarantee a nonzero trace element"
        assert dec.interval.lower is not None and dec.interval.upper is not None
        lower = x + g * dec.interval.lower
        upper = x + g * dec.interval.upper
        h_gen = m * g
        if step > 0:
            if not (lower <= prev_lower and prev_upper <= upper):
                raise NotMidconvex(
                    f"level {step}: interval [{lower},{upper}] does not extend [{prev_lower},{prev_upper}]"
                )
            ratio = prev_gen / h_gen
            if ratio.denominator != 1 or ratio < 1:
                raise NotMidconvex(
                    f"level {step}: subgroup generated by {h_gen} does not extend {prev_gen}"
                )
            if primes:
                grew_last[primes[(step - 1) % len(primes)]] = ratio > 1
        prev_lower, prev_upper, prev_gen = lower, upper, h_gen

    recovered = RationalGroupDescriptor(
        h_gen, frozenset(p for p, grew in grew_last.items() if grew)
    )
    interval = QIntervalSpec(lower, upper)
    return RationalMidconvexDescription(interval, recovered, base=x)


def draw_lattice_points(
    rng: random.Random,
    subgroup: RationalGroupDescriptor,
    interval: QIntervalSpec,
    base: Fraction,
    count: int,
    numerator_bound: int,
    exponent_bound: int,
) -> list[Fraction]:
    """Sample points of (subgroup + base) inside the interval."""
    primes = sorted(subgroup.primes)
    points: list[Fraction] = []
    attempts = 0
    while len(points) < count and attempts < 100 * count:
        attempts += 1
        den = 1
        for p in primes:
            den *= p ** rng.randint(0, exponent_bound)
        step = subgroup.gen / den
        lo, hi = -numerator_bound, numerator_bound
        if interval.lower is not None:
            lo = max(lo, -floor((base - interval.lower) / step))
        if interval.upper is not None:
            hi = min(hi, floor((interval.upper - base) / step))
        if lo > hi:
            continue
        r = base + rng.randint(lo, hi) * step
        if interval.contains(r):
            points.append(r)
    return points


def theorem3_if_violation(
    description: RationalMidconvexDescription,
    group: RationalGroupDescriptor,
    samples: int,
    seed: int,
    *,
    numerator_bound: int = 50,
    exponent_bound: int = 4,
) -> tuple[Fraction, Fraction, Fraction] | None:
    """Random search for a midconvexity violation of a described set.

    The description must have a two-pure subgroup, which certifies that no
    violation exists; the sampler is the differential check of that argument.
    Draws pairs (a, b) of members and, whenever (a+b)/2 lands in the ambient
    group, asserts that it is again a member. Deterministic for a fixed seed.
    """
    if not is_two_pure(description.subgroup, group):
        raise ValueError("description subgroup is not two-pure in the ambient group")
    rng = random.Random(seed)
    points = draw_lattice_points(
        rng,
        description.subgroup,
        description.interval,
        description.base,
        2 * samples,
        numerator_bound,
        exponent_bound,
    )
    if len(points) < 2:
        return None
    for i in range(samples):
        a = points[(2 * i) % len(points)]
        b = points[(2 * i + 1) % len(points)]
        c = (a + b) / 2
        if group.contains(c) and not description.contains(c):
            return (a, b, c)
    return None


def verify_theorem3_if(
    description: RationalMidconvexDescription,
    group: RationalGroupDescriptor,
    samples: int = 1000,
    seed: int = 0,
) -> bool:
    return theorem3_if_violation(description, group, samples, seed) is None


def described_midconvex_witness(
    description: RationalMidconvexDescription,
    group: RationalGroupDescriptor,
    *,
    numerator_bound: int = 64,
    exponent_bound: int = 6,
) -> tuple[Fraction, Fraction, Fraction] | None:
    """Witness that a described set is not midconvex, or None when it is.

    With a two-pure subgroup the set is midconvex outright. Otherwise a
    violation exists as soon as the set has a second point: the member
    closest to the base along the subgroup lattice has an odd lattice
    coordinate (an even one would yield a closer member by halving), and
    its midpoint with the base lies in the ambient group but not in the set.
    The probe grid is deterministic and covers lattice numerators up to
    `numerator_bound` at denominator exponents up to `exponent_bound`.
    """
    description.validate_ambient(group)
    if is_two_pure(description.subgroup, group):
        return None
    sub = description.subgroup
    base = description.base
    candidates: list[Fraction] = []
    dens = [1]
    for p in sorted(sub.primes):
        dens = [d * p**e for d in dens for e in range(exponent_bound + 1)]
    for den in dens:
        for num in range(1, numerator_bound + 1):
            candidates.append(Fraction(num, den))
    candidates.sort()
    for t in candidates:
        for signed in (t, -t):
            r = base + sub.gen * signed
            if description.contains(r):
                # minimality in the probe grid forces an odd numerator, so the
                # midpoint with the base is off the subgroup lattice
                c = (base + r) / 2
                if group.contains(c) and not description.contains(c):
                    return (base, r, c) if r > base else (r, base, c)
    return None
