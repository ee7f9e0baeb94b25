"""Brute-force and randomized differential verification campaigns.

Each campaign pits an implementation against an independent reading of the
same property (exhaustive enumeration, direct sampling of an implication, or
a bounded fixpoint oracle) and reports mismatches. The decomposition
characterizations are theorems, so at the default bounds every exhaustive
campaign must come back empty; any mismatch is an implementation bug.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from . import engine
from .groups import FiniteAbelianGroup, GroupSubset, index_is_odd, is_subgroup, make_group
from .rationals import (
    QIntervalSpec,
    Rational,
    RationalGroupDescriptor,
    RationalMidconvexDescription,
    is_two_pure,
    rational_gcd,
    two_pure_closure,
)

EXHAUSTIVE_ORDER_CAP = 12
SAMPLED_SUBSET_COUNT = 10_000


@dataclass
class VerificationReport:
    """Outcome of one campaign: counts, mismatches, elapsed time, seed."""

    campaign: str
    counts: dict[str, int] = field(default_factory=dict)
    mismatches: list[dict] = field(default_factory=list)
    elapsed_s: float = 0.0
    seed: int | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self, include_elapsed: bool = False) -> dict:
        """Canonical rendering; elapsed time is zeroed unless asked for."""
        return {
            "name": self.campaign,
            "counts": dict(self.counts),
            "mismatches": list(self.mismatches),
            "elapsed_ms": int(self.elapsed_s * 1000) if include_elapsed else 0,
            "seed": self.seed,
            "details": self.details,
            "passed": self.passed,
        }


def _partitions(n: int, largest: int | None = None) -> Iterable[tuple[int, ...]]:
    """Partitions of n with parts descending, in reverse lexicographic order."""
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first, *rest)


def _factorize(n: int) -> list[tuple[int, int]]:
    factors = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        p += 1
    if n > 1:
        factors.append((n, 1))
    return factors


def enumerate_abelian_groups(max_order: int) -> list[FiniteAbelianGroup]:
    """One representative per isomorphism class per order up to max_order.

    Classes of order n correspond to choices of a partition of the exponent
    for each prime power in n; the representative concatenates the prime
    power factors with primes ascending and partition parts descending.
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    groups = []
    for n in range(1, max_order + 1):
        if n == 1:
            groups.append(make_group([1]))
            continue
        per_prime = []
        for p, e in _factorize(n):
            per_prime.append([tuple(p**part for part in parts) for parts in _partitions(e)])
        combos = [()]
        for options in per_prime:
            combos = [before + opt for before in combos for opt in options]
        for orders in combos:
            groups.append(make_group(orders))
    return groups


def _subset_masks(group: FiniteAbelianGroup, seed: int, sample_count: int) -> Iterable[int]:
    order = group.order
    if order <= EXHAUSTIVE_ORDER_CAP or 1 << order <= sample_count:
        return range(1 << order)
    rng = random.Random(f"{seed}:{group}")
    return [rng.getrandbits(order) for _ in range(sample_count)]


def _theorem2_holds(group: FiniteAbelianGroup, subset: GroupSubset, cache: dict) -> bool:
    """The subgroup-plus-base characterization, quantified over every base point."""
    for x in subset.members():
        xi = group.index_of(x)
        shifted = 0
        for i in subset.indices():
            shifted |= 1 << group.sub_index(i, xi)
        verdict = cache.get(shifted)
        if verdict is None:
            candidate = GroupSubset(group, shifted)
            verdict = cache[shifted] = is_subgroup(candidate) and index_is_odd(candidate)
        if not verdict:
            return False
    return True


def _sweep(
    campaign: str,
    max_order: int,
    seed: int,
    sample_count: int,
    check,
) -> VerificationReport:
    started = time.perf_counter()
    report = VerificationReport(campaign, seed=seed)
    groups = enumerate_abelian_groups(max_order)
    total = 0
    for group in groups:
        for mask in _subset_masks(group, seed, sample_count):
            total += 1
            subset = GroupSubset(group, mask)
            check(group, subset, report)
    report.counts = {"groups": len(groups), "subsets": total}
    report.mismatches.sort(key=lambda m: (m["group"], m["subset"]))
    report.elapsed_s = time.perf_counter() - started
    return report


def _subset_label(subset: GroupSubset) -> str:
    return "{%s}" % ",".join(str(e) for e in subset.members())


def exhaustive_theorem2(
    max_order: int = 12, *, seed: int = 0, sample_count: int = SAMPLED_SUBSET_COUNT
) -> VerificationReport:
    """Midconvexity versus odd-index subgroup translate, over all small groups."""
    midconvex_counts: dict[str, int] = {}
    subgroup_caches: dict[FiniteAbelianGroup, dict] = {}

    def check(group, subset, report):
        lhs = engine.is_midconvex(group, subset)
        rhs = _theorem2_holds(group, subset, subgroup_caches.setdefault(group, {}))
        label = str(group)
        if lhs:
            midconvex_counts[label] = midconvex_counts.get(label, 0) + 1
        if lhs != rhs:
            report.mismatches.append(
                {
                    "group": label,
                    "subset": _subset_label(subset),
                    "operation": "is_midconvex vs subgroup characterization",
                    "lhs": lhs,
                    "rhs": rhs,
                }
            )

    report = _sweep("theorem2", max_order, seed, sample_count, check)
    report.details["midconvex_counts"] = midconvex_counts
    return report


def exhaustive_theorem1(
    max_order: int = 10, *, seed: int = 0, sample_count: int = SAMPLED_SUBSET_COUNT
) -> VerificationReport:
    """Midconvexity versus decomposability of every trace."""

    def check(group, subset, report):
        lhs = engine.is_midconvex(group, subset)
        rhs = engine.verify_theorem1(group, subset)
        if lhs != rhs:
            report.mismatches.append(
                {
                    "group": str(group),
                    "subset": _subset_label(subset),
                    "operation": "is_midconvex vs trace decomposition",
                    "lhs": lhs,
                    "rhs": rhs,
                }
            )

    return _sweep("theorem1", max_order, seed, sample_count, check)


def exhaustive_lemma1(
    max_order: int = 12, *, seed: int = 0, sample_count: int = SAMPLED_SUBSET_COUNT
) -> VerificationReport:
    """Order-convexity of traces along member differences, for midconvex sets."""

    def check(group, subset, report):
        if not engine.is_midconvex(group, subset):
            return
        members = subset.members()
        for x in members:
            for y in members:
                if x == y:
                    continue
                if not engine.lemma1_holds_in_group(group, subset, x, y):
                    report.mismatches.append(
                        {
                            "group": str(group),
                            "subset": _subset_label(subset),
                            "operation": f"trace at {x} along {y - x} not order-convex",
                            "lhs": True,
                            "rhs": False,
                        }
                    )

    return _sweep("lemma1", max_order, seed, sample_count, check)


def _purity_violation(
    group: RationalGroupDescriptor,
    sub: RationalGroupDescriptor,
    rng: random.Random,
    samples: int,
    numerator_bound: int,
    exponent_bound: int,
) -> Fraction | None:
    """Grid point g with 2g in the subgroup but g outside, if the sampler finds one.

    The probe set is `samples` random grid points plus the halved subgroup
    generator, which is the canonical impurity witness whenever one exists;
    including it makes the sampled verdict decisive at these bounds.
    """
    primes = sorted(group.primes)
    candidates = [sub.gen / 2]
    for _ in range(samples):
        den = 1
        for p in primes:
            den *= p ** rng.randint(0, exponent_bound)
        num = rng.randint(-numerator_bound, numerator_bound)
        candidates.append(group.gen * Fraction(num, den))
    for g in candidates:
        if group.contains(g) and sub.contains(2 * g) and not sub.contains(g):
            return g
    return None


def sample_two_purity(
    trials: int = 100,
    seed: int = 0,
    prime_pool: Sequence[int] = (2, 3, 5, 7),
    *,
    samples_per_pair: int = 200,
    numerator_bound: int = 50,
    exponent_bound: int = 4,
) -> VerificationReport:
    """Differential test of the two-purity formula against direct sampling."""
    started = time.perf_counter()
    rng = random.Random(seed)
    pool = sorted(prime_pool)
    report = VerificationReport("purity", seed=seed)
    for trial in range(trials):
        ambient_primes = frozenset(rng.sample(pool, rng.randint(0, min(2, len(pool)))))
        ambient = RationalGroupDescriptor(
            Fraction(rng.randint(1, 12), rng.randint(1, 12)), ambient_primes
        )
        sub_primes = frozenset(p for p in ambient_primes if rng.random() < 0.5)
        den = prod(p ** rng.randint(0, 2) for p in ambient_primes) if ambient_primes else 1
        sub = RationalGroupDescriptor(
            ambient.gen * Fraction(rng.randint(1, 20), den), sub_primes
        )
        formula = is_two_pure(sub, ambient)
        violation = _purity_violation(
            ambient, sub, rng, samples_per_pair, numerator_bound, exponent_bound
        )
        if formula != (violation is None):
            report.mismatches.append(
                {
                    "group": str(ambient),
                    "subset": str(sub),
                    "operation": "is_two_pure formula vs sampled implication",
                    "lhs": formula,
                    "rhs": violation is None,
                    "violation": str(violation),
                }
            )
    report.counts = {"pairs": trials, "samples_per_pair": samples_per_pair}
    report.elapsed_s = time.perf_counter() - started
    return report


def bounded_closure_oracle(
    group: RationalGroupDescriptor, start: Iterable[Rational], max_iters: int
) -> tuple[frozenset[Fraction], bool]:
    """Iterate adding admissible midpoints; flag is True when a round was stable.

    Midpoints lie between their endpoints, so the result always stays inside
    the order interval of the starting set. In dense groups the fixpoint may
    be unreachable; the flag then comes back False.
    """
    points = frozenset(Fraction(p) for p in start)
    for p in points:
        if not group.contains(p):
            raise ValueError(f"starting point {p} is not in the ambient group")
    for _ in range(max_iters):
        pts = sorted(points)
        added = set()
        for i, a in enumerate(pts):
            for b in pts[i + 1 :]:
                c = (a + b) / 2
                if c not in points and group.contains(c):
                    added.add(c)
        if not added:
            return points, True
        points = points | added
    # a final stability probe so that a set completed on the last round is
    # still reported complete
    pts = sorted(points)
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            c = (a + b) / 2
            if c not in points and group.contains(c):
                return points, False
    return points, True


def hull_candidate(
    group: RationalGroupDescriptor, start: Sequence[Rational]
) -> RationalMidconvexDescription:
    """Order-convex hull intersected with the two-pure closure of the span.

    This is the conjectured closed form of the midconvex closure in subgroups
    of the rationals; it is checked against the bounded oracle, never trusted.
    """
    points = sorted(Fraction(p) for p in start)
    if not points:
        raise ValueError("candidate needs a nonempty starting set")
    base = points[0]
    interval = QIntervalSpec(points[0], points[-1])
    span = rational_gcd([p - base for p in points])
    if span == 0:
        # singleton: the order interval already pins the set to the base point
        return RationalMidconvexDescription(interval, group, base)
    closure = two_pure_closure(RationalGroupDescriptor(span), group)
    return RationalMidconvexDescription(interval, closure, base)


def conjecture_hull_check(
    group: RationalGroupDescriptor,
    start: Sequence[Rational],
    max_iters: int = 8,
    samples: int = 200,
    seed: int = 0,
) -> VerificationReport:
    """Compare the hull candidate with the bounded midpoint-closure oracle.

    Containment of the oracle output in the candidate is asserted as fact.
    The reverse containment cannot be certified by bounded iteration, so
    candidate points the oracle has not yet produced are only counted and
    the verdict on them is reported as unfalsified at this depth.
    """
    started = time.perf_counter()
    report = VerificationReport("hull", seed=seed)
    candidate = hull_candidate(group, start)
    produced, complete = bounded_closure_oracle(group, start, max_iters)
    for p in sorted(produced):
        if not candidate.contains(p):
            report.mismatches.append(
                {
                    "group": str(group),
                    "subset": str(sorted(Fraction(s) for s in start)),
                    "operation": "oracle point outside hull candidate",
                    "lhs": str(p),
                    "rhs": str(candidate),
                }
            )
    rng = random.Random(seed)
    sampled = engine.draw_lattice_points(
        rng,
        candidate.subgroup,
        candidate.interval,
        candidate.base,
        samples,
        numerator_bound=50,
        exponent_bound=4,
    )
    unproduced = sorted({p for p in sampled if p not in produced})
    if complete:
        # the oracle reached its fixpoint, so candidate points it never
        # produced genuinely falsify the conjectured closed form
        for p in unproduced:
            report.mismatches.append(
                {
                    "group": str(group),
                    "subset": str(sorted(Fraction(s) for s in start)),
                    "operation": "candidate point outside completed closure",
                    "lhs": str(candidate),
                    "rhs": str(p),
                }
            )
    report.counts = {
        "oracle_points": len(produced),
        "candidate_samples": len(sampled),
    }
    report.details = {
        "candidate": str(candidate),
        "oracle_complete": complete,
        "candidate_points_not_yet_produced": len(unproduced),
        "reverse_containment": "exact" if complete else "unfalsified at this depth",
    }
    report.elapsed_s = time.perf_counter() - started
    return report
