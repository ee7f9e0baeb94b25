"""Exact arithmetic and structure queries for finite Abelian groups.

A group is presented as a direct sum of cyclic groups Z_{n_1} x ... x Z_{n_k}
and elements are residue vectors. Enumeration is mixed-radix with the *last*
component varying fastest; the order is fixed so that membership tables,
witnesses and reports are reproducible byte for byte. Factor lists are taken
as given and never normalized (normalizing would change enumeration order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd, lcm, prod
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded

DEFAULT_ORDER_CAP = 1 << 20

# Full index tables (addition, subtraction, halving masks) are only
# materialized for groups up to this order; larger groups fall back to
# per-call mixed-radix arithmetic.
_TABLE_CAP = 512


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups, given by the tuple of factor orders."""

    orders: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        if any(n < 1 for n in self.orders):
            raise ValueError(f"cyclic factor orders must be >= 1, got {self.orders!r}")

    def __str__(self) -> str:
        return "Z(%s)" % "x".join(str(n) for n in self.orders)

    # -- enumeration ----------------------------------------------------

    @property
    def order(self) -> int:
        n = self._cache.get("order")
        if n is None:
            n = self._cache["order"] = prod(self.orders)
        return n

    def _encode(self, residues: Sequence[int]) -> int:
        idx = 0
        for r, n in zip(residues, self.orders):
            idx = idx * n + r
        return idx

    def _decode(self, index: int) -> tuple[int, ...]:
        res = []
        for n in reversed(self.orders):
            index, r = divmod(index, n)
            res.append(r)
        return tuple(reversed(res))

    def element(self, residues: Iterable[int]) -> "GroupElement":
        return GroupElement(self, tuple(residues))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.orders))

    def element_at(self, index: int) -> "GroupElement":
        if not 0 <= index < self.order:
            raise IndexError(f"element index {index} out of range for {self}")
        return GroupElement(self, self._decode(index))

    def index_of(self, element: "GroupElement") -> int:
        if element.group != self:
            raise ValueError("element belongs to a different group")
        return self._encode(element.residues)

    def __iter__(self) -> Iterator["GroupElement"]:
        for residues in itertools.product(*(range(n) for n in self.orders)):
            yield GroupElement(self, residues)

    def elements(self) -> list["GroupElement"]:
        return list(self)

    # -- index arithmetic -----------------------------------------------

    def _tables(self):
        tabs = self._cache.get("tables")
        if tabs is None:
            if self.order > _TABLE_CAP:
                raise CapExceeded(f"index tables not built for groups of order > {_TABLE_CAP}")
            n = self.order
            decoded = [self._decode(i) for i in range(n)]
            enc = self._encode
            add = [
                tuple(enc([(a + b) % m for a, b, m in zip(ra, rb, self.orders)]) for rb in decoded)
                for ra in decoded
            ]
            neg = tuple(enc([(-a) % m for a, m in zip(ra, self.orders)]) for ra in decoded)
            halve = [0] * n
            for z in range(n):
                halve[add[z][z]] |= 1 << z
            tabs = self._cache["tables"] = (add, neg, tuple(halve))
        return tabs

    def add_index(self, i: int, j: int) -> int:
        if self.order <= _TABLE_CAP:
            return self._tables()[0][i][j]
        ra, rb = self._decode(i), self._decode(j)
        return self._encode([(a + b) % m for a, b, m in zip(ra, rb, self.orders)])

    def neg_index(self, i: int) -> int:
        if self.order <= _TABLE_CAP:
            return self._tables()[1][i]
        return self._encode([(-a) % m for a, m in zip(self._decode(i), self.orders)])

    def sub_index(self, i: int, j: int) -> int:
        return self.add_index(i, self.neg_index(j))

    def halving_index_mask(self, s_index: int) -> int:
        """Bitmask of all element indices z with 2z equal to the element at s_index."""
        if self.order <= _TABLE_CAP:
            return self._tables()[2][s_index]
        mask = 0
        for z in self.halving_indices(s_index):
            mask |= 1 << z
        return mask

    def halving_indices(self, s_index: int) -> tuple[int, ...]:
        s = self._decode(s_index)
        per_component = []
        for c, n in zip(s, self.orders):
            sols = _halve_mod(c, n)
            if not sols:
                return ()
            per_component.append(sols)
        return tuple(self._encode(v) for v in itertools.product(*per_component))


def _halve_mod(c: int, n: int) -> tuple[int, ...]:
    """Solutions z of 2z = c (mod n), ascending."""
    if n % 2 == 1:
        inv2 = pow(2, -1, n) if n > 1 else 0
        return ((c * inv2) % n,)
    if c % 2 == 1:
        return ()
    z0 = (c // 2) % (n // 2)
    return (z0, z0 + n // 2)


@dataclass(frozen=True)
class GroupElement:
    """Residue vector in a finite Abelian group, reduced componentwise."""

    group: FiniteAbelianGroup
    residues: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.residues) != len(self.group.orders):
            raise ValueError(
                f"expected {len(self.group.orders)} residues, got {len(self.residues)}"
            )
        object.__setattr__(
            self,
            "residues",
            tuple(int(r) % n for r, n in zip(self.residues, self.group.orders)),
        )

    @property
    def index(self) -> int:
        return self.group.index_of(self)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise ValueError("cannot add elements of different groups")
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.residues, other.residues)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-a for a in self.residues))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * a for a in self.residues))

    def __str__(self) -> str:
        if len(self.residues) == 1:
            return str(self.residues[0])
        return "(%s)" % ",".join(str(r) for r in self.residues)

    def order(self) -> int:
        """Least n >= 1 with n times this element equal to zero."""
        result = 1
        for r, n in zip(self.residues, self.group.orders):
            result = lcm(result, n // gcd(r, n))
        return result


def make_group(orders: Iterable[int], *, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteAbelianGroup:
    """Build a direct sum of cyclic groups with the given factor orders."""
    group = FiniteAbelianGroup(tuple(orders))
    if group.order > order_cap:
        raise CapExceeded(f"group order {group.order} exceeds cap {order_cap}")
    return group


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def neg(a: GroupElement) -> GroupElement:
    return -a


def element_order(a: GroupElement) -> int:
    return a.order()


def halving_set(s: GroupElement) -> frozenset[GroupElement]:
    """All elements z with 2z = s; empty when no component congruence solves."""
    group = s.group
    return frozenset(group.element_at(i) for i in group.halving_indices(s.index))


@dataclass(frozen=True)
class GroupSubset:
    """Subset of a finite Abelian group as a dense membership table.

    The table is stored as an integer bitmask over element indices; bit i is
    the membership flag of the element enumerated at index i.
    """

    group: FiniteAbelianGroup
    mask: int

    def __post_init__(self) -> None:
        if not 0 <= self.mask < (1 << self.group.order):
            raise ValueError("membership table length does not match group order")

    @classmethod
    def empty(cls, group: FiniteAbelianGroup) -> "GroupSubset":
        return cls(group, 0)

    @classmethod
    def full(cls, group: FiniteAbelianGroup) -> "GroupSubset":
        return cls(group, (1 << group.order) - 1)

    @classmethod
    def from_indices(cls, group: FiniteAbelianGroup, indices: Iterable[int]) -> "GroupSubset":
        mask = 0
        for i in indices:
            if not 0 <= i < group.order:
                raise ValueError(f"element index {i} out of range")
            mask |= 1 << i
        return cls(group, mask)

    @classmethod
    def from_elements(cls, group: FiniteAbelianGroup, elements: Iterable) -> "GroupSubset":
        indices = []
        for e in elements:
            if not isinstance(e, GroupElement):
                e = group.element(e if isinstance(e, (tuple, list)) else (e,))
            indices.append(group.index_of(e))
        return cls.from_indices(group, indices)

    @classmethod
    def from_bools(cls, group: FiniteAbelianGroup, table: Sequence[bool]) -> "GroupSubset":
        if len(table) != group.order:
            raise ValueError("membership table length does not match group order")
        mask = 0
        for i, b in enumerate(table):
            if b:
                mask |= 1 << i
        return cls(group, mask)

    @property
    def membership(self) -> tuple[bool, ...]:
        return tuple(bool(self.mask >> i & 1) for i in range(self.group.order))

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, element: GroupElement) -> bool:
        return bool(self.mask >> self.group.index_of(element) & 1)

    def indices(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def members(self) -> list[GroupElement]:
        return [self.group.element_at(i) for i in self.indices()]

    def __or__(self, other: "GroupSubset") -> "GroupSubset":
        self._check_same_group(other)
        return GroupSubset(self.group, self.mask | other.mask)

    def __and__(self, other: "GroupSubset") -> "GroupSubset":
        self._check_same_group(other)
        return GroupSubset(self.group, self.mask & other.mask)

    def issubset(self, other: "GroupSubset") -> bool:
        self._check_same_group(other)
        return self.mask & ~other.mask == 0

    def translate(self, x: GroupElement) -> "GroupSubset":
        """The set of all members shifted by x."""
        group = self.group
        xi = group.index_of(x)
        mask = 0
        for i in self.indices():
            mask |= 1 << group.add_index(i, xi)
        return GroupSubset(group, mask)

    def _check_same_group(self, other: "GroupSubset") -> None:
        if self.group != other.group:
            raise ValueError("subsets of different groups")


def is_subgroup(subset: GroupSubset) -> bool:
    """True iff the subset contains zero and is closed under addition and negation."""
    group = subset.group
    mask = subset.mask
    if not mask & 1 << group.index_of(group.zero()):
        return False
    idxs = list(subset.indices())
    for a in idxs:
        if not mask >> group.neg_index(a) & 1:
            return False
    for a in idxs:
        for b in idxs:
            if not mask >> group.add_index(a, b) & 1:
                return False
    return True


def subgroup_generated(subset: GroupSubset) -> GroupSubset:
    """Smallest subgroup containing the subset (the empty set generates {0})."""
    group = subset.group
    zero = group.index_of(group.zero())
    mask = subset.mask | 1 << zero
    work = [zero, *subset.indices()]
    members = list(work)
    while work:
        a = work.pop()
        na = group.neg_index(a)
        if not mask >> na & 1:
            mask |= 1 << na
            work.append(na)
            members.append(na)
        for b in list(members):
            s = group.add_index(a, b)
            if not mask >> s & 1:
                mask |= 1 << s
                work.append(s)
                members.append(s)
    return GroupSubset(group, mask)


def index_is_odd(subset: GroupSubset) -> bool:
    """True iff the subset is a subgroup of odd index."""
    if not is_subgroup(subset):
        raise ValueError("index_is_odd requires a subgroup")
    return (subset.group.order // subset.size) % 2 == 1
