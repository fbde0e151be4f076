"""Finite abelian groups in invariant-factor form.

A group is described by its invariant factors (n_1, ..., n_r) with
n_1 | n_2 | ... | n_r, so the group is Z_{n_1} x ... x Z_{n_r}.  Elements are
packed indices in [0, n): the mixed-radix encoding of the coordinate vector
(x_1, ..., x_r) with the first coordinate most significant.  Element sets are
bit masks over the n packed indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as _cartesian
from typing import Iterable, Iterator, Sequence

DEFAULT_ORDER_CAP = 1 << 16


class ParameterError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class EmptySetError(ParameterError):
    """An operation that needs a nonempty set received an empty one."""


_divisor_cache: dict[int, tuple[int, ...]] = {}


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ParameterError(f"divisors: n must be >= 1, got {n}")
    cached = _divisor_cache.get(n)
    if cached is None:
        small: list[int] = []
        large: list[int] = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                small.append(d)
                if d != n // d:
                    large.append(n // d)
            d += 1
        large.reverse()
        cached = tuple(small + large)
        _divisor_cache[n] = cached
    return list(cached)


def prime_factorization(n: int) -> dict[int, int]:
    """Prime -> exponent map of n >= 2, by trial division (desk scale)."""
    if n < 2:
        raise ParameterError(f"prime_factorization: n must be >= 2, got {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factorization(n) == {n: 1}


def invariant_factors(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant-factor chain of a direct product of cyclic groups.

    Each cyclic factor is split into prime-power components; the largest
    components across primes are multiplied together to form the last
    invariant factor, the next-largest the one before it, and so on.
    """
    if not orders:
        raise ParameterError("invariant_factors: need at least one cyclic factor")
    buckets: dict[int, list[int]] = {}
    for n in orders:
        if n < 2:
            raise ParameterError(f"invariant_factors: cyclic order must be >= 2, got {n}")
        for p, e in prime_factorization(n).items():
            buckets.setdefault(p, []).append(e)
    rank = max(len(v) for v in buckets.values())
    for exps in buckets.values():
        exps.sort(reverse=True)
        exps.extend([0] * (rank - len(exps)))
    chain = []
    for j in range(rank):
        f = 1
        for p, exps in buckets.items():
            f *= p ** exps[j]
        chain.append(f)
    chain.reverse()
    return tuple(chain)


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group given by its invariant-factor chain."""

    factors: tuple[int, ...]
    max_order: int = field(default=DEFAULT_ORDER_CAP, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.factors:
            raise ParameterError("GroupSpec: factor chain is empty")
        object.__setattr__(self, "factors", tuple(int(f) for f in self.factors))
        for f in self.factors:
            if f < 2:
                raise ParameterError(f"GroupSpec: factors must be >= 2, got {f}")
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a != 0:
                raise ParameterError(
                    f"GroupSpec: {self.factors} is not an invariant-factor chain "
                    f"({a} does not divide {b}); normalize with invariant_factors()"
                )
        n = 1
        for f in self.factors:
            n *= f
        if n > self.max_order:
            raise ParameterError(
                f"GroupSpec: order {n} exceeds the configured cap {self.max_order}"
            )

    def __getstate__(self):
        # cached properties hold closures; pickle only the defining fields
        return {"factors": self.factors, "max_order": self.max_order}

    def __setstate__(self, state) -> None:
        object.__setattr__(self, "factors", state["factors"])
        object.__setattr__(self, "max_order", state["max_order"])

    @cached_property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f
        return n

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    @cached_property
    def elementary_prime(self) -> int | None:
        """p if the group is Z_p^r for a prime p, else None."""
        p = self.factors[0]
        if all(f == p for f in self.factors) and is_prime(p):
            return p
        return None

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @cached_property
    def _places(self) -> tuple[int, ...]:
        places = []
        acc = 1
        for f in reversed(self.factors):
            places.append(acc)
            acc *= f
        places.reverse()
        return tuple(places)

    @cached_property
    def _coords(self) -> tuple[tuple[int, ...], ...]:
        ranges = [range(f) for f in self.factors]
        return tuple(_cartesian(*ranges))

    @cached_property
    def _neg(self) -> tuple[int, ...]:
        return tuple(self.index_of(tuple(-x for x in c)) for c in self._coords)

    def coords(self, a: int) -> tuple[int, ...]:
        return self._coords[a]

    def index_of(self, coords: Sequence[int]) -> int:
        if len(coords) != self.rank:
            raise ParameterError(
                f"index_of: expected {self.rank} coordinates, got {len(coords)}"
            )
        return sum((c % f) * p for c, f, p in zip(coords, self.factors, self._places))

    def add(self, a: int, b: int) -> int:
        if self.rank == 1:
            return (a + b) % self.order
        ca, cb = self._coords[a], self._coords[b]
        return sum(
            ((x + y) % f) * p
            for x, y, f, p in zip(ca, cb, self.factors, self._places)
        )

    def neg(self, a: int) -> int:
        return self._neg[a]

    def scale(self, k: int, a: int) -> int:
        if self.rank == 1:
            return (k * a) % self.order
        return sum(
            ((k * x) % f) * p
            for x, f, p in zip(self._coords[a], self.factors, self._places)
        )

    def element_str(self, a: int) -> str:
        if self.rank == 1:
            return str(a)
        return "(" + ",".join(str(x) for x in self._coords[a]) + ")"

    def literal(self) -> str:
        return "x".join(f"Z{f}" for f in self.factors)

    # --- bit-mask kernels -------------------------------------------------

    @cached_property
    def _shifter(self):
        """Fast mask-translation closure: cyclic groups rotate the mask,
        other groups scatter over set bits with inline coordinate
        arithmetic (rank 2 specialized to a single divmod)."""
        n = self.order
        if self.rank == 1:
            full = self.full_mask

            def shift_rot(mask: int, x: int) -> int:
                if x == 0 or mask == 0:
                    return mask
                return ((mask << x) | (mask >> (n - x))) & full

            return shift_rot
        if self.rank == 2:
            n1, n2 = self.factors

            def shift2(mask: int, x: int) -> int:
                if x == 0 or mask == 0:
                    return mask
                x1, x0 = divmod(x, n2)
                out = 0
                while mask:
                    low = mask & -mask
                    b1, b0 = divmod(low.bit_length() - 1, n2)
                    s0 = b0 + x0
                    if s0 >= n2:
                        s0 -= n2
                    s1 = b1 + x1
                    if s1 >= n1:
                        s1 -= n1
                    out |= 1 << (s1 * n2 + s0)
                    mask ^= low
                return out

            return shift2
        coords = self._coords
        factors = self.factors
        places = self._places

        def shift_any(mask: int, x: int) -> int:
            if x == 0 or mask == 0:
                return mask
            cx = coords[x]
            out = 0
            while mask:
                low = mask & -mask
                cb = coords[low.bit_length() - 1]
                idx = 0
                for xb, xx, f, p in zip(cb, cx, factors, places):
                    s = xb + xx
                    if s >= f:
                        s -= f
                    idx += s * p
                out |= 1 << idx
                mask ^= low
            return out

        return shift_any

    def shift_mask(self, mask: int, x: int) -> int:
        """Translate every element of the mask by x."""
        return self._shifter(mask, x)

    def neg_mask(self, mask: int) -> int:
        """The mask of negated elements."""
        neg = self._neg
        out = 0
        while mask:
            low = mask & -mask
            out |= 1 << neg[low.bit_length() - 1]
            mask ^= low
        return out

    # --- structure used by searches ---------------------------------------

    @cached_property
    def involutions(self) -> tuple[int, ...]:
        """Ascending indices of elements x with 2x = 0 (the identity included)."""
        options = []
        for f in self.factors:
            options.append((0, f // 2) if f % 2 == 0 else (0,))
        ids = sorted(self.index_of(c) for c in _cartesian(*options))
        return tuple(ids)

    @cached_property
    def inverse_pairs(self) -> tuple[tuple[int, int], ...]:
        """Unordered {x, -x} pairs with x != -x, ascending by smaller member."""
        invs = set(self.involutions)
        pairs = []
        seen = set()
        for x in range(self.order):
            if x in invs or x in seen:
                continue
            y = self.neg(x)
            seen.add(y)
            pairs.append((x, y))
        return tuple(pairs)


_GROUP_TOKEN = re.compile(r"^[Zz](\d+)(?:\^(\d+))?$")


def parse_group(text: str, max_order: int = DEFAULT_ORDER_CAP) -> GroupSpec:
    """Parse a group literal such as "Z9", "Z3xZ3", or "Z5^2".

    Arbitrary products of cyclic groups are accepted and normalized to the
    invariant-factor chain ("Z2xZ3" becomes "Z6").
    """
    cleaned = text.strip().replace(" ", "")
    if not cleaned:
        raise ParameterError("parse_group: empty group literal")
    orders: list[int] = []
    for token in re.split(r"[x*]", cleaned, flags=re.IGNORECASE):
        m = _GROUP_TOKEN.match(token)
        if not m:
            raise ParameterError(f"parse_group: cannot parse group literal {text!r}")
        base = int(m.group(1))
        power = int(m.group(2)) if m.group(2) else 1
        if base < 2:
            raise ParameterError(f"parse_group: cyclic order must be >= 2 in {text!r}")
        if power < 1:
            raise ParameterError(f"parse_group: exponent must be >= 1 in {text!r}")
        orders.extend([base] * power)
    return GroupSpec(invariant_factors(orders), max_order=max_order)


def feasible_divisors(g: GroupSpec, m: int) -> list[int]:
    """Divisors d of |G| admitting d = d_1*...*d_r with d_i | n_i and d*n_r >= d_r*m.

    Feasibility is decided exactly: a product DP over the first r-1 factors
    finds, for each d, the largest cofactor producible there, which makes the
    last-coordinate part d_r minimal (the constraint only tightens as d_r
    grows).
    """
    n = g.order
    if not 1 <= m <= n:
        raise ParameterError(f"feasible_divisors: m={m} out of range 1..{n}")
    nr = g.factors[-1]
    prefix_products = {1}
    for f in g.factors[:-1]:
        prefix_products = {s * t for s in prefix_products for t in divisors(f)}
    out = []
    for d in divisors(n):
        feasible = False
        for e in prefix_products:
            if d % e:
                continue
            dr = d // e
            if nr % dr == 0 and d * nr >= dr * m:
                feasible = True
                break
        if feasible:
            out.append(d)
    return out


def _partitions(k: int) -> Iterator[tuple[int, ...]]:
    """Partitions of k into nonincreasing positive parts."""
    if k == 0:
        yield ()
        return

    def rec(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for part in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - part, part):
                yield (part, *rest)

    yield from rec(k, k)


def abelian_group_specs(n: int, max_order: int = DEFAULT_ORDER_CAP) -> list[GroupSpec]:
    """Every abelian group of order n, one GroupSpec per isomorphism type."""
    if n < 2:
        raise ParameterError(f"abelian_group_specs: n must be >= 2, got {n}")
    per_prime = []
    for p, e in sorted(prime_factorization(n).items()):
        per_prime.append([(p, part) for part in _partitions(e)])
    specs = []
    for combo in _cartesian(*per_prime):
        orders: list[int] = []
        for p, part in combo:
            orders.extend(p**e for e in part)
        specs.append(GroupSpec(invariant_factors(orders), max_order=max_order))
    specs.sort(key=lambda s: s.factors)
    return specs


@dataclass(frozen=True)
class ElementSet:
    """A subset of a group of the given order, as a bit mask over packed indices."""

    order: int
    mask: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ParameterError(f"ElementSet: order must be >= 1, got {self.order}")
        if self.mask < 0 or self.mask >> self.order:
            raise ParameterError("ElementSet: mask has bits outside [0, order)")

    @classmethod
    def from_indices(cls, order: int, indices: Iterable[int]) -> "ElementSet":
        mask = 0
        for i in indices:
            if not 0 <= i < order:
                raise ParameterError(f"ElementSet: index {i} out of range 0..{order - 1}")
            mask |= 1 << i
        return cls(order, mask)

    @cached_property
    def card(self) -> int:
        return self.mask.bit_count()

    def indices(self) -> tuple[int, ...]:
        out = []
        mask = self.mask
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    def __len__(self) -> int:
        return self.card

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.order and (self.mask >> i) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())
