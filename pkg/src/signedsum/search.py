"""Exhaustive-search oracles for minimum sumset and signed-sumset sizes.

The plain-sumset oracle enumerates only m-sets containing the identity, which
is valid because sumset size is translation invariant.  The signed oracle
enumerates the minimizer family (symmetric, near-symmetric, and asymmetric
sets), which attains the true minimum; an all-sets mode exists for
cross-validation on tiny groups.

Every enumeration first computes a closed-form cardinality estimate and
refuses to run above the configured budget of set evaluations: the oracles
never silently approximate.  Witness ties are broken by the smallest packed
bit mask, so reruns and sharded runs agree bit for bit.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Iterator

from .groups import (
    ElementSet,
    GroupSpec,
    ParameterError,
    divisors,
)
from .sumsets import (
    SymmetryClass,
    classify_symmetry_mask,
    signed_sumset_mask,
    signed_sumset_mask_h2,
    sumset_mask,
)

DEFAULT_BUDGET = 10**9
BUDGET_ENV = "SIGNEDSUM_BUDGET"


class BudgetExceededError(RuntimeError):
    """The search-space estimate exceeds the evaluation budget."""


class InfeasibleFamilyError(ParameterError):
    """The requested family contains no set of the requested size."""


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ParameterError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ParameterError(f"{BUDGET_ENV} must be positive, got {value}")
    return value


class Family(Enum):
    """Search families; values are the wire/CLI tokens."""

    ALL = "all"
    ZERO_ANCHORED = "zero"
    SYM = "sym"
    NSYM = "nsym"
    ASYM = "asym"
    MINIMIZER = "afamily"


@dataclass(frozen=True)
class SearchSpace:
    group: GroupSpec
    m: int
    family: Family
    involutions: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...]


def make_search_space(g: GroupSpec, m: int, family: Family) -> SearchSpace:
    if not 1 <= m <= g.order:
        raise ParameterError(f"search space: m={m} out of range 1..{g.order}")
    involutions = g.involutions
    pairs = g.inverse_pairs
    assert len(involutions) + 2 * len(pairs) == g.order
    return SearchSpace(group=g, m=m, family=family, involutions=involutions, pairs=pairs)


def _sym_count(space: SearchSpace, m: int, reduced: bool = False) -> int:
    total = 0
    n_inv, n_pairs = len(space.involutions), len(space.pairs)
    for k in range(min(n_inv, m) + 1):
        if (m - k) % 2:
            continue
        j = (m - k) // 2
        if j > n_pairs:
            continue
        if reduced and j >= 1:
            total += comb(n_inv, k) * comb(n_pairs - 1, j - 1)
        else:
            total += comb(n_inv, k) * comb(n_pairs, j)
    return total


def family_cardinality(space: SearchSpace, reduced: bool = False) -> int:
    """Number of sets the enumeration will evaluate (an upper estimate for the
    near-symmetric stream, exact for the others)."""
    n, m = space.group.order, space.m
    n_pairs = len(space.pairs)
    if space.family is Family.ALL:
        return comb(n, m)
    if space.family is Family.ZERO_ANCHORED:
        return comb(n - 1, m - 1)
    if space.family is Family.SYM:
        return _sym_count(space, m, reduced)
    if space.family is Family.NSYM:
        return _sym_count(space, m - 1) * max(n - (m - 1), 0)
    if space.family is Family.ASYM:
        if m > n_pairs:
            return 0
        if reduced:
            return comb(n_pairs - 1, m - 1) * (1 << (m - 1))
        return comb(n_pairs, m) * (1 << m)
    # minimizer family: the three classes are disjoint for m >= 2; for m = 1
    # every asymmetric singleton is already near-symmetric.
    total = _sym_count(space, m, reduced) + _sym_count(space, m - 1) * max(n - (m - 1), 0)
    if m >= 2:
        sub = SearchSpace(space.group, m, Family.ASYM, space.involutions, space.pairs)
        total += family_cardinality(sub, reduced)
    return total


# --- mask enumerators -------------------------------------------------------


def _iter_sym_masks(space: SearchSpace, m: int, reduced: bool = False) -> Iterator[int]:
    invs, pairs = space.involutions, space.pairs
    if m == 0:
        yield 0
        return
    pair_masks = [(1 << lo) | (1 << hi) for lo, hi in pairs]
    for k in range(min(len(invs), m) + 1):
        if (m - k) % 2:
            continue
        j = (m - k) // 2
        if j > len(pairs):
            continue
        if reduced and j >= 1:
            pair_choices = (
                (0, *rest) for rest in combinations(range(1, len(pairs)), j - 1)
            )
        else:
            pair_choices = combinations(range(len(pairs)), j)
        inv_choices = list(combinations(invs, k))
        for pins in pair_choices:
            pmask = 0
            for i in pins:
                pmask |= pair_masks[i]
            for ichoice in inv_choices:
                imask = 0
                for x in ichoice:
                    imask |= 1 << x
                yield pmask | imask


def _iter_nsym_masks(space: SearchSpace, m: int) -> Iterator[int]:
    # A near-symmetric set decomposes uniquely as (symmetric core, unpaired
    # breaker), so yielding core+breaker combinations produces no duplicates.
    g = space.group
    inv_set = set(space.involutions)
    neg = [g.neg(x) for x in range(g.order)]
    for core in _iter_sym_masks(space, m - 1):
        for x in range(g.order):
            if x in inv_set:
                continue
            if (core >> x) & 1 or (core >> neg[x]) & 1:
                continue
            yield core | (1 << x)


def _iter_asym_masks(space: SearchSpace, m: int, reduced: bool = False) -> Iterator[int]:
    pairs = space.pairs
    if m > len(pairs) or m == 0:
        return
    lo_masks = [1 << lo for lo, _ in pairs]
    hi_masks = [1 << hi for _, hi in pairs]
    if reduced:
        combos = ((0, *rest) for rest in combinations(range(1, len(pairs)), m - 1))
        fixed_first = True
    else:
        combos = combinations(range(len(pairs)), m)
        fixed_first = False
    for chosen in combos:
        orient_bits = m - 1 if fixed_first else m
        for orient in range(1 << orient_bits):
            mask = 0
            if fixed_first:
                mask = lo_masks[chosen[0]]
                rest = chosen[1:]
            else:
                rest = chosen
            for bit, idx in enumerate(rest):
                mask |= hi_masks[idx] if (orient >> bit) & 1 else lo_masks[idx]
            yield mask


def _iter_space_masks(space: SearchSpace, reduced: bool = False) -> Iterator[int]:
    g, m = space.group, space.m
    fam = space.family
    if fam is Family.ALL:
        for ids in combinations(range(g.order), m):
            mask = 0
            for i in ids:
                mask |= 1 << i
            yield mask
    elif fam is Family.ZERO_ANCHORED:
        for ids in combinations(range(1, g.order), m - 1):
            mask = 1
            for i in ids:
                mask |= 1 << i
            yield mask
    elif fam is Family.SYM:
        yield from _iter_sym_masks(space, m, reduced)
    elif fam is Family.NSYM:
        yield from _iter_nsym_masks(space, m)
    elif fam is Family.ASYM:
        yield from _iter_asym_masks(space, m, reduced)
    else:
        yield from _iter_sym_masks(space, m, reduced)
        yield from _iter_nsym_masks(space, m)
        if m >= 2:
            yield from _iter_asym_masks(space, m, reduced)


def enumerate_family(
    space: SearchSpace, shard_index: int = 0, shard_count: int = 1
) -> Iterator[ElementSet]:
    """Each m-set of the family exactly once, in a deterministic order.

    Sharding partitions the stream by enumeration position; the shards are
    disjoint and their union is the whole family.
    """
    if shard_count < 1 or not 0 <= shard_index < shard_count:
        raise ParameterError(f"bad shard {shard_index}/{shard_count}")
    n = space.group.order
    for pos, mask in enumerate(_iter_space_masks(space)):
        if pos % shard_count == shard_index:
            yield ElementSet(n, mask)


# --- oracles -----------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: ElementSet
    witness_family: str
    enumerated: int


def _check_budget(estimate: int, budget: int | None) -> None:
    limit = default_budget() if budget is None else budget
    if estimate > limit:
        raise BudgetExceededError(
            f"search-space estimate {estimate} exceeds budget {limit}"
        )


def min_sumset_oracle(
    g: GroupSpec,
    m: int,
    h: int,
    *,
    budget: int | None = None,
    shard_index: int = 0,
    shard_count: int = 1,
) -> OracleResult:
    """Exact minimum h-fold sumset size over m-subsets, by exhausting the
    sets that contain the identity (sumset size is translation invariant)."""
    if h < 0:
        raise ParameterError(f"min_sumset_oracle: h must be >= 0, got {h}")
    space = make_search_space(g, m, Family.ZERO_ANCHORED)
    _check_budget(family_cardinality(space), budget)
    best_val: int | None = None
    best_mask = 0
    count = 0
    for pos, mask in enumerate(_iter_space_masks(space)):
        if pos % shard_count != shard_index:
            continue
        count += 1
        val = sumset_mask(g, mask, h).bit_count()
        if best_val is None or val < best_val or (val == best_val and mask < best_mask):
            best_val, best_mask = val, mask
    if best_val is None:
        raise InfeasibleFamilyError(f"no {m}-sets to enumerate in shard")
    return OracleResult(
        value=best_val,
        witness=ElementSet(g.order, best_mask),
        witness_family=Family.ZERO_ANCHORED.value,
        enumerated=count,
    )


def signed_value_mask(g: GroupSpec, mask: int, h: int) -> int:
    """|h-fold signed sumset| of the mask; h = 2 uses the closed-form kernel."""
    if h == 2:
        return signed_sumset_mask_h2(g, mask).bit_count()
    return signed_sumset_mask(g, mask, h).bit_count()


def min_signed_oracle(
    g: GroupSpec,
    m: int,
    h: int,
    *,
    family: Family = Family.MINIMIZER,
    budget: int | None = None,
    use_orbit_reduction: bool = False,
    shard_index: int = 0,
    shard_count: int = 1,
) -> OracleResult:
    """Exact minimum h-fold signed sumset size over the requested family.

    The default minimizer family attains the true minimum over all m-sets.
    With use_orbit_reduction (elementary abelian groups with odd p only) the
    symmetric and asymmetric streams fix the first chosen inverse pair to a
    canonical representative; values match the unreduced oracle, witnesses are
    lexicographic minima of the reduced stream only.
    """
    if h < 0:
        raise ParameterError(f"min_signed_oracle: h must be >= 0, got {h}")
    if family in (Family.ZERO_ANCHORED,):
        raise ParameterError("signed sumsets are not translation invariant")
    space = make_search_space(g, m, family)
    if family is Family.ASYM and m > len(space.pairs):
        raise InfeasibleFamilyError(
            f"no asymmetric {m}-sets: only {len(space.pairs)} inverse pairs"
        )
    reduced = use_orbit_reduction
    if reduced:
        p = g.elementary_prime
        if p is None or p == 2:
            reduced = False
    _check_budget(family_cardinality(space, reduced), budget)
    best_val: int | None = None
    best_mask = 0
    count = 0
    for pos, mask in enumerate(_iter_space_masks(space, reduced)):
        if pos % shard_count != shard_index:
            continue
        count += 1
        val = signed_value_mask(g, mask, h)
        if best_val is None or val < best_val or (val == best_val and mask < best_mask):
            best_val, best_mask = val, mask
    if best_val is None:
        raise InfeasibleFamilyError(
            f"family {family.value} has no {m}-sets in this group"
        )
    return OracleResult(
        value=best_val,
        witness=ElementSet(g.order, best_mask),
        witness_family=classify_symmetry_mask(g, best_mask).value,
        enumerated=count,
    )


# --- randomized upper-bound probe --------------------------------------------


def _subgroup_divisor_shapes(g: GroupSpec) -> Iterator[tuple[int, ...]]:
    per_factor = [divisors(f) for f in g.factors]

    def rec(i: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if i == len(per_factor):
            yield prefix
            return
        for d in per_factor[i]:
            yield from rec(i + 1, prefix + (d,))

    yield from rec(0, ())


def _subgroup_indices(g: GroupSpec, shape: tuple[int, ...]) -> list[int]:
    from itertools import product as _cartesian

    ranges = []
    for f, d in zip(g.factors, shape):
        step = f // d
        ranges.append([j * step for j in range(d)])
    return sorted(g.index_of(c) for c in _cartesian(*ranges))


def _symmetric_subset_mask(g: GroupSpec, elements: list[int], m: int) -> int | None:
    """Greedy symmetric m-subset of a subgroup's element list, or None."""
    if m > len(elements):
        return None
    inv = [x for x in elements if g.neg(x) == x]
    elem_set = set(elements)
    pairs = []
    seen: set[int] = set()
    for x in elements:
        if g.neg(x) == x or x in seen:
            continue
        y = g.neg(x)
        assert y in elem_set
        seen.add(y)
        pairs.append((x, y))
    use_pairs = min(len(pairs), m // 2)
    k = m - 2 * use_pairs
    if k > len(inv):
        return None
    mask = 0
    for x in inv[:k]:
        mask |= 1 << x
    for lo, hi in pairs[:use_pairs]:
        mask |= (1 << lo) | (1 << hi)
    return mask


def _asymmetric_subset_mask(g: GroupSpec, elements: list[int], m: int) -> int | None:
    seen: set[int] = set()
    mask = 0
    taken = 0
    for x in elements:
        if taken == m:
            break
        if g.neg(x) == x or x in seen:
            continue
        seen.add(g.neg(x))
        mask |= 1 << x
        taken += 1
    return mask if taken == m else None


def _coset_progression_mask(
    g: GroupSpec,
    sub: list[int],
    sub_order_last: int,
    m: int,
    odd_spacing: bool,
) -> int | None:
    """Symmetric or near-symmetric union of subgroup-coset blocks along the
    last-coordinate direction, with mirrored partial blocks at the ends."""
    d = len(sub)
    # blocks advance along packed index 1, the (0, ..., 0, 1) direction
    L = g.factors[-1] // sub_order_last
    if L <= 1:
        return None
    blocks = -(-m // d)
    if blocks < 2:
        return None
    if odd_spacing:
        if blocks % 2:
            return None
        n_pos_pairs = blocks // 2
        positions = [2 * t - 1 for t in range(1, n_pos_pairs + 1)]
        if 2 * positions[-1] + 1 > L:
            return None
        remaining = m
        mask = 0
        for pos in positions[:-1]:
            mask |= _place_block(g, sub, pos, d)
            mask |= _place_block(g, sub, -pos, d, mirror=True)
            remaining -= 2 * d
        outer = positions[-1]
        half, extra = divmod(remaining, 2)
        mask |= _place_block(g, sub, outer, half + extra)
        mask |= _place_block(g, sub, -outer, half, mirror=True)
        return mask if mask.bit_count() == m else None
    # contiguous centered placement
    full = m // d
    if full % 2 == 1:
        t = full // 2
        if 2 * (t + 1) + 1 > L:
            return None
        mask = 0
        for pos in range(-t, t + 1):
            mask |= _place_block(g, sub, pos, d, mirror=pos < 0)
        rem = m - full * d
        half, extra = divmod(rem, 2)
        mask |= _place_block(g, sub, t + 1, half + extra)
        mask |= _place_block(g, sub, -(t + 1), half, mirror=True)
    else:
        t = (full - 2) // 2 if full >= 2 else -1
        if 2 * (t + 1) + 1 > L:
            return None
        mask = 0
        for pos in range(-t, t + 1):
            mask |= _place_block(g, sub, pos, d, mirror=pos < 0)
        rem = m - max(full - 1, 0) * d
        half, extra = divmod(rem, 2)
        mask |= _place_block(g, sub, t + 1, half + extra)
        mask |= _place_block(g, sub, -(t + 1), half, mirror=True)
    return mask if mask.bit_count() == m else None


def _place_block(
    g: GroupSpec, sub: list[int], position: int, count: int, mirror: bool = False
) -> int:
    if count <= 0:
        return 0
    shift = g.scale(position, 1)
    chosen = sub[:count]
    if mirror:
        chosen = [g.neg(x) for x in chosen]
    mask = 0
    for x in chosen:
        mask |= 1 << g.add(shift, x)
    return mask


def _structured_candidates(g: GroupSpec, m: int) -> list[int]:
    """Deterministic family members built from the subgroup lattice: symmetric
    subsets of subgroups, asymmetric subsets of subgroups, and mirrored
    coset progressions.  All are valid upper-bound witnesses."""
    out = []
    for shape in _subgroup_divisor_shapes(g):
        sub = _subgroup_indices(g, shape)
        sym = _symmetric_subset_mask(g, sub, m)
        if sym is not None:
            out.append(sym)
        asym = _asymmetric_subset_mask(g, sub, m)
        if asym is not None:
            out.append(asym)
        for odd_spacing in (False, True):
            ap = _coset_progression_mask(g, sub, shape[-1], m, odd_spacing)
            if ap is not None:
                out.append(ap)
    return [
        mask
        for mask in out
        if mask.bit_count() == m
        and classify_symmetry_mask(g, mask) is not SymmetryClass.NONE
    ]


def sample_upper_bound(g: GroupSpec, m: int, h: int, trials: int, seed: int) -> int:
    """Minimum signed sumset size over sampled members of the minimizer
    family: a deterministic pool of structured candidates plus `trials`
    seeded random draws.  Strictly an upper bound for the true minimum;
    reproducible from the seed."""
    if trials < 1:
        raise ParameterError(f"sample_upper_bound: trials must be >= 1, got {trials}")
    if h < 0:
        raise ParameterError(f"sample_upper_bound: h must be >= 0, got {h}")
    if not 1 <= m <= g.order:
        raise ParameterError(f"sample_upper_bound: m={m} out of range 1..{g.order}")
    rng = random.Random(seed)
    invs, pairs = g.involutions, g.inverse_pairs
    best: int | None = None
    for mask in _structured_candidates(g, m):
        val = signed_value_mask(g, mask, h)
        if best is None or val < best:
            best = val

    def sym_mask_random(size: int) -> int | None:
        ks = [
            k
            for k in range(min(len(invs), size) + 1)
            if (size - k) % 2 == 0 and (size - k) // 2 <= len(pairs)
        ]
        if not ks:
            return None
        k = rng.choice(ks)
        mask = 0
        for x in rng.sample(invs, k):
            mask |= 1 << x
        for lo, hi in rng.sample(pairs, (size - k) // 2):
            mask |= (1 << lo) | (1 << hi)
        return mask

    inv_set = set(invs)
    for _ in range(trials):
        families = []
        if sym_mask_random(m) is not None:
            families.append("sym")
        if m <= len(pairs):
            families.append("asym")
        if m >= 1:
            families.append("nsym")
        fam = rng.choice(families)
        mask: int | None = None
        if fam == "sym":
            mask = sym_mask_random(m)
        elif fam == "asym":
            chosen = rng.sample(pairs, m)
            mask = 0
            for lo, hi in chosen:
                mask |= 1 << (hi if rng.getrandbits(1) else lo)
        else:
            core = sym_mask_random(m - 1)
            if core is not None:
                breakers = [
                    x
                    for x in range(g.order)
                    if x not in inv_set
                    and not (core >> x) & 1
                    and not (core >> g.neg(x)) & 1
                ]
                if breakers:
                    mask = core | (1 << rng.choice(breakers))
        if mask is None or mask.bit_count() != m:
            continue
        if classify_symmetry_mask(g, mask) is SymmetryClass.NONE:
            continue
        val = signed_value_mask(g, mask, h)
        if best is None or val < best:
            best = val
    assert best is not None, "symmetric sets of every size exist in any group"
    return best
