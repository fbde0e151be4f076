"""h-fold sumsets and h-fold signed sumsets of element sets.

The h-fold sumset hA collects sums of h elements of A with repetition.  The
h-fold signed sumset collects every sum(l_i * a_i) over integer coefficient
vectors with sum |l_i| = h, where each element of A carries exactly one
coefficient; in particular a - a for the same element is NOT admissible, which
is why the signed sumset is not the union of mixed sumsets of A and -A.
"""

from __future__ import annotations

from enum import Enum

from .groups import ElementSet, EmptySetError, GroupSpec, ParameterError


class SymmetryClass(Enum):
    SYMMETRIC = "sym"
    NEAR_SYMMETRIC = "nsym"
    ASYMMETRIC = "asym"
    NONE = "none"


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# --- mask-level kernels ---------------------------------------------------


def pairwise_sumset_mask(g: GroupSpec, amask: int, bmask: int) -> int:
    shift = g._shifter
    out = 0
    for a in _iter_bits(amask):
        out |= shift(bmask, a)
    return out


def sumset_mask(g: GroupSpec, amask: int, h: int) -> int:
    if h < 0:
        raise ParameterError(f"sumset: h must be >= 0, got {h}")
    if h == 0:
        return 1
    if amask == 0:
        raise EmptySetError("sumset: empty set with h >= 1")
    acc = amask
    for _ in range(h - 1):
        acc = pairwise_sumset_mask(g, amask, acc)
    return acc


def signed_sumset_mask(g: GroupSpec, amask: int, h: int) -> int:
    """Per-element weight table: rows[w] holds the values reachable with total
    coefficient weight w using the elements processed so far."""
    if h < 0:
        raise ParameterError(f"signed sumset: h must be >= 0, got {h}")
    if h == 0:
        return 1
    if amask == 0:
        raise EmptySetError("signed sumset: empty set with h >= 1")
    shift = g._shifter
    neg = g.neg
    scale = g.scale
    rows = [0] * (h + 1)
    rows[0] = 1
    for a in _iter_bits(amask):
        scaled = [scale(u, a) for u in range(h + 1)]
        negated = [neg(x) for x in scaled]
        new = rows[:]
        for w in range(h):
            src = rows[w]
            if not src:
                continue
            for u in range(1, h - w + 1):
                x = scaled[u]
                nx = negated[u]
                shifted = shift(src, x)
                if nx != x:
                    shifted |= shift(src, nx)
                new[w + u] |= shifted
        rows = new
    return rows[h]


def signed_sumset_mask_h2(g: GroupSpec, amask: int) -> int:
    """Closed form for h = 2: (A+A) u -(A+A) u (differences of distinct elements).

    A+A covers doubled elements (coefficient 2) and distinct-pair sums; its
    negation covers the all-negative coefficient vectors; mixed-sign vectors
    are exactly differences of two distinct elements, so 0 is excluded from
    the difference part.  Must agree with signed_sumset_mask for every input.
    """
    if amask == 0:
        raise EmptySetError("signed sumset: empty set with h >= 1")
    shift = g._shifter
    neg = g.neg
    plus = 0
    diff = 0
    for a in _iter_bits(amask):
        plus |= shift(amask, a)
        diff |= shift(amask, neg(a))
    diff &= ~1
    return plus | g.neg_mask(plus) | diff


# --- public set-level operations -------------------------------------------


def _check_set(g: GroupSpec, a: ElementSet) -> None:
    if a.order != g.order:
        raise ParameterError(
            f"element set has order {a.order}, group has order {g.order}"
        )


def pairwise_sumset(g: GroupSpec, a: ElementSet, b: ElementSet) -> ElementSet:
    """A + B = {x + y : x in A, y in B}."""
    _check_set(g, a)
    _check_set(g, b)
    return ElementSet(g.order, pairwise_sumset_mask(g, a.mask, b.mask))


def h_fold_sumset(g: GroupSpec, a: ElementSet, h: int) -> ElementSet:
    """hA, with 0A = {0}."""
    _check_set(g, a)
    return ElementSet(g.order, sumset_mask(g, a.mask, h))


def h_fold_signed_sumset(g: GroupSpec, a: ElementSet, h: int) -> ElementSet:
    """The h-fold signed sumset of A, with the zero-fold case {0}."""
    _check_set(g, a)
    return ElementSet(g.order, signed_sumset_mask(g, a.mask, h))


# --- symmetry classification ------------------------------------------------


def classify_symmetry_mask(g: GroupSpec, mask: int) -> SymmetryClass:
    if mask == 0:
        raise ParameterError("classify_symmetry: empty set")
    m = mask.bit_count()
    paired = (mask & g.neg_mask(mask)).bit_count()
    if paired == m:
        return SymmetryClass.SYMMETRIC
    if paired == m - 1:
        return SymmetryClass.NEAR_SYMMETRIC
    if paired == 0:
        return SymmetryClass.ASYMMETRIC
    return SymmetryClass.NONE


def classify_symmetry(g: GroupSpec, a: ElementSet) -> SymmetryClass:
    """Symmetric (A = -A), near-symmetric (one deletion away from symmetric),
    asymmetric (A disjoint from -A), or none of the three.

    The classes are mutually exclusive for |A| >= 2; a non-involution
    singleton meets both the near-symmetric and asymmetric definitions and is
    tagged near-symmetric (the definitions are tested in that order).
    """
    _check_set(g, a)
    return classify_symmetry_mask(g, a.mask)


def is_symmetric_mask(g: GroupSpec, mask: int) -> bool:
    return mask == g.neg_mask(mask)


def is_near_symmetric_mask(g: GroupSpec, mask: int) -> bool:
    """Definitional form: not symmetric, but some single removal leaves a
    symmetric set.  Kept independent of classify_symmetry for cross-checks."""
    if is_symmetric_mask(g, mask):
        return False
    for b in _iter_bits(mask):
        rest = mask ^ (1 << b)
        if rest == g.neg_mask(rest):
            return True
    return False


def is_asymmetric_mask(g: GroupSpec, mask: int) -> bool:
    return mask & g.neg_mask(mask) == 0


def in_minimizer_family(g: GroupSpec, a: ElementSet) -> bool:
    """True iff A is symmetric, near-symmetric, or asymmetric; the minimum
    signed sumset size over all m-sets is attained inside this family."""
    _check_set(g, a)
    return classify_symmetry_mask(g, a.mask) is not SymmetryClass.NONE
