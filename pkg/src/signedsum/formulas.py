"""Closed-form quantities for minimum sumset and signed-sumset sizes.

Central objects:

* divisor_term(d, m, h) = (h*ceil(m/d) - h + 1) * d, the size of the h-fold
  sumset of an m-set arranged as an arithmetic progression of d-element
  subgroup cosets.
* min_sumset_size(n, m, h): the minimum of divisor_term over all divisors of
  n.  This equals the minimum h-fold sumset size over m-subsets of every
  abelian group of order n.
* signed_size_bound(g, m, h): the same minimum restricted to the feasible
  divisor set of the group; an upper bound for the minimum h-fold signed
  sumset size, conjectured exact away from one h = 2 exception.

For elementary abelian groups the minimizing divisors are characterized by
the base-p digits of m - 1; the digit profile below carries the three special
indices that drive those characterizations.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .groups import GroupSpec, ParameterError, divisors, feasible_divisors, is_prime

_INT64_MAX = (1 << 63) - 1


def divisor_term(d: int, m: int, h: int) -> int:
    """(h * ceil(m/d) - h + 1) * d, overflow-checked against 64-bit range.

    Note divisor_term(1, m, h) = h*m - h + 1 and divisor_term(d, 1, h) = d.
    """
    if d < 1 or m < 1 or h < 1:
        raise ParameterError(f"divisor_term: need d, m, h >= 1, got ({d}, {m}, {h})")
    if max(d, m, h) > _INT64_MAX:
        raise OverflowError(f"divisor_term: input exceeds 64-bit range")
    value = (h * -(-m // d) - h + 1) * d
    if value > _INT64_MAX:
        raise OverflowError(
            f"divisor_term({d}, {m}, {h}) = {value} exceeds 64-bit range"
        )
    return value


def _check_m_h(n: int, m: int, h: int) -> None:
    if h < 0:
        raise ParameterError(f"fold h must be >= 0, got {h}")
    if not 1 <= m <= n:
        raise ParameterError(f"set size m={m} out of range 1..{n}")


def min_sumset_size(n: int, m: int, h: int) -> int:
    """min over d | n of divisor_term(d, m, h); the exact minimum size of an
    h-fold sumset of an m-subset in any abelian group of order n."""
    _check_m_h(n, m, h)
    if h == 0 or m == 1:
        return 1
    if h == 1:
        return m
    return min(divisor_term(d, m, h) for d in divisors(n))


def min_sumset_minimizers(n: int, m: int, h: int) -> list[int]:
    """Divisors of n achieving min_sumset_size, ascending (h >= 1)."""
    _check_m_h(n, m, h)
    if h < 1:
        raise ParameterError("min_sumset_minimizers: needs h >= 1")
    terms = [(divisor_term(d, m, h), d) for d in divisors(n)]
    best = min(v for v, _ in terms)
    return [d for v, d in terms if v == best]


def signed_size_bound(g: GroupSpec, m: int, h: int) -> int:
    """min of divisor_term over the feasible divisor set of the group; an
    upper bound for the minimum signed sumset size, never below
    min_sumset_size of the same order."""
    _check_m_h(g.order, m, h)
    if h == 0 or m == 1:
        return 1
    if h == 1:
        return m
    return min(divisor_term(d, m, h) for d in feasible_divisors(g, m))


def signed_size_bound_minimizers(g: GroupSpec, m: int, h: int) -> list[int]:
    _check_m_h(g.order, m, h)
    if h < 1:
        raise ParameterError("signed_size_bound_minimizers: needs h >= 1")
    terms = [(divisor_term(d, m, h), d) for d in feasible_divisors(g, m)]
    best = min(v for v, _ in terms)
    return [d for v, d in terms if v == best]


# --- digit machinery for elementary abelian groups --------------------------


def _check_odd_prime(p: int) -> None:
    if not is_prime(p) or p == 2:
        raise ParameterError(f"p must be an odd prime, got {p}")


@dataclass(frozen=True)
class DigitProfile:
    """Base-p digits of m - 1 and the three indices that locate minimizers.

    digits is most-significant first, length r, each in [0, p-1].  top is the
    largest index i with digit q_i >= 1 (-1 when m = 1); heavy is the largest
    i with h*q_i >= p (-1 when none); chain is the last index of the maximal
    run q_{heavy+1} = ... = q_chain = (p-1)/h, or heavy when the run is
    empty.  Always r-1 >= top >= chain >= heavy >= -1.
    """

    p: int
    r: int
    m: int
    h: int
    digits: tuple[int, ...]
    top: int
    heavy: int
    chain: int

    def digit(self, i: int) -> int:
        """q_i, the coefficient of p**i."""
        return self.digits[self.r - 1 - i]


def digit_profile(p: int, r: int, m: int, h: int) -> DigitProfile:
    _check_odd_prime(p)
    if r < 1:
        raise ParameterError(f"digit_profile: rank r must be >= 1, got {r}")
    if h < 2:
        raise ParameterError(f"digit_profile: fold h must be >= 2, got {h}")
    if not 1 <= m <= p**r:
        raise ParameterError(f"digit_profile: m={m} out of range 1..{p**r}")
    qs = []
    rem = m - 1
    for _ in range(r):
        qs.append(rem % p)
        rem //= p
    top = max((i for i, q in enumerate(qs) if q >= 1), default=-1)
    heavy = max((i for i, q in enumerate(qs) if h * q >= p), default=-1)
    i = heavy + 1
    while i < r and h * qs[i] == p - 1:
        i += 1
    chain = i - 1 if i - 1 > heavy else heavy
    profile = DigitProfile(
        p=p, r=r, m=m, h=h, digits=tuple(reversed(qs)),
        top=top, heavy=heavy, chain=chain,
    )
    assert r - 1 >= profile.top >= profile.chain >= profile.heavy >= -1
    return profile


def sumset_minimizer_exponents(profile: DigitProfile) -> set[int]:
    """Exponents i for which divisor_term(p**i, m, h) attains
    min_sumset_size(p**r, m, h): exactly heavy+1 <= i <= chain+1."""
    return set(range(profile.heavy + 1, profile.chain + 2))


def signed_bound_minimizer_exponents(profile: DigitProfile) -> set[int]:
    """Exponents i with divisor_term(p**i, m, h) attaining the signed size
    bound on Z_p^r, for m >= 2: driven by h times the top digit."""
    if profile.m < 2:
        raise ParameterError("signed_bound_minimizer_exponents: needs m >= 2")
    v = profile.h * profile.digit(profile.top)
    if v >= profile.p:
        return {profile.top + 1}
    if v == profile.p - 1:
        return {profile.top, profile.top + 1}
    return {profile.top}


def bounds_coincide(profile: DigitProfile) -> bool:
    """Whether the signed size bound on Z_p^r equals the unrestricted minimum
    sumset size: exactly when top == chain or top == chain + 1."""
    return profile.top == profile.chain or profile.top == profile.chain + 1


# --- the (k, c, delta) threshold profile -------------------------------------


@dataclass(frozen=True)
class ScaleProfile:
    """Largest prime-power scale applicable to hm - h + 1.

    delta is 0 when h divides p - 1, else 1; k is maximal with
    p**k + delta <= h*m - h + 1; c is maximal with
    (h*c + 1) * p**k + delta <= h*m - h + 1.  Always 0 <= c <= p - 1.
    """

    p: int
    h: int
    m: int
    delta: int
    k: int
    c: int


def scale_profile(p: int, h: int, m: int) -> ScaleProfile:
    _check_odd_prime(p)
    if not 2 <= h <= p - 1:
        raise ParameterError(f"scale_profile: h={h} outside 2..{p - 1}")
    if m < 2:
        raise ParameterError(f"scale_profile: m must be >= 2, got {m}")
    delta = 0 if (p - 1) % h == 0 else 1
    target = h * m - h + 1
    k = 0
    while p ** (k + 1) + delta <= target:
        k += 1
    c = ((target - delta) // p**k - 1) // h
    assert 0 <= c <= p - 1
    return ScaleProfile(p=p, h=h, m=m, delta=delta, k=k, c=c)


class EqualityCertificate(Enum):
    """Why the signed and plain minima provably coincide on Z_p^r, if known."""

    SMALL_PRIME = "thm6"   # p <= h
    SCALE_BOUND = "thm7"   # 2 <= h <= p-1 and m <= (c+1) * p**k
    UNKNOWN = "none"


def equality_certificate(g: GroupSpec, m: int, h: int) -> EqualityCertificate:
    """Certificate that the minimum signed sumset size equals the plain one on
    an elementary abelian group; UNKNOWN means no certificate (conjectured
    strict inequality for m >= 2)."""
    p = g.elementary_prime
    if p is None or g.rank < 2 or p == 2:
        raise ParameterError(
            "equality_certificate: group must be elementary abelian, odd p, rank >= 2"
        )
    if h < 2:
        raise ParameterError(f"equality_certificate: fold h must be >= 2, got {h}")
    if not 1 <= m <= g.order:
        raise ParameterError(f"equality_certificate: m={m} out of range 1..{g.order}")
    if p <= h:
        return EqualityCertificate.SMALL_PRIME
    if m == 1:
        # both minima are trivially 1; the scale profile needs m >= 2
        return EqualityCertificate.UNKNOWN
    prof = scale_profile(p, h, m)
    if m <= (prof.c + 1) * prof.p**prof.k:
        return EqualityCertificate.SCALE_BOUND
    return EqualityCertificate.UNKNOWN


# --- rank-2, h = 2 classification and conjectured exact values ---------------


def rank2_equality(p: int, m: int) -> bool:
    """Whether the minimum signed sumset size equals the plain minimum on
    Z_p x Z_p at h = 2.

    Two equivalent forms are evaluated and must agree: the union of the three
    explicit ranges, and the complement form (false exactly when m = q*p + v
    with 1 <= q <= (p-1)/2 and 1 <= v <= (p-1)/2).
    """
    _check_odd_prime(p)
    if not 1 <= m <= p * p:
        raise ParameterError(f"rank2_equality: m={m} out of range 1..{p * p}")
    by_ranges = (
        m <= p
        or m >= (p * p + 1) // 2
        or any(
            c * p + (p + 1) // 2 <= m <= (c + 1) * p
            for c in range(1, (p - 1) // 2 + 1)
        )
    )
    q, v = divmod(m, p)
    by_complement = not (1 <= q <= (p - 1) // 2 and 1 <= v <= (p - 1) // 2)
    if by_ranges != by_complement:
        raise AssertionError(
            f"rank2_equality({p}, {m}): range form {by_ranges} != "
            f"complement form {by_complement}"
        )
    return by_ranges


def conjectured_signed_size(g: GroupSpec, m: int, h: int) -> int:
    """Conjectured exact minimum signed sumset size.

    For h >= 3 this is the signed size bound itself.  For h = 2, when some
    odd divisor of |G| exceeds 2m, an asymmetric m-set inside the subgroup of
    the smallest such order d_m omits 0 from its signed sumset, giving
    min(bound, d_m - 1).  An odd divisor can never equal the even number 2m,
    so the strict comparison covers all cases.
    """
    _check_m_h(g.order, m, h)
    if h == 0 or m == 1:
        return 1
    if h == 1:
        return m
    bound = signed_size_bound(g, m, h)
    if h >= 3:
        return bound
    odd_above = [d for d in divisors(g.order) if d % 2 == 1 and d > 2 * m]
    if odd_above:
        return min(bound, odd_above[0] - 1)
    return bound


def conjectured_rank2_size(p: int, m: int) -> int:
    """Conjectured table of minimum signed sumset sizes on Z_p x Z_p at h = 2,
    by rows of m = c*p + v with 0 <= c <= p-1 and 1 <= v <= p."""
    _check_odd_prime(p)
    if not 1 <= m <= p * p:
        raise ParameterError(f"conjectured_rank2_size: m={m} out of range 1..{p * p}")
    c, v = divmod(m - 1, p)
    v += 1
    half_low = (p - 1) // 2
    if c == 0:
        return 2 * m - 1 if v <= half_low else p
    if c <= (p - 3) // 2:
        return (2 * c + 1) * p
    if c == half_low:
        return p * p - 1 if v <= half_low else p * p
    return p * p
