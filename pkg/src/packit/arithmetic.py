"""Closed-form feasibility arithmetic for PackIt! grids.

A perfect game on a rows x cols board is forced to use a fixed number of
rectangles: the largest ``k`` whose triangle number ``k(k+1)/2`` still
fits in the board area. The leftover area (the *gap*) equals the number
of turns that must pick the larger of their two allowed areas. Prime
areas longer than the longer board side can only be packed as 1 x p
strips that do not fit, which yields two cheap impossibility arguments:

* small gap: fewer spare expansions than blocked prime areas, and
* large gap: more forced expansions than turns that can absorb them.

Grids caught by neither argument are reported as Open, never as
possible; deciding them in general is an open problem.

There is also a generator for an infinite family of square boards with
gap exactly 1, obtained from integer solutions of t^2 - 8 n^2 = -7.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import GridDims
from .errors import InvalidDimsError, RangeError

SMALL_GAP_IMPOSSIBLE = "SmallGapImpossible"
LARGE_GAP_IMPOSSIBLE = "LargeGapImpossible"
OPEN = "Open"

# Witness set proving deterministic Miller-Rabin for all 64-bit inputs
# (and in fact up to 3.3e24).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Full profile self-checks during Pell generation enumerate primes over
# (side, rect_count]; skip that scan for boards larger than this.
_PROFILE_CHECK_LIMIT = 10**7


@dataclass(frozen=True)
class ArithmeticProfile:
    """Forced-count bookkeeping for one board.

    ``dims`` is normalized so rows <= cols. ``rect_count`` is the forced
    number of rectangles in any perfect game, ``gap`` the forced number
    of expansion turns, ``blocked_primes`` the primes p with
    cols < p <= rect_count (areas packable only as overly long strips),
    and ``successor_prime`` says whether rect_count + 1 is a prime
    exceeding the longer side, which blocks the last turn's expansion
    the same way blocked_primes block theirs. A prime rect_count + 1
    that still fits as a strip (possible on very oblong boards) blocks
    nothing, so it does not set the flag.
    """

    dims: GridDims
    rect_count: int
    gap: int
    blocked_primes: tuple[int, ...]
    successor_prime: bool


@dataclass(frozen=True)
class Verdict:
    """Feasibility classification plus the instantiated inequality."""

    kind: str
    witness: str


@dataclass(frozen=True)
class PellSolution:
    """Member of the gap-one family: n x n board, odd t, t^2 - 8 n^2 = -7."""

    n: int
    t: int
    generation: int


def is_prime(value: int) -> bool:
    """Deterministic Miller-Rabin, exact for everything we ever test."""
    if value < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if value % p == 0:
            return value == p
    d = value - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for witness in _MR_WITNESSES:
        x = pow(witness, d, value)
        if x == 1 or x == value - 1:
            continue
        for _ in range(r - 1):
            x = x * x % value
            if x == value - 1:
                break
        else:
            return False
    return True


def triangle(k: int) -> int:
    """k-th triangle number k(k+1)/2."""
    if k < 0:
        raise RangeError(f"triangle numbers need k >= 0, got {k}")
    return k * (k + 1) // 2


def tau(r: int) -> int:
    """Largest k whose triangle number is at most r.

    Evaluated with integer square roots: triangle(k) <= r is equivalent
    to (2k+1)^2 <= 8r+1, so k = (isqrt(8r+1) - 1) // 2, followed by a
    paranoid +-1 adjustment so no rounding edge can slip through.
    """
    if r < 1:
        raise RangeError(f"tau needs r >= 1, got {r}")
    k = (math.isqrt(8 * r + 1) - 1) // 2
    while triangle(k + 1) <= r:
        k += 1
    while k > 0 and triangle(k) > r:
        k -= 1
    return k


def profile(rows: int, cols: int) -> ArithmeticProfile:
    """Compute the full arithmetic profile of a rows x cols board."""
    if rows < 1 or cols < 1:
        raise InvalidDimsError(f"grid dimensions must be positive, got {rows}x{cols}")
    short, long = sorted((rows, cols))
    area = short * long
    rect_count = tau(area)
    gap = area - triangle(rect_count)
    blocked = tuple(p for p in range(long + 1, rect_count + 1) if is_prime(p))
    return ArithmeticProfile(
        dims=GridDims(short, long),
        rect_count=rect_count,
        gap=gap,
        blocked_primes=blocked,
        successor_prime=rect_count + 1 > long and is_prime(rect_count + 1),
    )


def verdict(rows: int, cols: int) -> Verdict:
    """Classify a board as impossible (two ways) or Open.

    Open deliberately does not claim a perfect game exists; whether every
    Open board is packable is conjectural.
    """
    prof = profile(rows, cols)
    blocked = len(prof.blocked_primes)
    indicator = 1 if prof.successor_prime else 0
    bound = prof.rect_count - blocked - indicator
    if prof.gap < blocked:
        return Verdict(
            kind=SMALL_GAP_IMPOSSIBLE,
            witness=f"gap {prof.gap} < {blocked} blocked prime areas",
        )
    if prof.gap > bound:
        return Verdict(
            kind=LARGE_GAP_IMPOSSIBLE,
            witness=(
                f"gap {prof.gap} > {prof.rect_count} - {blocked} - {indicator}"
                f" = {bound}"
            ),
        )
    return Verdict(
        kind=OPEN,
        witness=f"{blocked} <= gap {prof.gap} <= {bound}",
    )


def _check_family_member(n: int, t: int) -> None:
    # Integer identities every emitted member must satisfy. The full
    # profile (prime enumeration) is only affordable for smaller boards.
    assert t % 2 == 1, f"t = {t} must be odd"
    assert t * t - 8 * n * n == -7, f"({n}, {t}) does not solve the equation"
    rect_count = (t - 1) // 2
    assert tau(n * n) == rect_count
    assert n * n - triangle(rect_count) == 1
    if n <= _PROFILE_CHECK_LIMIT:
        prof = profile(n, n)
        assert prof.gap == 1 and prof.rect_count == rect_count


def pell_gap_one_family(count: int) -> list[PellSolution]:
    """First ``count`` members of the gap-one family of square boards.

    Starting from the base solution (n, t) = (11, 31) of t^2 - 8 n^2 = -7,
    further members come from composing with solutions of the homogeneous
    equation t^2 - 8 n^2 = 1, whose fundamental solution is (t, n) = (3, 1):

        t' = 31 * t_h + 88 * n_h        n' = 31 * n_h + 11 * t_h

    Every member is re-checked numerically before being returned; grid
    sizes are strictly increasing.
    """
    if count < 1:
        raise RangeError(f"count must be at least 1, got {count}")
    base_n, base_t = 11, 31
    members = [PellSolution(n=base_n, t=base_t, generation=1)]
    _check_family_member(base_n, base_t)
    hom_t, hom_n = 3, 1
    while len(members) < count:
        t = base_t * hom_t + 8 * base_n * hom_n
        n = base_t * hom_n + base_n * hom_t
        _check_family_member(n, t)
        assert n > members[-1].n
        members.append(PellSolution(n=n, t=t, generation=len(members) + 1))
        # next power of the fundamental homogeneous solution
        hom_t, hom_n = 3 * hom_t + 8 * hom_n, 3 * hom_n + hom_t
    return members
