"""Simultaneous Diophantine approximation and right-hand-side classification.

``dirichlet_approx`` finds, for a nonzero rational vector a and precision N,
the smallest positive integer l <= N^n such that rounding l * a / ||a||_inf
coordinate-wise gives an integer vector a' with rounding error below 1/N.
Existence is a pigeonhole fact, so the linear scan always terminates; the
scan itself runs on raw integers (per-coordinate modular remainders) to stay
fast for large N^n.

``classify_rhs`` decides, for an inequality ``a x <= b`` and an approximation
a' of a, whether a' together with a unique integer right-hand side b' fully
dominates the disjunction ``a x <= b  or  >= b+1`` over the l1 ball of radius
R, or merely pins the unique non-dominating candidate b'.  All interval
comparisons are exact, with open/closed endpoints exactly as stated in the
case analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .vectors import Scalar, Vector, round_half_away


@dataclass(frozen=True)
class DioApprox:
    """Result of precision-N approximation: a' = round(l * a / ||a||_inf)."""

    a_prime: Vector
    multiplier: int  # l, with ||a'||_inf == l
    precision: int  # N

    def negated(self) -> "DioApprox":
        """The same-quality approximation of -a (same multiplier)."""
        return DioApprox(-self.a_prime, self.multiplier, self.precision)


@dataclass(frozen=True)
class RhsClassification:
    """Outcome of the right-hand-side case split.

    ``dominating`` means ``a' x <= b'  =>_R  a x <= b`` and
    ``a' x >= b'+1  =>_R  a x >= b+1`` both hold; non-dominating means b' is
    the unique integer whose error interval meets (b, b+1).  ``on_boundary``
    flags an exact endpoint coincidence in the interval tests.
    """

    dominating: bool
    b_prime: int
    alpha: Fraction
    on_boundary: bool = False


def dirichlet_approx(a: Vector, N: int) -> DioApprox:
    """Smallest l in 1..N^n with ||l * a/||a||_inf - round(...)||_inf < 1/N.

    The returned integer vector a' = round(l * a / ||a||_inf) satisfies
    ||a'||_inf = l and keeps every zero coordinate of a zero.
    """
    if a.is_zero():
        raise ValueError("cannot approximate the zero vector")
    if N < 1:
        raise ValueError("precision N must be a positive integer")
    scale = a.norm_linf()
    unit = [e / scale for e in a]
    # integer scan data: coordinate i contributes (l*p) mod q
    checks = [
        (u.numerator, u.denominator) for u in unit if u.denominator != 1
    ]
    bound = N ** len(a)
    hit = None
    if not checks:
        hit = 1
    else:
        for l in range(1, bound + 1):
            for p, q in checks:
                r = (l * p) % q
                if min(r, q - r) * N >= q:
                    break
            else:
                hit = l
                break
    if hit is None:
        raise RuntimeError(
            "no multiplier below N^n satisfied the error bound;"
            " this contradicts the pigeonhole guarantee"
        )
    a_prime = Vector(round_half_away(hit * u) for u in unit)
    assert int(a_prime.norm_linf()) == hit
    return DioApprox(a_prime, hit, N)


def approximation_error(a: Vector, approx: DioApprox) -> Fraction:
    """max_i | l * a_i / ||a||_inf - a'_i |, exactly."""
    scale = a.norm_linf()
    return max(
        abs(approx.multiplier * e / scale - w)
        for e, w in zip(a, approx.a_prime)
    )


def classify_rhs(
    a_hat: Vector,
    b_hat: Scalar,
    approx: DioApprox,
    R: int,
    N: int,
) -> RhsClassification:
    """Case split choosing the integer right-hand side b' for a' x <= b'.

    Requires R/N < 1/4 and alpha = ||a_hat||_inf / ||a'||_inf >= 2.  Exactly
    one of the following applies:

    * b_hat >= R ||a_hat||_inf:      dominating with b' = R ||a'||_inf;
    * b_hat + 1 <= -R ||a_hat||_inf: dominating with b' = -R ||a'||_inf - 1;
    * otherwise either the open interval (b_hat, b_hat + 1) meets the closed
      error interval [alpha (b' - R/N), alpha (b' + R/N)] of a unique
      |b'| <= R ||a'||_inf (non-dominating), or it lies strictly between two
      consecutive error intervals (dominating).
    """
    b_hat = Fraction(b_hat)
    if Fraction(R, N) >= Fraction(1, 4):
        raise ValueError("precondition R/N < 1/4 violated")
    norm_hat = a_hat.norm_linf()
    norm_prime = Fraction(approx.multiplier)
    alpha = norm_hat / norm_prime
    if alpha < 2:
        raise ValueError("precondition alpha >= 2 violated")
    if b_hat >= R * norm_hat:
        return RhsClassification(True, int(R * norm_prime), alpha)
    if b_hat + 1 <= -R * norm_hat:
        return RhsClassification(True, int(-R * norm_prime) - 1, alpha)

    shift = alpha * Fraction(R, N)
    lo_window = floor(b_hat / alpha) - 2
    hi_window = floor((b_hat + 1) / alpha) + 2
    limit = int(R * norm_prime)
    boundary = False

    def touches(endpoint: Fraction) -> bool:
        return endpoint == b_hat or endpoint == b_hat + 1

    meets = []
    for b_prime in range(max(lo_window, -limit), min(hi_window, limit) + 1):
        left = alpha * b_prime - shift
        right = alpha * b_prime + shift
        boundary = boundary or touches(left) or touches(right)
        if left < b_hat + 1 and right > b_hat:
            meets.append(b_prime)
    if meets:
        if len(meets) > 1:
            raise RuntimeError("error intervals are not pairwise disjoint")
        return RhsClassification(False, meets[0], alpha, boundary)
    for b_prime in range(max(lo_window, -limit), min(hi_window, limit - 1) + 1):
        left = alpha * b_prime + shift
        right = alpha * (b_prime + 1) - shift
        boundary = boundary or touches(left) or touches(right)
        if left <= b_hat and b_hat + 1 <= right:
            return RhsClassification(True, b_prime, alpha, boundary)
    raise RuntimeError("case split failed: no interval matched")
