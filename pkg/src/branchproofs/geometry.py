"""Polytope geometry: support functions, CG cuts, faces, l1-ball implication.

The support value of an empty set is ``-math.inf`` and of a direction in
which the set is unbounded is ``math.inf``; both are order-compatible
sentinels only (no arithmetic is performed on them).  All sets here are
rational polytopes given as inequality systems.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .simplex import (
    InequalitySystem,
    Infeasible,
    Optimal,
    Unbounded,
    lp_optimize,
)
from .vectors import Scalar, Vector

NEG_INFINITY = -math.inf
UNBOUNDED = math.inf

SupportValue = Union[Fraction, float]


@dataclass(frozen=True)
class Halfspace:
    """The halfspace {x : a x <= b}."""

    normal: Vector
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "rhs", Fraction(self.rhs))


@dataclass(frozen=True)
class CgCut:
    """A Chvatal-Gomory cut record: normal a and rhs floor(h_K(a)).

    The rhs is ``NEG_INFINITY`` for the sentinel cut produced by cutting an
    empty set (the cut is then a no-op).
    """

    normal: Vector
    rhs: Union[int, float]

    def is_noop(self) -> bool:
        return self.rhs == NEG_INFINITY


def support_value(K: InequalitySystem, a: Vector) -> SupportValue:
    """sup of a x over K: a Fraction, NEG_INFINITY if K is empty, or UNBOUNDED."""
    outcome = lp_optimize(K, a, sense="max")
    if isinstance(outcome, Optimal):
        return outcome.value
    if isinstance(outcome, Infeasible):
        return NEG_INFINITY
    return UNBOUNDED


def apply_cg(K: InequalitySystem, a: Vector) -> tuple[InequalitySystem, CgCut]:
    """Apply the CG cut induced by integer normal a: K -> K n {a x <= floor(h)}.

    On an empty K the set is returned unchanged with a sentinel no-op cut
    (matching the h = -infinity convention).  A direction in which K is
    unbounded is an error.
    """
    if not a.is_integral():
        raise ValueError("CG cut normals must be integral")
    value = support_value(K, a)
    if value == NEG_INFINITY:
        return K, CgCut(a, NEG_INFINITY)
    if value == UNBOUNDED:
        raise ValueError("set is unbounded in the cut direction")
    rhs = math.floor(value)
    return _append_dominant(K, a, Fraction(rhs)), CgCut(a, rhs)


def _append_dominant(K: InequalitySystem, a: Vector, b: Fraction) -> InequalitySystem:
    """K n {a x <= b}, replacing an existing looser row with the same normal.

    Set-equivalent to appending the row; keeps systems small when the same
    normal is cut repeatedly (as the serialization of enumerative proofs does).
    """
    for i, (row, rhs) in enumerate(K.rows()):
        if row == a:
            if rhs <= b:
                return K
            matrix = list(K.matrix)
            rhs_list = list(K.rhs)
            rhs_list[i] = b
            return InequalitySystem(matrix, rhs_list, n=K.n)
    return K.with_rows([(a, b)])


def apply_cg_list(
    K: InequalitySystem, cuts: Iterable[Vector]
) -> InequalitySystem:
    """Sequential left-to-right application of CG cuts; CG(K, ()) == K."""
    current = K
    for a in cuts:
        current, _ = apply_cg(current, a)
    return current


def face(K: InequalitySystem, a: Vector) -> InequalitySystem:
    """The face of maximizers of a over K, as K plus the equality a x = h_K(a)."""
    value = support_value(K, a)
    if value == NEG_INFINITY:
        raise ValueError("face of an empty set")
    if value == UNBOUNDED:
        raise ValueError("set is unbounded in the face direction")
    return K.with_equality(a, value)


def implies_R(
    premise: InequalitySystem,
    target: Halfspace,
    R: int,
    strict: bool = False,
) -> bool:
    """Decide  premise  =>_R  c x <= d  (or < d when strict).

    The implication is over the l1 ball of radius R, modeled by the extended
    formulation in variables (x, y): -y_i <= x_i <= y_i and sum y_i <= R,
    which keeps the check polynomial-size in the dimension.  An empty
    restricted premise makes the implication vacuously true.
    """
    if R < 1:
        raise ValueError("radius must be a positive integer")
    n = premise.n
    ext_rows: list[tuple[Vector, Scalar]] = []
    for a, b in premise.rows():
        ext_rows.append((Vector(tuple(a) + (0,) * n), b))
    for i in range(n):
        x_i = Vector.unit(2 * n, i)
        y_i = Vector.unit(2 * n, n + i)
        ext_rows.append((x_i - y_i, 0))
        ext_rows.append((-x_i - y_i, 0))
    ext_rows.append((Vector((0,) * n + (1,) * n), R))
    extended = InequalitySystem(
        [a for a, _ in ext_rows], [b for _, b in ext_rows], n=2 * n
    )
    objective = Vector(tuple(target.normal) + (0,) * n)
    outcome = lp_optimize(extended, objective, sense="max")
    if isinstance(outcome, Infeasible):
        return True
    if isinstance(outcome, Unbounded):  # impossible: |x_i| <= y_i, sum y_i <= R
        raise RuntimeError("l1-restricted system cannot be unbounded")
    if strict:
        return outcome.value < target.rhs
    return outcome.value <= target.rhs


def l1_radius_bound(K: InequalitySystem) -> int:
    """A positive integer R with K inside the l1 ball of radius R.

    Computed from 2n exact LPs as ceil of the sum over coordinates of
    max(|min x_i|, |max x_i|); raises if K is unbounded.  An empty K gets
    R = 1.
    """
    total = Fraction(0)
    for i in range(K.n):
        unit = Vector.unit(K.n, i)
        hi = support_value(K, unit)
        lo = support_value(K, -unit)
        if hi == UNBOUNDED or lo == UNBOUNDED:
            raise ValueError("set is unbounded; no l1 radius exists")
        if hi == NEG_INFINITY:
            return 1
        total += max(abs(hi), abs(lo))
    return max(1, math.ceil(total))


# cut-list text format: one cut normal per line, n integers space-separated


def cuts_to_text(cuts: Sequence[Vector]) -> str:
    return "".join(" ".join(str(v) for v in cut.as_ints()) + "\n" for cut in cuts)


def cuts_from_text(text: str, n: int | None = None) -> list[Vector]:
    cuts = []
    for line in text.splitlines():
        if not line.strip():
            continue
        entries = [int(tok.replace("−", "-")) for tok in line.split()]
        if n is not None and len(entries) != n:
            raise ValueError(f"cut of dimension {len(entries)}, expected {n}")
        cuts.append(Vector(entries))
    return cuts
