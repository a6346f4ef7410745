"""Serializing enumerative branching proofs into CG cutting-plane proofs.

``enum_to_cp`` walks an enumerative proof of integer infeasibility and emits
an ordered list of CG cut normals whose sequential application empties the
polytope, of length at most 2|T| - 1.  The recursion pushes the hyperplane
``a_r x = b`` backwards through the set: the cut induced by the branching
direction ``a_r`` drops its support value to the next integer, the child
subtree at that value is serialized recursively on the face of maximizers,
and the face cuts are lifted back with :func:`lift_cg_sequence` so that they
have the same effect applied to the full set.

Lifting replaces a face cut ``a`` by ``a + i c`` (c the face normal).  A
multiplier ``i`` is accepted exactly when
``floor(h_K(a + i c) - i h_K(c)) == floor(h_F(a))``, which makes the cut's
trace on the face coincide with the face's own CG cut; existence of such an
``i`` is guaranteed for rational polytopes, and small multipliers are
preferred (the search runs i = 0, 1, 2, 4, 8, ... with a generous cap that
turns a violated precondition into a diagnosable error).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import (
    NEG_INFINITY,
    UNBOUNDED,
    apply_cg,
    face,
    support_value,
)
from .prooftree import EnumNode
from .simplex import InequalitySystem, is_empty
from .vectors import Vector

_MULTIPLIER_CAP = 2**64


@dataclass(frozen=True)
class LiftedCut:
    """A face cut ``base`` lifted to ``base + multiplier * face_normal``."""

    base: Vector
    face_normal: Vector
    multiplier: int
    lifted: Vector


def lift_cg_cut(K: InequalitySystem, c: Vector, a: Vector) -> LiftedCut:
    """Lift the CG cut of ``face(K, c)`` induced by ``a`` to a cut of K.

    Requires K nonempty and bounded in the relevant directions with
    ``h_K(c)`` integral.  Returns the smallest multiplier in the doubling
    schedule passing the floor test.
    """
    if c.is_zero():
        return LiftedCut(a, c, 0, a)  # the face is K itself
    h_c = _finite_support(K, c, "face normal")
    if h_c.denominator != 1:
        raise ValueError("face support value must be integral for lifting")
    F = face(K, c)
    target = math.floor(_finite_support(F, a, "cut normal on the face"))
    multiplier = _search_multiplier(K, c, a, h_c, target)
    return LiftedCut(a, c, multiplier, a + multiplier * c)


def _search_multiplier(K, c, a, h_c, target: int) -> int:
    i = 0
    while i <= _MULTIPLIER_CAP:
        value = _finite_support(K, a + i * c, "lifted cut normal")
        if math.floor(value - i * h_c) == target:
            return i
        i = 1 if i == 0 else 2 * i
    raise RuntimeError(
        "no lifting multiplier found below the cap; the set is probably"
        " unbounded or the face support value is not integral"
    )


def _finite_support(K, direction, what: str) -> Fraction:
    value = support_value(K, direction)
    if value == NEG_INFINITY:
        raise ValueError(f"empty set while evaluating the {what}")
    if value == UNBOUNDED:
        raise ValueError(f"set unbounded along the {what}")
    return value


def lift_cg_sequence(
    K: InequalitySystem, c: Vector, cuts: list[Vector]
) -> list[LiftedCut]:
    """Lift an ordered list of face cuts so the set equality holds prefix-wise.

    Multipliers are chosen inductively: cut i is lifted against the set
    obtained from K by the previously lifted cuts, while the original cuts
    accumulate on the face.  Once the face has been emptied the remaining
    multipliers are 0 (any lift works vacuously).
    """
    lifted, _ = _lift_sequence_tracking(K, c, cuts)
    return lifted


def _lift_sequence_tracking(K, c, cuts):
    lifted: list[LiftedCut] = []
    current = K
    if c.is_zero():
        for a in cuts:
            lifted.append(LiftedCut(a, c, 0, a))
            current, _ = apply_cg(current, a)
        return lifted, current
    h_c = _finite_support(K, c, "face normal")
    if h_c.denominator != 1:
        raise ValueError("face support value must be integral for lifting")
    face_set = face(K, c)
    for a in cuts:
        if is_empty(face_set) is not None:
            cut = LiftedCut(a, c, 0, a)
        else:
            target = math.floor(_finite_support(face_set, a, "face cut"))
            multiplier = _search_multiplier(current, c, a, h_c, target)
            cut = LiftedCut(a, c, multiplier, a + multiplier * c)
        lifted.append(cut)
        current, _ = apply_cg(current, cut.lifted)
        face_set, _ = apply_cg(face_set, a)
    return lifted, current


def enum_to_cp(K: InequalitySystem, proof: EnumNode) -> list[Vector]:
    """Serialize a valid enumerative proof into a CG cut list emptying K.

    The returned list has length at most 2|T| - 1 and satisfies
    ``apply_cg_list(K, cuts)`` empty; an input proof that fails to refute the
    set raises ``ValueError``.
    """
    cuts, final = _serialize(K, proof)
    if is_empty(final) is None:
        raise ValueError("enumerative proof does not refute the set")
    return cuts


def _serialize(K: InequalitySystem, node: EnumNode):
    if is_empty(K) is not None:
        return [], K
    if node.a is None:
        # an unlabeled leaf over a nonempty set: the proof is invalid
        raise ValueError(
            f"{node.leaf_kind} leaf reached with a nonempty relaxation"
        )
    a_r = node.a
    children = dict(node.children)
    current, _ = apply_cg(K, a_r)
    cuts: list[Vector] = [a_r]
    previous_b = None
    while True:
        value = support_value(current, a_r)
        if value == NEG_INFINITY or value < node.lo:
            break
        if value.denominator != 1:
            raise RuntimeError("support value not integral after a CG cut")
        b = int(value)
        if previous_b is not None and b >= previous_b:
            raise RuntimeError("pushed value failed to decrease")
        previous_b = b
        if b not in children:
            raise ValueError(f"no child for branched value {b}")
        child = children[b]
        face_cuts, _ = _serialize(face(current, a_r), child)
        lifted, current = _lift_sequence_tracking(current, a_r, face_cuts)
        current, _ = apply_cg(current, a_r)
        cuts.extend(cut.lifted for cut in lifted)
        cuts.append(a_r)
    if is_empty(current) is None:
        # support dropped below lo on a nonempty set: bounds were wrong
        raise ValueError("enumerative proof does not refute the set")
    return cuts, current
