"""Proof objects on disk: text formats, verifiers, and conversions.

Branching proofs are parenthesized binary trees whose internal nodes carry an
integer disjunction; enumerative proofs are multi-way trees branching on every
integer value of a functional within exact LP bounds.  Both round-trip through
a plain-text form, verify against a system with one exact LP per claim, and
report failures by the path of the offending node.  Enumerative trees also
convert into binary ones (two branching levels per child), so every result
about branching proofs applies to them.
"""

from fractions import Fraction

from branchproofs import (
    EnumNode,
    InequalitySystem,
    Vector,
    enumerative_to_branching,
    format_branching,
    format_enumerative,
    parse_enumerative,
    proof_stats,
    verify_branching_proof,
    verify_enumerative_proof,
)

# the segment x2 = 1/2, 0 <= x1 <= 1: integer-free, refuted by branching on
# x1 (two children) and then on x2 (no integer fits in [1/2, 1/2])
segment = InequalitySystem(
    [[0, 1], [0, -1], [1, 0], [-1, 0]],
    [Fraction(1, 2), Fraction(-1, 2), 1, 0],
)
gap = lambda: EnumNode(a=Vector([0, 1]), lo=Fraction(1, 2), hi=Fraction(1, 2))
proof = EnumNode(a=Vector([1, 0]), lo=0, hi=1, children=((0, gap()), (1, gap())))

print("== enumerative proof in text form ==")
text = format_enumerative(proof)
print(text)
assert parse_enumerative(text) == proof
print("(round-trips losslessly)")

print()
print("== verification ==")
report = verify_enumerative_proof(segment, proof)
print(f"valid: {report.valid}")

broken = EnumNode(a=Vector([1, 0]), lo=0, hi=1, children=((1, gap()),))
report = verify_enumerative_proof(segment, broken)
print(f"dropping the b=0 child: valid = {report.valid}; report:")
for failure in report.failures:
    print(f"  {failure}")

print()
print("== conversion to a binary branching proof ==")
binary = enumerative_to_branching(proof)
stats = proof_stats(binary)
print(format_branching(binary))
print(f"valid: {verify_branching_proof(segment, binary).valid}; "
      f"{stats.length} nodes, bit size {stats.bit_size}, "
      f"max coefficient {stats.max_coeff}")
