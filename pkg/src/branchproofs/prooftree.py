"""Proof objects and their verifiers.

Two tree shapes are modeled:

* :class:`BranchNode` -- a binary branching proof.  Each internal node holds
  an integer disjunction ``(a, b)``; the left edge asserts ``a x <= b`` and
  the right edge ``a x >= b + 1``.  Leaves may carry a Farkas certificate
  (the certified variant).  A proof is valid for K when every leaf relaxation
  ``K_v`` (K plus the path inequalities) is empty.

* :class:`EnumNode` -- an enumerative branching proof.  A labeled node holds
  a direction ``a`` and bounds ``lo <= hi`` with one child per integer b in
  ``[lo, hi]``, whose edge asserts the equality ``a x = b``.  A labeled node
  with no children claims the bounds contain no integer (``floor(hi) < lo``);
  an unlabeled ``empty`` leaf claims its relaxation is empty.

Verification runs one exact LP per claim.  Leaf checks are independent of
each other; reports list failures in depth-first (path-sorted) order, so the
result is deterministic regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .simplex import (
    FarkasCertificate,
    InequalitySystem,
    is_empty,
    reduce_certificate,
)
from .geometry import UNBOUNDED, support_value
from .vectors import Vector, bit_size, format_rational, parse_rational


@dataclass(frozen=True)
class BranchNode:
    """A node of a branching proof; a leaf when ``a`` is None."""

    a: Vector | None = None
    b: int | None = None
    left: "BranchNode | None" = None
    right: "BranchNode | None" = None
    cert: Vector | None = None

    def __post_init__(self):
        if self.a is None:
            if self.left is not None or self.right is not None or self.b is not None:
                raise ValueError("leaves carry no disjunction and no children")
        else:
            if not self.a.is_integral():
                raise ValueError("disjunction normals must be integral")
            if not isinstance(self.b, int):
                raise ValueError("disjunction right-hand sides must be integers")
            if self.left is None or self.right is None:
                raise ValueError("internal nodes need both children")
            if self.cert is not None:
                raise ValueError("only leaves carry certificates")

    @property
    def is_leaf(self) -> bool:
        return self.a is None

    def node_count(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.left.node_count() + self.right.node_count()

    def leaf_count(self) -> int:
        if self.is_leaf:
            return 1
        return self.left.leaf_count() + self.right.leaf_count()


BranchingProof = BranchNode


@dataclass(frozen=True)
class EnumNode:
    """A node of an enumerative proof.

    ``a is None`` marks an unlabeled leaf (``leaf_kind`` "empty" or "gap");
    otherwise the node carries direction/bounds and children keyed by the
    branched integer value.  A labeled childless node is the canonical
    integer-free-interval leaf.
    """

    a: Vector | None = None
    lo: Fraction | None = None
    hi: Fraction | None = None
    children: tuple[tuple[int, "EnumNode"], ...] = ()
    leaf_kind: str | None = None

    def __post_init__(self):
        if self.a is None:
            if self.children:
                raise ValueError("unlabeled leaves cannot have children")
            if self.leaf_kind not in ("empty", "gap"):
                raise ValueError("unlabeled leaves must be 'empty' or 'gap'")
        else:
            if not self.a.is_integral() or self.a.is_zero():
                raise ValueError("branching directions must be nonzero integral")
            if self.lo is None or self.hi is None:
                raise ValueError("labeled nodes need bounds")
            object.__setattr__(self, "lo", Fraction(self.lo))
            object.__setattr__(self, "hi", Fraction(self.hi))
            if self.leaf_kind is not None:
                raise ValueError("labeled nodes carry no leaf kind")
            object.__setattr__(
                self, "children", tuple(sorted(self.children, key=lambda kv: kv[0]))
            )
            values = [b for b, _ in self.children]
            if len(set(values)) != len(values):
                raise ValueError("duplicate child values")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def node_count(self) -> int:
        return 1 + sum(child.node_count() for _, child in self.children)


EnumerativeProof = EnumNode


@dataclass(frozen=True)
class Report:
    """Verification outcome; ``failures`` holds "path: reason" strings."""

    valid: bool
    failures: tuple[str, ...] = ()

    @property
    def failing_leaves(self) -> tuple[str, ...]:
        return tuple(f.split(":", 1)[0] for f in self.failures)


@dataclass(frozen=True)
class ProofStats:
    length: int  # number of nodes
    bit_size: int
    max_coeff: int


def path_rows(path: list[tuple[Vector, int, bool]]):
    """Inequality rows for a root-to-node path of (a, b, went_left) edges."""
    rows = []
    for a, b, went_left in path:
        if went_left:
            rows.append((a, Fraction(b)))
        else:
            rows.append((-a, Fraction(-b - 1)))
    return rows


def _branch_system(K: InequalitySystem, path) -> InequalitySystem:
    return K.with_rows(path_rows(path))


def verify_branching_proof(K: InequalitySystem, proof: BranchNode) -> Report:
    """Valid iff every leaf relaxation is empty (one exact LP per leaf)."""
    failures: list[str] = []

    def walk(node: BranchNode, path, label: str) -> None:
        if node.is_leaf:
            if is_empty(_branch_system(K, path)) is None:
                failures.append(f"{label or '(root)'}: leaf relaxation is nonempty")
            return
        walk(node.left, path + [(node.a, node.b, True)], label + "L")
        walk(node.right, path + [(node.a, node.b, False)], label + "R")

    walk(proof, [], "")
    return Report(valid=not failures, failures=tuple(failures))


def verify_certified_proof(K: InequalitySystem, proof: BranchNode) -> bool:
    """Check every leaf's Farkas certificate by pure arithmetic (no LPs).

    Certificates list multipliers for K's rows first, then the path rows in
    root-to-leaf order.  Raises if a leaf has no certificate.
    """

    def walk(node: BranchNode, path) -> bool:
        if node.is_leaf:
            if node.cert is None:
                raise ValueError("leaf without certificate")
            system = _branch_system(K, path)
            return FarkasCertificate(node.cert).verify(system)
        return walk(node.left, path + [(node.a, node.b, True)]) and walk(
            node.right, path + [(node.a, node.b, False)]
        )

    return walk(proof, [])


def certify(K: InequalitySystem, proof: BranchNode) -> BranchNode:
    """Label every leaf with a reduced Farkas certificate (<= n+1 nonzeros).

    Raises ``ValueError`` naming the first nonempty leaf if the proof is
    invalid.
    """

    def walk(node: BranchNode, path, label: str) -> BranchNode:
        if node.is_leaf:
            system = _branch_system(K, path)
            cert = is_empty(system)
            if cert is None:
                raise ValueError(
                    f"cannot certify: leaf {label or '(root)'} has a nonempty relaxation"
                )
            reduced = reduce_certificate(system, cert)
            return BranchNode(cert=reduced.multipliers)
        return BranchNode(
            a=node.a,
            b=node.b,
            left=walk(node.left, path + [(node.a, node.b, True)], label + "L"),
            right=walk(node.right, path + [(node.a, node.b, False)], label + "R"),
        )

    return walk(proof, [], "")


def verify_enumerative_proof(K: InequalitySystem, proof: EnumNode) -> Report:
    """Check bounds, child completeness and both leaf conditions.

    At every labeled node with nonempty relaxation, the exact min/max of
    ``a x`` must lie within ``[lo, hi]`` and a child must exist for every
    integer in that interval; childless labeled nodes must satisfy
    ``floor(hi) < lo``.  Unlabeled "empty" leaves must have empty relaxations.
    """
    failures: list[str] = []

    def walk(node: EnumNode, system: InequalitySystem, label: str) -> None:
        where = label or "(root)"
        if node.a is None:
            if node.leaf_kind == "empty":
                if is_empty(system) is None:
                    failures.append(f"{where}: leaf relaxation is nonempty")
            else:
                failures.append(
                    f"{where}: gap leaf carries no direction/bounds"
                    " (write it as a childless labeled node)"
                )
            return
        empty = is_empty(system) is not None
        if not empty:
            hi_val = support_value(system, node.a)
            lo_neg = support_value(system, -node.a)
            if hi_val == UNBOUNDED or lo_neg == UNBOUNDED:
                failures.append(f"{where}: relaxation unbounded in the direction")
                return
            lo_val = -lo_neg
            if lo_val < node.lo or hi_val > node.hi:
                failures.append(
                    f"{where}: range [{lo_val}, {hi_val}] escapes bounds"
                    f" [{node.lo}, {node.hi}]"
                )
            if not node.children and math.floor(node.hi) >= node.lo:
                failures.append(
                    f"{where}: nonempty leaf whose bounds contain an integer"
                )
        if node.children:
            present = {b for b, _ in node.children}
            if not empty:
                b = math.ceil(node.lo)
                while b <= math.floor(node.hi):
                    if b not in present:
                        failures.append(f"{where}: missing child for b={b}")
                    b += 1
            for b, child in node.children:
                walk(
                    child,
                    system.with_equality(node.a, b),
                    f"{label}/{b}" if label else str(b),
                )

    walk(proof, K, "")
    return Report(valid=not failures, failures=tuple(failures))


def enumerative_to_branching(proof: EnumNode) -> BranchNode:
    """Encode an enumerative proof as a binary branching proof.

    Each child value b becomes two branching levels (``a x <= b`` then
    ``a x >= b`` via the complement of ``a x <= b - 1``); childless labeled
    nodes become a single disjunction at ``floor(hi)``.  The result verifies
    valid iff the original does.
    """
    if proof.a is None:
        if proof.leaf_kind == "empty":
            return BranchNode()
        raise ValueError("cannot convert an unlabeled gap leaf")
    values = [b for b, _ in proof.children]
    if not values:
        pivot = math.floor(proof.hi)
        return BranchNode(proof.a, pivot, BranchNode(), BranchNode())

    def chain(index: int) -> BranchNode:
        if index == len(values):
            return BranchNode()  # claims a x >= last value + 1 is empty
        b = values[index]
        sub = enumerative_to_branching(proof.children[index][1])
        inner = BranchNode(proof.a, b - 1, BranchNode(), sub)
        return BranchNode(proof.a, b, inner, chain(index + 1))

    return chain(0)


def proof_stats(proof) -> ProofStats:
    """Length (node count), encoding bit-size, and the largest edge coefficient.

    The bit-size counts nodes + edges + label sizes: for branching nodes the
    disjunction ``(a, b)`` (counted once per internal node) and any leaf
    certificates; for enumerative nodes ``(a, lo, hi)`` plus the integer on
    each edge.  Absent labels cost 0 bits.
    """
    if isinstance(proof, BranchNode):
        return _branching_stats(proof)
    if isinstance(proof, EnumNode):
        return _enumerative_stats(proof)
    raise TypeError(f"not a proof object: {type(proof).__name__}")


def _branching_stats(proof: BranchNode) -> ProofStats:
    nodes = proof.node_count()
    edges = nodes - 1
    bits = nodes + edges
    coeff = 0

    def walk(node: BranchNode) -> None:
        nonlocal bits, coeff
        if node.is_leaf:
            if node.cert is not None:
                bits += bit_size(node.cert)
            return
        bits += bit_size(node.a) + bit_size(node.b)
        coeff_here = max(
            int(node.a.norm_linf()), abs(node.b), abs(node.b + 1)
        )
        if coeff_here > coeff:
            coeff = coeff_here
        walk(node.left)
        walk(node.right)

    walk(proof)
    return ProofStats(length=nodes, bit_size=bits, max_coeff=coeff)


def _enumerative_stats(proof: EnumNode) -> ProofStats:
    nodes = proof.node_count()
    edges = nodes - 1
    bits = nodes + edges
    coeff = 0

    def walk(node: EnumNode) -> None:
        nonlocal bits, coeff
        if node.a is None:
            return
        bits += bit_size(node.a) + bit_size(node.lo) + bit_size(node.hi)
        local = int(node.a.norm_linf())
        for b, child in node.children:
            bits += bit_size(b)
            local = max(local, abs(b))
            walk(child)
        coeff = max(coeff, local)

    walk(proof)
    return ProofStats(length=nodes, bit_size=bits, max_coeff=coeff)


# ---------------------------------------------------------------------------
# text format: parenthesized trees
#
#   branching:    (node (a_1 ... a_n b) LEFT RIGHT) | (leaf)
#                 | (leaf (cert lam_1 ... lam_m))
#   enumerative:  (enode (a_1 ... a_n) lo hi (child b SUBTREE)...)
#                 | (eleaf empty) | (eleaf gap)
# ---------------------------------------------------------------------------


def _tokenize(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _read_sexp(tokens: list[str], pos: int):
    if tokens[pos] != "(":
        return tokens[pos], pos + 1
    items = []
    pos += 1
    while pos < len(tokens) and tokens[pos] != ")":
        item, pos = _read_sexp(tokens, pos)
        items.append(item)
    if pos >= len(tokens):
        raise ValueError("unbalanced parentheses")
    return items, pos + 1


def _parse_tree_text(text: str):
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty proof text")
    sexp, pos = _read_sexp(tokens, 0)
    if pos != len(tokens):
        raise ValueError("trailing tokens after proof")
    return sexp


def _int_atom(atom) -> int:
    value = parse_rational(atom)
    if value.denominator != 1:
        raise ValueError(f"expected an integer, found {atom}")
    return value.numerator


def format_branching(proof: BranchNode, indent: int = 0) -> str:
    pad = "  " * indent
    if proof.is_leaf:
        if proof.cert is None:
            return f"{pad}(leaf)"
        lams = " ".join(format_rational(v) for v in proof.cert)
        return f"{pad}(leaf (cert {lams}))"
    header = " ".join(str(v) for v in proof.a.as_ints()) + f" {proof.b}"
    return (
        f"{pad}(node ({header})\n"
        f"{format_branching(proof.left, indent + 1)}\n"
        f"{format_branching(proof.right, indent + 1)})"
    )


def parse_branching(text: str) -> BranchNode:
    return _branching_from_sexp(_parse_tree_text(text))


def _branching_from_sexp(sexp) -> BranchNode:
    if not isinstance(sexp, list) or not sexp:
        raise ValueError("malformed proof node")
    tag = sexp[0]
    if tag == "leaf":
        if len(sexp) == 1:
            return BranchNode()
        if len(sexp) == 2 and isinstance(sexp[1], list) and sexp[1][:1] == ["cert"]:
            lams = Vector([parse_rational(t) for t in sexp[1][1:]])
            return BranchNode(cert=lams)
        raise ValueError("malformed leaf")
    if tag == "node":
        if len(sexp) != 4 or not isinstance(sexp[1], list):
            raise ValueError("malformed internal node")
        numbers = [_int_atom(t) for t in sexp[1]]
        if len(numbers) < 2:
            raise ValueError("disjunction needs at least one coefficient and a rhs")
        return BranchNode(
            a=Vector(numbers[:-1]),
            b=numbers[-1],
            left=_branching_from_sexp(sexp[2]),
            right=_branching_from_sexp(sexp[3]),
        )
    raise ValueError(f"unknown node tag {tag!r}")


def format_enumerative(proof: EnumNode, indent: int = 0) -> str:
    pad = "  " * indent
    if proof.a is None:
        return f"{pad}(eleaf {proof.leaf_kind})"
    coeffs = " ".join(str(v) for v in proof.a.as_ints())
    head = f"{pad}(enode ({coeffs}) {format_rational(proof.lo)} {format_rational(proof.hi)}"
    if not proof.children:
        return head + ")"
    parts = [head]
    for b, child in proof.children:
        parts.append(
            f"{'  ' * (indent + 1)}(child {b}\n{format_enumerative(child, indent + 2)})"
        )
    return "\n".join(parts) + ")"


def parse_enumerative(text: str) -> EnumNode:
    return _enumerative_from_sexp(_parse_tree_text(text))


def _enumerative_from_sexp(sexp) -> EnumNode:
    if not isinstance(sexp, list) or not sexp:
        raise ValueError("malformed proof node")
    tag = sexp[0]
    if tag == "eleaf":
        if len(sexp) != 2 or sexp[1] not in ("empty", "gap"):
            raise ValueError("malformed enumerative leaf")
        return EnumNode(leaf_kind=sexp[1])
    if tag == "enode":
        if len(sexp) < 4 or not isinstance(sexp[1], list):
            raise ValueError("malformed enumerative node")
        a = Vector([_int_atom(t) for t in sexp[1]])
        lo = parse_rational(sexp[2])
        hi = parse_rational(sexp[3])
        children = []
        for group in sexp[4:]:
            if not isinstance(group, list) or len(group) != 3 or group[0] != "child":
                raise ValueError("malformed child group")
            children.append((_int_atom(group[1]), _enumerative_from_sexp(group[2])))
        return EnumNode(a=a, lo=lo, hi=hi, children=tuple(children))
    raise ValueError(f"unknown node tag {tag!r}")


def detect_proof_kind(text: str) -> str:
    """"branching" or "enumerative", from the first node tag."""
    tokens = _tokenize(text)
    for tok in tokens:
        if tok in ("node", "leaf"):
            return "branching"
        if tok in ("enode", "eleaf"):
            return "enumerative"
    raise ValueError("cannot detect proof kind")
