"""Recompiling branching proofs into low-coefficient branching proofs.

The pipeline replaces every disjunction ``a x <= b or >= b+1`` of a proof by
an iterated Diophantine approximation ``a' x <= b' or >= b'+1`` whose
coefficients depend only on the dimension and the l1 radius R of the set (not
on the original proof), and then repairs each leaf whose new relaxation is no
longer empty by a short chain of branching steps that simulates at most
2(n+1) Chvatal-Gomory cuts drawn from the approximation data.

Central pieces:

* ``long_to_short``    -- builds a valid substitution sequence
  ``(a', b', k, (a_i, b_i, gamma_i))`` of an inequality, whose flip is a valid
  substitution sequence of the complementary inequality;
* ``verify_substitution_sequence`` -- machine-checks the four defining
  properties of such a sequence with exact l1-ball implication tests;
* ``gen_cg_cuts``      -- produces the <= 2(n+1) leaf-repair cuts;
* ``recompile``        -- assembles the final proof tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .diophantine import classify_rhs, dirichlet_approx
from .geometry import (
    NEG_INFINITY,
    UNBOUNDED,
    Halfspace,
    apply_cg_list,
    implies_R,
    l1_radius_bound,
    support_value,
)
from .prooftree import BranchNode, Report, verify_branching_proof
from .simplex import (
    FarkasCertificate,
    InequalitySystem,
    Optimal,
    Unbounded,
    is_empty,
    lp_optimize,
    reduce_certificate,
)
from .vectors import Vector, round_half_away


@dataclass(frozen=True)
class SubstitutionSequence:
    """A valid substitution sequence of ``a x <= b`` at precision (R, N, M).

    ``levels`` holds (a_i, b_i, gamma_i) for i = 1..k with gamma_k = 0; the
    replacement disjunction is ``a' x <= b'`` with a' = sum M^(k-i) a_i and
    b' = sum M^(k-i) b_i.  The defining properties (coefficient bounds and
    three families of l1-ball implications) are checked by
    :func:`verify_substitution_sequence`.
    """

    a_prime: Vector
    b_prime: int
    levels: tuple[tuple[Vector, int, Fraction], ...]
    R: int
    N: int
    M: int

    @property
    def k(self) -> int:
        return len(self.levels)

    def flipped(self) -> "SubstitutionSequence":
        return flip_sequence(self)


def long_to_short(
    a: Vector,
    b: int,
    R: int,
    N: int,
    M: int,
    residual_trace: list | None = None,
) -> SubstitutionSequence:
    """Iterated Diophantine approximation of ``a x <= b``.

    Repeatedly approximates the residual direction, choosing each right-hand
    side by the dominating / non-dominating case split, until either a
    dominating approximation occurs or the residual direction is already
    small (max-norm at most 10 n N^n); terminates within n+1 levels because
    each subtraction zeroes at least one more coordinate of the residual.

    The flipped output (see :func:`flip_sequence`) is a valid substitution
    sequence of ``-a x <= -b - 1``, so one call serves both sides of the
    disjunction.
    """
    if a.is_zero():
        raise ValueError("disjunction normal must be nonzero")
    if not a.is_integral() or not isinstance(b, int):
        raise ValueError("disjunction must be integral")
    if min(R, N, M) < 1 or Fraction(R, N) >= Fraction(1, 4):
        raise ValueError("need positive R, N, M with R/N < 1/4")

    n = len(a)
    threshold = 10 * n * N**n
    a_hat = Vector(Fraction(v) for v in a)
    b_hat = Fraction(b)
    levels: list[tuple[Vector, int, Fraction]] = []
    alphas: list[Fraction] = []

    for _ in range(n + 1):
        if residual_trace is not None:
            residual_trace.append(a_hat)
        if a_hat.norm_linf() <= threshold:
            break
        approx = dirichlet_approx(a_hat, N)
        cls = classify_rhs(a_hat, b_hat, approx, R, N)
        if cls.dominating:
            levels.append((approx.a_prime, cls.b_prime, Fraction(0)))
            return _assemble(levels, R, N, M)
        gamma = 2 * cls.alpha / (5 * n)
        levels.append((approx.a_prime, cls.b_prime, gamma))
        alphas.append(cls.alpha)
        a_hat = a_hat - cls.alpha * approx.a_prime
        b_hat = b_hat - cls.alpha * cls.b_prime
    else:
        raise RuntimeError("residual failed to shrink within n+1 levels")

    # small-residual exit: final level reconstructs (a, b) over the rounded
    # multipliers, with the right-hand side clamped into the trivial range
    a_k = a
    b_tilde = b
    for (a_i, b_i, _), alpha in zip(levels, alphas):
        r = round_half_away(alpha)
        a_k = a_k - r * a_i
        b_tilde = b_tilde - r * b_i
    norm_k = int(a_k.norm_linf())
    if -R * norm_k - 1 < b_tilde < R * norm_k:
        b_k = b_tilde
    elif b_tilde <= -R * norm_k - 1:
        b_k = -R * norm_k - 1
    else:
        b_k = R * norm_k
    levels.append((a_k, b_k, Fraction(0)))
    return _assemble(levels, R, N, M)


def _assemble(levels, R: int, N: int, M: int) -> SubstitutionSequence:
    k = len(levels)
    a_prime = Vector.zero(len(levels[0][0]))
    b_prime = 0
    for i, (a_i, b_i, _) in enumerate(levels, start=1):
        a_prime = a_prime + M ** (k - i) * a_i
        b_prime += M ** (k - i) * b_i
    return SubstitutionSequence(
        a_prime=a_prime.round_nearest(),
        b_prime=b_prime,
        levels=tuple(levels),
        R=R,
        N=N,
        M=M,
    )


def flip_sequence(seq: SubstitutionSequence) -> SubstitutionSequence:
    """The flipped sequence, valid for the complementary inequality.

    If ``seq`` is a valid substitution sequence of ``a x <= b`` then the flip
    is one of ``-a x <= -b - 1``: all levels are negated and the last level's
    right-hand side additionally drops by one, mirroring ``b -> -b - 1``.
    """
    flipped = [(-a_i, -b_i, g) for a_i, b_i, g in seq.levels]
    a_k, b_k, g_k = flipped[-1]
    flipped[-1] = (a_k, b_k - 1, g_k)
    return SubstitutionSequence(
        a_prime=-seq.a_prime,
        b_prime=-seq.b_prime - 1,
        levels=tuple(flipped),
        R=seq.R,
        N=seq.N,
        M=seq.M,
    )


def verify_substitution_sequence(
    seq: SubstitutionSequence, a: Vector, b: int
) -> Report:
    """Machine-check all defining properties of a substitution sequence.

    Property 1 (coefficient bounds and the M-adic reconstruction of a', b')
    is arithmetic; properties 2-4 are l1-ball implications at radius R,
    checked with one exact LP each:

      2. a' x <= b', a_i x = b_i (i < l)  =>_R  a_l x <  b_l + 1   (l < k)
      3. a' x <= b', a_i x = b_i (i < l)  =>_R  a x  <=  b + gamma_l
      4. a_l x <= b_l - 1, a_i x = b_i (i < l)  =>_R  a x <= b - n gamma_l
    """
    failures: list[str] = []
    n = len(a)
    R, N, M = seq.R, seq.N, seq.M
    k = seq.k

    def fail(prop: int, level, reason: str) -> None:
        failures.append(f"property {prop} at level {level}: {reason}")

    if not 1 <= k <= n + 1:
        fail(1, "-", f"k={k} outside [1, n+1]")
    recon_a = Vector.zero(n)
    recon_b = 0
    for i, (a_i, b_i, gamma_i) in enumerate(seq.levels, start=1):
        recon_a = recon_a + M ** (k - i) * a_i
        recon_b += M ** (k - i) * b_i
        if a_i.norm_linf() > 11 * n * N**n:
            fail(1, i, "level normal exceeds 11 n N^n")
        if abs(b_i) > R * a_i.norm_linf() + 1:
            fail(1, i, "level rhs exceeds R ||a_i|| + 1")
        if gamma_i < 0:
            fail(1, i, "negative gamma")
    if seq.levels[-1][2] != 0:
        fail(1, k, "gamma_k must be zero")
    if recon_a != seq.a_prime or recon_b != seq.b_prime:
        fail(1, "-", "a', b' are not the M-adic combination of the levels")
    if seq.a_prime.norm_linf() > N**n * M ** (n + 1):
        fail(1, "-", "a' exceeds N^n M^(n+1)")
    if abs(seq.b_prime) > R * N**n * M ** (n + 1):
        fail(1, "-", "b' exceeds R N^n M^(n+1)")

    def premise(upto: int) -> InequalitySystem:
        """a' x <= b' plus the first `upto` level equalities."""
        system = InequalitySystem([seq.a_prime], [seq.b_prime], n=n)
        for a_i, b_i, _ in seq.levels[:upto]:
            system = system.with_equality(a_i, b_i)
        return system

    for l in range(1, k):
        a_l, b_l, _ = seq.levels[l - 1]
        if not implies_R(premise(l - 1), Halfspace(a_l, b_l + 1), R, strict=True):
            fail(2, l, "approximate premise does not pin the level inequality")
    for l in range(1, k + 1):
        gamma_l = seq.levels[l - 1][2]
        if not implies_R(premise(l - 1), Halfspace(a, b + gamma_l), R):
            fail(3, l, "premise does not imply the original inequality")
    for l in range(1, k):
        a_l, b_l, gamma_l = seq.levels[l - 1]
        system = InequalitySystem([a_l], [b_l - 1], n=n)
        for a_i, b_i, _ in seq.levels[: l - 1]:
            system = system.with_equality(a_i, b_i)
        if not implies_R(system, Halfspace(a, b - n * gamma_l), R):
            fail(4, l, "strict level decrease does not overshoot the original")

    return Report(valid=not failures, failures=tuple(failures))


def with_monotone_gammas(seq: SubstitutionSequence) -> SubstitutionSequence:
    """Replace each gamma by the prefix minimum; validity is preserved."""
    levels = []
    best = None
    for a_i, b_i, g in seq.levels:
        best = g if best is None else min(best, g)
        levels.append((a_i, b_i, best))
    return SubstitutionSequence(
        seq.a_prime, seq.b_prime, tuple(levels), seq.R, seq.N, seq.M
    )


# ---------------------------------------------------------------------------
# generalized Farkas machinery and leaf repair
# ---------------------------------------------------------------------------


def generalized_certificate(
    K: InequalitySystem, P: InequalitySystem
) -> FarkasCertificate:
    """Multipliers lam >= 0 on P's rows with  min over K of lam (A x - b) > 0.

    Requires K nonempty and bounded and K disjoint from P.  The certificate
    has at most n+1 nonzero entries and is verified by one exact LP before
    being returned.
    """
    combined = K.with_rows(P.rows())
    cert = is_empty(combined)
    if cert is None:
        raise ValueError("K and P intersect; no certificate exists")
    reduced = reduce_certificate(combined, cert)
    lam = Vector(reduced.multipliers[K.m :])
    _check_generalized(K, P, lam)
    return FarkasCertificate(lam)


def _check_generalized(K, P, lam: Vector, shift=None) -> Fraction:
    """Exact value of min over K of lam (A x - b - shift); must be positive."""
    objective = Vector.zero(K.n)
    offset = Fraction(0)
    for coeff, (row, rhs) in zip(lam, P.rows()):
        if coeff:
            objective = objective + coeff * row
            offset += coeff * rhs
    if shift is not None:
        offset += sum(
            (l * s for l, s in zip(lam, shift)), Fraction(0)
        )
    outcome = lp_optimize(K, objective, sense="min")
    if isinstance(outcome, Unbounded):
        raise ValueError("K is unbounded; generalized certificates need compactness")
    if not isinstance(outcome, Optimal):
        raise ValueError("K is empty; generalized certificates need K nonempty")
    margin = outcome.value - offset
    if margin <= 0:
        raise ValueError("multipliers do not certify disjointness")
    return margin


def select_violated_row(
    K: InequalitySystem,
    P: InequalitySystem,
    eps: list[Fraction],
    lam: FarkasCertificate,
) -> Optional[int]:
    """Pick the row whose relaxation must be tightened, or None.

    With lam a (<= n+1)-sparse generalized certificate for K and P disjoint:
    if max_j eps_j lam_j <= 0 then lam already certifies that K misses the
    eps-relaxed P (returns None); otherwise returns the smallest argmax j*,
    for which eps_j* > 0 and K misses P relaxed by eps - (n+1) eps_j* e_j*.
    Both conclusions are re-verified by exact LPs.
    """
    mult = lam.multipliers
    if len(mult) != P.m:
        raise ValueError("multiplier length does not match P")
    if len([v for v in mult if v != 0]) > K.n + 1:
        raise ValueError("certificate is not (n+1)-sparse")
    _check_generalized(K, P, mult)

    best = max(e * l for e, l in zip(eps, mult))
    if best <= 0:
        _check_generalized(K, P, mult, shift=eps)  # lam kills the relaxed P too
        return None
    j_star = next(i for i, (e, l) in enumerate(zip(eps, mult)) if e * l == best)
    if eps[j_star] <= 0:
        raise RuntimeError("argmax row has nonpositive relaxation")
    shifted = list(eps)
    shifted[j_star] -= (K.n + 1) * eps[j_star]
    relaxed = K.with_rows(
        (row, rhs + shifted[j]) for j, (row, rhs) in enumerate(P.rows())
    )
    if is_empty(relaxed) is None:
        raise RuntimeError("tightened relaxation is unexpectedly feasible")
    return j_star


def _cut_pairs(
    K: InequalitySystem,
    P: InequalitySystem,
    P_prime: InequalitySystem,
    seqs: list[SubstitutionSequence],
    debug: bool = False,
) -> list[tuple[Vector, int]]:
    """The (normal, rhs) pairs behind gen_cg_cuts, in emission order."""
    n = K.n
    m = P.m
    if len(seqs) != m or P_prime.m != m:
        raise ValueError("need one substitution sequence per row of P")
    for (row, rhs), seq in zip(P_prime.rows(), seqs):
        if row != seq.a_prime or rhs != seq.b_prime:
            raise ValueError("P' rows must be the sequences' replacement rows")

    lam = generalized_certificate(K, P)
    level = [1] * m  # current level per row (1-based)
    eps = [seqs[j].levels[0][2] for j in range(m)]
    v_eqs: list[tuple[Vector, int]] = []
    pairs: list[tuple[Vector, int]] = []

    while True:
        if v_eqs and _affine_empty(v_eqs, n):
            return pairs
        relaxed = K.with_rows(
            (row, rhs + eps[j]) for j, (row, rhs) in enumerate(P.rows())
        )
        if is_empty(relaxed) is not None:
            return pairs
        if len(pairs) == n + 1:
            raise RuntimeError("leaf repair did not converge within n+1 rounds")
        j_star = select_violated_row(K, P, eps, lam)
        if j_star is None:
            raise RuntimeError("certificate disagrees with the emptiness test")
        a_jp, b_jp, _ = seqs[j_star].levels[level[j_star] - 1]
        pairs.append((a_jp, b_jp))
        v_eqs.append((a_jp, b_jp))
        for j in range(m):
            while level[j] < seqs[j].k and _affine_implies_equality(
                v_eqs, *seqs[j].levels[level[j] - 1][:2], n
            ):
                level[j] += 1
            eps[j] = seqs[j].levels[level[j] - 1][2]
        if debug:
            _check_repair_invariants(K, P, P_prime, pairs, v_eqs, eps)


def gen_cg_cuts(
    K: InequalitySystem,
    P: InequalitySystem,
    P_prime: InequalitySystem,
    seqs: list[SubstitutionSequence],
    debug: bool = False,
) -> list[Vector]:
    """CG cut normals emptying K n P', drawn from the substitution levels.

    Given disjoint K and P and the substitution polyhedron P' built from one
    valid substitution sequence per row of P, returns an ordered list of at
    most 2(n+1) normals, in +/- pairs, with ``apply_cg_list(K n P', cuts)``
    empty.  Each pair forces one more level equality ``a_{j,p} x = b_{j,p}``,
    shrinking an affine subspace tracked alongside; the loop stops as soon as
    the accumulated error budget certifies emptiness outright.

    With ``debug=True`` the tracked invariants (the cut set stays inside the
    affine subspace and inside the error-relaxed P) are re-checked by LPs
    after every round.
    """
    if is_empty(K.with_rows(P_prime.rows())) is not None:
        return []  # nothing to repair
    pairs = _cut_pairs(K, P, P_prime, seqs, debug=debug)
    cuts: list[Vector] = []
    for a_jp, _ in pairs:
        cuts.append(a_jp)
        cuts.append(-a_jp)
    return cuts


def _affine_system(v_eqs, n: int) -> InequalitySystem:
    system = InequalitySystem([], [], n=n)
    for a_i, b_i in v_eqs:
        system = system.with_equality(a_i, b_i)
    return system


def _affine_empty(v_eqs, n: int) -> bool:
    return is_empty(_affine_system(v_eqs, n)) is not None


def _affine_implies_equality(v_eqs, a: Vector, b: int, n: int) -> bool:
    """Whether the affine subspace of v_eqs lies inside {a x = b}."""
    system = _affine_system(v_eqs, n)
    for objective, bound in ((a, b), (-a, -b)):
        outcome = lp_optimize(system, objective, sense="max")
        if isinstance(outcome, Unbounded):
            return False
        if isinstance(outcome, Optimal) and outcome.value != bound:
            return False
    return True  # empty V satisfies everything vacuously


def _check_repair_invariants(K, P, P_prime, pairs, v_eqs, eps) -> None:
    cuts = []
    for a_jp, _ in pairs:
        cuts.append(a_jp)
        cuts.append(-a_jp)
    current = apply_cg_list(K.with_rows(P_prime.rows()), cuts)
    if is_empty(current) is not None:
        return
    for a_i, b_i in v_eqs:
        if support_value(current, a_i) > b_i or -support_value(current, -a_i) < b_i:
            raise AssertionError("cut set escaped the learned equalities")
    for j, (row, rhs) in enumerate(P.rows()):
        if support_value(current, row) > rhs + eps[j]:
            raise AssertionError("cut set escaped the error-relaxed system")


# ---------------------------------------------------------------------------
# whole-proof recompilation
# ---------------------------------------------------------------------------


def _check_l1_radius(K: InequalitySystem, R: int) -> None:
    """Reject an explicit radius below the set's exact l1 circumradius.

    K lies in the l1 ball of radius R iff every sign pattern s in {-1, 1}^n
    has support value at most R; checked exactly for n <= 10 (2^n small LPs),
    trusted beyond that.
    """
    if R < 1:
        raise ValueError("radius must be a positive integer")
    if K.n > 10:
        return
    from itertools import product

    for signs in product((1, -1), repeat=K.n):
        value = support_value(K, Vector(signs))
        if value == NEG_INFINITY:
            return  # empty set fits in any ball
        if value == UNBOUNDED or value > R:
            raise ValueError(
                f"the set is not contained in the l1 ball of radius {R}"
            )


def recompile(
    K: InequalitySystem,
    proof: BranchNode,
    R: int | None = None,
    debug: bool = False,
) -> BranchNode:
    """Rebuild a valid branching proof using only small disjunction normals.

    Every disjunction of the input proof is replaced by its substitution
    disjunction at precision R, N = 10 n R, M = (10 n R)^(n+2), bounding all
    edge coefficients by (10 n R)^((n+2)^2) independently of the input; each
    leaf whose replacement relaxation is nonempty gets a repair chain of at
    most 4(n+1) nodes encoding the gen_cg_cuts pairs as branching steps whose
    right children are empty.  The result is again a valid proof, with node
    count at most |T| + 4(n+1) * (number of leaves).

    ``R`` defaults to ``l1_radius_bound(K)``; the input proof must be valid.
    """
    report = verify_branching_proof(K, proof)
    if not report.valid:
        raise ValueError(f"input proof is invalid: {report.failures[0]}")
    if R is None:
        R = l1_radius_bound(K)
    else:
        _check_l1_radius(K, R)
    n = K.n
    N = 10 * n * R
    M = (10 * n * R) ** (n + 2)

    def build(node: BranchNode, orig_rows, prime_rows, seqs) -> BranchNode:
        if node.is_leaf:
            return _repair_leaf(orig_rows, prime_rows, seqs)
        seq = long_to_short(node.a, node.b, R, N, M)
        flip = flip_sequence(seq)
        left = build(
            node.left,
            orig_rows + [(node.a, Fraction(node.b))],
            prime_rows + [(seq.a_prime, Fraction(seq.b_prime))],
            seqs + [seq],
        )
        right = build(
            node.right,
            orig_rows + [(-node.a, Fraction(-node.b - 1))],
            prime_rows + [(flip.a_prime, Fraction(flip.b_prime))],
            seqs + [flip],
        )
        return BranchNode(seq.a_prime, seq.b_prime, left, right)

    def _repair_leaf(orig_rows, prime_rows, seqs) -> BranchNode:
        relaxed = K.with_rows(prime_rows)
        if is_empty(relaxed) is not None:
            return BranchNode()
        P = InequalitySystem([a for a, _ in orig_rows], [b for _, b in orig_rows], n=n)
        P_prime = InequalitySystem(
            [a for a, _ in prime_rows], [b for _, b in prime_rows], n=n
        )
        pairs = _cut_pairs(K, P, P_prime, seqs, debug=debug)
        chain: list[tuple[Vector, int]] = []
        for a_jp, b_jp in pairs:
            chain.append((a_jp, b_jp))
            chain.append((-a_jp, -b_jp))
        tree = BranchNode()
        for a_c, b_c in reversed(chain):
            tree = BranchNode(a_c, b_c, tree, BranchNode())
        return tree

    return build(proof, [], [], [])
