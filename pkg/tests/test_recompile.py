"""Substitution sequences, generalized certificates, leaf repair, recompile."""

from fractions import Fraction
from random import Random

import pytest

from branchproofs.families import thin_segment
from branchproofs.geometry import apply_cg_list, l1_radius_bound
from branchproofs.prooftree import proof_stats, verify_branching_proof
from branchproofs.recompile import (
    SubstitutionSequence,
    flip_sequence,
    gen_cg_cuts,
    generalized_certificate,
    long_to_short,
    recompile,
    select_violated_row,
    verify_substitution_sequence,
    with_monotone_gammas,
)
from branchproofs.simplex import FarkasCertificate, InequalitySystem, is_empty
from branchproofs.vectors import Vector

from randgen import random_branching_proof, random_integer_free_polytope


def test_long_to_short_passthrough():
    seq = long_to_short(Vector([7]), 3, R=2, N=20, M=8000)
    assert seq.k == 1
    assert seq.a_prime == Vector([7]) and seq.b_prime == 3
    assert seq.levels[0][2] == 0


def test_long_to_short_unit_vector():
    seq = long_to_short(Vector([1, 0, 0]), 0, R=2, N=60, M=60**5)
    assert seq.k == 1
    assert seq.a_prime == Vector([1, 0, 0]) and seq.b_prime == 0


def test_long_to_short_thin_segment_trace():
    seq = long_to_short(Vector([10**6, 1]), 0, R=3, N=60, M=60**4)
    assert seq.k == 2
    assert seq.a_prime == Vector([60**4, 1])
    assert seq.b_prime == 0
    a1, b1, g1 = seq.levels[0]
    assert (a1, b1) == (Vector([1, 0]), 0)
    assert g1 == Fraction(2 * 10**6, 10)  # 2 alpha / (5 n) with alpha = 10^6
    a2, b2, g2 = seq.levels[1]
    assert (a2, b2, g2) == (Vector([0, 1]), 0, 0)


def test_long_to_short_rejects_bad_input():
    with pytest.raises(ValueError):
        long_to_short(Vector([0, 0]), 0, R=1, N=10, M=100)
    with pytest.raises(ValueError):
        long_to_short(Vector([5]), 0, R=1, N=4, M=100)  # R/N = 1/4


def test_residual_zero_coordinates_increase():
    trace: list[Vector] = []
    long_to_short(Vector([10**6, 123457, 3]), 5, R=2, N=60, M=60**5,
                  residual_trace=trace)
    zero_counts = [sum(1 for v in r if v == 0) for r in trace]
    assert all(b > a for a, b in zip(zero_counts, zero_counts[1:]))


def test_verify_substitution_both_orientations():
    a, b = Vector([10**6, 1]), 0
    seq = long_to_short(a, b, R=3, N=60, M=60**4)
    assert verify_substitution_sequence(seq, a, b).valid
    flip = flip_sequence(seq)
    assert verify_substitution_sequence(flip, -a, -b - 1).valid


def test_verify_detects_tampered_rhs():
    a, b = Vector([10**6, 1]), 0
    seq = long_to_short(a, b, R=3, N=60, M=60**4)
    bump = seq.R * int(seq.a_prime.norm_linf())
    tampered = SubstitutionSequence(
        seq.a_prime, seq.b_prime + bump, seq.levels, seq.R, seq.N, seq.M
    )
    report = verify_substitution_sequence(tampered, a, b)
    assert not report.valid
    # the M-adic reconstruction breaks along with property 2 or 3
    assert any("property" in f for f in report.failures)


def test_verify_k1_vacuous_properties():
    seq = long_to_short(Vector([3, 1]), 2, R=2, N=40, M=40**4)
    assert seq.k == 1
    report = verify_substitution_sequence(seq, Vector([3, 1]), 2)
    assert report.valid  # properties 2 and 4 hold vacuously


def test_flip_is_involution():
    seq = long_to_short(Vector([10**6, 1]), 0, R=3, N=60, M=60**4)
    assert flip_sequence(flip_sequence(seq)) == seq


def test_monotone_gammas_preserve_validity():
    a, b = Vector([987654, 323]), 17
    seq = long_to_short(a, b, R=2, N=40, M=40**4)
    mono = with_monotone_gammas(seq)
    gammas = [g for _, _, g in mono.levels]
    assert all(x >= y for x, y in zip(gammas, gammas[1:]))
    assert gammas[-1] == 0
    assert verify_substitution_sequence(mono, a, b).valid


def test_generalized_certificate_examples():
    # K = {x = 1/2} inside [-2, 2], P = {x <= 0, -x <= -1}
    K = InequalitySystem([[2], [-2], [1], [-1]], [1, -1, 2, 2])
    P = InequalitySystem([[1], [-1]], [0, -1])
    lam = generalized_certificate(K, P)
    assert len(lam.multipliers) == 2
    assert all(v >= 0 for v in lam.multipliers)

    box = InequalitySystem.box(1, 0, 1)
    single = generalized_certificate(box, InequalitySystem([[1]], [-1]))
    assert single.support() == (0,)

    with pytest.raises(ValueError, match="intersect"):
        generalized_certificate(box, InequalitySystem([[1]], [0]))


def test_select_violated_row_examples():
    K = InequalitySystem([[2], [-2], [1], [-1]], [1, -1, 2, 2])
    P = InequalitySystem([[1], [-1]], [0, -1])
    lam = generalized_certificate(K, P)
    # zero relaxation: the certificate already witnesses emptiness
    assert select_violated_row(K, P, [Fraction(0), Fraction(0)], lam) is None
    # a single positive entry at a support row gets picked
    eps = [Fraction(0), Fraction(0)]
    support = lam.support()[0]
    eps[support] = Fraction(1, 10)
    assert select_violated_row(K, P, eps, lam) == support
    with pytest.raises(ValueError):
        select_violated_row(K, P, eps, FarkasCertificate(Vector([0, 0])))


def test_gen_cg_cuts_thin_segment_leaf():
    K, _ = thin_segment(10**6)
    seq = long_to_short(Vector([10**6, 1]), 0, R=3, N=60, M=60**4)
    P = InequalitySystem([Vector([10**6, 1])], [0], n=2)
    P_prime = InequalitySystem([seq.a_prime], [seq.b_prime], n=2)
    cuts = gen_cg_cuts(K, P, P_prime, [seq], debug=True)
    assert cuts == [Vector([1, 0]), Vector([-1, 0])]
    final = apply_cg_list(K.with_rows(P_prime.rows()), cuts)
    assert is_empty(final) is not None
    # select_violated_row picks the only row of P here
    lam = generalized_certificate(K, P)
    assert select_violated_row(K, P, [seq.levels[0][2]], lam) == 0


def test_gen_cg_cuts_empty_intersection_returns_nothing():
    K, _ = thin_segment(10)
    seq = long_to_short(Vector([10, 1]), -100, R=3, N=60, M=60**4)
    P = InequalitySystem([Vector([10, 1])], [-100], n=2)
    P_prime = InequalitySystem([seq.a_prime], [seq.b_prime], n=2)
    assert is_empty(K.with_rows(P_prime.rows())) is not None
    assert gen_cg_cuts(K, P, P_prime, [seq]) == []


def test_recompile_thin_segment():
    K, proof = thin_segment(10**6)
    rebuilt = recompile(K, proof, R=3)
    assert verify_branching_proof(K, rebuilt).valid
    stats = proof_stats(rebuilt)
    assert stats.length == 11  # 3 skeleton nodes + 2 repair cuts per leaf
    assert stats.length <= 3 + 4 * 3 * 2
    assert stats.max_coeff <= (10 * 2 * 3) ** 16


def test_recompile_small_coefficients_pass_through():
    K, proof = thin_segment(2)
    rebuilt = recompile(K, proof, R=3)
    assert verify_branching_proof(K, rebuilt).valid
    assert rebuilt.node_count() == proof.node_count()
    assert rebuilt.a == proof.a and rebuilt.b == proof.b


def test_recompile_empty_root():
    empty = InequalitySystem([[1, 0], [-1, 0]], [0, -1])
    from branchproofs.prooftree import BranchNode

    rebuilt = recompile(empty, BranchNode())
    assert rebuilt.is_leaf


def test_recompile_rejects_invalid_proof():
    from branchproofs.prooftree import BranchNode

    K, _ = thin_segment(10)
    bad = BranchNode(Vector([1, 0]), 0, BranchNode(), BranchNode())
    with pytest.raises(ValueError, match="invalid"):
        recompile(K, bad)


def test_recompile_random_proofs():
    rng = Random(61)
    for _ in range(6):
        K = random_integer_free_polytope(rng, 2)
        proof = random_branching_proof(rng, K)
        R = l1_radius_bound(K)
        rebuilt = recompile(K, proof)
        assert verify_branching_proof(K, rebuilt).valid
        stats = proof_stats(rebuilt)
        n = K.n
        assert stats.max_coeff <= (10 * n * R) ** ((n + 2) ** 2)
        bound = proof.node_count() + 4 * (n + 1) * proof.leaf_count()
        assert stats.length <= bound


def test_recompile_rejects_undersized_radius():
    K, proof = thin_segment(10**6)
    with pytest.raises(ValueError, match="l1 ball"):
        recompile(K, proof, R=1)


def test_recompile_rotated_slabs():
    """Big-coefficient slabs in random orientation, n in {2, 3}."""
    from branchproofs.prooftree import BranchNode, certify, verify_certified_proof
    import math

    rng = Random(20250811)
    trials = 0
    while trials < 10:
        n = rng.choice([2, 3])
        M = 10 ** rng.randint(3, 8)
        big = rng.randrange(n)
        a = Vector([M if i == big else rng.randint(-3, 3) for i in range(n)])
        c = rng.randint(-2, 2) + Fraction(rng.randint(1, 3), 4)
        rows = [(a, c), (-a, -c)]
        for i in range(n):
            if i != big:
                rows.append((Vector.unit(n, i), rng.randint(1, 2)))
                rows.append((-Vector.unit(n, i), rng.randint(0, 1)))
        K = InequalitySystem([r for r, _ in rows], [b for _, b in rows], n=n)
        if is_empty(K) is not None:
            continue
        proof = BranchNode(a, math.floor(c), BranchNode(), BranchNode())
        if not verify_branching_proof(K, proof).valid:
            continue
        trials += 1
        rebuilt = recompile(K, proof)
        assert verify_branching_proof(K, rebuilt).valid
        R = l1_radius_bound(K)
        stats = proof_stats(rebuilt)
        assert stats.max_coeff <= (10 * n * R) ** ((n + 2) ** 2)
        assert stats.length <= 3 + 4 * (n + 1) * 2
        assert verify_certified_proof(K, certify(K, rebuilt))
