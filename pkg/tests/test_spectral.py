"""Block extraction, spectral radius, block solves, geometric series."""

import math

import numpy as np
import pytest

from graphkms import (
    InputError,
    PhaseError,
    StructureError,
    canonical_numbering,
    decompose,
    neumann_total,
    partition_vertices,
    solve_tau1,
    solve_tau2,
    spectral_radius,
)

from conftest import (
    char_poly_max_root,
    complete2,
    loop_and_sink,
    path3,
    random_acyclic_graph,
    random_cyclic_sink_graph,
)


def _blocks(g):
    p = partition_vertices(g)
    num = canonical_numbering(g, p)
    return decompose(g.b_matrix(), num, p), num, p


def test_decompose_loop_and_sink():
    blocks, _, _ = _blocks(loop_and_sink())
    assert blocks.sizes == (1, 0, 1)
    assert blocks.b11.tolist() == [[1.0]]
    assert blocks.b13.tolist() == [[1.0]]
    assert blocks.b12.shape == (1, 0)
    assert blocks.b22.shape == (0, 0)
    assert blocks.b23.shape == (0, 1)


def test_decompose_path3():
    blocks, _, _ = _blocks(path3())
    assert blocks.sizes == (0, 2, 1)
    assert blocks.b22.tolist() == [[0.0, 1.0], [0.0, 0.0]]
    assert blocks.b23.tolist() == [[0.0], [1.0]]


def test_decompose_complete2():
    blocks, _, _ = _blocks(complete2())
    assert blocks.sizes == (2, 0, 0)
    assert blocks.b11.tolist() == [[1.0, 1.0], [1.0, 1.0]]


def test_decompose_rejects_forbidden_blocks():
    g = loop_and_sink()
    p = partition_vertices(g)
    num = canonical_numbering(g, p)
    bad = g.b_matrix()
    bad[1, 0] = 1.0  # fake edge sink -> core
    with pytest.raises(StructureError):
        decompose(bad, num, p)


def test_decompose_reassemble_roundtrip_random():
    rng = np.random.default_rng(23)
    for _ in range(40):
        g = random_cyclic_sink_graph(rng) if rng.random() < 0.5 else random_acyclic_graph(rng)
        blocks, num, _ = _blocks(g)
        perm = num.permute_matrix(g.b_matrix())
        assert np.array_equal(blocks.reassemble(), perm)
        # undoing the permutation recovers the transposed adjacency exactly
        inv = np.argsort(num.new_to_old)
        assert np.array_equal(blocks.reassemble()[np.ix_(inv, inv)], g.b_matrix())


def test_spectral_radius_constant_row_sums():
    result = spectral_radius(np.ones((2, 2)))
    assert result.irreducible
    assert result.lambda0 == pytest.approx(2.0, abs=1e-11)
    assert result.eigenvector == pytest.approx([0.5, 0.5], abs=1e-11)


def test_spectral_radius_single_loop():
    result = spectral_radius(np.array([[1.0]]))
    assert result.lambda0 == pytest.approx(1.0, abs=1e-12)
    assert result.irreducible


def test_spectral_radius_period_two():
    # eigenvalues are +1 and -1; the +I shift handles the periodicity
    result = spectral_radius(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert result.lambda0 == pytest.approx(1.0, abs=1e-11)
    assert result.irreducible


def test_spectral_radius_empty_matrix():
    result = spectral_radius(np.zeros((0, 0)))
    assert result.lambda0 == 0.0
    assert result.eigenvector is None


def test_spectral_radius_nilpotent():
    result = spectral_radius(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert result.lambda0 == 0.0
    assert not result.irreducible


def test_spectral_radius_reducible_flags_nonunique():
    # two decoupled loops of equal rate: radius well-defined, vector not unique
    result = spectral_radius(np.eye(2))
    assert result.lambda0 == pytest.approx(1.0, abs=1e-12)
    assert not result.irreducible


def test_spectral_radius_reducible_defective():
    # chained loops of equal rate give a defective dominant eigenvalue; the
    # per-component iteration still resolves the radius at full tolerance
    m = np.array([[1.0, 1.0], [0.0, 1.0]])
    result = spectral_radius(m)
    assert result.lambda0 == pytest.approx(1.0, abs=1e-11)
    assert not result.irreducible


def test_spectral_radius_matches_char_poly_oracle():
    rng = np.random.default_rng(29)
    for _ in range(80):
        n = int(rng.integers(1, 9))
        if rng.random() < 0.5:
            m = (rng.random((n, n)) < 0.4).astype(float)
        else:
            m = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
        assert spectral_radius(m).lambda0 == pytest.approx(
            char_poly_max_root(m), abs=1e-8)


def test_spectral_radius_rejects_negative():
    with pytest.raises(InputError):
        spectral_radius(np.array([[-1.0]]))


def test_eigen_equation_holds_when_irreducible():
    rng = np.random.default_rng(83)
    checked = 0
    for _ in range(60):
        n = int(rng.integers(1, 8))
        m = (rng.random((n, n)) < 0.5).astype(float) * rng.uniform(0.5, 2.0, (n, n))
        result = spectral_radius(m)
        if not result.irreducible:
            continue
        checked += 1
        assert result.eigenvector.sum() == pytest.approx(1.0, abs=1e-12)
        assert result.eigenvector.min() >= 0.0
        residual = np.abs(m @ result.eigenvector - result.lambda0 * result.eigenvector).max()
        assert residual <= 1e-8 * max(1.0, result.lambda0)
    assert checked >= 10


def test_solve_tau2_empty():
    out = solve_tau2(np.zeros((0, 0)), np.zeros((0, 1)), np.ones(1), 1.0)
    assert out.shape == (0,)


def test_solve_tau2_path3_back_substitution():
    blocks, _, _ = _blocks(path3())
    for beta in (0.3, 1.0, 2.5):
        tau2 = solve_tau2(blocks.b22, blocks.b23, np.array([1.0]), beta)
        assert tau2 == pytest.approx([math.exp(-2 * beta), math.exp(-beta)], abs=1e-15)


def test_solve_tau2_single_term():
    b22 = np.zeros((2, 2))
    b23 = np.array([[1.0], [1.0]])
    beta = 0.8
    tau2 = solve_tau2(b22, b23, np.array([1.0]), beta)
    assert tau2 == pytest.approx([math.exp(-beta)] * 2, abs=1e-15)


def test_solve_tau1_scalar_loop():
    blocks, _, _ = _blocks(loop_and_sink())
    for beta in (0.2, 0.69, 1.7):
        tau1 = solve_tau1(blocks.b11, blocks.b12, blocks.b13,
                          np.zeros(0), np.array([1.0]), beta, 1.0)
        assert tau1 == pytest.approx([1.0 / (math.exp(beta) - 1.0)], rel=1e-13)


def test_solve_tau1_empty_core():
    out = solve_tau1(np.zeros((0, 0)), np.zeros((0, 0)), np.zeros((0, 1)),
                     np.zeros(0), np.ones(1), 1.0, 0.0)
    assert out.shape == (0,)


def test_solve_tau1_zero_rhs():
    out = solve_tau1(np.array([[1.0]]), np.zeros((1, 0)), np.zeros((1, 1)),
                     np.zeros(0), np.zeros(1), 1.0, 1.0)
    assert out == pytest.approx([0.0], abs=0.0)


def test_solve_tau1_phase_error_at_or_below_transition():
    b11 = np.ones((2, 2))  # radius 2
    args = (b11, np.zeros((2, 0)), np.ones((2, 1)), np.zeros(0), np.ones(1))
    with pytest.raises(PhaseError):
        solve_tau1(*args, math.log(2.0), 2.0)
    with pytest.raises(PhaseError):
        solve_tau1(*args, 0.5, 2.0)


def test_solve_tau1_residual_property_random():
    rng = np.random.default_rng(31)
    for _ in range(60):
        n1 = int(rng.integers(1, 6))
        b11 = (rng.random((n1, n1)) < 0.5).astype(float) * rng.integers(1, 3, (n1, n1))
        lam = spectral_radius(b11).lambda0
        beta = math.log(lam + float(rng.uniform(0.05, 2.0)) + 1.0)
        b13 = rng.random((n1, 2))
        tau3 = rng.random(2)
        tau1 = solve_tau1(b11, np.zeros((n1, 0)), b13, np.zeros(0), tau3, beta, lam)
        rhs = b13 @ tau3
        residual = np.abs((math.exp(beta) * np.eye(n1) - b11) @ tau1 - rhs).max()
        assert residual <= 1e-10 * np.abs(rhs).max()
        assert tau1.min() >= 0.0


def test_neumann_total_zero_matrix():
    out = neumann_total(np.zeros((3, 3)), np.array([0.0, 0.0, 1.0]), 0.5)
    assert out.tolist() == [0.0, 0.0, 1.0]


def test_neumann_total_loop_and_sink_log2():
    g = loop_and_sink()
    out = neumann_total(g.b_matrix(), np.array([0.0, 1.0]), math.log(2.0))
    assert out == pytest.approx([1.0, 1.0], abs=1e-14)


def test_neumann_total_single_edge():
    g = np.array([[0.0, 1.0], [0.0, 0.0]])  # B for v1 -> v2
    beta = 0.9
    out = neumann_total(g, np.array([0.0, 1.0]), beta)
    assert out == pytest.approx([math.exp(-beta), 1.0], abs=1e-15)


def test_neumann_total_diverges_below_transition():
    b = 2.0 * np.ones((2, 2))
    with pytest.raises(PhaseError):
        neumann_total(b, np.ones(2), 0.1, max_terms=2000)


def test_neumann_matches_block_assembly_random():
    rng = np.random.default_rng(37)
    checked = 0
    for _ in range(60):
        g = random_cyclic_sink_graph(rng)
        p = partition_vertices(g)
        num = canonical_numbering(g, p)
        blocks = decompose(g.b_matrix(), num, p)
        lam = spectral_radius(blocks.b11).lambda0
        beta = math.log(lam + 0.01) + float(rng.uniform(0.0, 1.5))
        n1, n2, n3 = blocks.sizes
        for sink_pos in range(n3):
            tau3 = np.zeros(n3)
            tau3[sink_pos] = 1.0
            tau2 = solve_tau2(blocks.b22, blocks.b23, tau3, beta)
            tau1 = solve_tau1(blocks.b11, blocks.b12, blocks.b13, tau2, tau3, beta, lam)
            assembled = num.unpermute_vector(np.concatenate([tau1, tau2, tau3]))
            padded = num.unpermute_vector(np.concatenate([np.zeros(n1 + n2), tau3]))
            series = neumann_total(g.b_matrix(), padded, beta)
            assert np.abs(series - assembled).max() <= 1e-10
            checked += 1
    assert checked >= 60
