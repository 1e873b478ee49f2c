import math

import numpy as np
import pytest

from latentstep import (
    AdjacencyMatrix,
    TransitionMatrix,
    ValidationError,
    degrees,
    entropy,
    gen_bicliques,
    load_matrix_text,
    offdiagonal_latent,
    row_normalize,
    save_matrix_text,
    total_normalize,
)
from conftest import random_graph


def test_row_normalize_direct_division():
    out = row_normalize([[1, 1], [3, 1]])
    assert np.allclose(out, [[0.5, 0.5], [0.75, 0.25]], atol=0, rtol=0)


def test_row_normalize_identity_fixed_point():
    eye = np.eye(3)
    assert np.array_equal(row_normalize(eye), eye)


def test_row_normalize_tripartite_latent():
    # latent graph with off-diagonal weight 1/6: rows divide to [0, .5, .5] etc.
    W = offdiagonal_latent(3).weights
    expected = np.array([[0, 0.5, 0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]])
    assert np.abs(row_normalize(W) - expected).max() < 1e-15


def test_row_normalize_rejects_zero_row():
    with pytest.raises(ValidationError, match="row 1"):
        row_normalize([[1.0, 0.0], [0.0, 0.0]])


def test_row_normalize_idempotent():
    rng = np.random.default_rng(1)
    for _ in range(20):
        M = rng.uniform(0.1, 2.0, (5, 3))
        once = row_normalize(M)
        assert np.abs(row_normalize(once) - once).max() <= 1e-12


def test_normalizers_scale_invariant():
    rng = np.random.default_rng(2)
    for c in (1e-6, 0.5, 3.0, 1e6):
        M = rng.uniform(0.1, 2.0, (4, 4))
        assert np.abs(row_normalize(c * M) - row_normalize(M)).max() <= 1e-12
        assert np.abs(total_normalize(c * M) - total_normalize(M)).max() <= 1e-12


def test_total_normalize_uniform():
    out = total_normalize([[1, 1], [1, 1]])
    assert np.array_equal(out, np.full((2, 2), 0.25))


def test_total_normalize_latent_fixed_point():
    W = offdiagonal_latent(2).weights
    assert np.array_equal(total_normalize(W), W)


def test_total_normalize_biclique_union():
    # oracle: enumerate the nonzero ordered entries of the generated graph
    A = gen_bicliques(3, 10, 10)
    nnz = int(np.count_nonzero(A.weights))
    assert nnz == 600
    out = total_normalize(A.weights)
    assert np.allclose(out[A.weights > 0], 1.0 / nnz, atol=0, rtol=0)
    assert abs(out.sum() - 1.0) <= 1e-12


def test_total_normalize_rejects_zero_matrix():
    with pytest.raises(ValidationError):
        total_normalize(np.zeros((2, 2)))


def test_degrees_examples():
    W3 = offdiagonal_latent(3).weights
    assert np.abs(degrees(W3, "rows") - 1.0 / 3.0).max() < 1e-15
    W2 = offdiagonal_latent(2).weights
    assert np.array_equal(degrees(W2, "rows"), [0.5, 0.5])
    A = gen_bicliques(3, 10, 10)
    assert np.array_equal(degrees(A.weights, "rows"), np.full(60, 10.0))


def test_degrees_rows_equal_columns_for_symmetric():
    rng = np.random.default_rng(3)
    M = rng.uniform(0, 1, (6, 6))
    M = M + M.T
    assert np.array_equal(degrees(M, "rows"), degrees(M, "columns"))


def test_entropy_examples():
    assert entropy(np.full((2, 2), 0.25)) == pytest.approx(math.log(4), abs=1e-12)
    one_hot = np.zeros((3, 3))
    one_hot[1, 2] = 1.0
    assert entropy(one_hot) == 0.0
    A = gen_bicliques(3, 10, 10)
    expected = math.log(int(np.count_nonzero(A.weights)))  # 600 equal entries
    assert entropy(total_normalize(A.weights)) == pytest.approx(expected, abs=1e-9)


def test_entropy_bounded_by_log_support():
    rng = np.random.default_rng(4)
    for _ in range(20):
        M = rng.uniform(0, 1, (5, 5))
        M[rng.uniform(size=(5, 5)) < 0.4] = 0.0
        if M.sum() == 0:
            continue
        nnz = int(np.count_nonzero(M))
        assert entropy(total_normalize(M)) <= math.log(nnz) + 1e-9


def test_entropy_rejects_negative_and_unnormalized():
    with pytest.raises(ValidationError):
        entropy([[-0.5, 1.5], [0.0, 0.0]])
    with pytest.raises(ValidationError):
        entropy([[0.3, 0.3], [0.3, 0.3]])


def test_adjacency_requires_symmetry_and_nonnegativity():
    with pytest.raises(ValidationError, match="not symmetric"):
        AdjacencyMatrix([[0, 1], [2, 0]])
    with pytest.raises(ValidationError, match="negative"):
        AdjacencyMatrix([[0, -1], [-1, 0]])


def test_transition_matrix_row_sums_enforced():
    with pytest.raises(ValidationError):
        TransitionMatrix([[0.6, 0.3], [0.5, 0.5]])


def test_matrix_text_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    M = random_graph(rng, 5).weights
    path = tmp_path / "m.txt"
    save_matrix_text(path, M, labels=["a", "b", "c", "d", "e"])
    back, labels = load_matrix_text(path)
    assert labels == ["a", "b", "c", "d", "e"]
    # 12 significant digits: relative error per entry below 5e-12
    assert np.abs(back - M).max() < 5e-12 * max(1.0, np.abs(M).max())


def test_matrix_text_bad_header(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a header\n1 2\n")
    with pytest.raises(ValidationError):
        load_matrix_text(path)
