import numpy as np
import pytest

from latentstep import AdjacencyMatrix


def central_differences(fun, x, h=1e-5):
    """Independent gradient oracle: central finite differences, coordinate-wise."""
    g = np.zeros_like(x)
    for i in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        g[i] = (fun(xp)[0] - fun(xm)[0]) / (2.0 * h)
    return g


def random_graph(rng, n):
    """Random symmetric non-negative test graph with no isolated nodes."""
    M = rng.uniform(0.0, 1.0, (n, n))
    M[rng.uniform(size=(n, n)) < 0.3] = 0.0
    M = M + M.T
    M = M + np.eye(n) * 0.1
    return AdjacencyMatrix(M)


@pytest.fixture(scope="session")
def word_list_10k():
    from latentstep import bundled_word_list_path, load_word_list

    return load_word_list(bundled_word_list_path())


@pytest.fixture(scope="session")
def pronunciations():
    from latentstep import bundled_dict_path, parse_pronouncing_dict

    return parse_pronouncing_dict(bundled_dict_path())
