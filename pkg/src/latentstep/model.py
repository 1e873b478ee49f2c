"""Three-step walk factorization: parametrization, reconstruction, loss, gradient.

A weighted undirected graph A on n nodes is factored through a bipartite
graph V (n original nodes to m latent nodes) and a small undirected latent
graph W on the m latent nodes, so that one step of the random walk on A is
approximated by three steps: forward on V, within W, back on V:

    pi(A) ~ pi(V) pi(W) pi(V^T) = pi(B)

with pi the row normalization. The right-hand side is the walk of an
undirected graph B exactly when the column sums of V equal the degrees of
W; then B = V D_W^-1 W D_W^-1 V^T, a symmetric rank-<=m reconstruction of
A whose degrees are the row sums of V.

Free parameters: W = matrix softmax of (W_p + W_p^T), which is symmetric,
strictly positive, and sums to 1; V = (column softmax of V_p) * D_W, which
is strictly positive and satisfies the column-sum criterion by
construction. Writing P for the column softmax, the reconstruction
collapses to B = P W P^T, which already sums to 1.

The fit minimizes the cross-entropy between the totals-normalized
adjacency matrices, -sum Abar * log(Bbar), plus an L2 penalty: the
regularization coefficient times the mean squared entry of the trainable
parameter matrices. The gradient is computed analytically (chain rule
through the softmaxes); tests check it against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import (
    AdjacencyMatrix,
    TransitionMatrix,
    ValidationError,
    check_symmetric,
    degrees,
    row_normalize,
    total_normalize,
)


def matrix_softmax(X) -> np.ndarray:
    """Softmax over all entries of a matrix, max-shifted for overflow safety."""
    X = np.asarray(X, dtype=float)
    E = np.exp(X - X.max())
    return E / E.sum()


def column_softmax(X) -> np.ndarray:
    """Independent softmax down each column, max-shifted per column."""
    X = np.asarray(X, dtype=float)
    E = np.exp(X - X.max(axis=0, keepdims=True))
    return E / E.sum(axis=0, keepdims=True)


@dataclass(frozen=True)
class LatentGraph:
    """Small undirected graph W on m latent nodes; entries sum to 1.

    Softmax-built instances are strictly positive. Fixed target graphs
    supplied by the user (identity-like, anti-diagonal) may contain exact
    zeros, but every latent node must keep a positive degree.
    """

    weights: np.ndarray

    def __post_init__(self):
        W = np.asarray(self.weights, dtype=float)
        check_symmetric(W, "latent graph")
        if (W < 0).any():
            raise ValidationError("latent graph has negative weights")
        if abs(W.sum() - 1.0) > 1e-12:
            raise ValidationError(
                f"latent graph entries sum to {W.sum()!r}, not 1"
            )
        W = (W + W.T) / 2.0
        if (W.sum(axis=1) <= 0).any():
            raise ValidationError("latent graph has a zero-degree node")
        W.flags.writeable = False
        object.__setattr__(self, "weights", W)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def degree_vector(self) -> np.ndarray:
        return self.weights.sum(axis=1)


@dataclass(frozen=True)
class BipartiteGraph:
    """Non-negative n x m graph linking original nodes to latent nodes.

    Parametrized construction yields strictly positive entries with
    column sums equal to the latent degrees (the reversibility criterion).
    """

    weights: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.weights, dtype=float)
        if V.ndim != 2:
            raise ValidationError(f"bipartite graph must be 2-d, got {V.shape}")
        if (V < 0).any():
            raise ValidationError("bipartite graph has negative weights")
        V = V.copy()
        V.flags.writeable = False
        object.__setattr__(self, "weights", V)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def m(self) -> int:
        return self.weights.shape[1]

    @property
    def column_sums(self) -> np.ndarray:
        return self.weights.sum(axis=0)


@dataclass(frozen=True)
class ParameterSet:
    """Free parameter matrices: V_p always, W_p only when W is trained."""

    V_p: np.ndarray
    W_p: np.ndarray | None = None

    def __post_init__(self):
        V_p = np.asarray(self.V_p, dtype=float)
        if V_p.ndim != 2:
            raise ValidationError(f"V_p must be 2-d, got shape {V_p.shape}")
        object.__setattr__(self, "V_p", V_p)
        if self.W_p is not None:
            W_p = np.asarray(self.W_p, dtype=float)
            if W_p.ndim != 2 or W_p.shape[0] != W_p.shape[1]:
                raise ValidationError(f"W_p must be square, got shape {W_p.shape}")
            object.__setattr__(self, "W_p", W_p)

    @property
    def w_trainable(self) -> bool:
        return self.W_p is not None

    def flatten(self) -> np.ndarray:
        """Row-major vector, V_p first, then W_p when trainable."""
        parts = [self.V_p.ravel()]
        if self.W_p is not None:
            parts.append(self.W_p.ravel())
        return np.concatenate(parts)

    @staticmethod
    def unflatten(x: np.ndarray, n: int, m: int, w_trainable: bool) -> "ParameterSet":
        x = np.asarray(x, dtype=float)
        expected = n * m + (m * m if w_trainable else 0)
        if x.size != expected:
            raise ValidationError(f"parameter vector has {x.size} entries, expected {expected}")
        V_p = x[: n * m].reshape(n, m)
        W_p = x[n * m :].reshape(m, m) if w_trainable else None
        return ParameterSet(V_p, W_p)


@dataclass(frozen=True)
class LatentStepModel:
    """Parameters plus either a fixed latent graph or a trainable W_p."""

    params: ParameterSet
    fixed_W: LatentGraph | None = None
    reg_coefficient: float = 0.1

    def __post_init__(self):
        if (self.fixed_W is None) == (not self.params.w_trainable):
            raise ValidationError(
                "exactly one of fixed_W and a trainable W_p must be present"
            )
        if self.fixed_W is not None and self.fixed_W.m != self.params.V_p.shape[1]:
            raise ValidationError(
                f"fixed latent graph has {self.fixed_W.m} nodes, "
                f"V_p has {self.params.V_p.shape[1]} columns"
            )
        if self.reg_coefficient < 0:
            raise ValidationError("reg_coefficient must be non-negative")


def build_latent_graph(W_p) -> LatentGraph:
    """W = softmax over all entries of W_p + W_p^T: symmetric, positive, sum 1."""
    W_p = np.asarray(W_p, dtype=float)
    return LatentGraph(matrix_softmax(W_p + W_p.T))


def build_bipartite(V_p, W: LatentGraph) -> BipartiteGraph:
    """V = (column softmax of V_p) * D_W, forcing column sums onto W's degrees."""
    V_p = np.asarray(V_p, dtype=float)
    if V_p.shape[1] != W.m:
        raise ValidationError(
            f"V_p has {V_p.shape[1]} columns, latent graph has {W.m} nodes"
        )
    return BipartiteGraph(column_softmax(V_p) * W.degree_vector[None, :])


def _check_reversibility(V: BipartiteGraph, W: LatentGraph, tol: float = 1e-9):
    d = W.degree_vector
    gap = np.abs(V.column_sums - d)
    worst = int(np.argmax(gap))
    if gap[worst] > tol * max(1.0, d.max()):
        raise ValidationError(
            f"reversibility criterion violated: column {worst} of V sums to "
            f"{V.column_sums[worst]!r}, latent degree is {d[worst]!r}"
        )
    return d


def reconstruct(V: BipartiteGraph, W: LatentGraph) -> AdjacencyMatrix:
    """Rank-<=m reconstruction B = V D_W^-1 W D_W^-1 V^T.

    Requires the reversibility criterion (column sums of V equal latent
    degrees); then B is symmetric, sums to 1, and its row sums are the
    row sums of V.
    """
    d = _check_reversibility(V, W)
    scaled = V.weights / d[None, :]
    return AdjacencyMatrix(scaled @ W.weights @ scaled.T)


def transition(V: BipartiteGraph, W: LatentGraph) -> TransitionMatrix:
    """Three-step walk pi(V) pi(W) pi(V^T); equals pi of the reconstruction."""
    _check_reversibility(V, W)
    piV = row_normalize(V.weights)
    piW = row_normalize(W.weights)
    piVT = row_normalize(V.weights.T)
    return TransitionMatrix(piV @ piW @ piVT)


def soft_assignments(V: BipartiteGraph, node_labels=None) -> TransitionMatrix:
    """Row-normalized V: row i is node i's distribution over the m clusters."""
    return TransitionMatrix(row_normalize(V.weights), node_labels)


def hard_assignments(S: TransitionMatrix) -> np.ndarray:
    """Per-row argmax cluster index; ties break toward the lowest index."""
    return np.argmax(S.probs, axis=1)


# --- loss and analytic gradient ----------------------------------------------


def make_loss_function(A: AdjacencyMatrix, latent, reg_coefficient: float):
    """Vectorized objective over the flattened trainable parameters.

    latent is a LatentGraph (fixed-W mode) or an int m (joint mode).
    Returns (fun, n, m, w_trainable) where fun(x) -> (value, gradient).
    The value is +inf (with a zero gradient) if the reconstruction
    underflows to exact zero on a weighted pair, so a line search can
    back off.
    """
    n = A.n
    if isinstance(latent, LatentGraph):
        fixed_W = latent.weights
        m = latent.m
        w_trainable = False
    else:
        m = int(latent)
        if m < 1:
            raise ValidationError(f"latent node count must be >= 1, got {m}")
        fixed_W = None
        w_trainable = True
    deg = degrees(A.weights)
    zero = np.flatnonzero(deg <= 0)
    if zero.size:
        raise ValidationError(f"node {zero[0]} is isolated (zero degree)")

    A_bar = total_normalize(A.weights)
    ii, jj = np.nonzero(A_bar)
    a_vals = A_bar[ii, jj]
    lam = float(reg_coefficient)
    n_params = n * m + (m * m if w_trainable else 0)

    def fun(x: np.ndarray):
        params = ParameterSet.unflatten(x, n, m, w_trainable)
        P = column_softmax(params.V_p)
        if w_trainable:
            W = matrix_softmax(params.W_p + params.W_p.T)
        else:
            W = fixed_W
        B = P @ W @ P.T
        b_vals = B[ii, jj]
        if (b_vals <= 0).any():
            return np.inf, np.zeros(n_params)
        value = float(-(a_vals * np.log(b_vals)).sum())

        G = np.zeros((n, n))
        G[ii, jj] = -a_vals / b_vals
        GS = G + G.T
        gP = GS @ P @ W
        gV_p = P * (gP - (P * gP).sum(axis=0, keepdims=True))
        if w_trainable:
            gW = P.T @ G @ P
            gS = W * (gW - (W * gW).sum())
            gW_p = gS + gS.T
            grad = np.concatenate([gV_p.ravel(), gW_p.ravel()])
        else:
            grad = gV_p.ravel()

        if lam > 0:
            value += lam * float((x * x).sum()) / n_params
            grad = grad + (2.0 * lam / n_params) * x
        return value, grad

    return fun, n, m, w_trainable


def loss(A: AdjacencyMatrix, model: LatentStepModel) -> float:
    """Cross-entropy data term plus the mean-squared-parameter penalty.

    Pairs with zero weight in A contribute nothing (0*log is 0); the
    reconstruction must carry positive mass on every weighted pair.
    """
    latent = model.fixed_W if model.fixed_W is not None else model.params.V_p.shape[1]
    fun, *_ = make_loss_function(A, latent, model.reg_coefficient)
    value, _ = fun(model.params.flatten())
    if not np.isfinite(value):
        raise ValidationError(
            "loss undefined: reconstruction has zero mass on a weighted pair"
        )
    return value


def loss_gradient(A: AdjacencyMatrix, model: LatentStepModel):
    """(dL/dV_p, dL/dW_p); the second is None in fixed-W mode."""
    latent = model.fixed_W if model.fixed_W is not None else model.params.V_p.shape[1]
    fun, n, m, w_trainable = make_loss_function(A, latent, model.reg_coefficient)
    value, grad = fun(model.params.flatten())
    if not np.isfinite(value):
        raise ValidationError(
            "loss undefined: reconstruction has zero mass on a weighted pair"
        )
    gV_p = grad[: n * m].reshape(n, m)
    gW_p = grad[n * m :].reshape(m, m) if w_trainable else None
    return gV_p, gW_p


def data_term(A: AdjacencyMatrix, model: LatentStepModel) -> float:
    """Cross-entropy term alone, with the regularizer excluded."""
    return loss(
        A,
        LatentStepModel(model.params, model.fixed_W, reg_coefficient=0.0),
    )


# --- canonical latent graphs -------------------------------------------------


def diagonal_latent(m: int) -> LatentGraph:
    """Latent graph (1/m) I: m homophilous clusters, edges kept within."""
    if m < 1:
        raise ValidationError("diagonal_latent needs m >= 1")
    return LatentGraph(np.eye(m) / m)


def offdiagonal_latent(m: int) -> LatentGraph:
    """Uniform off-diagonal latent graph: edges pushed across the m clusters.

    m=2 is the bipartite (max-cut-like) target, m=3 the tripartite one.
    """
    if m < 2:
        raise ValidationError("offdiagonal_latent needs m >= 2")
    W = (np.ones((m, m)) - np.eye(m)) / (m * (m - 1))
    return LatentGraph(W)


def paired_latent(k: int) -> LatentGraph:
    """k disjoint anti-diagonal 2x2 blocks on 2k latent nodes.

    Matches a union of k bicliques exactly: latent nodes 2c and 2c+1 are
    the two sides of biclique c.
    """
    if k < 1:
        raise ValidationError("paired_latent needs k >= 1")
    W = np.zeros((2 * k, 2 * k))
    for c in range(k):
        W[2 * c, 2 * c + 1] = W[2 * c + 1, 2 * c] = 1.0 / (2 * k)
    return LatentGraph(W)
