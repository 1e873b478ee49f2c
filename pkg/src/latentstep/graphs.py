"""Dense symmetric graph containers and the normalization operators.

A weighted undirected graph lives in a symmetric non-negative matrix.
Row normalization turns it into the transition matrix of the random walk
on the graph; total normalization turns it into a probability distribution
over ordered node pairs. Everything downstream (factorization, loss,
evaluation) is built from these two operators plus degree sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class ValidationError(ValueError):
    """Invalid input data or configuration (CLI exit code 2)."""


def _as_matrix(M) -> np.ndarray:
    out = np.asarray(M, dtype=float)
    if out.ndim != 2:
        raise ValidationError(f"expected a 2-d matrix, got shape {out.shape}")
    return out


def check_symmetric(M: np.ndarray, what: str = "matrix") -> None:
    """Reject matrices that are not symmetric within 1e-9 * max|M|."""
    M = _as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise ValidationError(f"{what} not square: shape {M.shape}")
    scale = np.abs(M).max() if M.size else 0.0
    if scale > 0 and np.abs(M - M.T).max() > 1e-9 * scale:
        raise ValidationError(f"{what} not symmetric")


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric non-negative weighted graph on n nodes.

    Self-loops are ordinary mass on the diagonal. Node labels are
    optional display strings, one per node.
    """

    weights: np.ndarray
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        W = _as_matrix(self.weights)
        check_symmetric(W, "adjacency matrix")
        if (W < 0).any():
            raise ValidationError("adjacency matrix has negative weights")
        W = (W + W.T) / 2.0  # exact symmetry for downstream identities
        W.flags.writeable = False
        object.__setattr__(self, "weights", W)
        if self.node_labels is not None:
            labels = tuple(str(s) for s in self.node_labels)
            if len(labels) != W.shape[0]:
                raise ValidationError(
                    f"{len(labels)} node labels for {W.shape[0]} nodes"
                )
            object.__setattr__(self, "node_labels", labels)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic matrix: row i is the step distribution from node i."""

    probs: np.ndarray
    node_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        P = _as_matrix(self.probs)
        if (P < 0).any():
            raise ValidationError("transition matrix has negative entries")
        if np.abs(P.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValidationError("transition matrix rows do not sum to 1")
        P = P.copy()
        P.flags.writeable = False
        object.__setattr__(self, "probs", P)
        if self.node_labels is not None:
            object.__setattr__(self, "node_labels", tuple(self.node_labels))

    @property
    def n(self) -> int:
        return self.probs.shape[0]


def row_normalize(M) -> np.ndarray:
    """Divide each row by its sum.

    Rejects zero rows: an isolated node has no step distribution, and
    silently patching one would corrupt the factorization downstream.
    """
    M = _as_matrix(M)
    if (M < 0).any():
        raise ValidationError("row_normalize: negative entries")
    sums = M.sum(axis=1)
    zero = np.flatnonzero(sums <= 0)
    if zero.size:
        raise ValidationError(f"row_normalize: row {zero[0]} sums to zero")
    return M / sums[:, None]


def total_normalize(M) -> np.ndarray:
    """Divide the matrix by the sum of all of its entries."""
    M = _as_matrix(M)
    if (M < 0).any():
        raise ValidationError("total_normalize: negative entries")
    total = M.sum()
    if total <= 0:
        raise ValidationError("total_normalize: all entries are zero")
    return M / total


def degrees(M, axis: str = "rows") -> np.ndarray:
    """Row sums (axis='rows') or column sums (axis='columns').

    Zero sums are permitted here; callers that need strict positivity
    (normalization, reconstruction) enforce it themselves.
    """
    M = _as_matrix(M)
    if (M < 0).any():
        raise ValidationError("degrees: negative entries")
    if axis == "rows":
        return M.sum(axis=1)
    if axis == "columns":
        return M.sum(axis=0)
    raise ValidationError(f"degrees: unknown axis {axis!r}")


def entropy(M) -> float:
    """Shannon entropy -sum m*log(m) of a matrix summing to 1, natural log.

    0*log(0) counts as 0. Serves as the exact lower bound of the
    cross-entropy data term (Gibbs inequality).
    """
    M = np.asarray(M, dtype=float)
    if (M < 0).any():
        raise ValidationError("entropy: negative entries")
    if abs(M.sum() - 1.0) > 1e-9:
        raise ValidationError(f"entropy: entries sum to {M.sum()!r}, not 1")
    pos = M[M > 0]
    return float(-(pos * np.log(pos)).sum())


# --- matrix text interchange -------------------------------------------------
#
# First line "n m", then n lines of m space-separated decimal reals.
# Node labels, when present, travel in a sidecar JSON array at
# <path>.labels.json.


def save_matrix_text(path, M, labels=None) -> None:
    M = _as_matrix(M)
    n, m = M.shape
    lines = [f"{n} {m}"]
    for row in M:
        lines.append(" ".join(f"{x:.12g}" for x in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    if labels is not None:
        with open(f"{path}.labels.json", "w", encoding="utf-8") as fh:
            json.dump(list(labels), fh)
            fh.write("\n")


def load_matrix_text(path) -> tuple[np.ndarray, list[str] | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    except OSError as exc:
        raise ValidationError(f"cannot read matrix file {path}: {exc}") from exc
    if not lines:
        raise ValidationError(f"matrix file {path} is empty")
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValidationError(f"{path}: bad header line {lines[0]!r}") from exc
    if len(lines) - 1 != n:
        raise ValidationError(f"{path}: expected {n} rows, found {len(lines) - 1}")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        vals = ln.split()
        if len(vals) != m:
            raise ValidationError(f"{path}: line {i} has {len(vals)} values, expected {m}")
        try:
            rows.append([float(v) for v in vals])
        except ValueError as exc:
            raise ValidationError(f"{path}: line {i}: {exc}") from exc
    labels = None
    try:
        with open(f"{path}.labels.json", encoding="utf-8") as fh:
            labels = [str(s) for s in json.load(fh)]
    except FileNotFoundError:
        pass
    return np.array(rows, dtype=float), labels
