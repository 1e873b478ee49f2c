"""Clustering quality: cut-mass decomposition and ground-truth agreement."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .graphs import AdjacencyMatrix, TransitionMatrix, ValidationError, total_normalize


@dataclass(frozen=True)
class CutReport:
    """Edge-mass split of a graph by a hard clustering.

    pair_mass[a, b] is the fraction of total (normalized, ordered-pair)
    edge mass running between clusters a and b; the matrix is symmetric
    and sums to 1, so an unordered cluster pair (a != b) carries
    2 * pair_mass[a, b] in total.
    """

    pair_mass: np.ndarray
    within_fraction: float
    across_fraction: float

    def to_dict(self) -> dict:
        return {
            "pair_mass": [[float(x) for x in row] for row in self.pair_mass],
            "within_fraction": float(self.within_fraction),
            "across_fraction": float(self.across_fraction),
        }


@dataclass(frozen=True)
class GroundTruth:
    """Reference class per node label, e.g. vowel/consonant."""

    name: str
    classes: dict[str, str]


def cut_report(A: AdjacencyMatrix, labels, m: int) -> CutReport:
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (A.n,):
        raise ValidationError(f"expected {A.n} labels, got shape {labels.shape}")
    if labels.min() < 0 or labels.max() >= m:
        raise ValidationError(
            f"cluster label out of range [0, {m}): {labels[np.argmax((labels < 0) | (labels >= m))]}"
        )
    A_bar = total_normalize(A.weights)
    onehot = np.eye(m)[labels]
    pair_mass = onehot.T @ A_bar @ onehot
    within = float(np.trace(pair_mass))
    return CutReport(pair_mass, within, 1.0 - within)


def cluster_accuracy(labels, truth: GroundTruth, node_labels) -> float:
    """Best agreement between clusters and truth classes, in [0, 1].

    Maximized over all injective mappings between cluster indices and
    class names (enumerated exactly; fine for the <= 8 clusters used
    here). Invariant under any relabeling of the clusters.
    """
    labels = np.asarray(labels, dtype=int)
    node_labels = list(node_labels)
    if len(node_labels) != labels.shape[0]:
        raise ValidationError(
            f"{len(node_labels)} node labels for {labels.shape[0]} cluster labels"
        )
    classes = []
    for name in node_labels:
        if name not in truth.classes:
            raise ValidationError(f"node {name!r} has no ground-truth class")
        classes.append(truth.classes[name])
    clusters = sorted(set(labels.tolist()))
    class_names = sorted(set(classes))
    if len(clusters) > 8 or len(class_names) > 8:
        raise ValidationError("cluster_accuracy enumerates at most 8 groups")
    n = len(node_labels)
    best = 0
    if len(clusters) <= len(class_names):
        for image in itertools.permutations(class_names, len(clusters)):
            mapping = dict(zip(clusters, image))
            best = max(best, sum(mapping[c] == t for c, t in zip(labels.tolist(), classes)))
    else:
        for image in itertools.permutations(clusters, len(class_names)):
            mapping = dict(zip(class_names, image))
            best = max(best, sum(mapping[t] == c for c, t in zip(labels.tolist(), classes)))
    return best / n


def affinity_margin(S: TransitionMatrix, node: str, cluster: int) -> float:
    """Probability the soft clustering gives node for the cluster."""
    if S.node_labels is None:
        raise ValidationError("soft assignments carry no node labels")
    try:
        row = S.node_labels.index(node)
    except ValueError:
        raise ValidationError(f"unknown node {node!r}") from None
    if not 0 <= cluster < S.probs.shape[1]:
        raise ValidationError(f"cluster {cluster} out of range")
    return float(S.probs[row, cluster])


def load_ground_truth(path, name: str | None = None) -> GroundTruth:
    """JSON object mapping node label -> class string."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read ground truth {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return GroundTruth(name or str(path), {str(k): str(v) for k, v in data.items()})


def _bundled_truth(filename: str, name: str) -> GroundTruth:
    path = resources.files("latentstep").joinpath("data", filename)
    return load_ground_truth(str(path), name)


def letter_ground_truth() -> GroundTruth:
    """Vowels {a e i o u y} vs consonants, for the orthographic graph."""
    return _bundled_truth("letter_classes.json", "letters")


def phoneme_ground_truth() -> GroundTruth:
    """Vowel / stop / nasal-liquid / other classes for the 39 phonemes."""
    return _bundled_truth("phoneme_classes.json", "phonemes")
