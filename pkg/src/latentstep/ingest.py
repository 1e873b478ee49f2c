"""Graph construction: synthetic biclique unions, bigram graphs, edge lists.

The two corpus graphs put letters (or phonemes) at the nodes and count,
across all words in a list, how often two symbols sit directly next to
each other. Counting is directed then symmetrized (A = C + C^T), so a
doubled symbol contributes 2 to its diagonal and the total mass is twice
the number of adjacent ordered pairs consumed.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .graphs import AdjacencyMatrix, ValidationError

log = logging.getLogger(__name__)

LETTERS = tuple("abcdefghijklmnopqrstuvwxyz")

# Stress-stripped ARPAbet inventory of the pronouncing dictionary.
ARPABET_PHONEMES = (
    "AA", "AE", "AH", "AO", "AW", "AY", "B", "CH", "D", "DH", "EH", "ER",
    "EY", "F", "G", "HH", "IH", "IY", "JH", "K", "L", "M", "N", "NG", "OW",
    "OY", "P", "R", "S", "SH", "T", "TH", "UH", "UW", "V", "W", "Y", "Z",
    "ZH",
)

_ALT_HEADWORD = re.compile(r"\(\d+\)$")
_WORD_RE = re.compile(r"[a-z]+")


def bundled_data_path(name: str) -> Path:
    """Filesystem path of a data file shipped with the package."""
    return Path(str(resources.files("latentstep").joinpath("data", name)))


def bundled_word_list_path() -> Path:
    return bundled_data_path("words_10k.txt")


def bundled_dict_path() -> Path:
    return bundled_data_path("cmudict.txt")


def gen_bicliques(k: int, a: int, b: int, weight: float = 1.0) -> AdjacencyMatrix:
    """Disjoint union of k complete bipartite graphs with sides a and b.

    Node order: biclique 0 left side, biclique 0 right side, biclique 1
    left side, ... Every left node connects to every right node of the
    same biclique with the given weight; there are no other edges.
    """
    if k < 1 or a < 1 or b < 1:
        raise ValidationError("gen_bicliques needs k, a, b >= 1")
    if weight <= 0:
        raise ValidationError("gen_bicliques needs a positive weight")
    n = k * (a + b)
    A = np.zeros((n, n))
    labels = []
    for c in range(k):
        base = c * (a + b)
        A[base : base + a, base + a : base + a + b] = weight
        A[base + a : base + a + b, base : base + a] = weight
        labels.extend(f"{c}L{i}" for i in range(a))
        labels.extend(f"{c}R{i}" for i in range(b))
    return AdjacencyMatrix(A, tuple(labels))


def load_word_list(path) -> list[str]:
    """One token per line, lowercased; tokens with characters outside a-z
    are dropped. Order and duplicates are preserved."""
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read word list {path}: {exc}") from exc
    words = []
    for token in raw:
        token = token.strip().lower()
        if token and _WORD_RE.fullmatch(token):
            words.append(token)
    return words


def bigram_graph(sequences, alphabet) -> AdjacencyMatrix:
    """Symmetrized adjacency counts of consecutive symbol pairs.

    Directed counts C[s, t] over each adjacent ordered pair are
    symmetrized to A = C + C^T. Symbols that end up with zero total
    adjacency are dropped from the matrix (reported via logging) so the
    result has no isolated nodes.
    """
    alphabet = [str(s) for s in alphabet]
    index = {s: i for i, s in enumerate(alphabet)}
    if len(index) != len(alphabet):
        raise ValidationError("bigram_graph: alphabet contains duplicates")
    C = np.zeros((len(alphabet), len(alphabet)))
    for seq in sequences:
        prev = None
        for sym in seq:
            if sym not in index:
                raise ValidationError(f"bigram_graph: symbol {sym!r} not in alphabet")
            if prev is not None:
                C[index[prev], index[sym]] += 1.0
            prev = sym
    A = C + C.T
    mass = A.sum(axis=1)
    keep = np.flatnonzero(mass > 0)
    if keep.size == 0:
        raise ValidationError("bigram_graph: no adjacent pairs at all")
    if keep.size < len(alphabet):
        dropped = [alphabet[i] for i in np.flatnonzero(mass == 0)]
        log.info("bigram_graph: dropped %d isolated symbols: %s",
                 len(dropped), " ".join(dropped))
        A = A[np.ix_(keep, keep)]
    return AdjacencyMatrix(A, tuple(alphabet[i] for i in keep))


def letter_bigram_graph(words) -> AdjacencyMatrix:
    """Adjacency counts of letter pairs across the spellings of the words."""
    return bigram_graph(words, LETTERS)


@dataclass(frozen=True)
class PronunciationMap:
    """Primary pronunciation per headword, over the 39-phoneme inventory."""

    entries: dict[str, tuple[str, ...]]
    inventory: tuple[str, ...] = ARPABET_PHONEMES

    def __len__(self) -> int:
        return len(self.entries)


def parse_pronouncing_dict(path) -> PronunciationMap:
    """Parse the pronouncing dictionary's native text format.

    Lines starting with ';;;' are comments. An entry line is
    'HEADWORD  SYM1 SYM2 ...'; headwords like 'WORD(2)' are alternate
    pronunciations and are skipped (primary only). Stress digits 0/1/2
    are stripped from vowel symbols; anything outside the 39-symbol
    inventory is an error.
    """
    allowed = set(ARPABET_PHONEMES)
    entries: dict[str, tuple[str, ...]] = {}
    try:
        with open(path, encoding="utf-8", errors="replace") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read pronouncing dictionary {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith(";;;"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ValidationError(f"{path}:{lineno}: no pronunciation on line {line!r}")
        headword, symbols = parts[0], parts[1:]
        if _ALT_HEADWORD.search(headword):
            continue
        phonemes = []
        for sym in symbols:
            stripped = sym[:-1] if sym and sym[-1] in "012" else sym
            if stripped not in allowed:
                raise ValidationError(
                    f"{path}:{lineno}: symbol {sym!r} is not a known phoneme"
                )
            phonemes.append(stripped)
        entries.setdefault(headword.upper(), tuple(phonemes))
    return PronunciationMap(entries)


def phoneme_bigram_graph(words, pronunciations: PronunciationMap) -> AdjacencyMatrix:
    """Adjacency counts of phoneme pairs across the pronounced words.

    Words missing from the dictionary are skipped (count reported via
    logging); single-phoneme words contribute no pairs.
    """
    sequences = []
    missing = 0
    for w in words:
        seq = pronunciations.entries.get(w.upper())
        if seq is None:
            missing += 1
        else:
            sequences.append(seq)
    if missing:
        log.info("phoneme_bigram_graph: %d of %d words not in the dictionary",
                 missing, len(words))
    return bigram_graph(sequences, pronunciations.inventory)


def load_edge_list(path) -> AdjacencyMatrix:
    """TSV edge list: 'i<TAB>j<TAB>weight' per line, 0-based indices.

    Each line is one undirected edge and adds weight to both (i, j) and
    (j, i); a self-loop line therefore adds twice its weight to the
    diagonal. Node count is 1 + max index unless a '#n <count>' header
    says otherwise. Other '#' lines are comments.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read edge list {path}: {exc}") from exc
    n_declared = None
    edges = []
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line.split()
            if parts[0] == "#n":
                if len(parts) != 2 or not parts[1].isdigit():
                    raise ValidationError(f"{path}:{lineno}: bad '#n <count>' header")
                n_declared = int(parts[1])
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValidationError(
                f"{path}:{lineno}: expected 'i<TAB>j<TAB>weight', got {line!r}"
            )
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: {exc}") from exc
        if i < 0 or j < 0:
            raise ValidationError(f"{path}:{lineno}: negative node index")
        if not np.isfinite(w) or w <= 0:
            raise ValidationError(f"{path}:{lineno}: weight must be positive")
        edges.append((i, j, w))
    if not edges:
        raise ValidationError(f"{path}: no edges")
    n = max(max(i, j) for i, j, _ in edges) + 1
    if n_declared is not None:
        if n_declared < n:
            raise ValidationError(
                f"{path}: header declares {n_declared} nodes but index {n - 1} appears"
            )
        n = n_declared
    A = np.zeros((n, n))
    for i, j, w in edges:
        A[i, j] += w
        A[j, i] += w
    return AdjacencyMatrix(A)
