"""Salton cosine similarity between the members' citation patterns.

Each environment member owns a pattern vector over the members: its row of
the local matrix (references given, the "citing" pattern) or its column
(citations received, the "cited" pattern).  The cosine matrix over those
vectors is symmetric and nonnegative, which is what makes it directly
usable as an undirected similarity graph; values below a threshold are
suppressed to keep the maps readable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .environment import Environment, Mode
from .errors import UndefinedSimilarityError, ValidationError

DEFAULT_MIN_COSINE = 0.2


class Orientation(str, Enum):
    ROW_CITING = "row-citing"
    COLUMN_CITED = "column-cited"


def default_orientation(mode: Mode) -> Orientation:
    """Cited environments compare cited patterns (columns), citing ones rows."""
    return Orientation.COLUMN_CITED if mode is Mode.CITED else Orientation.ROW_CITING


def pattern_vectors(env: Environment, orientation: Orientation | None = None) -> np.ndarray:
    """Member pattern vectors as rows of an (n, n) float array.

    Diagonal cells stay inside the vectors; a journal's within-journal mass
    is part of its citation pattern and is exactly what decorrelates a
    heavily self-citing journal from its neighbours.
    """
    if orientation is None:
        orientation = default_orientation(env.mode)
    local = env.local.astype(float)
    return local.copy() if orientation is Orientation.ROW_CITING else local.T.copy()


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Salton cosine of two equal-length nonnegative vectors, in [0, 1]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValidationError(f"vector lengths differ: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise UndefinedSimilarityError("cosine undefined for a zero vector")
    return float(np.clip(float(np.dot(u, v)) / (nu * nv), 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class CosineMatrix:
    """Symmetric member-by-member cosine values for one environment.

    ``zero_vector_members`` lists members whose pattern vector is all
    zeros; their similarity is undefined, they take part in no edges, and
    their off-diagonal entries are stored as 0.
    """

    members: tuple[str, ...]
    values: np.ndarray
    zero_vector_members: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SimilarityEdge:
    """Undirected edge (a < b lexicographically) kept by the threshold."""

    a: str
    b: str
    cosine: float


def pairwise_cosines(env: Environment, orientation: Orientation | None = None) -> CosineMatrix:
    """Cosines between all member pairs; diagonal fixed at 1.

    The upper triangle is computed once and mirrored, so symmetry is exact
    rather than a floating-point accident.
    """
    vectors = pattern_vectors(env, orientation)
    norms = np.linalg.norm(vectors, axis=1)
    zero_mask = norms == 0.0
    safe = np.where(zero_mask, 1.0, norms)
    products = vectors @ vectors.T
    values = products / np.outer(safe, safe)
    values[zero_mask, :] = 0.0
    values[:, zero_mask] = 0.0
    values = np.clip(values, 0.0, 1.0)
    upper = np.triu(values, k=1)
    values = upper + upper.T
    np.fill_diagonal(values, 1.0)
    zero_members = tuple(m for m, z in zip(env.members, zero_mask) if z)
    return CosineMatrix(members=env.members, values=values, zero_vector_members=zero_members)


def threshold_edges(
    cosines: CosineMatrix, min_cosine: float = DEFAULT_MIN_COSINE
) -> list[SimilarityEdge]:
    """Edges for unordered member pairs with cosine >= ``min_cosine``.

    The comparison is inclusive: values sitting exactly on the threshold
    survive ("below" is what gets suppressed).  Pairs touching a
    zero-vector member never yield an edge.  Output is sorted by (a, b).
    """
    if not 0.0 <= min_cosine <= 1.0:
        raise ValidationError(f"min_cosine must lie in [0, 1], got {min_cosine}")
    zero = set(cosines.zero_vector_members)
    edges = []
    n = cosines.size
    for i in range(n):
        for j in range(i + 1, n):
            a, b = cosines.members[i], cosines.members[j]
            if a in zero or b in zero:
                continue
            value = float(cosines.values[i, j])
            if value >= min_cosine:
                lo, hi = sorted((a, b))
                edges.append(SimilarityEdge(a=lo, b=hi, cosine=value))
    edges.sort(key=lambda e: (e.a, e.b))
    return edges
