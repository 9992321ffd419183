"""Local citation environments around a seed journal.

An environment is the set of journals exchanging citations with a seed
above a percentage threshold of the seed's margin total, plus the dense
citation submatrix among those journals.  "Citing" mode follows the seed's
references (rows); "cited" mode follows the citations it receives
(columns).  Highly self-citing journals can yield a degenerate environment
holding only the seed; that is a flagged result, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .store import Axis, CitationGraph, margin_total


class Mode(str, Enum):
    """CITING follows the seed's references; CITED its received citations."""

    CITING = "citing"
    CITED = "cited"


MODE_AXIS = {Mode.CITING: Axis.ROW, Mode.CITED: Axis.COLUMN}

DEFAULT_THRESHOLD = 0.01


@dataclass(frozen=True, eq=False)
class Environment:
    """A seed journal's local citation environment for one year.

    ``members`` always starts with the seed, followed by the other member
    ids in lexicographic order, which fixes the row/column order of
    ``local`` and makes every downstream artifact byte-deterministic.
    ``local[i, j]`` is the global count member_i -> member_j.
    """

    seed: str
    mode: Mode
    year: int
    threshold_fraction: float
    members: tuple[str, ...]
    local: np.ndarray
    degenerate: bool

    @property
    def size(self) -> int:
        return len(self.members)

    def index_of(self, journal: str) -> int:
        return self.members.index(journal)


def seed_dimension_total(graph: CitationGraph, seed: str, mode: Mode) -> int:
    """The seed's margin total in the dimension the mode selects.

    Cited mode counts how often the seed is cited (column margin); citing
    mode counts the references it gives (row margin).  The percentage rule
    is applied against this number.
    """
    return margin_total(graph, seed, MODE_AXIS[mode])


def build_local_matrix(graph: CitationGraph, members: Sequence[str]) -> np.ndarray:
    """Dense count submatrix over ``members`` (rows citing, columns cited).

    All cells among members are included, not only those touching the
    seed; the similarity maps need the full member-member structure.
    """
    for journal in members:
        graph.registry.require(journal, "local matrix")
    index = {journal: i for i, journal in enumerate(members)}
    local = np.zeros((len(members), len(members)), dtype=np.int64)
    for (citing, cited), count in graph.counts.items():
        i = index.get(citing)
        j = index.get(cited)
        if i is not None and j is not None:
            local[i, j] = count
    return local


def select_members(
    graph: CitationGraph,
    seed: str,
    mode: Mode,
    threshold_fraction: float = DEFAULT_THRESHOLD,
) -> Environment:
    """Extract the seed's environment with the strict percentage rule.

    A journal joins a cited-mode environment iff it cites the seed more
    than ``threshold_fraction`` of the seed's total received citations;
    citing mode is symmetric over the seed's reference row.  The
    comparison is strict ("more than"), evaluated in exact rational
    arithmetic so that a journal sitting exactly on the threshold is
    excluded regardless of binary rounding.  If nothing qualifies (or the
    seed has no citations in the chosen dimension at all) the environment
    degenerates to the seed alone and is flagged.
    """
    if not 0 < threshold_fraction < 1:
        raise ValidationError(
            f"threshold_fraction must lie in (0, 1), got {threshold_fraction}"
        )
    graph.registry.require(seed, "environment seed")
    mode = Mode(mode)
    base = seed_dimension_total(graph, seed, mode)
    # Exact decimal reading of the threshold: str() restores the decimal
    # literal the caller wrote, so 0.01 means exactly 1/100.
    frac = Fraction(str(threshold_fraction))
    others: list[str] = []
    if base > 0:
        for (citing, cited), count in graph.counts.items():
            if mode is Mode.CITED and cited == seed and citing != seed:
                candidate = citing
            elif mode is Mode.CITING and citing == seed and cited != seed:
                candidate = cited
            else:
                continue
            if count * frac.denominator > frac.numerator * base:
                others.append(candidate)
    members = (seed, *sorted(others))
    local = build_local_matrix(graph, members)
    return Environment(
        seed=seed,
        mode=mode,
        year=graph.year,
        threshold_fraction=threshold_fraction,
        members=members,
        local=local,
        degenerate=len(members) == 1,
    )
