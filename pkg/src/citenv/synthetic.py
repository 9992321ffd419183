"""Deterministic synthetic citation corpus for demos and scale tests.

Real journal databases are licensed, so capacity testing runs on a
generated corpus instead.  The generator is seeded and reproducible: every
journal receives citations from a few dozen distinct journals with small
skewed counts, which makes the 1%-rule environments land in the few-tens
range, and a minority of journals carry a within-journal diagonal so that
ellipse shapes vary.
"""

from __future__ import annotations

import numpy as np

from .store import (
    CitationStore,
    Journal,
    JournalRegistry,
    format_citation_edges,
    format_journal_registry,
    parse_citation_edges,
)

_CATEGORIES = ("mathematics", "physics", "chemistry", "biology", "university")


def synthetic_store(
    n_journals: int = 200,
    n_edges: int = 5000,
    year: int = 2004,
    seed: int = 7,
) -> CitationStore:
    """Build the corpus directly as a store."""
    rng = np.random.default_rng(seed)
    ids = [f"j{i:03d}" for i in range(n_journals)]
    registry = JournalRegistry(
        Journal(
            id=jid,
            title=f"Synthetic Journal {i:03d}",
            english_title=f"Synth J {i:03d}",
            language="chinese" if i % 3 else "english",
            category=_CATEGORIES[i % len(_CATEGORIES)],
            impact_factor=round(float(rng.uniform(0.05, 1.5)), 2),
        )
        for i, jid in enumerate(ids)
    )
    cells: dict[tuple[str, str], int] = {}
    # Within-journal citations for roughly 40% of the journals.
    for i, jid in enumerate(ids):
        if rng.random() < 0.4:
            cells[(jid, jid)] = int(rng.integers(5, 61))
    # Each journal is cited by a few dozen distinct others with small counts.
    for j, cited in enumerate(ids):
        n_citers = int(rng.integers(16, 33))
        pool = [i for i in range(n_journals) if i != j]
        citers = rng.choice(pool, size=min(n_citers, len(pool)), replace=False)
        for i in citers:
            cells[(ids[int(i)], cited)] = int(rng.integers(1, 9))
    # Trim or pad to exactly n_edges cells, deterministically.
    keys = sorted(cells)
    if len(keys) > n_edges:
        drop = rng.choice(len(keys), size=len(keys) - n_edges, replace=False)
        for idx in drop:
            del cells[keys[int(idx)]]
    while len(cells) < n_edges:
        i, j = (int(v) for v in rng.integers(0, n_journals, size=2))
        key = (ids[i], ids[j])
        if key not in cells:
            cells[key] = int(rng.integers(1, 9))
    lines = ["citing_id,cited_id,count,year"]
    lines += [f"{i},{j},{c},{year}" for (i, j), c in sorted(cells.items())]
    return parse_citation_edges(lines, registry)


def synthetic_corpus_files(
    n_journals: int = 200,
    n_edges: int = 5000,
    year: int = 2004,
    seed: int = 7,
) -> tuple[str, str]:
    """The same corpus as (registry_csv, edges_csv) text, ready to write."""
    store = synthetic_store(n_journals, n_edges, year, seed)
    return format_journal_registry(store.registry), format_citation_edges(store)
