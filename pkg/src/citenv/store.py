"""Journal registry and aggregated journal-journal citation counts.

Two flat CSV inputs feed the store: a journal registry and a citation edge
list.  Counts are kept as a sparse map per publication year, one directed
cell per (citing, cited) pair; diagonal cells hold within-journal citations
and are never dropped.  Everything is immutable after ingestion, so graphs
can be shared freely across worker processes.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Mapping

from .errors import (
    DataError,
    DuplicateKeyError,
    ParseError,
    UnresolvedReferenceError,
)

LANGUAGES = ("chinese", "english", "other")

REGISTRY_HEADER = ("id", "title", "english_title", "language", "category", "impact_factor")
EDGES_HEADER = ("citing_id", "cited_id", "count", "year")


class Axis(str, Enum):
    """Margin direction: rows aggregate citing, columns aggregate cited."""

    ROW = "row"
    COLUMN = "column"


@dataclass(frozen=True)
class Journal:
    """One registered journal plus externally supplied metadata.

    ``impact_factor`` is whatever the journal citation report published for
    this journal; we store it for comparison and never compute it.
    """

    id: str
    title: str
    english_title: str = ""
    language: str = "other"
    category: str | None = None
    impact_factor: float | None = None

    def __post_init__(self) -> None:
        if not self.id or any(c.isspace() for c in self.id):
            raise ValueError(f"journal id must be a nonempty token: {self.id!r}")
        if not self.title:
            raise ValueError(f"journal {self.id!r} has an empty title")
        if self.language not in LANGUAGES:
            raise ValueError(f"journal {self.id!r}: unknown language {self.language!r}")
        if self.impact_factor is not None and self.impact_factor < 0:
            raise ValueError(f"journal {self.id!r}: negative impact factor")


class JournalRegistry(Mapping[str, Journal]):
    """Journals keyed by id, preserving insertion order."""

    def __init__(self, journals: Iterable[Journal] = ()):
        self._journals: dict[str, Journal] = {}
        for journal in journals:
            self.add(journal)

    def add(self, journal: Journal) -> None:
        if journal.id in self._journals:
            raise DuplicateKeyError(f"duplicate journal id {journal.id!r}")
        self._journals[journal.id] = journal

    def require(self, journal_id: str, context: str = "") -> Journal:
        """Return the journal or raise :class:`UnresolvedReferenceError`."""
        try:
            return self._journals[journal_id]
        except KeyError:
            raise UnresolvedReferenceError(journal_id, context) from None

    def __getitem__(self, journal_id: str) -> Journal:
        return self._journals[journal_id]

    def __iter__(self) -> Iterator[str]:
        return iter(self._journals)

    def __len__(self) -> int:
        return len(self._journals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JournalRegistry):
            return NotImplemented
        return self._journals == other._journals

    def __repr__(self) -> str:
        return f"JournalRegistry({len(self)} journals)"


@dataclass(frozen=True)
class CitationGraph:
    """Sparse directed citation counts for a single year.

    ``counts`` maps (citing id, cited id) to a positive whole citation
    count; absent cells are zero.  Diagonal cells are within-journal
    citations.
    """

    year: int
    registry: JournalRegistry
    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    def count(self, citing: str, cited: str) -> int:
        return self.counts.get((citing, cited), 0)

    def row_total(self, journal: str) -> int:
        """References the journal gives, including its diagonal cell."""
        self.registry.require(journal, "row total")
        return sum(c for (i, _j), c in self.counts.items() if i == journal)

    def column_total(self, journal: str) -> int:
        """Citations the journal receives, including its diagonal cell."""
        self.registry.require(journal, "column total")
        return sum(c for (_i, j), c in self.counts.items() if j == journal)

    def grand_total(self) -> int:
        return sum(self.counts.values())

    def cells(self) -> list[tuple[str, str, int]]:
        """All cells as (citing, cited, count), sorted for determinism."""
        return sorted((i, j, c) for (i, j), c in self.counts.items())

    def has_presence(self, journal: str) -> bool:
        """True when the journal appears in any cell of this year."""
        return any(journal in key for key in self.counts)


class CitationStore:
    """Registry plus one :class:`CitationGraph` per year."""

    def __init__(self, registry: JournalRegistry, graphs: dict[int, CitationGraph]):
        self.registry = registry
        self._graphs = dict(sorted(graphs.items()))

    def years(self) -> tuple[int, ...]:
        return tuple(self._graphs)

    def graph(self, year: int) -> CitationGraph:
        try:
            return self._graphs[year]
        except KeyError:
            raise DataError(
                f"no citation data for year {year}; available: {sorted(self._graphs)}"
            ) from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationStore):
            return NotImplemented
        return self.registry == other.registry and self._graphs == other._graphs


def _data_rows(lines: Iterable[str] | str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, csv fields) skipping blanks and # comments."""
    if isinstance(lines, str):
        lines = lines.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, next(csv.reader([raw]))


def parse_journal_registry(lines: Iterable[str] | str) -> JournalRegistry:
    """Parse the registry CSV (header required, ``#`` comments allowed)."""
    registry = JournalRegistry()
    rows = _data_rows(lines)
    try:
        lineno, header = next(rows)
    except StopIteration:
        return registry
    if tuple(f.strip() for f in header) != REGISTRY_HEADER:
        raise ParseError(
            f"expected registry header {','.join(REGISTRY_HEADER)!r}", lineno
        )
    for lineno, fields in rows:
        if len(fields) != len(REGISTRY_HEADER):
            raise ParseError(
                f"expected {len(REGISTRY_HEADER)} fields, got {len(fields)}", lineno
            )
        jid, title, english, language, category, raw_if = (f.strip() for f in fields)
        impact_factor: float | None
        if raw_if == "":
            impact_factor = None
        else:
            try:
                impact_factor = float(raw_if)
            except ValueError:
                raise ParseError(f"bad impact factor {raw_if!r}", lineno) from None
        try:
            journal = Journal(
                id=jid,
                title=title,
                english_title=english,
                language=language,
                category=category or None,
                impact_factor=impact_factor,
            )
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        try:
            registry.add(journal)
        except DuplicateKeyError as exc:
            raise DuplicateKeyError(str(exc.args[0]), lineno) from None
    return registry


def parse_citation_edges(lines: Iterable[str] | str, registry: JournalRegistry) -> CitationStore:
    """Parse the edge CSV into a store; repeated (citing, cited, year) sum up."""
    counts: dict[int, dict[tuple[str, str], int]] = {}
    rows = _data_rows(lines)
    try:
        lineno, header = next(rows)
    except StopIteration:
        return CitationStore(registry, {})
    if tuple(f.strip() for f in header) != EDGES_HEADER:
        raise ParseError(f"expected edge header {','.join(EDGES_HEADER)!r}", lineno)
    for lineno, fields in rows:
        if len(fields) != len(EDGES_HEADER):
            raise ParseError(
                f"expected {len(EDGES_HEADER)} fields, got {len(fields)}", lineno
            )
        citing, cited, raw_count, raw_year = (f.strip() for f in fields)
        try:
            count = int(raw_count)
            year = int(raw_year)
        except ValueError:
            raise ParseError(f"bad count/year in {fields!r}", lineno) from None
        if count <= 0:
            raise ParseError(f"count must be positive, got {count}", lineno)
        for jid in (citing, cited):
            if jid not in registry:
                raise UnresolvedReferenceError(jid, f"edge file line {lineno}")
        year_counts = counts.setdefault(year, {})
        key = (citing, cited)
        year_counts[key] = year_counts.get(key, 0) + count
    graphs = {
        year: CitationGraph(year=year, registry=registry, counts=year_counts)
        for year, year_counts in counts.items()
    }
    return CitationStore(registry, graphs)


def load_journal_registry(path) -> JournalRegistry:
    with open(path, encoding="utf-8") as handle:
        return parse_journal_registry(handle)


def load_citation_edges(path, registry: JournalRegistry) -> CitationStore:
    with open(path, encoding="utf-8") as handle:
        return parse_citation_edges(handle, registry)


def suppress_single_citations(graph: CitationGraph) -> CitationGraph:
    """Copy of the graph without off-diagonal cells of count 1.

    Emulates ISI-style reporting, which sums single relations under "all
    others"; diagonal cells stay regardless.  The unfiltered graph is the
    CSTPCD convention.  Idempotent; the input graph is untouched.
    """
    kept = {
        (i, j): c
        for (i, j), c in graph.counts.items()
        if c > 1 or i == j
    }
    return CitationGraph(year=graph.year, registry=graph.registry, counts=kept)


def margin_total(graph: CitationGraph, journal: str, axis: Axis) -> int:
    """Row (citing) or column (cited) margin of one journal, diagonal included."""
    if axis is Axis.ROW:
        return graph.row_total(journal)
    return graph.column_total(journal)


def _csv_line(fields: Iterable[str]) -> str:
    out = io.StringIO()
    csv.writer(out, lineterminator="").writerow(list(fields))
    return out.getvalue()


def format_journal_registry(registry: JournalRegistry) -> str:
    """Serialize a registry back to its CSV format (registry order kept)."""
    lines = [",".join(REGISTRY_HEADER)]
    for journal in registry.values():
        impact = "" if journal.impact_factor is None else f"{journal.impact_factor:g}"
        lines.append(
            _csv_line(
                (
                    journal.id,
                    journal.title,
                    journal.english_title,
                    journal.language,
                    journal.category or "",
                    impact,
                )
            )
        )
    return "\n".join(lines) + "\n"


def format_citation_edges(store: CitationStore) -> str:
    """Serialize every year of a store to the edge CSV format, sorted."""
    lines = [",".join(EDGES_HEADER)]
    for year in store.years():
        for citing, cited, count in store.graph(year).cells():
            lines.append(f"{citing},{cited},{count},{year}")
    return "\n".join(lines) + "\n"
