"""Local citation impact shares and the node geometry that encodes them.

A journal's weight inside an environment is its margin total divided by
the grand sum of the local matrix.  The corrected variant removes the
journal's own diagonal cell from the numerator (the denominator stays),
so a journal living off within-journal citations keeps a tall but very
narrow ellipse, and one without any self-citations stays a circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .environment import Environment, Mode
from .errors import ValidationError
from .store import CitationGraph, JournalRegistry


def grand_sum(local: np.ndarray) -> int:
    """Sum of every cell of a local matrix, diagonal included."""
    return int(np.asarray(local).sum())


def percent_half_up(numerator: int, denominator: int) -> int:
    """Integer percentage of numerator/denominator, rounded half up.

    Computed entirely in integer arithmetic so a share that is exactly
    x.5 percent always rounds up, with no binary-float surprises.
    """
    if denominator <= 0:
        raise ValidationError("percentage denominator must be positive")
    if numerator < 0:
        raise ValidationError("percentage numerator must be nonnegative")
    return (200 * numerator + denominator) // (2 * denominator)


@dataclass(frozen=True)
class ImpactProfile:
    """Per-journal citation shares inside one environment."""

    journal: str
    margin: int
    diagonal: int
    total_share: float
    corrected_share: float
    within_share: float

    @property
    def within_percent(self) -> int:
        return percent_half_up(self.diagonal, self.margin) if self.margin else 0


def impact_profile(local: np.ndarray, index: int, mode: Mode, journal: str) -> ImpactProfile:
    """Shares for one member; cited mode uses columns, citing mode rows.

    Column margins measure citation impact, row margins reference
    activity.  All shares are kept at full float precision; rounding only
    happens at report time.
    """
    local = np.asarray(local)
    margin = int(local[:, index].sum() if mode is Mode.CITED else local[index, :].sum())
    diagonal = int(local[index, index])
    total = grand_sum(local)
    if total > 0:
        total_share = margin / total
        corrected_share = (margin - diagonal) / total
    else:
        total_share = corrected_share = 0.0
    within_share = diagonal / margin if margin > 0 else 0.0
    return ImpactProfile(
        journal=journal,
        margin=margin,
        diagonal=diagonal,
        total_share=total_share,
        corrected_share=corrected_share,
        within_share=within_share,
    )


def environment_profiles(env: Environment) -> list[ImpactProfile]:
    """Profiles for every member, in member order."""
    return [
        impact_profile(env.local, i, env.mode, journal)
        for i, journal in enumerate(env.members)
    ]


@dataclass(frozen=True)
class NodeGeometry:
    """Ellipse radii for one journal node, in display units."""

    journal: str
    v_radius: float
    h_radius: float


def node_geometry(
    profile: ImpactProfile, scale: float, min_radius: float | None = None
) -> NodeGeometry:
    """Map shares to ellipse radii: vertical = total, horizontal = corrected.

    Both radii are floored at a minimum visible radius (default 1% of the
    scale) so that a journal whose corrected share collapses to zero still
    renders as a machine-findable vertical sliver instead of vanishing.
    """
    if scale <= 0:
        raise ValidationError(f"scale must be positive, got {scale}")
    floor = scale / 100.0 if min_radius is None else min_radius
    v_radius = max(scale * profile.total_share, floor)
    h_radius = max(scale * profile.corrected_share, floor)
    return NodeGeometry(journal=profile.journal, v_radius=v_radius, h_radius=h_radius)


def rank_by_local_impact(profiles: list[ImpactProfile]) -> list[ImpactProfile]:
    """Descending by corrected share, then total share, then id.

    This is the local counterpart to ranking journals by their global
    impact factor; juxtaposing the two orders is the whole point of the
    impact report.
    """
    return sorted(
        profiles,
        key=lambda p: (-p.corrected_share, -p.total_share, p.journal),
    )


@dataclass(frozen=True)
class ReferenceSplit:
    """A journal's references split into self / other-domestic / international.

    International counts are supplied by the caller: journals outside the
    domestic database contribute no edge rows, so their total cannot be
    derived from the graph.
    """

    journal: str
    self_count: int
    domestic_other: int
    international: int

    @property
    def domestic_total(self) -> int:
        return self.self_count + self.domestic_other

    @property
    def total(self) -> int:
        return self.domestic_total + self.international

    @property
    def self_percent(self) -> int:
        return percent_half_up(self.self_count, self.total)

    @property
    def domestic_other_percent(self) -> int:
        return percent_half_up(self.domestic_other, self.total)

    @property
    def domestic_percent(self) -> int:
        return percent_half_up(self.domestic_total, self.total)

    @property
    def international_percent(self) -> int:
        return percent_half_up(self.international, self.total)

    @property
    def domestic_within_percent(self) -> int:
        """Share of the domestic references that stay within the journal."""
        if self.domestic_total == 0:
            return 0
        return percent_half_up(self.self_count, self.domestic_total)


def reference_split_report(
    graph: CitationGraph,
    journal: str,
    international: int,
    expected_total: int | None = None,
) -> ReferenceSplit:
    """Split a journal's reference row using an external international count."""
    graph.registry.require(journal, "reference split")
    if international < 0:
        raise ValidationError("international reference count must be nonnegative")
    self_count = graph.count(journal, journal)
    domestic_other = graph.row_total(journal) - self_count
    split = ReferenceSplit(
        journal=journal,
        self_count=self_count,
        domestic_other=domestic_other,
        international=international,
    )
    if split.total == 0:
        raise ValidationError(f"{journal!r} has no references at all")
    if expected_total is not None and expected_total != split.total:
        raise ValidationError(
            f"reference totals disagree: expected {expected_total}, "
            f"derived {split.total}"
        )
    return split


def render_reference_split(split: ReferenceSplit) -> str:
    lines = [
        f"references of {split.journal}: {split.total}",
        f"  within-journal     {split.self_count:6d}  ({split.self_percent}%)",
        f"  other domestic     {split.domestic_other:6d}  ({split.domestic_other_percent}%)",
        f"  international      {split.international:6d}  ({split.international_percent}%)",
        f"  domestic within-journal share: {split.domestic_within_percent}%",
    ]
    return "\n".join(lines) + "\n"


IMPACT_COLUMNS = (
    "journal",
    "margin",
    "diagonal",
    "total_share",
    "corrected_share",
    "within_share",
    "impact_factor",
)


def impact_records(
    profiles: list[ImpactProfile], registry: JournalRegistry
) -> list[dict]:
    """Ranked impact rows as plain dicts (the machine-readable report)."""
    records = []
    for p in rank_by_local_impact(profiles):
        impact_factor = registry.require(p.journal).impact_factor
        records.append(
            {
                "journal": p.journal,
                "margin": p.margin,
                "diagonal": p.diagonal,
                "total_share": p.total_share,
                "corrected_share": p.corrected_share,
                "within_share": p.within_share,
                "within_percent": p.within_percent,
                "impact_factor": impact_factor,
            }
        )
    return records


def render_impact_table(profiles: list[ImpactProfile], registry: JournalRegistry) -> str:
    """Human-readable ranked impact table, one row per journal."""
    rows = [IMPACT_COLUMNS]
    for rec in impact_records(profiles, registry):
        impact = "-" if rec["impact_factor"] is None else f"{rec['impact_factor']:.2f}"
        rows.append(
            (
                rec["journal"],
                str(rec["margin"]),
                str(rec["diagonal"]),
                f"{rec['total_share']:.4f}",
                f"{rec['corrected_share']:.4f}",
                f"{rec['within_percent']}%",
                impact,
            )
        )
    widths = [max(len(row[c]) for row in rows) for c in range(len(IMPACT_COLUMNS))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [row[c].rjust(widths[c]) for c in range(1, len(row))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"
