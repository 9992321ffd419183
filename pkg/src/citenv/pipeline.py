"""End-to-end runs: ingest, extract, map, and write artifact files.

One mapped seed produces five artifacts under ``<out>/<seed>/<mode>/<year>``:
the local count matrix, the cosine matrix, the ranked impact report, a
Pajek ``.net`` file, and an SVG rendering, plus machine-readable
``impact.json`` and ``run.json`` records.  Everything is computed before
anything is written, so a failing run leaves no partial output.  Batch
runs fan out over all registered journals; each seed is independent, so
outputs are identical whether seeds run sequentially or in parallel.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import layout as lay
from .environment import Environment, Mode, select_members
from .errors import DataError, ValidationError
from .export import (
    build_svg_scene,
    format_ascii_matrix,
    render_svg,
    write_pajek,
)
from .impact import (
    ImpactProfile,
    environment_profiles,
    impact_records,
    node_geometry,
    render_impact_table,
)
from .similarity import pairwise_cosines, threshold_edges
from .store import (
    CitationStore,
    load_citation_edges,
    load_journal_registry,
    suppress_single_citations,
)

THREADS_ENV_VAR = "CITENV_THREADS"
ARTIFACT_NAMES = ("local.txt", "cosine.txt", "impact.txt", "map.net", "map.svg")
LAYOUT_DIAMETER = 1000.0


@dataclass
class RunConfig:
    """Everything one pipeline run needs; defaults follow the figure captions
    (1% membership threshold, cosine >= 0.2, unfiltered counts)."""

    registry_path: Path
    edges_path: Path
    year: int
    mode: Mode = Mode.CITED
    threshold_fraction: float = 0.01
    min_cosine: float = 0.2
    suppress_singles: bool = False
    layout_seed: int = 42
    scale: float = 50.0
    out_dir: Path = Path("citenv-out")
    # Rendering-oriented layout knobs.  The distance floor is coarser than
    # the solver-level default on purpose: members with near-identical
    # citation patterns (cosine ~ 1) are drawn effectively coincident
    # either way, but flooring their spring length at 2% of a unit edge
    # keeps the stiffness spread bounded and corpus batches fast.
    layout_distance_floor: float = 0.02
    layout_restarts: int = 2

    def __post_init__(self) -> None:
        self.registry_path = Path(self.registry_path)
        self.edges_path = Path(self.edges_path)
        self.out_dir = Path(self.out_dir)
        self.mode = Mode(self.mode)
        if not 0 < self.threshold_fraction < 1:
            raise ValidationError(
                f"threshold fraction must lie in (0, 1), got {self.threshold_fraction}"
            )
        if not 0 <= self.min_cosine <= 1:
            raise ValidationError(
                f"min cosine must lie in [0, 1], got {self.min_cosine}"
            )
        if self.scale <= 0:
            raise ValidationError(f"scale must be positive, got {self.scale}")


def load_store(config: RunConfig) -> CitationStore:
    registry = load_journal_registry(config.registry_path)
    return load_citation_edges(config.edges_path, registry)


@dataclass(eq=False)
class MapResult:
    """Computed artifacts for one seed, ready to be written."""

    environment: Environment
    profiles: list[ImpactProfile]
    edge_count: int
    layout: lay.Layout
    warnings: list[str] = field(default_factory=list)
    artifacts: dict[str, str] = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return self.environment.degenerate


def run_map(store: CitationStore, seed: str, config: RunConfig) -> MapResult:
    """Compute every artifact for one seed without touching the filesystem."""
    graph = store.graph(config.year)
    store.registry.require(seed, "map seed")
    if config.suppress_singles:
        graph = suppress_single_citations(graph)
    env = select_members(graph, seed, config.mode, config.threshold_fraction)
    cosines = pairwise_cosines(env)
    edges = threshold_edges(cosines, config.min_cosine)

    profiles = environment_profiles(env)
    geometries = [node_geometry(p, config.scale) for p in profiles]

    member_index = {m: i for i, m in enumerate(env.members)}
    weighted = [
        (
            member_index[e.a],
            member_index[e.b],
            lay.edge_distance(e.cosine, config.layout_distance_floor),
        )
        for e in edges
    ]
    graph_layout = lay.layout_graph(
        env.size, weighted, seed=config.layout_seed, restarts=config.layout_restarts
    )
    positions = lay.scale_to_diameter(graph_layout.positions, LAYOUT_DIAMETER)

    warnings = []
    if env.degenerate:
        warnings.append(
            f"degenerate environment: no journal other than {seed!r} passes "
            f"the {config.threshold_fraction:g} threshold in {env.mode.value} "
            f"mode for {config.year}"
        )
    if cosines.zero_vector_members:
        warnings.append(
            "members with empty citation patterns take part in no edges: "
            + ", ".join(cosines.zero_vector_members)
        )
    if not graph_layout.converged:
        warnings.append("layout did not reach the gradient tolerance")

    titles = [
        store.registry[m].english_title or store.registry[m].title
        for m in env.members
    ]
    scene = build_svg_scene(
        env.members, titles, positions, geometries, edges, config.min_cosine
    )
    run_record = {
        "seed": seed,
        "mode": env.mode.value,
        "year": env.year,
        "threshold_fraction": config.threshold_fraction,
        "min_cosine": config.min_cosine,
        "suppress_singles": config.suppress_singles,
        "layout_seed": config.layout_seed,
        "scale": config.scale,
        "members": list(env.members),
        "degenerate": env.degenerate,
        "edge_count": len(edges),
        "zero_pattern_members": list(cosines.zero_vector_members),
        "layout": {
            "converged": graph_layout.converged,
            "iterations": graph_layout.iterations,
            "final_max_gradient": graph_layout.final_max_gradient,
            "energy": graph_layout.energy,
        },
        "warnings": warnings,
    }
    artifacts = {
        "local.txt": format_ascii_matrix(env.members, env.local),
        "cosine.txt": format_ascii_matrix(env.members, cosines.values),
        "impact.txt": render_impact_table(profiles, store.registry),
        "map.net": write_pajek(env.members, positions, geometries, edges),
        "map.svg": render_svg(scene),
        "impact.json": json.dumps(
            impact_records(profiles, store.registry), indent=2, sort_keys=True
        )
        + "\n",
        "run.json": json.dumps(run_record, indent=2, sort_keys=True) + "\n",
    }
    return MapResult(
        environment=env,
        profiles=profiles,
        edge_count=len(edges),
        layout=graph_layout,
        warnings=warnings,
        artifacts=artifacts,
    )


def seed_output_dir(config: RunConfig, seed: str) -> Path:
    return config.out_dir / seed / config.mode.value / str(config.year)


def write_map_result(result: MapResult, config: RunConfig) -> Path:
    """Write all artifacts for one computed seed; returns the directory."""
    target = seed_output_dir(config, result.environment.seed)
    target.mkdir(parents=True, exist_ok=True)
    for name, content in sorted(result.artifacts.items()):
        (target / name).write_text(content, encoding="utf-8", newline="\n")
    return target


def cmd_map(config: RunConfig, seed: str) -> tuple[Path, MapResult]:
    """Load, compute, then write: the single-seed pipeline."""
    store = load_store(config)
    result = run_map(store, seed, config)
    target = write_map_result(result, config)
    return target, result


# --------------------------------------------------------------------------
# batch
# --------------------------------------------------------------------------

_WORKER_STORE: CitationStore | None = None
_WORKER_CONFIG: RunConfig | None = None


def _batch_init(config: RunConfig) -> None:
    global _WORKER_STORE, _WORKER_CONFIG
    _WORKER_CONFIG = config
    _WORKER_STORE = load_store(config)


def _batch_one(seed: str) -> dict:
    assert _WORKER_STORE is not None and _WORKER_CONFIG is not None
    return _map_one_for_batch(_WORKER_STORE, _WORKER_CONFIG, seed)


def _map_one_for_batch(store: CitationStore, config: RunConfig, seed: str) -> dict:
    try:
        result = run_map(store, seed, config)
        write_map_result(result, config)
        return {
            "seed": seed,
            "status": "ok",
            "members": result.environment.size,
            "edges": result.edge_count,
            "degenerate": result.degenerate,
            "converged": result.layout.converged,
            "warnings": result.warnings,
        }
    except Exception as exc:  # per-seed isolation: record, never abort the batch
        return {
            "seed": seed,
            "status": "error",
            "members": 0,
            "edges": 0,
            "degenerate": False,
            "converged": False,
            "warnings": [f"{type(exc).__name__}: {exc}"],
        }


def batch_workers(n_seeds: int) -> int:
    """Worker count: CPU count capped by the CITENV_THREADS variable."""
    workers = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            cap = 1
        workers = min(workers, max(1, cap))
    return max(1, min(workers, n_seeds))


def render_batch_summary(rows: list[dict]) -> str:
    header = ("seed", "members", "edges", "degenerate", "converged", "status")
    table = [header]
    for row in rows:
        table.append(
            (
                row["seed"],
                str(row["members"]),
                str(row["edges"]),
                "yes" if row["degenerate"] else "no",
                "yes" if row["converged"] else "no",
                row["status"],
            )
        )
    widths = [max(len(r[c]) for r in table) for c in range(len(header))]
    lines = []
    for r in table:
        cells = [r[0].ljust(widths[0])]
        cells += [r[c].rjust(widths[c]) for c in range(1, len(header))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def cmd_batch(config: RunConfig) -> list[dict]:
    """Map every registered journal; per-seed failures land in the summary.

    Seeds run in parallel worker processes against the shared immutable
    store; each seed writes only inside its own directory, so the output
    tree is identical to what sequential runs would produce.
    """
    store = load_store(config)
    seeds = sorted(store.registry)
    workers = batch_workers(len(seeds))
    if workers <= 1:
        rows = [_map_one_for_batch(store, config, seed) for seed in seeds]
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_batch_init, initargs=(config,)
        ) as pool:
            rows = list(pool.map(_batch_one, seeds, chunksize=8))
    rows.sort(key=lambda r: r["seed"])
    config.out_dir.mkdir(parents=True, exist_ok=True)
    (config.out_dir / "summary.txt").write_text(
        render_batch_summary(rows), encoding="utf-8", newline="\n"
    )
    (config.out_dir / "summary.json").write_text(
        json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n"
    )
    return rows


# --------------------------------------------------------------------------
# compare
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CompareReport:
    """Year-over-year membership and within-share deltas for one seed."""

    seed: str
    mode: Mode
    year_a: int
    year_b: int
    members_a: tuple[str, ...]
    members_b: tuple[str, ...]
    added: tuple[str, ...]
    removed: tuple[str, ...]
    within_percent_a: int
    within_percent_b: int
    degenerate_a: bool
    degenerate_b: bool


def cmd_compare(config: RunConfig, seed: str, year_a: int, year_b: int) -> CompareReport:
    store = load_store(config)
    store.registry.require(seed, "compare seed")
    reports = {}
    for year in (year_a, year_b):
        graph = store.graph(year)
        if not graph.has_presence(seed):
            raise DataError(f"seed {seed!r} has no citations in year {year}")
        if config.suppress_singles:
            graph = suppress_single_citations(graph)
        env = select_members(graph, seed, config.mode, config.threshold_fraction)
        profile = environment_profiles(env)[0]
        reports[year] = (env, profile)
    env_a, prof_a = reports[year_a]
    env_b, prof_b = reports[year_b]
    set_a, set_b = set(env_a.members), set(env_b.members)
    return CompareReport(
        seed=seed,
        mode=config.mode,
        year_a=year_a,
        year_b=year_b,
        members_a=env_a.members,
        members_b=env_b.members,
        added=tuple(sorted(set_b - set_a)),
        removed=tuple(sorted(set_a - set_b)),
        within_percent_a=prof_a.within_percent,
        within_percent_b=prof_b.within_percent,
        degenerate_a=env_a.degenerate,
        degenerate_b=env_b.degenerate,
    )


def render_compare(report: CompareReport) -> str:
    lines = [
        f"{report.seed} {report.mode.value} environment: "
        f"{report.year_a} -> {report.year_b}",
        f"  members: {len(report.members_a)} -> {len(report.members_b)}",
        f"  added:   {', '.join(report.added) or '(none)'}",
        f"  removed: {', '.join(report.removed) or '(none)'}",
        f"  within-journal share: {report.within_percent_a}% -> "
        f"{report.within_percent_b}%",
    ]
    if report.degenerate_a or report.degenerate_b:
        flags = [
            str(y)
            for y, d in (
                (report.year_a, report.degenerate_a),
                (report.year_b, report.degenerate_b),
            )
            if d
        ]
        lines.append(f"  degenerate in: {', '.join(flags)}")
    return "\n".join(lines) + "\n"


__all__ = [
    "RunConfig",
    "MapResult",
    "CompareReport",
    "ARTIFACT_NAMES",
    "load_store",
    "run_map",
    "write_map_result",
    "seed_output_dir",
    "cmd_map",
    "cmd_batch",
    "cmd_compare",
    "render_compare",
    "render_batch_summary",
    "batch_workers",
]
