"""citenv: local journal citation environments, mapped.

From an aggregated journal-journal citation database this package extracts
a seed journal's citing or cited environment with the strict 1% rule,
normalizes the member citation patterns with the Salton cosine, computes
self-citation-corrected local impact shares and their ellipse geometry,
lays the map out by spring-energy minimization, and emits Pajek ``.net``,
ASCII matrix, SVG, and report files.  A thin CLI (``citenv``) drives the
same pipeline over single seeds, year pairs, or the whole corpus.
"""

from .environment import Environment, Mode, build_local_matrix, seed_dimension_total, select_members
from .errors import (
    CitenvError,
    DataError,
    DuplicateKeyError,
    NumericalError,
    ParseError,
    UndefinedSimilarityError,
    UnresolvedReferenceError,
    ValidationError,
)
from .impact import (
    ImpactProfile,
    NodeGeometry,
    ReferenceSplit,
    environment_profiles,
    grand_sum,
    impact_profile,
    node_geometry,
    percent_half_up,
    rank_by_local_impact,
    reference_split_report,
    render_impact_table,
)
from .layout import (
    Layout,
    SpringSystem,
    all_pairs_distances,
    build_spring_system,
    compose_components,
    edge_distance,
    kamada_kawai_solve,
    layout_graph,
    scale_to_diameter,
    spring_energy,
    spring_gradient,
)
from .pipeline import RunConfig, cmd_batch, cmd_compare, cmd_map, run_map
from .similarity import (
    CosineMatrix,
    Orientation,
    SimilarityEdge,
    cosine,
    pairwise_cosines,
    threshold_edges,
)
from .store import (
    Axis,
    CitationGraph,
    CitationStore,
    Journal,
    JournalRegistry,
    load_citation_edges,
    load_journal_registry,
    margin_total,
    parse_citation_edges,
    parse_journal_registry,
    suppress_single_citations,
)

__version__ = "0.1.0"
