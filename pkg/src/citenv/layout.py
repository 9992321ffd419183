"""Spring-energy graph layout over cosine-derived distances.

Strong similarity should mean short distance, so an edge's rest length is
``1 - cosine`` (floored).  Graph-theoretic shortest paths over those edge
distances define the desired length between every connected pair, and the
drawing minimizes the classic spring energy

    E = sum_{i<j} k_ij / 2 * (|p_i - p_j| - l_ij)^2,   k_ij = 1 / d_ij^2

by repeatedly taking the node whose energy gradient is largest and moving
it with damped 2x2 Newton steps until every node's gradient norm drops
below the tolerance.  Everything, including the jittered circular start
and the placement of disconnected pieces, is seeded and deterministic:
identical inputs always reproduce identical coordinates.

The solve happens in graph-distance units (unit edge length); callers
rescale the finished picture to display units, which is a pure similarity
transform and changes nothing about the shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import NumericalError, ValidationError

EDGE_DISTANCE_FLOOR = 1e-3
DEFAULT_TOLERANCE = 1e-4
DEFAULT_RESTARTS = 4
_INNER_NEWTON_LIMIT = 50
_STEP_HALVINGS = 40


def edge_distance(cosine: float, floor: float = EDGE_DISTANCE_FLOOR) -> float:
    """Spring rest distance for a retained edge: max(1 - cosine, floor).

    The floor keeps a cosine of exactly 1 from demanding a zero-length
    spring, which would put two nodes on top of each other.
    """
    return max(1.0 - cosine, floor)


def all_pairs_distances(
    n: int, edges: Iterable[tuple[int, int, float]]
) -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """Shortest-path distances and the connected-component partition.

    Distances are +inf across components and 0 on the diagonal.  The
    component tuple is sorted by each component's smallest node index, so
    downstream placement is deterministic.
    """
    weights = np.zeros((n, n))
    for i, j, dist in edges:
        if i == j:
            continue
        if dist <= 0:
            raise ValidationError(f"edge distance must be positive, got {dist}")
        current = weights[i, j]
        if current == 0 or dist < current:
            weights[i, j] = weights[j, i] = dist
    if n == 0:
        return np.zeros((0, 0)), ()
    distances = shortest_path(weights, method="D", directed=False, unweighted=False)
    n_comp, labels = connected_components(weights > 0, directed=False)
    groups: dict[int, list[int]] = {}
    for node, label in enumerate(labels):
        groups.setdefault(int(label), []).append(node)
    components = tuple(
        tuple(group) for group in sorted(groups.values(), key=lambda g: g[0])
    )
    return distances, components


@dataclass(frozen=True, eq=False)
class SpringSystem:
    """Desired lengths and spring strengths derived from a distance matrix."""

    distances: np.ndarray
    lengths: np.ndarray
    strengths: np.ndarray
    components: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.distances.shape[0]

    def is_single_component(self) -> bool:
        return len(self.components) == 1 and np.isfinite(self.distances).all()


def build_spring_system(
    n: int, edges: Iterable[tuple[int, int, float]], stiffness: float = 1.0
) -> SpringSystem:
    """Spring system over all nodes; lengths/strengths are zeroed where
    nodes are disconnected so those pairs never contribute energy."""
    distances, components = all_pairs_distances(n, edges)
    finite = np.isfinite(distances)
    off_diag = finite & ~np.eye(n, dtype=bool)
    lengths = np.where(off_diag, distances, 0.0)
    strengths = np.zeros_like(distances)
    strengths[off_diag] = stiffness / distances[off_diag] ** 2
    return SpringSystem(
        distances=distances,
        lengths=lengths,
        strengths=strengths,
        components=components,
    )


def subsystem(system: SpringSystem, nodes: Sequence[int]) -> SpringSystem:
    """Restriction of a spring system to one component's nodes."""
    idx = np.ix_(nodes, nodes)
    return SpringSystem(
        distances=system.distances[idx],
        lengths=system.lengths[idx],
        strengths=system.strengths[idx],
        components=(tuple(range(len(nodes))),),
    )


def spring_energy(system: SpringSystem, positions: np.ndarray) -> float:
    """Total spring energy of a configuration."""
    p = np.asarray(positions, dtype=float)
    diff = p[:, None, :] - p[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    stretch = dist - system.lengths
    energy = 0.5 * system.strengths * stretch**2
    return float(np.triu(energy, k=1).sum())


def spring_gradient(system: SpringSystem, positions: np.ndarray) -> np.ndarray:
    """Analytic gradient of the spring energy, one (x, y) row per node."""
    p = np.asarray(positions, dtype=float)
    n = p.shape[0]
    diff = p[:, None, :] - p[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    np.fill_diagonal(dist, 1.0)  # diagonal terms are masked by zero strength
    factor = system.strengths * (1.0 - system.lengths / dist)
    np.fill_diagonal(factor, 0.0)
    return (factor[:, :, None] * diff).sum(axis=1)


@dataclass(eq=False)
class Layout:
    """Solver output: coordinates plus convergence diagnostics."""

    positions: np.ndarray
    final_max_gradient: float
    iterations: int
    converged: bool
    energy: float


def _layout_radius(system: SpringSystem) -> float:
    finite = system.distances[np.isfinite(system.distances)]
    radius = float(finite.max()) / 2.0 if finite.size else 1.0
    return max(radius, EDGE_DISTANCE_FLOOR)


def _circle_positions(system: SpringSystem, rng: np.random.Generator) -> np.ndarray:
    """Circle in node order, jittered to break the perfect symmetry."""
    n = system.size
    radius = _layout_radius(system)
    angles = 2.0 * np.pi * np.arange(n) / n
    positions = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    positions += rng.normal(scale=0.01 * radius, size=(n, 2))
    return positions


def _mds_positions(system: SpringSystem, rng: np.random.Generator) -> np.ndarray:
    """Classical-scaling start: the strain-optimal plane of the distances.

    Double-center the squared distance matrix and project onto its two
    leading eigenvectors (signs fixed canonically so the result is
    deterministic).  This usually starts the descent inside the right
    basin and near the minimum.  A small jitter breaks exactly collinear
    embeddings, which would make the per-node Hessians singular.
    """
    d2 = system.distances**2
    n = system.size
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * centering @ d2 @ centering
    eigenvalues, eigenvectors = np.linalg.eigh(b)
    positions = np.zeros((n, 2))
    for axis, idx in enumerate((n - 1, n - 2) if n >= 2 else (n - 1,)):
        value = max(float(eigenvalues[idx]), 0.0)
        vector = eigenvectors[:, idx]
        anchor = int(np.abs(vector).argmax())
        if vector[anchor] < 0:
            vector = -vector
        positions[:, axis] = math.sqrt(value) * vector
    positions += rng.normal(scale=1e-3 * _layout_radius(system), size=(n, 2))
    return positions


def _pair_terms(
    positions: np.ndarray, m: int, k_row: np.ndarray, l_row: np.ndarray
) -> np.ndarray:
    """Gradient contribution of the (i, m) spring to each node i.

    Row m is zero (the diagonal spring strength is zero); node m's own
    gradient is minus the column sum of this array.
    """
    diff = positions - positions[m]
    dist = np.sqrt((diff**2).sum(axis=1))
    dist[m] = 1.0
    np.maximum(dist, 1e-12, out=dist)
    factor = k_row * (1.0 - l_row / dist)
    return factor[:, None] * diff


def _local_energy(point: np.ndarray, positions: np.ndarray, m: int,
                  k_row: np.ndarray, l_row: np.ndarray) -> float:
    """Energy of the springs touching node m if it sat at ``point``."""
    diff = point - positions
    dist = np.sqrt((diff**2).sum(axis=1))
    dist[m] = 1.0  # k_row[m] is zero, the value only avoids 0 - l = junk
    stretch = dist - l_row
    return float(0.5 * (k_row * stretch**2).sum())


def _move_node(
    positions: np.ndarray, m: int, k_row: np.ndarray, l_row: np.ndarray,
    tolerance: float,
) -> None:
    """Damped Newton descent of node m's local energy, in place.

    Falls back to a plain gradient direction when the 2x2 Hessian is not
    usable, and halves the step until the local energy does not increase;
    the total energy can therefore never rise across accepted steps.
    """
    for _ in range(_INNER_NEWTON_LIMIT):
        diff = positions[m] - positions
        dist = np.sqrt((diff**2).sum(axis=1))
        dist[m] = 1.0
        np.maximum(dist, 1e-12, out=dist)
        inv = l_row / dist
        factor = k_row * (1.0 - inv)
        grad = factor @ diff
        if math.hypot(grad[0], grad[1]) < tolerance:
            break
        stretch = dist - l_row
        before = float(0.5 * (k_row * stretch**2).sum())
        ratio3 = inv / dist**2
        dx, dy = diff[:, 0], diff[:, 1]
        kl3 = k_row * ratio3
        h_xx = float((k_row - kl3 * dy**2).sum())
        h_yy = float((k_row - kl3 * dx**2).sum())
        h_xy = float((kl3 * dx * dy).sum())
        det = h_xx * h_yy - h_xy * h_xy
        if det > 1e-12 and h_xx > 0:
            step = np.array(
                [
                    (-grad[0] * h_yy + grad[1] * h_xy) / det,
                    (grad[0] * h_xy - grad[1] * h_xx) / det,
                ]
            )
        else:
            norm = math.hypot(grad[0], grad[1])
            step = -grad / norm * min(1.0, norm)
        moved = False
        for _ in range(_STEP_HALVINGS):
            candidate = positions[m] + step
            if _local_energy(candidate, positions, m, k_row, l_row) <= before:
                positions[m] = candidate
                moved = True
                break
            step = step / 2.0
        if not moved:
            break


_REFRESH_EVERY = 256


def _descend(
    system: SpringSystem,
    positions: np.ndarray,
    tolerance: float,
    max_outer: int,
) -> tuple[np.ndarray, int, float, bool]:
    """Outer loop: always move the node with the largest gradient norm.

    The full gradient is maintained incrementally: moving node m only
    changes the (i, m) spring terms, so each step costs O(n) instead of
    O(n^2).  The gradient is refreshed from scratch periodically and
    before convergence is declared, so accumulated float drift cannot
    fake a converged state.
    """
    k = system.strengths
    l = system.lengths
    iterations = 0
    converged = False
    grads = spring_gradient(system, positions)
    norms = np.sqrt((grads**2).sum(axis=1))
    while iterations < max_outer:
        m = int(norms.argmax())
        if norms[m] < tolerance:
            grads = spring_gradient(system, positions)
            norms = np.sqrt((grads**2).sum(axis=1))
            if float(norms.max()) < tolerance:
                converged = True
                break
            continue
        before = positions[m].copy()
        old_terms = _pair_terms(positions, m, k[m], l[m])
        _move_node(positions, m, k[m], l[m], tolerance)
        iterations += 1
        if iterations % _REFRESH_EVERY == 0:
            grads = spring_gradient(system, positions)
        else:
            new_terms = _pair_terms(positions, m, k[m], l[m])
            grads += new_terms - old_terms
            grads[m] = -new_terms.sum(axis=0)
        norms = np.sqrt((grads**2).sum(axis=1))
        if np.array_equal(before, positions[m]):
            # The worst node cannot improve at floating precision; stop
            # instead of spinning on it until max_outer.
            break
    grads = spring_gradient(system, positions)
    max_grad = float(np.sqrt((grads**2).sum(axis=1)).max())
    converged = max_grad < tolerance
    return positions, iterations, max_grad, converged


def kamada_kawai_solve(
    system: SpringSystem,
    seed: int = 42,
    tolerance: float = DEFAULT_TOLERANCE,
    max_outer: int | None = None,
    restarts: int = DEFAULT_RESTARTS,
) -> Layout:
    """Minimize the spring energy of a single connected component.

    Runs ``restarts`` independent seeded starts and keeps the
    lowest-energy result (ties go to the earliest start), so the outcome
    is a pure function of the inputs and the seed.  The first start is
    the classical-scaling projection of the distance matrix, which almost
    always sits in the global basin already; the remaining starts are
    jittered circles in node order, guarding against the occasional bad
    basin.
    """
    if not system.is_single_component():
        raise ValidationError("solver requires a single connected component")
    n = system.size
    if max_outer is None:
        max_outer = 1000 * n
    if n == 1:
        return Layout(
            positions=np.zeros((1, 2)),
            final_max_gradient=0.0,
            iterations=0,
            converged=True,
            energy=0.0,
        )
    best: Layout | None = None
    for attempt in range(max(1, restarts)):
        rng = np.random.default_rng([seed, attempt])
        if attempt == 0:
            positions = _mds_positions(system, rng)
        else:
            positions = _circle_positions(system, rng)
        positions, iterations, max_grad, converged = _descend(
            system, positions, tolerance, max_outer
        )
        energy = spring_energy(system, positions)
        if not (np.isfinite(positions).all() and math.isfinite(energy)):
            raise NumericalError(
                f"layout diverged (seed={seed}, attempt={attempt}, energy={energy})"
            )
        candidate = Layout(
            positions=positions,
            final_max_gradient=max_grad,
            iterations=iterations,
            converged=converged,
            energy=energy,
        )
        if best is None or candidate.energy < best.energy:
            best = candidate
    assert best is not None
    return best


def _perimeter_point(x0: float, y0: float, x1: float, y1: float, t: float) -> tuple[float, float]:
    """Point at parameter t in [0, 1) along a rectangle's perimeter."""
    w, h = x1 - x0, y1 - y0
    total = 2.0 * (w + h)
    s = (t % 1.0) * total
    if s < w:
        return x0 + s, y0
    s -= w
    if s < h:
        return x1, y0 + s
    s -= h
    if s < w:
        return x1 - s, y1
    s -= w
    return x0, y1 - s


def compose_components(
    component_layouts: Sequence[tuple[Sequence[int], Layout]],
    isolated: Sequence[int],
    n: int,
    seed: int = 42,
) -> np.ndarray:
    """Assemble per-component layouts and isolated nodes into one picture.

    Multi-node components go onto a grid sized by the largest bounding
    box; isolated nodes are spread around the outer margin at a seeded
    starting phase.  This replaces the random scatter a disconnected
    graph would otherwise produce with reproducible positions.
    """
    positions = np.zeros((n, 2))
    if len(component_layouts) == 1 and not isolated:
        nodes, layout = component_layouts[0]
        positions[list(nodes)] = layout.positions
        return positions
    if component_layouts:
        boxes = []
        for nodes, layout in component_layouts:
            p = layout.positions
            low, high = p.min(axis=0), p.max(axis=0)
            boxes.append((low, high))
        span = max(float((high - low).max()) for low, high in boxes)
        cell = max(span, 1.0) * 1.3
        cols = math.ceil(math.sqrt(len(component_layouts)))
        for order, ((nodes, layout), (low, high)) in enumerate(
            zip(component_layouts, boxes)
        ):
            center = (low + high) / 2.0
            row, col = divmod(order, cols)
            target = np.array([col * cell, -row * cell])
            positions[list(nodes)] = layout.positions - center + target
        placed = [i for nodes, _ in component_layouts for i in nodes]
        low = positions[placed].min(axis=0)
        high = positions[placed].max(axis=0)
    else:
        low = np.array([-0.5, -0.5])
        high = np.array([0.5, 0.5])
    if isolated:
        margin = 0.08 * max(float((high - low).max()), 1.0)
        x0, y0 = low - margin
        x1, y1 = high + margin
        rng = np.random.default_rng([seed, 104729])
        phase = float(rng.random())
        count = len(isolated)
        for order, node in enumerate(isolated):
            t = phase + order / count
            positions[node] = _perimeter_point(x0, y0, x1, y1, t)
    return positions


def scale_to_diameter(positions: np.ndarray, diameter: float = 1000.0) -> np.ndarray:
    """Center the picture and scale its bounding-box diagonal to ``diameter``."""
    p = np.asarray(positions, dtype=float)
    if p.shape[0] == 0:
        return p.copy()
    low, high = p.min(axis=0), p.max(axis=0)
    extent = float(np.hypot(*(high - low)))
    center = (low + high) / 2.0
    if extent == 0.0:
        return p - center
    return (p - center) * (diameter / extent)


def layout_graph(
    n: int,
    edges: Iterable[tuple[int, int, float]],
    seed: int = 42,
    tolerance: float = DEFAULT_TOLERANCE,
    max_outer: int | None = None,
    restarts: int = DEFAULT_RESTARTS,
) -> Layout:
    """Full pipeline for one graph: distances, per-component solves, composition."""
    system = build_spring_system(n, edges)
    multi = [c for c in system.components if len(c) > 1]
    isolated = [c[0] for c in system.components if len(c) == 1]
    solved: list[tuple[Sequence[int], Layout]] = []
    iterations = 0
    max_grad = 0.0
    converged = True
    energy = 0.0
    for comp_index, nodes in enumerate(multi):
        comp_layout = kamada_kawai_solve(
            subsystem(system, nodes),
            seed=seed + comp_index,
            tolerance=tolerance,
            max_outer=max_outer,
            restarts=restarts,
        )
        solved.append((nodes, comp_layout))
        iterations += comp_layout.iterations
        max_grad = max(max_grad, comp_layout.final_max_gradient)
        converged = converged and comp_layout.converged
        energy += comp_layout.energy
    positions = compose_components(solved, isolated, n, seed=seed)
    return Layout(
        positions=positions,
        final_max_gradient=max_grad,
        iterations=iterations,
        converged=converged,
        energy=energy,
    )
