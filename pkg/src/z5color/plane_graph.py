"""Plane near-triangulations as explicit rotation systems.

A near-triangulation is a connected simple plane graph all of whose inner
faces are triangles.  The embedding is given, not recomputed: each vertex
stores its neighbors in clockwise order, and a distinguished outer cycle
names the unbounded face.  Faces are recovered by dart tracing: the dart
after (u, v) is (v, w) where w follows u in the rotation at v.  Under this
convention the outer cycle, read clockwise as given, is itself one traced
orbit; all other orbits are the inner faces, traversed counterclockwise.

Vertices are dense indices 0..n-1.  All structural queries the extension
arguments need live here: chords, separating short cycles, splitting along
a path, block decomposition, and extraction of the closed region enclosed
by a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

Dart = tuple[int, int]


class PlaneGraphError(ValueError):
    """Raised for structurally impossible requests (not mere invalidity)."""


@dataclass(frozen=True)
class PlaneNearTriangulation:
    """Rotation system plus outer cycle; immutable and hashable.

    Construction does not validate (``validate`` reports every violation);
    the solver and family builders only ever construct valid instances.
    """

    vertex_count: int
    rotation: tuple[tuple[int, ...], ...]
    outer_cycle: tuple[int, ...]
    _adj: tuple = field(init=False, repr=False, compare=False, hash=False)
    _outer_set: frozenset = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_adj", tuple(frozenset(nb) for nb in self.rotation))
        object.__setattr__(self, "_outer_set", frozenset(self.outer_cycle))

    @classmethod
    def from_lists(
        cls, rotation: Sequence[Sequence[int]], outer_cycle: Sequence[int]
    ) -> PlaneNearTriangulation:
        return cls(
            len(rotation),
            tuple(tuple(nb) for nb in rotation),
            tuple(outer_cycle),
        )

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def adjacency(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.vertex_count):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.rotation) // 2

    def is_outer(self, v: int) -> bool:
        return v in self._outer_set

    def outer_set(self) -> frozenset[int]:
        return self._outer_set

    def interior_vertices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.vertex_count) if v not in self._outer_set)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class SplitResult:
    """Two near-triangulations whose union is the input and whose
    intersection is the splitting path.  Vertices are relabeled densely;
    ``map_one``/``map_two`` carry old -> new indices."""

    part_one: PlaneNearTriangulation
    part_two: PlaneNearTriangulation
    shared_boundary: tuple[int, ...]
    map_one: tuple[tuple[int, int], ...]
    map_two: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class Block:
    """One block of the block decomposition (2-connected component,
    bridge, or isolated vertex)."""

    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Face tracing
# ---------------------------------------------------------------------------


def trace_faces(rotation: Sequence[Sequence[int]]) -> list[tuple[Dart, ...]]:
    """All dart orbits of the rotation system, each orbit one face."""
    position: list[dict[int, int]] = [
        {u: i for i, u in enumerate(nb)} for nb in rotation
    ]
    seen: set[Dart] = set()
    faces: list[tuple[Dart, ...]] = []
    for v0 in range(len(rotation)):
        for u0 in rotation[v0]:
            if (v0, u0) in seen:
                continue
            orbit: list[Dart] = []
            dart = (v0, u0)
            while dart not in seen:
                seen.add(dart)
                orbit.append(dart)
                u, v = dart
                nb = rotation[v]
                dart = (v, nb[(position[v][u] + 1) % len(nb)])
            faces.append(tuple(orbit))
    return faces


@lru_cache(maxsize=512)
def faces_of(graph: PlaneNearTriangulation) -> tuple[tuple[Dart, ...], ...]:
    return tuple(trace_faces(graph.rotation))


def _face_vertices(face: tuple[Dart, ...]) -> tuple[int, ...]:
    return tuple(d[0] for d in face)


def _cyclic_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        start = b.index(a[0])
    except ValueError:
        return False
    n = len(a)
    return all(a[i] == b[(start + i) % n] for i in range(n))


def outer_face_index(graph: PlaneNearTriangulation) -> int | None:
    """Index of the traced orbit that equals the outer cycle, or None."""
    outer = list(graph.outer_cycle)
    for i, face in enumerate(faces_of(graph)):
        if _cyclic_equal(outer, list(_face_vertices(face))):
            return i
    return None


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(graph: PlaneNearTriangulation) -> ValidationReport:
    """Report every violated near-triangulation invariant (empty = valid)."""
    problems: list[str] = []
    n = graph.vertex_count
    if n <= 2:
        return ValidationReport((f"degenerate: {n} vertices, no outer cycle exists",))
    if len(graph.rotation) != n:
        return ValidationReport(
            (f"rotation has {len(graph.rotation)} entries for {n} vertices",)
        )

    for v, nb in enumerate(graph.rotation):
        if any(not 0 <= u < n for u in nb):
            problems.append(f"rotation at {v} mentions an out-of-range vertex")
        if v in nb:
            problems.append(f"loop at {v}")
        if len(set(nb)) != len(nb):
            problems.append(f"repeated neighbor in rotation at {v} (parallel edge)")
    if problems:
        return ValidationReport(tuple(problems))

    for v in range(n):
        for u in graph.rotation[v]:
            if v not in graph._adj[u]:
                problems.append(f"asymmetric adjacency {v}-{u}")
    if problems:
        return ValidationReport(tuple(problems))

    # Connectivity.
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in graph.rotation[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    if len(seen) != n:
        problems.append(f"graph is disconnected ({len(seen)} of {n} reachable)")
        return ValidationReport(tuple(problems))

    # Outer cycle sanity.
    oc = graph.outer_cycle
    if len(oc) < 3:
        problems.append("outer cycle shorter than 3")
    elif len(set(oc)) != len(oc):
        problems.append("outer cycle repeats a vertex")
    elif any(not 0 <= v < n for v in oc):
        problems.append("outer cycle mentions an out-of-range vertex")
    else:
        for i, v in enumerate(oc):
            u = oc[(i + 1) % len(oc)]
            if not graph.has_edge(v, u):
                problems.append(f"outer cycle step {v}-{u} is not an edge")
    if problems:
        return ValidationReport(tuple(problems))

    # Euler check: the rotation embeds in the plane iff face tracing yields
    # exactly E - V + 2 orbits.
    faces = faces_of(graph)
    expected = graph.edge_count() - n + 2
    if len(faces) != expected:
        problems.append(
            f"face tracing yields {len(faces)} faces, planarity needs {expected}"
        )
        return ValidationReport(tuple(problems))

    outer_idx = outer_face_index(graph)
    if outer_idx is None:
        problems.append("outer cycle does not bound a traced face (clockwise order)")
        return ValidationReport(tuple(problems))

    for i, face in enumerate(faces):
        if i != outer_idx and len(face) != 3:
            verts = _face_vertices(face)
            problems.append(f"inner face of length {len(face)}: {verts}")
    return ValidationReport(tuple(problems))


# ---------------------------------------------------------------------------
# Structure queries
# ---------------------------------------------------------------------------


def chords(graph: PlaneNearTriangulation) -> list[tuple[int, int]]:
    """Edges joining two non-consecutive outer-cycle vertices."""
    oc = graph.outer_cycle
    k = len(oc)
    pos = {v: i for i, v in enumerate(oc)}
    out = []
    for u, v in graph.edges():
        if u in pos and v in pos:
            gap = abs(pos[u] - pos[v])
            if gap not in (1, k - 1):
                out.append((u, v))
    return out


def _cycle_sides(
    graph: PlaneNearTriangulation, cycle: Sequence[int]
) -> tuple[frozenset[int], frozenset[int], tuple[int, ...]]:
    """Classify vertices strictly inside / outside a cycle.

    Returns (inside, outside, enclosed_face_indices) where inside is the set
    of vertices on the bounded side not containing the outer face.
    """
    faces = faces_of(graph)
    outer_idx = outer_face_index(graph)
    if outer_idx is None:
        raise PlaneGraphError("graph has no traced outer face; validate first")
    cyc_edges = set()
    k = len(cycle)
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        if not graph.has_edge(a, b):
            raise PlaneGraphError(f"cycle step {a}-{b} is not an edge")
        cyc_edges.add((min(a, b), max(a, b)))

    face_of_dart: dict[Dart, int] = {}
    for i, face in enumerate(faces):
        for dart in face:
            face_of_dart[dart] = i

    # Dual BFS from the outer face, never crossing a cycle edge.
    reached = {outer_idx}
    queue = [outer_idx]
    while queue:
        fi = queue.pop()
        for u, v in faces[fi]:
            if (min(u, v), max(u, v)) in cyc_edges:
                continue
            other = face_of_dart[(v, u)]
            if other not in reached:
                reached.add(other)
                queue.append(other)

    enclosed = tuple(i for i in range(len(faces)) if i not in reached)
    on_cycle = set(cycle)
    inside = set()
    for i in enclosed:
        inside.update(_face_vertices(faces[i]))
    inside -= on_cycle
    outside = set(range(graph.vertex_count)) - on_cycle - inside
    return frozenset(inside), frozenset(outside), enclosed


def separating_cycles(graph: PlaneNearTriangulation, length: int) -> list[tuple[int, ...]]:
    """All cycles of the given length (3 or 4) with vertices strictly on
    both sides.  A triangle is separating iff it is not facial and at least
    one vertex lies outside it; the outer cycle itself never counts."""
    if length not in (3, 4):
        raise PlaneGraphError("only lengths 3 and 4 are supported")
    found = []
    n = graph.vertex_count
    if length == 3:
        candidates = [
            (u, v, w)
            for u in range(n)
            for v in graph._adj[u]
            if v > u
            for w in graph._adj[u]
            if w > v and graph.has_edge(v, w)
        ]
    else:
        candidates = []
        for a in range(n):
            nb = sorted(x for x in graph._adj[a] if x > a)
            for i, b in enumerate(nb):
                for d in nb[i + 1 :]:
                    for c in graph._adj[b]:
                        if c > a and c != d and c in graph._adj[d]:
                            candidates.append((a, b, c, d))
    for cyc in candidates:
        inside, outside, _ = _cycle_sides(graph, cyc)
        if inside and outside:
            found.append(cyc)
    return found


def enclosed_region(
    graph: PlaneNearTriangulation, cycle: Sequence[int]
) -> tuple[PlaneNearTriangulation, dict[int, int]]:
    """Extract the closed region bounded by a cycle, on the side away from
    the outer face.  Returns the region as a near-triangulation (relabeled:
    boundary first in traced clockwise order starting at cycle[0], then
    interior by ascending old index) plus the old -> new map."""
    inside, _, enclosed = _cycle_sides(graph, cycle)
    faces = faces_of(graph)
    keep_edges: set[tuple[int, int]] = set()
    k = len(cycle)
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        keep_edges.add((min(a, b), max(a, b)))
    for fi in enclosed:
        for u, v in faces[fi]:
            keep_edges.add((min(u, v), max(u, v)))

    region_vertices = sorted(set(cycle) | inside)
    sub_rotation = {
        v: [u for u in graph.rotation[v] if (min(u, v), max(u, v)) in keep_edges]
        for v in region_vertices
    }

    # Orient the boundary by re-tracing inside the region: the orbit whose
    # vertex set is the cycle (and is not an enclosed triangle of the same
    # vertices) is the region's clockwise outer cycle.
    dense = {v: i for i, v in enumerate(region_vertices)}
    rot_dense = [
        tuple(dense[u] for u in sub_rotation[v]) for v in region_vertices
    ]
    cycle_dense = [dense[v] for v in cycle]
    matches = [
        list(_face_vertices(f))
        for f in trace_faces(rot_dense)
        if set(_face_vertices(f)) == set(cycle_dense) and len(f) == k
    ]
    if not matches:
        raise PlaneGraphError("cycle does not bound a region of the graph")
    oriented = next(
        (mch for mch in matches if _cyclic_equal(cycle_dense, mch)), matches[0]
    )
    start = oriented.index(cycle_dense[0])
    oriented = oriented[start:] + oriented[:start]

    # Final labels: boundary in oriented order, then interior ascending.
    order = [region_vertices[i] for i in oriented]
    order += [v for v in region_vertices if v not in set(cycle)]
    relabel = {old: new for new, old in enumerate(order)}
    rotation = tuple(
        tuple(relabel[u] for u in sub_rotation[old]) for old in order
    )
    outer = tuple(relabel[region_vertices[i]] for i in oriented)
    sub = PlaneNearTriangulation(len(order), rotation, outer)
    return sub, relabel


def split_along(
    graph: PlaneNearTriangulation, path: Sequence[int]
) -> SplitResult:
    """Split along a path whose endpoints lie on the outer cycle and whose
    interior vertices (if any) are strictly inside.  A chord is the length-2
    case.  Both parts are near-triangulations sharing exactly the path."""
    if len(path) < 2:
        raise PlaneGraphError("splitting path needs at least two vertices")
    if len(set(path)) != len(path):
        raise PlaneGraphError("splitting path repeats a vertex")
    a, b = path[0], path[-1]
    oc = graph.outer_cycle
    pos = {v: i for i, v in enumerate(oc)}
    if a not in pos or b not in pos:
        raise PlaneGraphError("both path endpoints must lie on the outer cycle")
    if a == b:
        raise PlaneGraphError("path endpoints must be distinct")
    for v in path[1:-1]:
        if v in pos:
            raise PlaneGraphError(f"path interior vertex {v} lies on the outer cycle")
    for u, v in zip(path, path[1:]):
        if not graph.has_edge(u, v):
            raise PlaneGraphError(f"path step {u}-{v} is not an edge")
    if len(path) == 2 and abs(pos[a] - pos[b]) in (1, len(oc) - 1):
        raise PlaneGraphError("a splitting chord must join non-consecutive outer vertices")

    i, j = pos[a], pos[b]
    arc_ab = [oc[(i + t) % len(oc)] for t in range((j - i) % len(oc) + 1)]
    arc_ba = [oc[(j + t) % len(oc)] for t in range((i - j) % len(oc) + 1)]
    inner = list(path[1:-1])
    cycle_one = arc_ab + inner[::-1]
    cycle_two = arc_ba + inner

    part_one, map_one = enclosed_region(graph, cycle_one)
    part_two, map_two = enclosed_region(graph, cycle_two)
    return SplitResult(
        part_one,
        part_two,
        tuple(path),
        tuple(sorted(map_one.items())),
        tuple(sorted(map_two.items())),
    )


def blocks(graph) -> list[Block]:
    """Standard block decomposition of any simple graph (adjacency lists or
    a near-triangulation).  Cut vertices appear in multiple blocks; isolated
    vertices form single-vertex blocks."""
    if isinstance(graph, PlaneNearTriangulation):
        adj = [list(nb) for nb in graph.rotation]
    else:
        adj = [list(nb) for nb in graph]
    n = len(adj)
    index = [0] * n  # discovery order, 0 = unvisited
    low = [0] * n
    counter = 1
    edge_stack: list[tuple[int, int]] = []
    out: list[Block] = []

    def flush(until: tuple[int, int]) -> None:
        comp: list[tuple[int, int]] = []
        while True:
            e = edge_stack.pop()
            comp.append(e)
            if e == until:
                break
        verts = sorted({v for e in comp for v in e})
        edges = sorted({(min(e), max(e)) for e in comp})
        out.append(Block(tuple(verts), tuple(edges)))

    for root in range(n):
        if index[root]:
            continue
        if not adj[root]:
            out.append(Block((root,), ()))
            index[root] = counter
            counter += 1
            continue
        index[root] = low[root] = counter
        counter += 1
        work: list[tuple[int, int, int]] = [(root, -1, 0)]
        while work:
            v, parent, ptr = work.pop()
            descended = False
            while ptr < len(adj[v]):
                u = adj[v][ptr]
                ptr += 1
                if not index[u]:
                    index[u] = low[u] = counter
                    counter += 1
                    edge_stack.append((v, u))
                    work.append((v, parent, ptr))
                    work.append((u, v, 0))
                    descended = True
                    break
                if u != parent and index[u] < index[v]:
                    edge_stack.append((v, u))
                    low[v] = min(low[v], index[u])
            if descended:
                continue
            if parent != -1:
                low[parent] = min(low[parent], low[v])
                if low[v] >= index[parent]:
                    flush((parent, v))
    return out
