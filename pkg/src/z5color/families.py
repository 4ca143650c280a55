"""Wheel-family grammar: constructors, recognizer, and enumeration.

The graph classes used by the extendability arguments are generated by a
small grammar over plane near-triangulations carrying a *principal path*
(three consecutive outer vertices; the middle one is the *major* vertex):

- ``BrokenWheel(k)``: outer k-cycle fanned from the major vertex by chords.
- ``Wheel(k)``: outer k-cycle plus a hub joined to all of it.
- ``Glue(left, right)``: identify one principal edge of each part so the
  major vertices coincide; ``right`` ends up on the head side.  Closing
  wheels and broken wheels under Glue gives the generalized wheels.
- ``InsertWheel(base, edge, subdivisions)``: pick a facial triangle x-u-y
  with x, y consecutive outer vertices (neither the major) and u interior;
  replace the outer edge x-y by a path of ``subdivisions`` new vertices and
  add a new hub joined to x, y, u and the path.  Closing wheels (resp.
  generalized wheels) under insertion gives the multi-wheels (resp. the
  generalized multi-wheels).

Canonical numbering of every built graph: outer cycle first, clockwise from
the major vertex, then interior vertices in insertion order.  Recognition
inverts the grammar: peel chords at the major vertex into Glue seams, peel
inserted hubs in reverse, and bottom out at wheels and broken wheels.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

from .plane_graph import PlaneNearTriangulation, enclosed_region


class FamilyError(ValueError):
    """Malformed descriptor or impossible construction step."""


@dataclass(frozen=True)
class PrincipalPath:
    """Three consecutive outer vertices in clockwise order; ``major`` is the
    middle one, ``head`` the clockwise-next principal neighbor."""

    tail: int
    major: int
    head: int


@dataclass(frozen=True)
class BrokenWheel:
    size: int  # outer cycle length == vertex count, >= 3


@dataclass(frozen=True)
class Wheel:
    size: int  # outer cycle length; vertex count is size + 1


@dataclass(frozen=True)
class Glue:
    left: "FamilyDescriptor"
    right: "FamilyDescriptor"


@dataclass(frozen=True)
class InsertWheel:
    base: "FamilyDescriptor"
    edge: int  # outer edge from canonical vertex `edge` to `edge + 1` of the base
    subdivisions: int


FamilyDescriptor = Union[BrokenWheel, Wheel, Glue, InsertWheel]


def descriptor_size(d: FamilyDescriptor) -> int:
    """Vertex count of the built graph."""
    if isinstance(d, BrokenWheel):
        return d.size
    if isinstance(d, Wheel):
        return d.size + 1
    if isinstance(d, Glue):
        return descriptor_size(d.left) + descriptor_size(d.right) - 2
    if isinstance(d, InsertWheel):
        return descriptor_size(d.base) + 1 + d.subdivisions
    raise FamilyError(f"not a descriptor: {d!r}")


def is_multi_wheel_descriptor(d: FamilyDescriptor) -> bool:
    """Multi-wheels are exactly the Wheel/InsertWheel terms (no Glue, no
    broken wheels: a broken wheel is a generalized multi-wheel but never a
    multi-wheel)."""
    if isinstance(d, Wheel):
        return True
    if isinstance(d, InsertWheel):
        return is_multi_wheel_descriptor(d.base)
    return False


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def _relabel(
    rotation: dict[int, list[int]], outer: list[int], interiors: list[int]
) -> PlaneNearTriangulation:
    order = outer + interiors
    new = {old: i for i, old in enumerate(order)}
    rot = tuple(tuple(new[u] for u in rotation[v]) for v in order)
    return PlaneNearTriangulation(len(order), rot, tuple(range(len(outer))))


def _linear_from(seq: Sequence[int], start: int) -> list[int]:
    i = list(seq).index(start)
    return list(seq[i:]) + list(seq[:i])


def _build_broken_wheel(k: int) -> PlaneNearTriangulation:
    if k < 3:
        raise FamilyError(f"broken wheel needs size >= 3, got {k}")
    rot: list[list[int]] = [list(range(1, k)), [2, 0]]
    for i in range(2, k - 1):
        rot.append([i + 1, 0, i - 1])
    rot.append([0, k - 2])
    if k == 3:
        rot = [[1, 2], [2, 0], [0, 1]]
    return PlaneNearTriangulation.from_lists(rot, range(k))


def _build_wheel(k: int) -> PlaneNearTriangulation:
    if k < 3:
        raise FamilyError(f"wheel needs size >= 3, got {k}")
    hub = k
    rot = [[(j + 1) % k, hub, (j - 1) % k] for j in range(k)]
    rot.append(list(range(k)))
    return PlaneNearTriangulation.from_lists(rot, range(k))


def _glue(left: PlaneNearTriangulation, right: PlaneNearTriangulation) -> PlaneNearTriangulation:
    nl, kl = left.vertex_count, len(left.outer_cycle)
    nr, kr = right.vertex_count, len(right.outer_cycle)

    def map_r(v: int) -> int:
        if v == 0:
            return 0  # shared major
        if v == kr - 1:
            return 1  # right tail lands on left head
        return nl + (v - 1 if v < kr - 1 else v - 2)

    rotation: dict[int, list[int]] = {
        v: list(left.rotation[v]) for v in range(2, nl)
    }
    for v in range(1, nr):
        if v != kr - 1:
            rotation[map_r(v)] = [map_r(u) for u in right.rotation[v]]

    # Major: right fan (head..tail) then left fan minus its duplicated head.
    right_major = [map_r(u) for u in _linear_from(right.rotation[0], 1)]
    left_major = _linear_from(left.rotation[0], 1)
    rotation[0] = right_major + left_major[1:]

    # Shared vertex: left side from its outer successor around to the major,
    # then the right side continuing to its outer predecessor.
    left_shared = _linear_from(left.rotation[1], 2)
    right_shared = [map_r(u) for u in _linear_from(right.rotation[kr - 1], 0)]
    rotation[1] = left_shared + right_shared[1:]

    outer = [0] + [map_r(v) for v in range(1, kr)] + list(range(2, kl))
    interiors = [map_r(v) for v in range(kr, nr)] + list(range(kl, nl))
    return _relabel(rotation, outer, interiors)


def insertion_sites(graph: PlaneNearTriangulation) -> list[int]:
    """Outer edge indices where a wheel can be inserted: edge i joins
    canonical vertices i and i+1, avoids the major vertex, and its inner
    face has an interior third vertex."""
    k = len(graph.outer_cycle)
    sites = []
    for i in range(1, k - 1):
        x, y = i, i + 1
        nb = graph.rotation[x]
        u = nb[(nb.index(y) + 1) % len(nb)]
        if not graph.is_outer(u):
            sites.append(i)
    return sites


def _insert_wheel(
    base: PlaneNearTriangulation, edge: int, subdivisions: int
) -> PlaneNearTriangulation:
    k = len(base.outer_cycle)
    n = base.vertex_count
    j = subdivisions
    if j < 0:
        raise FamilyError("subdivision count must be nonnegative")
    if not 1 <= edge <= k - 2:
        raise FamilyError(
            f"edge index {edge} out of range (must avoid the major vertex)"
        )
    x, y = edge, edge + 1
    nb = base.rotation[x]
    u = nb[(nb.index(y) + 1) % len(nb)]
    if base.is_outer(u):
        raise FamilyError(
            f"outer edge {x}-{y} has no interior facial triangle to insert into"
        )

    path = [n + t for t in range(j)]  # subdividing vertices x..y
    hub = n + j
    rotation = {v: list(base.rotation[v]) for v in range(n)}

    ry = rotation[u]
    ry.insert(ry.index(x) + 1, hub)

    rx = rotation[x]
    if j == 0:
        rx.insert(rx.index(y) + 1, hub)
    else:
        pos = rx.index(y)
        rotation[x] = rx[:pos] + [path[0], hub] + rx[pos + 1 :]
    ry = rotation[y]
    if j == 0:
        ry.insert(ry.index(u) + 1, hub)
    else:
        pos = ry.index(x)
        rotation[y] = ry[:pos] + [hub, path[-1]] + ry[pos + 1 :]

    for t, w in enumerate(path):
        before = path[t - 1] if t > 0 else x
        after = path[t + 1] if t + 1 < j else y
        rotation[w] = [after, hub, before]
    rotation[hub] = [x, *path, y, u]

    outer = list(base.outer_cycle[: edge + 1]) + path + list(base.outer_cycle[edge + 1 :])
    interiors = [v for v in range(k, n)] + [hub]
    return _relabel(rotation, outer, interiors)


def build(d: FamilyDescriptor) -> tuple[PlaneNearTriangulation, PrincipalPath]:
    """Build the described graph with canonical numbering.

    The outer cycle is 0..k-1 clockwise with the major vertex at 0, so the
    principal path is always (k-1, 0, 1).
    """
    if isinstance(d, BrokenWheel):
        g = _build_broken_wheel(d.size)
    elif isinstance(d, Wheel):
        g = _build_wheel(d.size)
    elif isinstance(d, Glue):
        g = _glue(build(d.left)[0], build(d.right)[0])
    elif isinstance(d, InsertWheel):
        g = _insert_wheel(build(d.base)[0], d.edge, d.subdivisions)
    else:
        raise FamilyError(f"not a descriptor: {d!r}")
    k = len(g.outer_cycle)
    return g, PrincipalPath(tail=k - 1, major=0, head=1)


# ---------------------------------------------------------------------------
# Rooted-embedding signatures (isomorphism fixing the principal path)
# ---------------------------------------------------------------------------


def embedding_signature(graph: PlaneNearTriangulation, path: PrincipalPath) -> tuple:
    """Canonical form of the embedded graph rooted at the principal dart.

    Two graphs admit an isomorphism that fixes the principal path pointwise
    and preserves rotations iff their signatures are equal.
    """
    label = {path.major: 0, path.head: 1}
    ref = {path.major: path.head, path.head: path.major}
    order = [path.major, path.head]
    rows = []
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        lin = _linear_from(graph.rotation[v], ref[v])
        row = []
        for u in lin:
            if u not in label:
                label[u] = len(label)
                ref[u] = v
                order.append(u)
            row.append(label[u])
        rows.append(tuple(row))
    if len(label) != graph.vertex_count:
        raise FamilyError("graph is disconnected")
    return (graph.vertex_count, tuple(rows))


def principal_isomorphic(
    a: PlaneNearTriangulation,
    pa: PrincipalPath,
    b: PlaneNearTriangulation,
    pb: PrincipalPath,
) -> bool:
    return embedding_signature(a, pa) == embedding_signature(b, pb)


# ---------------------------------------------------------------------------
# Recognition
# ---------------------------------------------------------------------------


def _rotated_outer(graph: PlaneNearTriangulation, path: PrincipalPath) -> list[int]:
    oc = list(graph.outer_cycle)
    k = len(oc)
    p = oc.index(path.major)
    if oc[(p + 1) % k] != path.head or oc[(p - 1) % k] != path.tail:
        raise FamilyError(
            "principal path is not consecutive clockwise on the outer cycle"
        )
    return oc[p:] + oc[:p]


def _peel_candidate(
    graph: PlaneNearTriangulation, w: int, pos: dict[int, int], k: int
) -> tuple[int, int, list[int], int] | None:
    """Check whether interior vertex w is an inserted hub that can be
    removed.  Returns (x, y, subdividers, outer_position_of_x) or None."""
    interior_nbrs = [u for u in graph.rotation[w] if u not in pos]
    if len(interior_nbrs) != 1:
        return None
    u = interior_nbrs[0]
    arc = _linear_from(graph.rotation[w], u)[1:]
    if len(arc) < 2:
        return None
    x, y = arc[0], arc[-1]
    subdividers = arc[1:-1]
    p = pos[x]
    if p == 0 or pos[y] == 0 or any(pos[s] == 0 for s in subdividers):
        return None  # insertion never touches the major vertex
    if any(pos[v] != p + t for t, v in enumerate(arc)):
        return None  # must be a clockwise-consecutive outer arc
    for s in subdividers:
        if set(graph.rotation[s]) != {w, arc[arc.index(s) - 1], arc[arc.index(s) + 1]}:
            return None
    if not (graph.has_edge(u, x) and graph.has_edge(u, y)):
        return None
    if subdividers and graph.has_edge(x, y):
        return None  # a subdivided insertion deleted the outer edge
    return x, y, subdividers, p


def _peel(
    graph: PlaneNearTriangulation, w: int, x: int, y: int, subdividers: list[int]
) -> PlaneNearTriangulation:
    dead = {w, *subdividers}
    rotation = {
        v: [u for u in graph.rotation[v] if u not in dead]
        for v in range(graph.vertex_count)
        if v not in dead
    }
    if subdividers:
        # Restore the outer edge x-y exactly where the removed fan sat.
        first_dead = list(graph.rotation[x]).index(subdividers[0])
        kept_before = sum(1 for u in graph.rotation[x][:first_dead] if u not in dead)
        rotation[x].insert(kept_before, y)
        first_dead = list(graph.rotation[y]).index(w)
        kept_before = sum(1 for u in graph.rotation[y][:first_dead] if u not in dead)
        rotation[y].insert(kept_before, x)
    outer = [v for v in graph.outer_cycle if v not in dead]
    interiors = sorted(
        v
        for v in range(graph.vertex_count)
        if v not in dead and not graph.is_outer(v)
    )
    return _relabel(rotation, outer, interiors)


def recognize_generalized_multi_wheel(
    graph: PlaneNearTriangulation, path: PrincipalPath
) -> FamilyDescriptor | None:
    """A descriptor rebuilding a graph isomorphic to this one (principal
    path preserved), or None when the graph is outside the class.

    Strategy: chords at the major vertex are Glue seams (split at the one
    nearest the head side); with no chords, either the graph is a triangle
    or a wheel, or some inserted hub can be peeled; anything else fails.
    """
    oc = _rotated_outer(graph, path)
    k = len(oc)
    n = graph.vertex_count
    if n == 3:
        return BrokenWheel(3)

    pos = {v: i for i, v in enumerate(oc)}
    major_chords = []
    for a, b in _graph_chords(graph, oc, pos):
        if a == oc[0] or b == oc[0]:
            other = b if a == oc[0] else a
            major_chords.append(pos[other])
        else:
            return None  # the grammar only ever creates chords at the major

    if major_chords:
        q = min(major_chords)
        right_cycle = oc[: q + 1]
        left_cycle = [oc[0]] + oc[q:]
        sub_r, map_r = enclosed_region(graph, right_cycle)
        sub_l, map_l = enclosed_region(graph, left_cycle)
        d_r = recognize_generalized_multi_wheel(
            sub_r, PrincipalPath(map_r[oc[q]], map_r[oc[0]], map_r[oc[1]])
        )
        if d_r is None:
            return None
        d_l = recognize_generalized_multi_wheel(
            sub_l, PrincipalPath(map_l[oc[k - 1]], map_l[oc[0]], map_l[oc[q]])
        )
        if d_l is None:
            return None
        return Glue(d_l, d_r)

    interior = graph.interior_vertices()
    if len(interior) == 1 and all(graph.has_edge(interior[0], v) for v in oc):
        return Wheel(k)
    for w in interior:
        hit = _peel_candidate(graph, w, pos, k)
        if hit is None:
            continue
        x, y, subdividers, p = hit
        base = _peel(graph, w, x, y, subdividers)
        d_base = recognize_generalized_multi_wheel(
            base, PrincipalPath(len(base.outer_cycle) - 1, 0, 1)
        )
        if d_base is not None:
            return InsertWheel(d_base, p, len(subdividers))
    return None


def _graph_chords(
    graph: PlaneNearTriangulation, oc: list[int], pos: dict[int, int]
) -> list[tuple[int, int]]:
    k = len(oc)
    out = []
    for u, v in graph.edges():
        if u in pos and v in pos and abs(pos[u] - pos[v]) not in (1, k - 1):
            out.append((u, v))
    return out


def facial_triangle_property(
    graph: PlaneNearTriangulation, path: PrincipalPath
) -> bool:
    """Every inner face has a vertex on the outer cycle other than the
    major vertex (holds throughout the generalized multi-wheel class)."""
    from .plane_graph import faces_of, outer_face_index

    outer_idx = outer_face_index(graph)
    allowed = graph.outer_set() - {path.major}
    for i, face in enumerate(faces_of(graph)):
        if i == outer_idx:
            continue
        if not any(d[0] in allowed for d in face):
            return False
    return True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def _members_of_size(size: int) -> tuple[tuple[FamilyDescriptor, PlaneNearTriangulation], ...]:
    found: list[tuple[FamilyDescriptor, PlaneNearTriangulation]] = []
    seen: set[tuple] = set()

    def offer(d: FamilyDescriptor) -> None:
        g, p = build(d)
        sig = embedding_signature(g, p)
        if sig not in seen:
            seen.add(sig)
            found.append((d, g))

    if size >= 3:
        offer(BrokenWheel(size))
    if size >= 4:
        offer(Wheel(size - 1))
    for left_size in range(3, size):
        right_size = size + 2 - left_size
        if right_size < 3:
            continue
        for dl, _ in _members_of_size(left_size):
            for dr, _ in _members_of_size(right_size):
                offer(Glue(dl, dr))
    for base_size in range(4, size):
        j = size - base_size - 1
        if j < 0:
            continue
        for db, gb in _members_of_size(base_size):
            for site in insertion_sites(gb):
                offer(InsertWheel(db, site, j))
    return tuple(found)


def enumerate_family(max_n: int) -> Iterator[FamilyDescriptor]:
    """All generalized multi-wheels with at most max_n vertices, exactly one
    descriptor per isomorphism class (principal path fixed), sizes ascending."""
    if max_n < 3:
        raise FamilyError("max_n must be at least 3")
    for size in range(3, max_n + 1):
        for d, _ in _members_of_size(size):
            yield d


def built_family(max_n: int) -> list[tuple[FamilyDescriptor, PlaneNearTriangulation, PrincipalPath]]:
    out = []
    for size in range(3, max_n + 1):
        for d, g in _members_of_size(size):
            out.append((d, g, PrincipalPath(len(g.outer_cycle) - 1, 0, 1)))
    return out


# ---------------------------------------------------------------------------
# Wheel strings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WheelString:
    """Chain of generalized multi-wheels identified at principal neighbors.

    Consecutive parts share exactly one vertex (head of one part = tail of
    the next); the unshared end neighbors are the clean vertices.  Not a
    near-triangulation (the shared vertices are cut vertices), so only the
    adjacency structure is kept."""

    vertex_count: int
    adjacency: tuple[frozenset[int], ...]
    clean: tuple[int, int]
    cut: tuple[int, ...]
    majors: tuple[int, ...]
    boundary: tuple[int, ...]
    part_vertices: tuple[tuple[int, ...], ...]

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in range(self.vertex_count)
            for v in self.adjacency[u]
            if u < v
        ]


def build_wheel_string(parts: Sequence[FamilyDescriptor]) -> WheelString:
    if not parts:
        raise FamilyError("a wheel string needs at least one part")
    built = [build(d) for d in parts]
    adjacency: list[set[int]] = []
    maps: list[dict[int, int]] = []
    boundary: set[int] = set()
    fresh = 0
    prev_head = None
    for graph, ppath in built:
        local: dict[int, int] = {}
        if prev_head is not None:
            local[ppath.tail] = prev_head
        for v in range(graph.vertex_count):
            if v not in local:
                local[v] = fresh
                fresh += 1
                adjacency.append(set())
        for u, v in graph.edges():
            adjacency[local[u]].add(local[v])
            adjacency[local[v]].add(local[u])
        boundary.update(local[v] for v in graph.outer_cycle)
        maps.append(local)
        prev_head = local[ppath.head]
    clean = (maps[0][built[0][1].tail], maps[-1][built[-1][1].head])
    cut = tuple(maps[t][built[t][1].head] for t in range(len(parts) - 1))
    majors = tuple(maps[t][built[t][1].major] for t in range(len(parts)))
    part_vertices = tuple(
        tuple(maps[t][v] for v in range(built[t][0].vertex_count))
        for t in range(len(parts))
    )
    return WheelString(
        fresh,
        tuple(frozenset(a) for a in adjacency),
        clean,
        cut,
        majors,
        tuple(sorted(boundary)),
        part_vertices,
    )


# ---------------------------------------------------------------------------
# Descriptor serialization
# ---------------------------------------------------------------------------


def to_sexpr(d: FamilyDescriptor) -> str:
    if isinstance(d, BrokenWheel):
        return f"(broken {d.size})"
    if isinstance(d, Wheel):
        return f"(wheel {d.size})"
    if isinstance(d, Glue):
        return f"(glue {to_sexpr(d.left)} {to_sexpr(d.right)})"
    if isinstance(d, InsertWheel):
        return f"(insert {to_sexpr(d.base)} t{d.edge} j={d.subdivisions})"
    raise FamilyError(f"not a descriptor: {d!r}")


_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_sexpr(text: str) -> FamilyDescriptor:
    tokens = _TOKEN.findall(text)
    pos = 0

    def take() -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise FamilyError("unexpected end of descriptor")
        pos += 1
        return tokens[pos - 1]

    def parse() -> FamilyDescriptor:
        if take() != "(":
            raise FamilyError("descriptor must start with '('")
        kind = take()
        if kind in ("broken", "wheel"):
            size = int(take())
            node: FamilyDescriptor = (
                BrokenWheel(size) if kind == "broken" else Wheel(size)
            )
        elif kind == "glue":
            left = parse()
            right = parse()
            node = Glue(left, right)
        elif kind == "insert":
            base = parse()
            edge_tok = take()
            j_tok = take()
            if not edge_tok.startswith("t") or not j_tok.startswith("j="):
                raise FamilyError(f"bad insert arguments {edge_tok!r} {j_tok!r}")
            node = InsertWheel(base, int(edge_tok[1:]), int(j_tok[2:]))
        else:
            raise FamilyError(f"unknown constructor {kind!r}")
        if take() != ")":
            raise FamilyError("missing ')' in descriptor")
        return node

    node = parse()
    if pos != len(tokens):
        raise FamilyError("trailing tokens after descriptor")
    return node
