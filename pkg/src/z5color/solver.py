"""Coloring engines: exact counting, constructive extension, obstructions.

Two independent routes compute with colorings:

- ``enumerate_colorings`` walks the search tree directly (backtracking with
  forward checking, fixed vertex order), yielding every proper coloring.
- ``count_colorings`` / ``marginal_counts`` run exact variable elimination
  over the same constraints; fast enough to serve as the brute-force oracle
  at desk scale.  The two routes are cross-checked in the test suite.

On top of those sit the constructive algorithms:

- ``extend_two``: two precolored adjacent outer vertices, lists of size at
  least 3 on the rest of the boundary, full lists inside; always succeeds
  on valid input (chord split / boundary-vertex deletion induction).
- ``color_short_cycle``: fully precolored outer cycle of length at most 5;
  either extends or returns the exceptional hub (a vertex joined to all of
  a 5-cycle whose forbidden-color images cover the whole group).
- ``extend_three``: three precolored consecutive outer vertices, forbidden
  sets capped at two colors on the rest of the boundary; either a coloring
  or a validated obstruction certificate, found by anchored search over the
  wheel-family grammar.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .families import (
    FamilyDescriptor,
    PrincipalPath,
    built_family,
    is_multi_wheel_descriptor,
    recognize_generalized_multi_wheel,
)
from .group_color import ColorSystem, Coloring, PhiAssignment, is_proper, tau
from .plane_graph import PlaneNearTriangulation, blocks


class ExtensionError(ValueError):
    """Invalid extension problem (caps or structure violated)."""


@dataclass(frozen=True)
class ExtensionProblem:
    """Graph, labeling, constraint system, and the precolored outer path
    (2 or 3 consecutive outer vertices in clockwise order; their colors
    live in the precoloring of ``colors``)."""

    graph: PlaneNearTriangulation
    phi: PhiAssignment
    colors: ColorSystem
    path: tuple[int, ...]


@dataclass(frozen=True)
class HubException:
    """Marker result of ``color_short_cycle``: an interior vertex joined to
    all of the precolored 5-cycle with every color forbidden."""

    vertex: int


@dataclass(frozen=True)
class AlphaResult:
    """Outcome of ``lemma1_alpha``.  ``kind`` is 'alpha' (every failing
    boundary precoloring shares this tail-minus-head difference), 'vacuous'
    (no failing precoloring exists), or 'none' (distinct differences occur;
    a defect for genuine multi-wheels)."""

    kind: str
    alpha: int | None = None


@dataclass(frozen=True)
class ObstructionCertificate:
    """A wheel-family subgraph witnessing non-extendability.

    ``graph``/``path``/``descriptor`` give the family member in canonical
    labels; ``embedding[member_vertex]`` is the original vertex it uses.
    ``phi``/``colors`` restate the instance on member labels; the member
    instance itself has zero colorings (re-checked by the validator)."""

    descriptor: FamilyDescriptor
    graph: PlaneNearTriangulation
    path: PrincipalPath
    embedding: tuple[int, ...]
    phi: PhiAssignment
    colors: ColorSystem


# ---------------------------------------------------------------------------
# Exact counting (variable elimination)
# ---------------------------------------------------------------------------


def _vertex_count(graph) -> int:
    return graph if isinstance(graph, int) else graph.vertex_count


def _avail_lists(
    n: int, modulus: int, colors: ColorSystem | None
) -> list[tuple[int, ...]]:
    if colors is None:
        return [tuple(range(modulus))] * n
    if colors.vertex_count != n:
        raise ExtensionError(
            f"constraint system covers {colors.vertex_count} vertices, graph has {n}"
        )
    return [tuple(sorted(colors.available(v))) for v in range(n)]


def marginal_counts(
    graph,
    phi: PhiAssignment,
    colors: ColorSystem | None = None,
    keep: Sequence[int] = (),
) -> dict[tuple[int, ...], int]:
    """Exact number of proper colorings for every assignment of ``keep``.

    All other vertices are eliminated in greedy minimum-scope order; the
    result maps color tuples (in ``keep`` order) to extension counts.  With
    empty ``keep`` the single entry at () is the total count.
    """
    n = _vertex_count(graph)
    m = phi.modulus
    avail = _avail_lists(n, m, colors)
    keep = tuple(keep)
    keep_set = set(keep)
    if len(keep_set) != len(keep):
        raise ExtensionError("keep vertices must be distinct")

    factors: list[tuple[tuple[int, ...], dict[tuple[int, ...], int]]] = []
    for v in range(n):
        factors.append(((v,), {(c,): 1 for c in avail[v]}))
    for tail, head, value in phi.records:
        table = {}
        for a in avail[tail]:
            for b in avail[head]:
                if (b - a) % m != value:
                    key = (a, b) if tail < head else (b, a)
                    table[key] = 1
        factors.append((tuple(sorted((tail, head))), table))

    def scope_size(v: int) -> int:
        joined: set[int] = set()
        for scope, _ in factors:
            if v in scope:
                joined.update(scope)
        return len(joined)

    from itertools import product

    remaining = [v for v in range(n) if v not in keep_set]
    while remaining:
        v = min(remaining, key=lambda u: (scope_size(u), u))
        remaining.remove(v)
        touching = [f for f in factors if v in f[0]]
        factors = [f for f in factors if v not in f[0]]
        out_scope = tuple(
            sorted(set().union(*(set(s) for s, _ in touching)) - {v})
        )
        # Split each table into (out-assignment -> vector over v's color) so
        # the sweep below does one dict hop per factor per assignment.
        prepared = []
        for scope, tbl in touching:
            v_slot = scope.index(v)
            out_pos = tuple(out_scope.index(u) for u in scope if u != v)
            split: dict[tuple[int, ...], dict[int, int]] = {}
            for key, val in tbl.items():
                rest = tuple(c for i, c in enumerate(key) if i != v_slot)
                split.setdefault(rest, {})[key[v_slot]] = val
            prepared.append((out_pos, split))
        new_table: dict[tuple[int, ...], int] = {}
        colors_of_v = avail[v]
        for assign in product(*(avail[u] for u in out_scope)):
            vecs = []
            for out_pos, split in prepared:
                vec = split.get(tuple(assign[i] for i in out_pos))
                if vec is None:
                    break
                vecs.append(vec)
            else:
                total = 0
                for cv in colors_of_v:
                    prod = 1
                    for vec in vecs:
                        val = vec.get(cv, 0)
                        if not val:
                            prod = 0
                            break
                        prod *= val
                    total += prod
                if total:
                    new_table[assign] = total
        factors.append((out_scope, new_table))

    index_of = {u: i for i, u in enumerate(keep)}
    result: dict[tuple[int, ...], int] = {}

    def fill(idx: int, current: list[int]) -> None:
        if idx == len(keep):
            assign = tuple(current)
            prod = 1
            for scope, tbl in factors:
                key = tuple(assign[index_of[u]] for u in scope)
                prod *= tbl.get(key, 0)
                if not prod:
                    break
            result[assign] = prod
            return
        for c in avail[keep[idx]]:
            current.append(c)
            fill(idx + 1, current)
            current.pop()

    fill(0, [])
    return result


def count_colorings(
    graph, phi: PhiAssignment, colors: ColorSystem | None = None
) -> int:
    """Exact number of proper colorings respecting forbidden sets and any
    precoloring.  Zero is a valid answer."""
    return marginal_counts(graph, phi, colors, ())[()]


def coloring_order(graph) -> list[int]:
    """Fixed search order: outer vertices in cycle order, then interior by
    descending degree (ties by index).  Plain range for bare vertex counts."""
    if isinstance(graph, int):
        return list(range(graph))
    interior = sorted(graph.interior_vertices(), key=lambda v: (-graph.degree(v), v))
    return list(graph.outer_cycle) + interior


def enumerate_colorings(
    graph,
    phi: PhiAssignment,
    colors: ColorSystem | None = None,
    order: Sequence[int] | None = None,
) -> Iterator[Coloring]:
    """Yield every proper coloring, deterministically (colors ascending at
    each vertex of the fixed order), by backtracking with forward checking."""
    n = _vertex_count(graph)
    m = phi.modulus
    avail = _avail_lists(n, m, colors)
    order = list(order) if order is not None else coloring_order(graph)
    if sorted(order) != list(range(n)):
        raise ExtensionError("search order must be a permutation of the vertices")

    masks = [0] * n
    for v in range(n):
        for c in avail[v]:
            masks[v] |= 1 << c
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for tail, head, value in phi.records:
        nbrs[tail].append((head, value))
        nbrs[head].append((tail, (-value) % m))

    depth_of = {v: i for i, v in enumerate(order)}
    assignment = [0] * n

    def walk(depth: int, masks: list[int]) -> Iterator[Coloring]:
        if depth == n:
            yield tuple(assignment)
            return
        v = order[depth]
        for c in range(m):
            if not masks[v] & (1 << c):
                continue
            assignment[v] = c
            dead = False
            touched: list[tuple[int, int]] = []
            for u, delta in nbrs[v]:
                if depth_of[u] > depth:
                    bit = 1 << ((c + delta) % m)
                    if masks[u] & bit:
                        touched.append((u, masks[u]))
                        masks[u] &= ~bit
                        if not masks[u]:
                            dead = True
                            break
            if not dead:
                yield from walk(depth + 1, masks)
            for u, old in touched:
                masks[u] = old

    yield from walk(0, masks)


def first_coloring(
    graph, phi: PhiAssignment, colors: ColorSystem | None = None
) -> Coloring | None:
    return next(enumerate_colorings(graph, phi, colors), None)


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _linear_from(seq: Sequence[int], start: int) -> list[int]:
    i = list(seq).index(start)
    return list(seq[i:]) + list(seq[:i])


def _check_path(graph: PlaneNearTriangulation, path: Sequence[int]) -> None:
    oc = list(graph.outer_cycle)
    k = len(oc)
    try:
        p = oc.index(path[0])
    except ValueError:
        raise ExtensionError("path must lie on the outer cycle") from None
    for t, v in enumerate(path):
        if oc[(p + t) % k] != v:
            raise ExtensionError(
                "precolored path must be consecutive on the outer cycle, clockwise"
            )


def validate_extension_problem(problem: ExtensionProblem) -> list[str]:
    """Every violated precondition of the extension contracts."""
    g, phi, cs, path = problem.graph, problem.phi, problem.colors, problem.path
    if len(path) not in (2, 3):
        return ["precolored path must have 2 or 3 vertices"]
    try:
        _check_path(g, path)
    except ExtensionError as exc:
        return [str(exc)]
    issues: list[str] = []
    if phi.modulus != 5 or cs.modulus != 5:
        issues.append("extension algorithms are specified for modulus 5 only")
    pre = cs.precolor_map()
    if set(pre) != set(path):
        issues.append("precoloring must cover exactly the path vertices")
        return issues
    if len(path) == 2:
        a, b = path
        if pre[b] == tau(phi, a, pre[a], b):
            issues.append("precolored pair conflicts on its edge")
    else:
        tail, major, head = path
        if pre[tail] == tau(phi, major, pre[major], tail):
            issues.append("precolored tail conflicts with the major vertex")
        if pre[head] == tau(phi, major, pre[major], head):
            issues.append("precolored head conflicts with the major vertex")
    for v in range(g.vertex_count):
        if v in pre:
            continue
        cap = 2 if g.is_outer(v) else 0
        if len(cs.forbidden[v]) > cap:
            where = "outer" if g.is_outer(v) else "interior"
            issues.append(
                f"forbidden set at {where} vertex {v} has "
                f"{len(cs.forbidden[v])} colors (cap {cap})"
            )
    return issues


def _trace_faces_map(
    rotation: dict[int, list[int]]
) -> list[tuple[tuple[int, int], ...]]:
    position = {v: {u: i for i, u in enumerate(nb)} for v, nb in rotation.items()}
    seen: set[tuple[int, int]] = set()
    faces = []
    for v0 in rotation:
        for u0 in rotation[v0]:
            if (v0, u0) in seen:
                continue
            orbit = []
            dart = (v0, u0)
            while dart not in seen:
                seen.add(dart)
                orbit.append(dart)
                u, v = dart
                nb = rotation[v]
                dart = (v, nb[(position[v][u] + 1) % len(nb)])
            faces.append(tuple(orbit))
    return faces


def _inside_cycle(
    rotation: dict[int, list[int]], outer: Sequence[int], cycle: Sequence[int]
) -> set[int]:
    """Vertices strictly inside ``cycle``, within the sub-near-triangulation
    given by the (label-preserving) rotation map with boundary ``outer``."""
    faces = _trace_faces_map(rotation)
    outer_seq = list(outer)
    outer_idx = None
    for i, face in enumerate(faces):
        verts = [d[0] for d in face]
        if len(verts) == len(outer_seq) and set(verts) == set(outer_seq):
            start = verts.index(outer_seq[0])
            if all(
                outer_seq[t] == verts[(start + t) % len(verts)]
                for t in range(len(verts))
            ):
                outer_idx = i
                break
    if outer_idx is None:
        raise RuntimeError("boundary walk lost during recursion (solver defect)")
    cyc_edges = set()
    k = len(cycle)
    for i in range(k):
        a, b = cycle[i], cycle[(i + 1) % k]
        cyc_edges.add((min(a, b), max(a, b)))
    face_of = {}
    for i, face in enumerate(faces):
        for dart in face:
            face_of[dart] = i
    reached = {outer_idx}
    queue = [outer_idx]
    while queue:
        fi = queue.pop()
        for u, v in faces[fi]:
            if (min(u, v), max(u, v)) in cyc_edges:
                continue
            other = face_of[(v, u)]
            if other not in reached:
                reached.add(other)
                queue.append(other)
    inside: set[int] = set()
    for i, face in enumerate(faces):
        if i not in reached:
            inside.update(d[0] for d in face)
    return inside - set(cycle)


# ---------------------------------------------------------------------------
# extend_two
# ---------------------------------------------------------------------------


def extend_two(problem: ExtensionProblem) -> Coloring:
    """Extend two precolored adjacent outer vertices to the whole graph.

    Never fails on valid input; an exhausted search here is a defect, not
    a negative answer, and raises RuntimeError.
    """
    if len(problem.path) != 2:
        raise ExtensionError("extend_two needs a 2-vertex precolored path")
    issues = validate_extension_problem(problem)
    if issues:
        raise ExtensionError("; ".join(issues))
    g, phi, cs = problem.graph, problem.phi, problem.colors
    assigned = cs.precolor_map()
    lists = {
        v: set(cs.available(v)) for v in range(g.vertex_count) if v not in assigned
    }
    outer = _linear_from(g.outer_cycle, problem.path[0])
    _extend_two_rec(g, phi, outer, set(range(g.vertex_count)), lists, assigned)

    coloring = tuple(assigned[v] for v in range(g.vertex_count))
    if not is_proper(g, phi, coloring):
        raise RuntimeError("extension produced an improper coloring (solver defect)")
    for v in range(g.vertex_count):
        if coloring[v] not in cs.available(v):
            raise RuntimeError("extension violated a forbidden set (solver defect)")
    return coloring


def _extend_two_rec(
    g: PlaneNearTriangulation,
    phi: PhiAssignment,
    outer: list[int],
    alive: set[int],
    lists: dict[int, set[int]],
    assigned: dict[int, int],
) -> None:
    # Invariant: outer[0], outer[1] are assigned, nothing else in `alive` is;
    # boundary lists have >= 3 colors, interior lists are full.
    k = len(outer)
    if len(alive) == 3:
        v = outer[2]
        options = (
            lists[v]
            - {tau(phi, outer[0], assigned[outer[0]], v)}
            - {tau(phi, outer[1], assigned[outer[1]], v)}
        )
        if not options:
            raise RuntimeError("triangle base case has no color (solver defect)")
        assigned[v] = min(options)
        del lists[v]
        return

    chord = None
    for i in range(k):
        for j in range(i + 2, k):
            if (i, j) == (0, k - 1):
                continue
            if g.has_edge(outer[i], outer[j]):
                chord = (i, j)
                break
        if chord:
            break

    if chord:
        i, j = chord
        arc_one = outer[i : j + 1]
        arc_two = outer[j:] + outer[: i + 1]
        rotation = {v: [u for u in g.rotation[v] if u in alive] for v in alive}
        inside_one = _inside_cycle(rotation, outer, arc_one)
        interior = alive - set(outer)
        inside_two = interior - inside_one
        # The side holding the precolored pair (edge at positions 0-1) is
        # colored first; its arc is arc_one exactly when the chord starts at
        # position 0.
        if i == 0:
            first_cycle, first_inside = arc_one, inside_one
            second_cycle, second_inside = arc_two, inside_two
        else:
            first_cycle, first_inside = arc_two, inside_two
            second_cycle, second_inside = arc_one, inside_one
        _extend_two_rec(
            g,
            phi,
            _linear_from(first_cycle, outer[0]),
            set(first_cycle) | first_inside,
            lists,
            assigned,
        )
        # Both chord endpoints are now colored; they close the second cycle.
        second_outer = _linear_from(second_cycle, second_cycle[-1])
        _extend_two_rec(
            g,
            phi,
            second_outer,
            set(second_cycle) | second_inside,
            lists,
            assigned,
        )
        return

    # No chord: delete the boundary neighbor of the first precolored vertex,
    # reserving two of its colors and knocking their images out of the lists
    # of its interior neighbors.
    vk = outer[-1]
    v1, vkm1 = outer[0], outer[-2]
    options = sorted(lists[vk] - {tau(phi, v1, assigned[v1], vk)})
    if len(options) < 2:
        raise RuntimeError("boundary list collapsed below two colors (solver defect)")
    alpha, beta = options[0], options[1]
    fan = _linear_from([u for u in g.rotation[vk] if u in alive], v1)
    if fan[-1] != vkm1:
        raise RuntimeError("boundary fan does not end at the outer predecessor")
    inner_fan = fan[1:-1]
    for u in inner_fan:
        lists[u].discard(tau(phi, vk, alpha, u))
        lists[u].discard(tau(phi, vk, beta, u))
    alive.remove(vk)
    del lists[vk]
    _extend_two_rec(g, phi, outer[:-1] + inner_fan[::-1], alive, lists, assigned)
    pick = alpha if alpha != tau(phi, vkm1, assigned[vkm1], vk) else beta
    assigned[vk] = pick


# ---------------------------------------------------------------------------
# color_short_cycle
# ---------------------------------------------------------------------------


def color_short_cycle(
    graph: PlaneNearTriangulation, phi: PhiAssignment, colors: ColorSystem
) -> Coloring | HubException:
    """Extend a proper precoloring of an outer cycle of length <= 5, or
    return the exceptional hub that makes extension impossible."""
    oc = list(graph.outer_cycle)
    if len(oc) > 5:
        raise ExtensionError("outer cycle longer than 5")
    if phi.modulus != 5 or colors.modulus != 5:
        raise ExtensionError("color_short_cycle is specified for modulus 5 only")
    pre = colors.precolor_map()
    if set(pre) != set(oc):
        raise ExtensionError("the outer cycle must be exactly the precolored set")
    for v in graph.interior_vertices():
        if colors.forbidden[v]:
            raise ExtensionError(f"interior vertex {v} carries forbidden colors")
    for u in oc:
        for v in graph.adjacency(u):
            if v in pre and pre[v] == tau(phi, u, pre[u], v):
                raise ExtensionError("precoloring improper on the outer cycle")

    assigned = dict(pre)
    result = _short_rec(graph, phi, oc, set(range(graph.vertex_count)), assigned)
    if result is not None:
        return result
    return tuple(assigned[v] for v in range(graph.vertex_count))


def _short_rec(
    g: PlaneNearTriangulation,
    phi: PhiAssignment,
    cycle: list[int],
    alive: set[int],
    assigned: dict[int, int],
) -> HubException | None:
    interior = alive - set(cycle)
    if not interior:
        return None

    # The exception is checked before any recursion: a vertex joined to all
    # of a colored 5-cycle whose forbidden images exhaust the group.
    if len(cycle) == 5:
        for v in sorted(interior):
            if all(c in g.adjacency(v) for c in cycle):
                if len({tau(phi, c, assigned[c], v) for c in cycle}) == 5:
                    return HubException(v)

    center = None
    for v in sorted(interior):
        if sum(1 for c in cycle if c in g.adjacency(v)) >= 3:
            center = v
            break

    if center is None:
        # Every interior vertex sees at most two colored vertices: push the
        # constraints into lists and color the interior block by block.
        _color_interior_blocks(g, phi, cycle, interior, assigned)
        return None

    pos = {c: i for i, c in enumerate(cycle)}
    nbr_pos = sorted(pos[c] for c in cycle if c in g.adjacency(center))
    taken = {tau(phi, cycle[p], assigned[cycle[p]], center) for p in nbr_pos}
    rotation = {v: [u for u in g.rotation[v] if u in alive] for v in alive}

    regions = []
    for t, p in enumerate(nbr_pos):
        q = nbr_pos[(t + 1) % len(nbr_pos)]
        span = (q - p) % len(cycle)
        if span == 0:
            continue
        arc = [cycle[(p + s) % len(cycle)] for s in range(span + 1)]
        regions.append(arc + [center])
    region_insides = [
        _inside_cycle(rotation, cycle, reg) for reg in regions
    ]

    for color in sorted(set(range(5)) - taken):
        assigned[center] = color
        trial = dict(assigned)
        for reg, inside in zip(regions, region_insides):
            sub_alive = set(reg) | inside
            out = _short_rec(g, phi, reg, sub_alive, trial)
            if out is not None:
                break
        else:
            assigned.update(trial)
            return None
        del assigned[center]
    # Some color choice must work whenever no top-level hub exception fired.
    raise RuntimeError(
        "short-cycle extension exhausted every center color (solver defect)"
    )


def _color_interior_blocks(
    g: PlaneNearTriangulation,
    phi: PhiAssignment,
    cycle: list[int],
    interior: set[int],
    assigned: dict[int, int],
) -> None:
    """Color the interior subgraph when each of its vertices sees at most
    two colored cycle vertices: lists stay at size >= 3, so each block is
    two-extendable once a seed edge or vertex is colored."""
    lists = {}
    for v in interior:
        banned = {
            tau(phi, c, assigned[c], v) for c in g.adjacency(v) if c in assigned
        }
        lists[v] = set(range(5)) - banned

    index = sorted(interior)
    local = {v: i for i, v in enumerate(index)}
    adj = [[u for u in g.rotation[v] if u in interior] for v in index]
    for piece in _block_order([ [local[u] for u in row] for row in adj ]):
        verts = [index[i] for i in piece.vertices]
        colored = [v for v in verts if v in assigned]
        if len(verts) == 1:
            v = verts[0]
            if v not in assigned:
                assigned[v] = min(lists[v])
            continue
        if len(verts) == 2:
            u, v = verts
            if u in assigned and v in assigned:
                continue
            if v in assigned:
                u, v = v, u
            if u not in assigned:
                assigned[u] = min(lists[u])
            assigned[v] = min(lists[v] - {tau(phi, u, assigned[u], v)})
            continue
        sub, relabel = _induced_near_triangulation(g, verts)
        back = {i: v for v, i in relabel.items()}
        sub_outer = sub.outer_cycle
        if colored:
            seed = relabel[colored[0]]
        else:
            seed = 0
        a = sub_outer[list(sub_outer).index(seed)]
        b = sub_outer[(list(sub_outer).index(seed) + 1) % len(sub_outer)]
        va, vb = back[a], back[b]
        if va not in assigned:
            assigned[va] = min(lists[va])
        if vb not in assigned:
            assigned[vb] = min(lists[vb] - {tau(phi, va, assigned[va], vb)})
        sub_phi = _mapped_phi(phi, g, back, sub.vertex_count)
        cs = ColorSystem(
            5,
            tuple(
                frozenset(range(5)) - frozenset(lists[back[i]])
                for i in range(sub.vertex_count)
            ),
        )
        cs = cs.with_precolor(a, assigned[va]).with_precolor(b, assigned[vb])
        sub_coloring = extend_two(
            ExtensionProblem(sub, sub_phi, cs, (a, b))
        )
        for i, c in enumerate(sub_coloring):
            assigned[back[i]] = c


def _block_order(adj: list[list[int]]):
    """Blocks ordered so each one (after the first of its component) meets
    the already-processed ones in exactly one cut vertex."""
    pieces = blocks(adj)
    done_vertices: set[int] = set()
    remaining = list(pieces)
    ordered = []
    while remaining:
        pick = None
        for piece in remaining:
            if done_vertices & set(piece.vertices):
                pick = piece
                break
        if pick is None:
            pick = remaining[0]
        remaining.remove(pick)
        ordered.append(pick)
        done_vertices.update(pick.vertices)
    return ordered


def _induced_near_triangulation(
    g: PlaneNearTriangulation, verts: list[int]
) -> tuple[PlaneNearTriangulation, dict[int, int]]:
    """The induced subgraph on a 2-connected block of interior vertices,
    with its boundary cycle recovered from the traced faces."""
    vset = set(verts)
    rotation = {v: [u for u in g.rotation[v] if u in vset] for v in verts}
    faces = _trace_faces_map(rotation)
    inner_faces = {
        tuple(sorted(_face_verts(f))) for f in _trace_faces_map(
            {v: list(g.rotation[v]) for v in range(g.vertex_count)}
        )
        if len(f) == 3
    }
    boundary = None
    for face in faces:
        fv = _face_verts(face)
        if len(face) != 3 or tuple(sorted(fv)) not in inner_faces:
            boundary = fv
            break
    if boundary is None:
        boundary = _face_verts(faces[0])
    order = list(boundary) + sorted(vset - set(boundary))
    relabel = {v: i for i, v in enumerate(order)}
    rot = tuple(tuple(relabel[u] for u in rotation[v]) for v in order)
    sub = PlaneNearTriangulation(len(order), rot, tuple(range(len(boundary))))
    return sub, relabel


def _face_verts(face) -> tuple[int, ...]:
    return tuple(d[0] for d in face)


def _mapped_phi(
    phi: PhiAssignment,
    g: PlaneNearTriangulation,
    back: dict[int, int],
    n: int,
) -> PhiAssignment:
    records = []
    for i in range(n):
        for jj in range(i + 1, n):
            u, v = back[i], back[jj]
            if g.has_edge(u, v) and phi.has_edge(u, v):
                records.append((i, jj, phi.offset(u, v)))
    return PhiAssignment(phi.modulus, tuple(records))


# ---------------------------------------------------------------------------
# extend_three
# ---------------------------------------------------------------------------


def extend_three(
    problem: ExtensionProblem, node_budget: int = 500_000
) -> Coloring | ObstructionCertificate:
    """Extend three precolored consecutive outer vertices; on failure find
    a wheel-family obstruction anchored at the path.

    Finding neither is impossible for valid input, so exhausting the search
    raises instead of returning a silent negative.
    """
    if len(problem.path) != 3:
        raise ExtensionError("extend_three needs a 3-vertex precolored path")
    issues = validate_extension_problem(problem)
    if issues:
        raise ExtensionError("; ".join(issues))
    coloring = first_coloring(problem.graph, problem.phi, problem.colors)
    if coloring is not None:
        return coloring
    cert = _find_obstruction(problem, node_budget)
    if cert is None:
        raise RuntimeError(
            "no coloring and no wheel-family obstruction found; "
            "this contradicts the extendability dichotomy"
        )
    return cert


def _find_obstruction(
    problem: ExtensionProblem, node_budget: int
) -> ObstructionCertificate | None:
    g, phi, cs = problem.graph, problem.phi, problem.colors
    tail, major, head = problem.path
    pre = cs.precolor_map()
    eligible_outer = {
        v
        for v in g.outer_set()
        if v not in problem.path and len(cs.forbidden[v]) == 2
    }
    free_interior = {
        v
        for v in range(g.vertex_count)
        if v not in problem.path and not cs.forbidden[v]
    }
    budget = [node_budget]

    for descriptor, member, mpath in built_family(g.vertex_count):
        for embed in _anchored_embeddings(
            member, mpath, g, (tail, major, head), eligible_outer, free_interior, budget
        ):
            sub_records = []
            for u, v in member.edges():
                sub_records.append((u, v, phi.offset(embed[u], embed[v])))
            sub_phi = PhiAssignment(5, tuple(sub_records))
            forbidden = [frozenset()] * member.vertex_count
            for v in range(member.vertex_count):
                if member.is_outer(v) and v not in (mpath.tail, mpath.major, mpath.head):
                    forbidden[v] = cs.forbidden[embed[v]]
            sub_cs = ColorSystem(
                5,
                tuple(forbidden),
                tuple(
                    sorted(
                        {
                            mpath.tail: pre[tail],
                            mpath.major: pre[major],
                            mpath.head: pre[head],
                        }.items()
                    )
                ),
            )
            if count_colorings(member, sub_phi, sub_cs) == 0:
                return ObstructionCertificate(
                    descriptor, member, mpath, tuple(embed), sub_phi, sub_cs
                )
    return None


def _anchored_embeddings(
    member: PlaneNearTriangulation,
    mpath: PrincipalPath,
    g: PlaneNearTriangulation,
    anchor: tuple[int, int, int],
    eligible_outer: set[int],
    free_interior: set[int],
    budget: list[int],
) -> Iterator[list[int]]:
    """Injective maps of the member into g: the principal path lands on the
    anchor, other member-outer vertices land on outer vertices with exactly
    two forbidden colors, member-interior vertices land on free vertices,
    and every member edge is a g edge."""
    n = member.vertex_count
    mapping = [-1] * n
    used: set[int] = set()

    def ok(mv: int, gv: int) -> bool:
        if gv in used:
            return False
        if member.is_outer(mv):
            if gv not in eligible_outer:
                return False
        elif gv not in free_interior:
            return False
        if g.degree(gv) < member.degree(mv):
            return False
        for mu in member.adjacency(mv):
            gu = mapping[mu]
            if gu >= 0 and not g.has_edge(gv, gu):
                return False
        return True

    pins = {mpath.tail: anchor[0], mpath.major: anchor[1], mpath.head: anchor[2]}
    order = [mpath.major, mpath.head, mpath.tail]
    seen = set(order)
    qi = 0
    while qi < len(order):
        for u in member.rotation[order[qi]]:
            if u not in seen:
                seen.add(u)
                order.append(u)
        qi += 1
    for mv, gv in pins.items():
        mapping[mv] = gv
        used.add(gv)
    for mu in pins:
        for mw in member.adjacency(mu):
            gu = mapping[mw]
            if gu >= 0 and not g.has_edge(mapping[mu], gu):
                return

    free = [v for v in order if v not in pins]

    def place(idx: int) -> Iterator[list[int]]:
        budget[0] -= 1
        if budget[0] <= 0:
            raise RuntimeError("obstruction search exceeded its node budget")
        if idx == len(free):
            yield list(mapping)
            return
        mv = free[idx]
        anchored_nbrs = [u for u in member.adjacency(mv) if mapping[u] >= 0]
        if anchored_nbrs:
            pool = set(g.adjacency(mapping[anchored_nbrs[0]]))
            for u in anchored_nbrs[1:]:
                pool &= g.adjacency(mapping[u])
        else:
            pool = eligible_outer | free_interior
        for gv in sorted(pool):
            if ok(mv, gv):
                mapping[mv] = gv
                used.add(gv)
                yield from place(idx + 1)
                used.remove(gv)
                mapping[mv] = -1

    yield from place(0)


def validate_obstruction(cert: ObstructionCertificate) -> list[str]:
    """Independent re-check of a certificate: the recognizer must accept the
    graph, every non-path outer vertex must have exactly two forbidden
    colors, and the certificate instance itself must have zero colorings."""
    problems: list[str] = []
    if recognize_generalized_multi_wheel(cert.graph, cert.path) is None:
        problems.append("recognizer rejects the certificate graph")
    trio = (cert.path.tail, cert.path.major, cert.path.head)
    for v in range(cert.graph.vertex_count):
        if cert.graph.is_outer(v) and v not in trio:
            if len(cert.colors.forbidden[v]) != 2:
                problems.append(
                    f"outer vertex {v} has {len(cert.colors.forbidden[v])} forbidden "
                    "colors (need exactly 2)"
                )
    pre = cert.colors.precolor_map()
    if set(pre) != set(trio):
        problems.append("certificate must precolor exactly the principal path")
    if len(set(cert.embedding)) != cert.graph.vertex_count:
        problems.append("embedding is not injective")
    if count_colorings(cert.graph, cert.phi, cert.colors) != 0:
        problems.append("certificate instance is colorable")
    return problems


# ---------------------------------------------------------------------------
# lemma1_alpha
# ---------------------------------------------------------------------------


def lemma1_failure_table(
    graph: PlaneNearTriangulation,
    phi: PhiAssignment,
    colors: ColorSystem,
    path: PrincipalPath,
) -> dict[tuple[int, int, int], int]:
    """Extension counts for every (tail, major, head) color triple, with the
    two principal edges removed.

    Removing them changes nothing for path-proper triples (their constraints
    are already satisfied) and makes the table literally independent of the
    labels on the principal edges, which is the invariance the alpha value
    is supposed to have."""
    stripped = phi.remove_edge(path.tail, path.major).remove_edge(
        path.major, path.head
    )
    return marginal_counts(
        graph, stripped, colors, keep=(path.tail, path.major, path.head)
    )


def classify_alpha(
    table: dict[tuple[int, int, int], int],
    graph: PlaneNearTriangulation,
    phi: PhiAssignment,
    path: PrincipalPath,
) -> AlphaResult:
    """Classify a failure table against a concrete labeling (which fixes
    which triples count as proper boundary precolorings)."""
    failures = []
    for (ct, cm, ch), count in sorted(table.items()):
        if ct == tau(phi, path.major, cm, path.tail):
            continue
        if ch == tau(phi, path.major, cm, path.head):
            continue
        if graph.has_edge(path.tail, path.head) and ch == tau(
            phi, path.tail, ct, path.head
        ):
            continue
        if count == 0:
            failures.append((ct, cm, ch))
    if not failures:
        return AlphaResult("vacuous")
    diffs = {(ct - ch) % 5 for ct, _, ch in failures}
    if len(diffs) == 1:
        return AlphaResult("alpha", diffs.pop())
    return AlphaResult("none")


def lemma1_alpha(
    graph: PlaneNearTriangulation,
    phi: PhiAssignment,
    colors: ColorSystem,
    path: PrincipalPath | None = None,
    require_multi_wheel: bool = True,
) -> AlphaResult:
    """The shared tail-minus-head difference of every non-extendable proper
    precoloring of the principal path of a multi-wheel.

    Enumerates all boundary precolorings (via one marginal-count pass) and
    classifies: 'alpha' when the failures agree on one difference, 'vacuous'
    when nothing fails, 'none' if disagreeing failures exist (which would
    disprove the multi-wheel property; only reachable with the class check
    disabled, e.g. on broken wheels).
    """
    if path is None:
        k = len(graph.outer_cycle)
        path = PrincipalPath(
            graph.outer_cycle[k - 1], graph.outer_cycle[0], graph.outer_cycle[1]
        )
    if phi.modulus != 5 or colors.modulus != 5:
        raise ExtensionError("lemma1_alpha is specified for modulus 5 only")
    if require_multi_wheel:
        d = recognize_generalized_multi_wheel(graph, path)
        if d is None or not is_multi_wheel_descriptor(d):
            raise ExtensionError("graph is not a multi-wheel")
    trio = (path.tail, path.major, path.head)
    for v in range(graph.vertex_count):
        cap = 2 if graph.is_outer(v) and v not in trio else 0
        if len(colors.forbidden[v]) > cap:
            raise ExtensionError(f"forbidden set at vertex {v} exceeds its cap")
    if colors.precoloring:
        raise ExtensionError("lemma1_alpha enumerates precolorings itself")
    table = lemma1_failure_table(graph, phi, colors, path)
    return classify_alpha(table, graph, phi, path)
