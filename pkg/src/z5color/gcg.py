"""The "gcg v1" text format: a plane graph plus coloring constraints.

Line-oriented, UTF-8, ``#`` comments.  Directives:

    n <N>                       vertex count; vertices 0..N-1
    rot <v> <u1> <u2> ...       clockwise neighbor order of v (one per vertex)
    outer <k> <v1> ... <vk>     outer cycle
    group <m>                   color modulus (default 5)
    edge <u> <v> <phi>          stored orientation u->v; omitted edges get 0
    forbid <v> <c1> [<c2> [<c3>]]
    precolor <v> <c>
    descriptor <s-expression>   optional family descriptor (certificates)

Parsing is strict: unknown directives, duplicate rot/edge lines, values out
of range, and rotation/outer inconsistency (the graph must validate as a
near-triangulation) are all hard errors.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group_color import ColorSystem, PhiAssignment
from .plane_graph import PlaneNearTriangulation, validate


class GcgError(ValueError):
    """Malformed gcg input."""


@dataclass(frozen=True)
class GcgDocument:
    graph: PlaneNearTriangulation
    phi: PhiAssignment
    colors: ColorSystem
    descriptor: str | None = None


def _ints(parts: list[str], line_no: int) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GcgError(f"line {line_no}: expected integers, got {parts!r}") from None


def parse_gcg(text: str) -> GcgDocument:
    n: int | None = None
    modulus = 5
    rot_lines: dict[int, list[int]] = {}
    outer: list[int] | None = None
    edge_lines: dict[tuple[int, int], tuple[int, int, int]] = {}
    forbid: dict[int, frozenset[int]] = {}
    precolor: dict[int, int] = {}
    descriptor: str | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "n":
            if n is not None:
                raise GcgError(f"line {line_no}: duplicate n directive")
            (n,) = _ints(args, line_no) if len(args) == 1 else (None,)
            if n is None or n < 0:
                raise GcgError(f"line {line_no}: n needs one nonnegative integer")
        elif kind == "group":
            vals = _ints(args, line_no)
            if len(vals) != 1 or vals[0] < 2:
                raise GcgError(f"line {line_no}: group needs one integer >= 2")
            modulus = vals[0]
        elif kind == "rot":
            vals = _ints(args, line_no)
            if not vals:
                raise GcgError(f"line {line_no}: rot needs a vertex")
            v, nbrs = vals[0], vals[1:]
            if v in rot_lines:
                raise GcgError(f"line {line_no}: duplicate rot line for vertex {v}")
            rot_lines[v] = nbrs
        elif kind == "outer":
            vals = _ints(args, line_no)
            if outer is not None:
                raise GcgError(f"line {line_no}: duplicate outer directive")
            if not vals or len(vals) != vals[0] + 1:
                raise GcgError(f"line {line_no}: outer count does not match vertices")
            outer = vals[1:]
        elif kind == "edge":
            vals = _ints(args, line_no)
            if len(vals) != 3:
                raise GcgError(f"line {line_no}: edge needs u v phi")
            u, v, x = vals
            key = (min(u, v), max(u, v))
            if key in edge_lines:
                raise GcgError(f"line {line_no}: duplicate edge line for {u}-{v}")
            edge_lines[key] = (u, v, x)
        elif kind == "forbid":
            vals = _ints(args, line_no)
            if not 2 <= len(vals) <= 4:
                raise GcgError(f"line {line_no}: forbid needs a vertex and 1..3 colors")
            if vals[0] in forbid:
                raise GcgError(f"line {line_no}: duplicate forbid line for {vals[0]}")
            forbid[vals[0]] = frozenset(vals[1:])
        elif kind == "precolor":
            vals = _ints(args, line_no)
            if len(vals) != 2:
                raise GcgError(f"line {line_no}: precolor needs vertex and color")
            if vals[0] in precolor:
                raise GcgError(f"line {line_no}: duplicate precolor line for {vals[0]}")
            precolor[vals[0]] = vals[1]
        elif kind == "descriptor":
            if descriptor is not None:
                raise GcgError(f"line {line_no}: duplicate descriptor directive")
            descriptor = " ".join(args)
        else:
            raise GcgError(f"line {line_no}: unknown directive {kind!r}")

    if n is None:
        raise GcgError("missing n directive")
    if outer is None:
        raise GcgError("missing outer directive")
    missing = [v for v in range(n) if v not in rot_lines]
    if missing:
        raise GcgError(f"missing rot lines for vertices {missing}")
    extra = [v for v in rot_lines if not 0 <= v < n]
    if extra:
        raise GcgError(f"rot lines for out-of-range vertices {extra}")

    graph = PlaneNearTriangulation.from_lists(
        [rot_lines[v] for v in range(n)], outer
    )
    report = validate(graph)
    if not report.ok:
        raise GcgError("invalid near-triangulation: " + "; ".join(report.violations))

    edge_set = set(graph.edges())
    records = []
    for key, (u, v, x) in sorted(edge_lines.items()):
        if key not in edge_set:
            raise GcgError(f"edge line {u}-{v} is not an edge of the rotation")
        if not 0 <= x < modulus:
            raise GcgError(f"edge value {x} out of range mod {modulus}")
        records.append((u, v, x))
    for key in sorted(edge_set - set(edge_lines)):
        records.append((key[0], key[1], 0))
    phi = PhiAssignment(modulus, tuple(records))

    forbidden = [frozenset()] * n
    for v, colors in forbid.items():
        if not 0 <= v < n:
            raise GcgError(f"forbid line for out-of-range vertex {v}")
        if any(not 0 <= c < modulus for c in colors):
            raise GcgError(f"forbid colors at {v} out of range mod {modulus}")
        forbidden[v] = colors
    for v, c in precolor.items():
        if not 0 <= v < n:
            raise GcgError(f"precolor line for out-of-range vertex {v}")
        if not 0 <= c < modulus:
            raise GcgError(f"precolor {c} out of range mod {modulus}")
    colors = ColorSystem(modulus, tuple(forbidden), tuple(sorted(precolor.items())))
    return GcgDocument(graph, phi, colors, descriptor)


def write_gcg(
    graph: PlaneNearTriangulation,
    phi: PhiAssignment | None = None,
    colors: ColorSystem | None = None,
    descriptor: str | None = None,
    comment: str | None = None,
) -> str:
    lines = []
    if comment:
        for part in comment.splitlines():
            lines.append(f"# {part}")
    modulus = phi.modulus if phi is not None else (colors.modulus if colors else 5)
    lines.append(f"n {graph.vertex_count}")
    if modulus != 5:
        lines.append(f"group {modulus}")
    for v in range(graph.vertex_count):
        lines.append("rot " + " ".join(str(x) for x in (v, *graph.rotation[v])))
    lines.append(
        "outer " + " ".join(str(x) for x in (len(graph.outer_cycle), *graph.outer_cycle))
    )
    if phi is not None:
        for tail, head, value in sorted(phi.records, key=lambda r: (min(r[:2]), max(r[:2]))):
            if value:
                lines.append(f"edge {tail} {head} {value}")
    if colors is not None:
        for v, fv in enumerate(colors.forbidden):
            if fv:
                lines.append(f"forbid {v} " + " ".join(str(c) for c in sorted(fv)))
        for v, c in colors.precoloring:
            lines.append(f"precolor {v} {c}")
    if descriptor:
        lines.append(f"descriptor {descriptor}")
    return "\n".join(lines) + "\n"
