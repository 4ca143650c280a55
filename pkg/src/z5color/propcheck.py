"""Property harness: randomized/exhaustive checks of the coloring laws.

Every check builds the quantifier structure of one statement literally and
hunts for counterexamples with the exact solvers.  Checks are organized as
streams of self-contained instance packets (text payload plus a few
auxiliary integers), so they can be partitioned across worker processes and
replayed bit-exactly: the same seed always produces the same packets, and a
counterexample's payload re-runs through ``replay`` standalone.

Property identifiers:

- ``calculus``: the tau involution, the triangle quantifier collapse, count
  preservation under labeling shifts, and the facial-triangle property of
  the wheel family.
- ``lemma1``: on multi-wheels, all non-extendable boundary precolorings
  share one tail-minus-head color difference, independent of the labels on
  the two principal edges.
- ``lemma2``: a generalized multi-wheel with no separating triangle stays
  colorable after deleting any non-principal edge.
- ``lemma3a``/``lemma3b``: the two-interior-vertex configurations are
  three-extendable.
- ``cor1``: multi-wheels whose interior vertices all see the head neighbor
  (and with no separating triangle) are three-extendable.
- ``lemma4``: in a generalized multi-wheel with the head neighbor
  precolored, some tail color works for every conflict-free major color.
- ``lemma5``: in a wheel string, the clean and cut vertices can be colored
  so that every conflict-free coloring of the major vertices extends.
- ``theorem4``: colorable instances with a precolored outer path have at
  least 2^(n/9 - r/3) colorings (r = vertices with exactly three available
  colors), excluding the known exceptional configuration.
- ``corollary2``: unconstrained instances have at least 2^(n/9) colorings.
"""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import gcg
from .families import (
    FamilyDescriptor,
    PrincipalPath,
    WheelString,
    build_wheel_string,
    built_family,
    facial_triangle_property,
    is_multi_wheel_descriptor,
    parse_sexpr,
    to_sexpr,
)
from .group_color import ColorSystem, PhiAssignment, shift_phi, tau
from .plane_graph import PlaneNearTriangulation, separating_cycles, validate
from .solver import count_colorings, lemma1_alpha, marginal_counts

CHECK_IDS = (
    "calculus",
    "lemma1",
    "lemma2",
    "lemma3a",
    "lemma3b",
    "cor1",
    "lemma4",
    "lemma5",
    "theorem4",
    "corollary2",
)


class PropcheckError(ValueError):
    pass


@dataclass(frozen=True)
class RandomInstanceConfig:
    """Sampling knobs shared by all checks.  The same seed always yields
    the same instance stream."""

    n_min: int = 3
    n_max: int = 12
    phi_mode: str = "uniform"  # uniform | zero | sparse
    forbid_cap: int = 2
    samples: int = 100
    seed: int = 0


@dataclass(frozen=True)
class CheckReport:
    name: str
    seed: int
    instances: int
    counterexamples: tuple[str, ...]
    seconds: float
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def render(self) -> str:
        lines = [
            f"# property: {self.name}",
            f"# seed: {self.seed}",
            f"# instances: {self.instances}",
            f"# seconds: {self.seconds:.3f}",
        ]
        for note in self.notes:
            lines.append(f"# note: {note}")
        for i, ce in enumerate(self.counterexamples, start=1):
            lines.append(f"counterexample {i}:")
            lines.extend("  " + ln for ln in ce.rstrip("\n").splitlines())
        lines.append("PASS" if self.passed else f"FAIL {len(self.counterexamples)}")
        return "\n".join(lines) + "\n"


def derive_seed(seed: int, *parts) -> int:
    text = repr((seed, parts)).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")


# ---------------------------------------------------------------------------
# Instance generators
# ---------------------------------------------------------------------------


def random_phi(edges, rng: random.Random, mode: str = "uniform", modulus: int = 5) -> PhiAssignment:
    values = {}
    for u, v in edges:
        if mode == "zero":
            x = 0
        elif mode == "sparse":
            x = 0 if rng.random() < 0.75 else rng.randrange(1, modulus)
        elif mode == "uniform":
            x = rng.randrange(modulus)
        else:
            raise PropcheckError(f"unknown phi mode {mode!r}")
        values[(u, v)] = x
    return PhiAssignment.from_values(values, modulus)


def random_forbidden(
    colors: ColorSystem, vertices, rng: random.Random, cap: int
) -> ColorSystem:
    for v in vertices:
        size = rng.randint(0, cap)
        colors = colors.with_forbidden(v, rng.sample(range(colors.modulus), size))
    return colors


def random_triangulation(n: int, seed: int) -> PlaneNearTriangulation:
    """Stacked (Apollonian-type) plane triangulation: start from a triangle
    and repeatedly insert a vertex into a uniformly random inner face."""
    return random_near_triangulation(n, 3, seed)


def random_near_triangulation(n: int, outer: int, seed: int) -> PlaneNearTriangulation:
    """A near-triangulation with the given outer cycle length: triangulate
    a polygon with random ears, then grow by random stacking."""
    if outer < 3:
        raise PropcheckError("outer cycle needs length >= 3")
    if n < outer:
        raise PropcheckError("n must be at least the outer cycle length")
    rng = random.Random(derive_seed(seed, "near-triangulation", n, outer))

    def ears(poly: list[int]) -> list[tuple[int, int, int]]:
        if len(poly) < 3:
            return []
        if len(poly) == 3:
            return [tuple(poly)]
        t = rng.randrange(1, len(poly) - 1)
        out = [(poly[0], poly[t], poly[-1])]
        return out + ears(poly[: t + 1]) + ears(poly[t:])

    triangles = ears(list(range(outer)))
    adjacent = {v: set() for v in range(outer)}
    for i in range(outer):
        adjacent[i].add((i + 1) % outer)
        adjacent[(i + 1) % outer].add(i)
    for a, b, c in triangles:
        for u, v in ((a, b), (b, c), (a, c)):
            adjacent[u].add(v)
            adjacent[v].add(u)
    rotation = [
        [u for t in range(1, outer) if (u := (v + t) % outer) in adjacent[v]]
        for v in range(outer)
    ]

    from .plane_graph import trace_faces

    faces = [
        [d[0] for d in f] for f in trace_faces(rotation) if len(f) == 3
    ]
    outer_orbit = [f for f in trace_faces(rotation) if len(f) == outer]
    if outer == 3:
        # both orbits are triangles; the outer one reads 0,1,2 in order
        faces = [f for f in faces if f != [0, 1, 2]] or [[0, 2, 1]]

    for w in range(outer, n):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        rotation.append([a, c, b])

        def wedge(x: int, p: int, q: int) -> None:
            i = rotation[x].index(p)
            if rotation[x][(i + 1) % len(rotation[x])] != q:
                raise RuntimeError("stacking corner out of order")
            rotation[x].insert(i + 1, w)

        wedge(a, c, b)
        wedge(b, a, c)
        wedge(c, b, a)
        faces += [[a, b, w], [b, c, w], [c, a, w]]
    return PlaneNearTriangulation.from_lists(rotation, range(outer))


def _family_pool(n_max: int, rng: random.Random, want: int, keep) -> list:
    members = [item for item in built_family(n_max) if keep(*item)]
    if not members:
        raise PropcheckError("no family members satisfy the filter")
    if len(members) <= want:
        return members
    return [members[i] for i in sorted(rng.sample(range(len(members)), want))]


def _path_proper_precolor(
    graph: PlaneNearTriangulation,
    phi: PhiAssignment,
    path: PrincipalPath,
    rng: random.Random,
) -> dict[int, int]:
    cm = rng.randrange(5)
    tails = [c for c in range(5) if c != tau(phi, path.major, cm, path.tail)]
    heads = [c for c in range(5) if c != tau(phi, path.major, cm, path.head)]
    ct = rng.choice(tails)
    if graph.has_edge(path.tail, path.head):
        heads = [c for c in heads if c != tau(phi, path.tail, ct, path.head)]
        if not heads:
            return _path_proper_precolor(graph, phi, path, rng)
    return {path.tail: ct, path.major: cm, path.head: rng.choice(heads)}


def exceptional_theorem4_config(
    graph: PlaneNearTriangulation,
    phi: PhiAssignment,
    colors: ColorSystem,
    path: tuple[int, int, int],
) -> bool:
    """The counting bound's excluded shape: a vertex with exactly four
    available colors joined to all three precolored vertices, only one of
    whose colors survives the three images."""
    pre = colors.precolor_map()
    tail, major, head = path
    for u in range(graph.vertex_count):
        if u in path:
            continue
        if len(colors.available(u)) != 4:
            continue
        if not all(graph.has_edge(u, p) for p in path):
            continue
        images = {
            tau(phi, tail, pre[tail], u),
            tau(phi, major, pre[major], u),
            tau(phi, head, pre[head], u),
        }
        if len(colors.available(u) - images) == 1:
            return True
    return False


# ---------------------------------------------------------------------------
# Packets and evaluators
# ---------------------------------------------------------------------------
#
# A packet is (property_id, index, payload, aux); payload is a gcg document
# (or the string form for lemma5) and aux carries small per-packet integers.
# Evaluators return None on success or a failure note.


def _packet_doc(payload: str) -> gcg.GcgDocument:
    return gcg.parse_gcg(payload)


def _canonical_path(graph: PlaneNearTriangulation) -> PrincipalPath:
    k = len(graph.outer_cycle)
    return PrincipalPath(graph.outer_cycle[k - 1], graph.outer_cycle[0], graph.outer_cycle[1])


def _eval_calculus_obs1(payload: str, aux) -> str | None:
    for orientation in ((0, 1), (1, 0)):
        for value in range(5):
            phi = PhiAssignment(5, ((orientation[0], orientation[1], value),))
            for alpha in range(5):
                if tau(phi, 1, tau(phi, 0, alpha, 1), 0) != alpha:
                    return f"involution failed at value={value} alpha={alpha}"
    return None


def _eval_calculus_prop2(payload: str, aux) -> str | None:
    for a in range(5):
        for b in range(5):
            for c in range(5):
                phi = PhiAssignment(5, ((0, 1, a), (1, 2, b), (2, 0, c)))

                def holds(alpha: int) -> bool:
                    return tau(phi, 1, tau(phi, 0, alpha, 1), 2) == tau(phi, 0, alpha, 2)

                results = [holds(alpha) for alpha in range(5)]
                if any(results) != all(results):
                    return f"quantifier collapse failed at labels {(a, b, c)}"
    return None


def _eval_calculus_prop3(payload: str, aux) -> str | None:
    (n_max,) = aux
    for d, g, p in built_family(n_max):
        if not facial_triangle_property(g, p):
            return f"facial triangle property failed for {to_sexpr(d)}"
    return None


def _eval_calculus_shift(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    v0, alpha = aux
    before = count_colorings(doc.graph, doc.phi, doc.colors)
    after = count_colorings(doc.graph, shift_phi(doc.phi, v0, alpha), doc.colors)
    if before != after:
        return f"count changed under shift at {v0} by {alpha}: {before} != {after}"
    return None


def _eval_lemma1(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    reroll_seed = aux[0]
    path = _canonical_path(doc.graph)
    # Rerolling the two principal-edge labels must not move the alpha; the
    # failure table is shared (it does not involve those edges), only the
    # properness filter changes with each reroll.
    from .solver import classify_alpha, lemma1_failure_table

    table = lemma1_failure_table(doc.graph, doc.phi, doc.colors, path)
    res = classify_alpha(table, doc.graph, doc.phi, path)
    if res.kind == "none":
        return "lemma1_alpha returned 'none' on a multi-wheel"
    diffs = {res.alpha} if res.kind == "alpha" else set()
    rng = random.Random(reroll_seed)
    for _ in range(2):
        phi = PhiAssignment(
            5,
            tuple(
                (t, h, rng.randrange(5))
                if {t, h} in ({path.tail, path.major}, {path.major, path.head})
                else (t, h, x)
                for t, h, x in doc.phi.records
            ),
        )
        rerolled = classify_alpha(table, doc.graph, phi, path)
        if rerolled.kind == "none":
            return "lemma1_alpha returned 'none' after a principal-edge reroll"
        if rerolled.kind == "alpha":
            diffs.add(rerolled.alpha)
    if len(diffs) > 1:
        return f"alpha changed under principal-edge rerolls: {sorted(diffs)}"
    return None


def _eval_lemma2(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    path = _canonical_path(doc.graph)
    principal = {
        frozenset((path.tail, path.major)),
        frozenset((path.major, path.head)),
    }
    for u, v in doc.graph.edges():
        if frozenset((u, v)) in principal:
            continue
        if count_colorings(doc.graph, doc.phi.remove_edge(u, v), doc.colors) == 0:
            return f"deleting edge {u}-{v} left no coloring"
    return None


def _eval_three_extendable(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    path = _canonical_path(doc.graph)
    trio = (path.tail, path.major, path.head)
    table = marginal_counts(doc.graph, doc.phi, doc.colors, keep=trio)
    for (ct, cm, ch), count in sorted(table.items()):
        if ct == tau(doc.phi, path.major, cm, path.tail):
            continue
        if ch == tau(doc.phi, path.major, cm, path.head):
            continue
        if doc.graph.has_edge(path.tail, path.head) and ch == tau(
            doc.phi, path.tail, ct, path.head
        ):
            continue
        if count == 0:
            return f"precoloring (tail,major,head)=({ct},{cm},{ch}) does not extend"
    return None


def _eval_lemma4(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    path = _canonical_path(doc.graph)
    tail_forbidden = doc.colors.forbidden[path.tail]
    middles_cs = doc.colors.with_forbidden(path.tail, ())
    for c_head in range(5):
        cs = middles_cs.with_precolor(path.head, c_head)
        table = marginal_counts(
            doc.graph, doc.phi, cs, keep=(path.tail, path.major)
        )
        good_tail = None
        for ct in sorted(set(range(5)) - tail_forbidden):
            ok = True
            for cm in range(5):
                if cm == tau(doc.phi, path.head, c_head, path.major):
                    continue
                if cm == tau(doc.phi, path.tail, ct, path.major):
                    continue
                if table[(ct, cm)] == 0:
                    ok = False
                    break
            if ok:
                good_tail = ct
                break
        if good_tail is None:
            return f"no tail color protects every major color at head={c_head}"
    return None


def _parse_string_payload(payload: str):
    parts: list[FamilyDescriptor] = []
    values: dict[tuple[int, int], int] = {}
    forbidden: dict[int, frozenset[int]] = {}
    for raw in payload.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "parts":
            text = " ".join(args)
            depth = 0
            token = ""
            for ch in text:
                token += ch
                depth += ch == "("
                depth -= ch == ")"
                if depth == 0 and token.strip():
                    parts.append(parse_sexpr(token.strip()))
                    token = ""
        elif head == "edge":
            u, v, x = (int(a) for a in args)
            values[(u, v)] = x
        elif head == "forbid":
            v = int(args[0])
            forbidden[v] = frozenset(int(a) for a in args[1:])
        else:
            raise PropcheckError(f"unknown string-instance line {line!r}")
    string = build_wheel_string(parts)
    phi = PhiAssignment.from_values(values)
    fb = [forbidden.get(v, frozenset()) for v in range(string.vertex_count)]
    return string, phi, ColorSystem(5, tuple(fb))


def _string_payload(
    parts, string: WheelString, phi: PhiAssignment, colors: ColorSystem
) -> str:
    lines = ["parts " + " ".join(to_sexpr(d) for d in parts)]
    # The payload has no rotation lines, so every edge is written, zeros too.
    for t, h, x in sorted(phi.records, key=lambda r: (min(r[:2]), max(r[:2]))):
        lines.append(f"edge {t} {h} {x}")
    for v, fv in enumerate(colors.forbidden):
        if fv:
            lines.append(f"forbid {v} " + " ".join(str(c) for c in sorted(fv)))
    return "\n".join(lines) + "\n"


def _eval_lemma5(payload: str, aux) -> str | None:
    string, phi, colors = _parse_string_payload(payload)
    anchors = [string.clean[0], *string.cut, string.clean[1]]
    majors = list(string.majors)

    def anchor_choices(idx: int, chosen: dict[int, int]):
        if idx == len(anchors):
            yield dict(chosen)
            return
        v = anchors[idx]
        for c in sorted(set(range(5)) - colors.forbidden[v]):
            if any(
                u in chosen and c == tau(phi, u, chosen[u], v)
                for u in string.adjacency[v]
            ):
                continue
            chosen[v] = c
            yield from anchor_choices(idx + 1, chosen)
            del chosen[v]

    for chosen in anchor_choices(0, {}):
        cs = colors
        for v, c in chosen.items():
            cs = cs.with_precolor(v, c)
        table = marginal_counts(string.vertex_count, phi, cs, keep=tuple(majors))
        works = True
        for assign, count in table.items():
            bad = False
            for v, c in zip(majors, assign):
                if c in colors.forbidden[v]:
                    bad = True
                    break
                if any(
                    u in chosen and c == tau(phi, u, chosen[u], v)
                    for u in string.adjacency[v]
                ):
                    bad = True
                    break
            if bad:
                continue
            if count == 0:
                works = False
                break
        if works:
            return None
    return "no clean/cut coloring protects every major coloring"


def _eval_theorem4(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    (mode,) = aux
    pre = doc.colors.precolor_map()
    path = tuple(sorted(pre, key=lambda v: list(doc.graph.outer_cycle).index(v)))
    if mode == 3:
        oc = list(doc.graph.outer_cycle)
        k = len(oc)
        trio = (oc[k - 1], oc[0], oc[1])
        if exceptional_theorem4_config(doc.graph, doc.phi, doc.colors, trio):
            return None  # excluded configuration; never testable
    count = count_colorings(doc.graph, doc.phi, doc.colors)
    if count == 0:
        return None
    free = [v for v in range(doc.graph.vertex_count) if v not in pre]
    r = sum(1 for v in free if len(doc.colors.available(v)) == 3)
    bound = 2 ** (len(free) / 9 - r / 3)
    if count < bound:
        return f"count {count} below bound 2^({len(free)}/9 - {r}/3) = {bound:.4f}"
    return None


def _eval_corollary2(payload: str, aux) -> str | None:
    doc = _packet_doc(payload)
    count = count_colorings(doc.graph, doc.phi, doc.colors)
    n = doc.graph.vertex_count
    bound = 2 ** (n / 9)
    if count < bound:
        return f"count {count} below 2^({n}/9) = {bound:.4f}"
    return None


_EVALUATORS = {
    "calculus/obs1": _eval_calculus_obs1,
    "calculus/prop2": _eval_calculus_prop2,
    "calculus/prop3": _eval_calculus_prop3,
    "calculus/shift": _eval_calculus_shift,
    "lemma1": _eval_lemma1,
    "lemma2": _eval_lemma2,
    "lemma3a": _eval_three_extendable,
    "lemma3b": _eval_three_extendable,
    "cor1": _eval_three_extendable,
    "lemma4": _eval_lemma4,
    "lemma5": _eval_lemma5,
    "theorem4": _eval_theorem4,
    "corollary2": _eval_corollary2,
}


def replay(evaluator_id: str, payload: str, aux=()) -> str | None:
    """Re-run one packet standalone; None means the property holds on it."""
    return _EVALUATORS[evaluator_id](payload, tuple(aux))


def _evaluate_packet(packet) -> tuple[int, str | None]:
    evaluator_id, index, payload, aux = packet
    note = _EVALUATORS[evaluator_id](payload, aux)
    return index, note


def _run_packets(packets, jobs: int) -> list[tuple[int, str, str]]:
    failures = []
    if jobs <= 1:
        results = map(_evaluate_packet, packets)
        for (index, note), packet in zip(results, packets):
            if note is not None:
                failures.append((index, packet[2], note))
        return failures
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_evaluate_packet, packets, chunksize=4))
    by_index = {p[1]: p for p in packets}
    for index, note in sorted(results):
        if note is not None:
            failures.append((index, by_index[index][2], note))
    return failures


# ---------------------------------------------------------------------------
# Check drivers
# ---------------------------------------------------------------------------


def _lemma3a_graph(k: int, i: int) -> PlaneNearTriangulation:
    """Two interior vertices u, v; u sees the boundary from the major round
    to position i, v sees position i round to the major, and u-v is a chordal
    split between the fans."""
    if not (3 <= i <= k - 1) or k < 4:
        raise PropcheckError("lemma3a needs 3 <= i <= k-1")
    u, v = k, k + 1
    rot: dict[int, list[int]] = {}
    rot[0] = [1, u, v, k - 1]
    rot[u] = list(range(0, i)) + [v]
    rot[v] = list(range(i - 1, k)) + [0, u]
    rot[1] = [2, u, 0]
    for jj in range(2, k):
        if jj < i - 1:
            rot[jj] = [jj + 1, u, jj - 1]
        elif jj == i - 1:
            rot[jj] = [jj + 1, v, u, jj - 1]
        elif jj < k - 1:
            rot[jj] = [jj + 1, v, jj - 1]
        else:
            rot[jj] = [0, v, jj - 1]
    rotation = [rot[x] for x in range(k + 2)]
    return PlaneNearTriangulation.from_lists(rotation, range(k))


def _lemma3b_graph(k: int, i: int) -> PlaneNearTriangulation:
    """Two interior vertices u, v; u sees positions 1..i-1, v sees the major,
    position 1, and positions i-1 round to the tail."""
    if not (4 <= i <= k - 1) or k < 5:
        raise PropcheckError("lemma3b needs 4 <= i <= k-1")
    u, v = k, k + 1
    rot: dict[int, list[int]] = {}
    rot[0] = [1, v, k - 1]
    rot[u] = list(range(1, i)) + [v]
    rot[v] = [0, 1, u] + list(range(i - 1, k))
    rot[1] = [2, u, v, 0]
    for jj in range(2, k):
        if jj < i - 1:
            rot[jj] = [jj + 1, u, jj - 1]
        elif jj == i - 1:
            rot[jj] = [jj + 1, v, u, jj - 1]
        elif jj < k - 1:
            rot[jj] = [jj + 1, v, jj - 1]
        else:
            rot[jj] = [0, v, jj - 1]
    rotation = [rot[x] for x in range(k + 2)]
    return PlaneNearTriangulation.from_lists(rotation, range(k))


def _member_packets(cfg: RandomInstanceConfig, prop: str, keep, constrain) -> list:
    """Sampled (member, phi, forbidden[, precolor]) packets for the family
    lemmas; `constrain` finishes the gcg document per property."""
    rng = random.Random(derive_seed(cfg.seed, prop, "members"))
    members = [item for item in built_family(cfg.n_max) if keep(*item)]
    if not members:
        raise PropcheckError(f"no members available for {prop} at n_max={cfg.n_max}")
    packets = []
    for index in range(cfg.samples):
        d, g, p = members[index % len(members)]
        sub_rng = random.Random(derive_seed(cfg.seed, prop, index))
        phi = random_phi(g.edges(), sub_rng, cfg.phi_mode)
        payload, aux = constrain(d, g, p, phi, sub_rng, index)
        packets.append((_base_eval(prop), index, payload, aux))
    return packets


def _base_eval(prop: str) -> str:
    return prop


def check_calculus(cfg: RandomInstanceConfig, jobs: int = 1) -> CheckReport:
    start = time.perf_counter()
    packets = [
        ("calculus/obs1", 0, "", ()),
        ("calculus/prop2", 1, "", ()),
        ("calculus/prop3", 2, "", (min(cfg.n_max, 12),)),
    ]
    for index in range(cfg.samples):
        rng = random.Random(derive_seed(cfg.seed, "calculus", index))
        n = rng.randint(max(cfg.n_min, 4), min(cfg.n_max, 8))
        g = random_triangulation(n, derive_seed(cfg.seed, "calculus-graph", index))
        phi = random_phi(g.edges(), rng, cfg.phi_mode)
        cs = random_forbidden(
            ColorSystem.free(n), list(g.outer_cycle), rng, cfg.forbid_cap
        )
        payload = gcg.write_gcg(g, phi, cs)
        # The count bijection re-maps the shifted vertex's color, so that
        # vertex must be free of forbidden colors.
        v0 = rng.choice([v for v in range(n) if not cs.forbidden[v]])
        aux = (v0, rng.randrange(5))
        packets.append(("calculus/shift", index + 3, payload, aux))
    failures = _run_packets(packets, jobs)
    return _report("calculus", cfg, packets, failures, start)


def check_lemma(ident, cfg: RandomInstanceConfig, jobs: int = 1) -> CheckReport:
    name = {1: "lemma1", 2: "lemma2", "3a": "lemma3a", "3b": "lemma3b",
            4: "lemma4", 5: "lemma5", "cor1": "cor1"}.get(ident, str(ident))
    if name not in CHECK_IDS or name in ("calculus", "theorem4", "corollary2"):
        raise PropcheckError(f"unknown lemma identifier {ident!r}")
    start = time.perf_counter()
    notes: tuple[str, ...] = ()
    if name == "lemma1":
        def keep(d, g, p):
            return is_multi_wheel_descriptor(d)

        def constrain(d, g, p, phi, rng, index):
            cs = ColorSystem.free(g.vertex_count)
            middles = [v for v in g.outer_cycle if v not in (p.tail, p.major, p.head)]
            cs = random_forbidden(cs, middles, rng, min(cfg.forbid_cap, 2))
            payload = gcg.write_gcg(g, phi, cs, descriptor=to_sexpr(d))
            return payload, (derive_seed(cfg.seed, "lemma1-reroll", index),)

        packets = _member_packets(cfg, "lemma1", keep, constrain)
    elif name == "lemma2":
        def keep(d, g, p):
            return not separating_cycles(g, 3)

        def constrain(d, g, p, phi, rng, index):
            cs = ColorSystem.free(g.vertex_count)
            middles = [v for v in g.outer_cycle if v not in (p.tail, p.major, p.head)]
            cs = random_forbidden(cs, middles, rng, min(cfg.forbid_cap, 2))
            for v, c in _path_proper_precolor(g, phi, p, rng).items():
                cs = cs.with_precolor(v, c)
            return gcg.write_gcg(g, phi, cs, descriptor=to_sexpr(d)), ()

        packets = _member_packets(cfg, "lemma2", keep, constrain)
    elif name in ("lemma3a", "lemma3b"):
        builder = _lemma3a_graph if name == "lemma3a" else _lemma3b_graph
        low = 3 if name == "lemma3a" else 4
        packets = []
        for index in range(cfg.samples):
            rng = random.Random(derive_seed(cfg.seed, name, index))
            k = rng.randint(low + 1, max(low + 1, min(cfg.n_max - 2, 12)))
            i = rng.randint(low, k - 1)
            g = builder(k, i)
            phi = random_phi(g.edges(), rng, cfg.phi_mode)
            cs = ColorSystem.free(g.vertex_count)
            middles = [v for v in g.outer_cycle if v not in (0, 1, k - 1)]
            cs = random_forbidden(cs, middles, rng, min(cfg.forbid_cap, 2))
            packets.append((name, index, gcg.write_gcg(g, phi, cs), ()))
    elif name == "cor1":
        def keep(d, g, p):
            interior = g.interior_vertices()
            return (
                is_multi_wheel_descriptor(d)
                and len(interior) >= 2
                and all(g.has_edge(v, p.head) for v in interior)
                and not separating_cycles(g, 3)
            )

        def constrain(d, g, p, phi, rng, index):
            cs = ColorSystem.free(g.vertex_count)
            middles = [v for v in g.outer_cycle if v not in (p.tail, p.major, p.head)]
            cs = random_forbidden(cs, middles, rng, min(cfg.forbid_cap, 2))
            return gcg.write_gcg(g, phi, cs, descriptor=to_sexpr(d)), ()

        packets = _member_packets(cfg, "cor1", keep, constrain)
    elif name == "lemma4":
        def keep(d, g, p):
            return True

        def constrain(d, g, p, phi, rng, index):
            cs = ColorSystem.free(g.vertex_count)
            eligible = [v for v in g.outer_cycle if v not in (p.major, p.head)]
            cs = random_forbidden(cs, eligible, rng, min(cfg.forbid_cap, 2))
            return gcg.write_gcg(g, phi, cs, descriptor=to_sexpr(d)), ()

        packets = _member_packets(cfg, "lemma4", keep, constrain)
    else:  # lemma5
        notes = (
            "clean vertices capped at three forbidden colors, all other "
            "boundary vertices at two, as stated",
        )
        rng_members = random.Random(derive_seed(cfg.seed, "lemma5", "members"))
        members = built_family(max(3, cfg.n_max - 3))
        packets = []
        for index in range(cfg.samples):
            rng = random.Random(derive_seed(cfg.seed, "lemma5", index))
            count = rng.randint(1, 3)
            while True:
                parts = [members[rng.randrange(len(members))][0] for _ in range(count)]
                string = build_wheel_string(parts)
                if string.vertex_count <= cfg.n_max:
                    break
                count = max(1, count - 1)
            phi = random_phi(string.edges(), rng, cfg.phi_mode)
            cs = ColorSystem.free(string.vertex_count)
            for v in string.boundary:
                cap = 3 if v in string.clean else 2
                cs = cs.with_forbidden(v, rng.sample(range(5), rng.randint(0, cap)))
            payload = _string_payload(parts, string, phi, cs)
            packets.append(("lemma5", index, payload, ()))
    failures = _run_packets(packets, jobs)
    return _report(name, cfg, packets, failures, start, notes)


def check_theorem4_bound(cfg: RandomInstanceConfig, jobs: int = 1) -> CheckReport:
    start = time.perf_counter()
    packets = []
    graphs = max(1, cfg.samples // 50)
    phis = min(cfg.samples, 50)
    index = 0
    for gi in range(graphs):
        rng_g = random.Random(derive_seed(cfg.seed, "theorem4-graph", gi))
        n = rng_g.randint(max(cfg.n_min, 4), cfg.n_max)
        g = random_triangulation(n, derive_seed(cfg.seed, "theorem4", gi))
        oc = list(g.outer_cycle)
        for pi in range(phis):
            rng = random.Random(derive_seed(cfg.seed, "theorem4-phi", gi, pi))
            phi = random_phi(g.edges(), rng, cfg.phi_mode)
            mode = 2 if pi % 2 == 0 else 3
            cs = ColorSystem.free(n)
            if mode == 2:
                eligible = [v for v in oc if v not in (oc[0], oc[1])] + []
                cs = random_forbidden(cs, eligible, rng, min(cfg.forbid_cap, 2))
                cm = rng.randrange(5)
                ch = rng.choice(
                    [c for c in range(5) if c != tau(phi, oc[0], cm, oc[1])]
                )
                cs = cs.with_precolor(oc[0], cm).with_precolor(oc[1], ch)
            else:
                p = PrincipalPath(oc[-1], oc[0], oc[1])
                eligible = [v for v in oc if v not in (p.tail, p.major, p.head)]
                cs = random_forbidden(cs, eligible, rng, min(cfg.forbid_cap, 2))
                for v, c in _path_proper_precolor(g, phi, p, rng).items():
                    cs = cs.with_precolor(v, c)
            packets.append(("theorem4", index, gcg.write_gcg(g, phi, cs), (mode,)))
            index += 1
    failures = _run_packets(packets, jobs)
    return _report("theorem4", cfg, packets, failures, start)


def check_corollary(cfg: RandomInstanceConfig, jobs: int = 1) -> CheckReport:
    start = time.perf_counter()
    packets = []
    graphs = max(1, cfg.samples // 50)
    phis = min(cfg.samples, 50)
    index = 0
    for gi in range(graphs):
        rng_g = random.Random(derive_seed(cfg.seed, "corollary2-graph", gi))
        n = rng_g.randint(max(cfg.n_min, 3), cfg.n_max)
        g = random_triangulation(n, derive_seed(cfg.seed, "corollary2", gi))
        for pi in range(phis):
            rng = random.Random(derive_seed(cfg.seed, "corollary2-phi", gi, pi))
            phi = random_phi(g.edges(), rng, cfg.phi_mode)
            packets.append(
                ("corollary2", index, gcg.write_gcg(g, phi, ColorSystem.free(n)), ())
            )
            index += 1
    failures = _run_packets(packets, jobs)
    return _report("corollary2", cfg, packets, failures, start)


def run_check(property_id: str, cfg: RandomInstanceConfig, jobs: int = 1) -> CheckReport:
    if property_id == "calculus":
        return check_calculus(cfg, jobs)
    if property_id == "theorem4":
        return check_theorem4_bound(cfg, jobs)
    if property_id == "corollary2":
        return check_corollary(cfg, jobs)
    if property_id in ("lemma1", "lemma2", "lemma3a", "lemma3b", "cor1", "lemma4", "lemma5"):
        key = {"lemma1": 1, "lemma2": 2, "lemma3a": "3a", "lemma3b": "3b",
               "lemma4": 4, "lemma5": 5, "cor1": "cor1"}[property_id]
        return check_lemma(key, cfg, jobs)
    raise PropcheckError(f"unknown property {property_id!r}")


def _report(
    name: str,
    cfg: RandomInstanceConfig,
    packets,
    failures,
    start: float,
    notes: tuple[str, ...] = (),
) -> CheckReport:
    ces = tuple(
        payload + f"# failure: {note}\n# packet: {index}\n"
        for index, payload, note in failures
    )
    return CheckReport(
        name=name,
        seed=cfg.seed,
        instances=len(packets),
        counterexamples=ces,
        seconds=time.perf_counter() - start,
        notes=notes,
    )
