import itertools
import random

import pytest

from conftest import brute_count, random_phi_on
from z5color.families import (
    BrokenWheel,
    Glue,
    InsertWheel,
    PrincipalPath,
    Wheel,
    build,
    built_family,
    to_sexpr,
)
from z5color.group_color import ColorSystem, PhiAssignment, is_proper, shift_phi, tau
from z5color.propcheck import random_near_triangulation, random_phi, random_triangulation
from z5color.solver import (
    AlphaResult,
    ExtensionError,
    ExtensionProblem,
    HubException,
    ObstructionCertificate,
    classify_alpha,
    color_short_cycle,
    count_colorings,
    enumerate_colorings,
    extend_three,
    extend_two,
    first_coloring,
    lemma1_alpha,
    lemma1_failure_table,
    marginal_counts,
    validate_extension_problem,
    validate_obstruction,
)


def wheel_chromatic_value(k, q):
    # Cone over a k-cycle: q * P(C_k, q-1).
    return q * ((q - 2) ** k + (-1) ** k * (q - 2))


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


def test_count_triangle_is_sixty(k3):
    g, _ = k3
    assert count_colorings(g, PhiAssignment.zero(g.edges())) == 60


def test_count_single_edge_is_twenty():
    for value in range(5):
        phi = PhiAssignment(5, ((0, 1, value),))
        assert count_colorings(2, phi) == 20


def test_count_wheel5_brute_force_and_chromatic(w5):
    g, _ = w5
    phi = PhiAssignment.zero(g.edges())
    assert count_colorings(g, phi) == 1200
    assert brute_count(6, phi) == 1200
    assert wheel_chromatic_value(5, 5) == 1200


def test_count_agrees_with_literal_enumeration(rng):
    for _ in range(40):
        n = rng.randint(3, 6)
        g = random_triangulation(n, rng.randrange(10**6))
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(n)
        for v in range(n):
            if rng.random() < 0.4:
                cs = cs.with_forbidden(v, rng.sample(range(5), rng.randint(0, 2)))
        if rng.random() < 0.3:
            cs = cs.with_precolor(rng.randrange(n), rng.randrange(5))
        assert count_colorings(g, phi, cs) == brute_count(n, phi, cs)


def test_enumerate_matches_count_and_is_proper(rng):
    for _ in range(100):
        n = rng.randint(3, 7)
        g = random_triangulation(n, rng.randrange(10**6))
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(n)
        for v in g.outer_cycle:
            cs = cs.with_forbidden(v, rng.sample(range(5), rng.randint(0, 2)))
        out = list(enumerate_colorings(g, phi, cs))
        assert len(out) == count_colorings(g, phi, cs)
        assert len(set(out)) == len(out)
        for coloring in out[:20]:
            assert is_proper(g, phi, coloring)
            assert all(coloring[v] in cs.available(v) for v in range(n))


def test_enumerate_empty_for_hub_exception_instance(w5):
    g, _ = w5
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(6)
    for i in range(5):
        cs = cs.with_precolor(i, i)
    assert list(enumerate_colorings(g, phi, cs)) == []
    assert count_colorings(g, phi, cs) == 0


def test_count_invariances(rng, bw4):
    g, _ = bw4
    for _ in range(20):
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(4).with_forbidden(1, {0})
        base = count_colorings(g, phi, cs)
        # labeling shift at an unconstrained vertex
        assert base == count_colorings(g, shift_phi(phi, 2, rng.randrange(5)), cs)
        # stored-orientation flips
        flipped = phi
        for u, v in g.edges():
            if rng.random() < 0.5:
                flipped = flipped.with_flipped(u, v)
        assert base == count_colorings(g, flipped, cs)
    # relabeling by the mirror automorphism that fixes the constraint
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(4).with_forbidden(2, {1, 3})
    perm = {0: 0, 1: 3, 3: 1, 2: 2}  # reflection of the fan
    phi2 = PhiAssignment(5, tuple((perm[t], perm[h], x) for t, h, x in phi.records))
    assert count_colorings(g, phi, cs) == count_colorings(4, phi2, cs)


def test_marginal_counts_order_and_totals(rng, w5):
    g, _ = w5
    phi = random_phi_on(g, rng)
    marg = marginal_counts(g, phi, None, keep=(4, 0, 1))
    assert sum(marg.values()) == count_colorings(g, phi)
    swapped = marginal_counts(g, phi, None, keep=(1, 0, 4))
    for (a, b, c), value in marg.items():
        assert swapped[(c, b, a)] == value
    # per-entry agreement with explicit precoloring
    for trip in [(0, 1, 2), (3, 3, 3)]:
        cs = (
            ColorSystem.free(6)
            .with_precolor(4, trip[0])
            .with_precolor(0, trip[1])
            .with_precolor(1, trip[2])
        )
        assert marg[trip] == count_colorings(g, phi, cs)


# ---------------------------------------------------------------------------
# extend_two
# ---------------------------------------------------------------------------


def test_extend_two_triangle_example(k3):
    g, _ = k3
    phi = PhiAssignment.from_values({(0, 1): 1, (1, 2): 0, (2, 0): 0})
    cs = ColorSystem.free(3).with_precolor(0, 0).with_precolor(1, 0)
    coloring = extend_two(ExtensionProblem(g, phi, cs, (0, 1)))
    assert coloring[0] == 0 and coloring[1] == 0
    assert is_proper(g, phi, coloring)


def test_extend_two_random_problems(rng):
    for trial in range(200):
        n = rng.randint(4, 10)
        k = rng.randint(3, min(n, 7))
        g = random_near_triangulation(n, k, rng.randrange(10**6))
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(n)
        for v in g.outer_cycle:
            if v in (0, 1):
                continue
            cs = cs.with_forbidden(v, rng.sample(range(5), rng.randint(0, 2)))
        cm = rng.randrange(5)
        ch = rng.choice([c for c in range(5) if c != tau(phi, 0, cm, 1)])
        cs = cs.with_precolor(0, cm).with_precolor(1, ch)
        problem = ExtensionProblem(g, phi, cs, (0, 1))
        coloring = extend_two(problem)
        assert is_proper(g, phi, coloring)
        assert all(coloring[v] in cs.available(v) for v in range(n))
        if n <= 9:
            assert count_colorings(g, phi, cs) > 0


def test_extend_two_validates_input(bw4):
    g, _ = bw4
    phi = PhiAssignment.zero(g.edges())
    conflict = ColorSystem.free(4).with_precolor(0, 2).with_precolor(1, 2)
    with pytest.raises(ExtensionError, match="conflicts"):
        extend_two(ExtensionProblem(g, phi, conflict, (0, 1)))
    toobig = (
        ColorSystem.free(4)
        .with_precolor(0, 0)
        .with_precolor(1, 1)
        .with_forbidden(2, {0, 1, 2})
    )
    with pytest.raises(ExtensionError, match="cap"):
        extend_two(ExtensionProblem(g, phi, toobig, (0, 1)))
    inner_forbid = build(Wheel(4))[0]
    cs = (
        ColorSystem.free(5)
        .with_precolor(0, 0)
        .with_precolor(1, 1)
        .with_forbidden(4, {3})
    )
    with pytest.raises(ExtensionError, match="interior"):
        extend_two(ExtensionProblem(inner_forbid, phi, cs, (0, 1)))
    with pytest.raises(ExtensionError, match="consecutive"):
        extend_two(
            ExtensionProblem(
                g,
                phi,
                ColorSystem.free(4).with_precolor(0, 0).with_precolor(2, 1),
                (0, 2),
            )
        )


# ---------------------------------------------------------------------------
# color_short_cycle
# ---------------------------------------------------------------------------


def test_short_cycle_wheel_exception(w5):
    g, _ = w5
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(6)
    for i in range(5):
        cs = cs.with_precolor(i, i)
    result = color_short_cycle(g, phi, cs)
    assert result == HubException(vertex=5)
    taus = {tau(phi, i, i, 5) for i in range(5)}
    assert taus == set(range(5))


def test_short_cycle_wheel_extension(w5):
    g, _ = w5
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(6)
    for i, c in enumerate([0, 1, 0, 1, 2]):
        cs = cs.with_precolor(i, c)
    result = color_short_cycle(g, phi, cs)
    assert isinstance(result, tuple)
    assert result[5] in (3, 4)
    assert is_proper(g, phi, result)


def test_short_cycle_triangle_random(rng):
    for _ in range(30):
        g = random_triangulation(rng.randint(4, 8), rng.randrange(10**6))
        phi = random_phi_on(g, rng)
        table = marginal_counts(g, phi, None, keep=(0, 1, 2))
        proper = [trip for trip, cnt in table.items() if cnt > 0]
        assert proper, "triangle precolorings always extend somewhere"
        trip = proper[rng.randrange(len(proper))]
        cs = ColorSystem.free(g.vertex_count)
        for v, c in zip((0, 1, 2), trip):
            cs = cs.with_precolor(v, c)
        result = color_short_cycle(g, phi, cs)
        assert isinstance(result, tuple)
        assert is_proper(g, phi, result)


def test_short_cycle_agrees_with_counts(rng):
    # For cycles of length 4 and 5: extension returned iff the count is
    # positive; exception returned iff zero, with the full forbidden image.
    for k in (4, 5):
        g = random_near_triangulation(k + 2, k, seed=17 * k)
        for _ in range(12):
            phi = random_phi_on(g, rng)
            table = marginal_counts(g, phi, None, keep=tuple(range(k)))
            for trip, cnt in sorted(table.items()):
                cs = ColorSystem.free(g.vertex_count)
                for v, c in enumerate(trip):
                    cs = cs.with_precolor(v, c)
                improper = any(
                    trip[u] == tau(phi, v, trip[v], u)
                    for u in range(k)
                    for v in range(k)
                    if u != v and g.has_edge(u, v)
                )
                if improper:
                    continue
                result = color_short_cycle(g, phi, cs)
                if isinstance(result, HubException):
                    assert cnt == 0
                    images = {
                        tau(phi, c, trip[c], result.vertex) for c in range(k)
                    }
                    assert images == set(range(5))
                else:
                    assert cnt > 0
                    assert is_proper(g, phi, result)


def test_short_cycle_rejects_improper_precoloring(k3):
    g, _ = k3
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(3)
    for i, c in enumerate([0, 0, 1]):
        cs = cs.with_precolor(i, c)
    with pytest.raises(ExtensionError, match="improper"):
        color_short_cycle(g, phi, cs)


# ---------------------------------------------------------------------------
# extend_three
# ---------------------------------------------------------------------------


def bw4_blocked_instance():
    g, p = build(BrokenWheel(4))
    phi = PhiAssignment.zero(g.edges())
    cs = (
        ColorSystem.free(4)
        .with_forbidden(2, {3, 4})
        .with_precolor(3, 0)
        .with_precolor(0, 1)
        .with_precolor(1, 2)
    )
    return g, phi, cs, (3, 0, 1)


def test_extend_three_broken_wheel_certificate():
    g, phi, cs, path = bw4_blocked_instance()
    assert count_colorings(g, phi, cs) == 0
    result = extend_three(ExtensionProblem(g, phi, cs, path))
    assert isinstance(result, ObstructionCertificate)
    assert validate_obstruction(result) == []
    assert result.embedding == (0, 1, 2, 3)


def test_extend_three_returns_coloring_when_possible():
    g, phi, cs, path = bw4_blocked_instance()
    cs = cs.with_forbidden(2, {3})
    result = extend_three(ExtensionProblem(g, phi, cs, path))
    assert isinstance(result, tuple)
    assert is_proper(g, phi, result)


def test_extend_three_even_wheel_witness(rng, w5):
    # A wheel on an even number (>= 6) of vertices admits blocked instances.
    g, p = w5
    found = None
    for _ in range(4000):
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(6)
        for v in (2, 3):
            cs = cs.with_forbidden(v, rng.sample(range(5), 2))
        table = lemma1_failure_table(g, phi, cs, p)
        blocked = [
            t for t, c in table.items()
            if c == 0
            and t[0] != tau(phi, 0, t[1], 4)
            and t[2] != tau(phi, 0, t[1], 1)
        ]
        if blocked:
            found = (phi, cs, blocked[0])
            break
    assert found is not None
    phi, cs, (ct, cm, ch) = found
    cs = cs.with_precolor(4, ct).with_precolor(0, cm).with_precolor(1, ch)
    result = extend_three(ExtensionProblem(g, phi, cs, (4, 0, 1)))
    assert isinstance(result, ObstructionCertificate)
    assert validate_obstruction(result) == []


def test_extend_three_small_forbidden_sets_always_color(rng):
    # A certificate needs exactly two forbidden colors on its boundary, so
    # instances capped at one color always extend.
    for _ in range(40):
        n = rng.randint(4, 9)
        k = rng.randint(3, min(n, 6))
        g = random_near_triangulation(n, k, rng.randrange(10**6))
        oc = list(g.outer_cycle)
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(n)
        for v in oc[2:-1]:
            cs = cs.with_forbidden(v, rng.sample(range(5), rng.randint(0, 1)))
        path = (oc[-1], oc[0], oc[1])
        pre = _proper_path_colors(g, phi, path, rng)
        for v, c in pre.items():
            cs = cs.with_precolor(v, c)
        result = extend_three(ExtensionProblem(g, phi, cs, path))
        assert isinstance(result, tuple)


def test_extend_three_trichotomy_random(rng):
    colorings = obstructions = 0
    for _ in range(60):
        n = rng.randint(4, 8)
        k = rng.randint(3, min(n, 6))
        g = random_near_triangulation(n, k, rng.randrange(10**6))
        oc = list(g.outer_cycle)
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(n)
        for v in oc[2:-1]:
            cs = cs.with_forbidden(v, rng.sample(range(5), 2))
        path = (oc[-1], oc[0], oc[1])
        for v, c in _proper_path_colors(g, phi, path, rng).items():
            cs = cs.with_precolor(v, c)
        problem = ExtensionProblem(g, phi, cs, path)
        result = extend_three(problem)
        if isinstance(result, ObstructionCertificate):
            obstructions += 1
            assert count_colorings(g, phi, cs) == 0
            assert validate_obstruction(result) == []
        else:
            colorings += 1
            assert count_colorings(g, phi, cs) > 0
            assert is_proper(g, phi, result)
            assert all(result[v] in cs.available(v) for v in range(n))
    assert colorings > 0


def _proper_path_colors(g, phi, path, rng):
    tail, major, head = path
    cm = rng.randrange(5)
    ct = rng.choice([c for c in range(5) if c != tau(phi, major, cm, tail)])
    heads = [c for c in range(5) if c != tau(phi, major, cm, head)]
    if g.has_edge(tail, head):
        heads = [c for c in heads if c != tau(phi, tail, ct, head)] or None
        if heads is None:
            return _proper_path_colors(g, phi, path, rng)
    return {tail: ct, major: cm, head: rng.choice(heads)}


def test_validate_obstruction_flags_tampering():
    g, phi, cs, path = bw4_blocked_instance()
    cert = extend_three(ExtensionProblem(g, phi, cs, path))
    weakened = ObstructionCertificate(
        cert.descriptor,
        cert.graph,
        cert.path,
        cert.embedding,
        cert.phi,
        cert.colors.with_forbidden(2, {3}),
    )
    assert any("forbidden" in p or "colorable" in p for p in validate_obstruction(weakened))


def test_extend_three_budget_error():
    g, phi, cs, path = bw4_blocked_instance()
    with pytest.raises(RuntimeError, match="budget"):
        extend_three(ExtensionProblem(g, phi, cs, path), node_budget=1)


# ---------------------------------------------------------------------------
# lemma1_alpha
# ---------------------------------------------------------------------------


def test_lemma1_wheel_failures_share_alpha(rng, w5):
    g, p = w5
    seen_alpha = 0
    for _ in range(300):
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(6)
        for v in (2, 3):
            cs = cs.with_forbidden(v, rng.sample(range(5), 2))
        result = lemma1_alpha(g, phi, cs, p)
        assert result.kind in ("alpha", "vacuous")
        if result.kind == "alpha":
            seen_alpha += 1
            # the derivation: every blocked proper triple shares the diff
            table = lemma1_failure_table(g, phi, cs, p)
            diffs = set()
            for (ct, cm, ch), cnt in table.items():
                if cnt:
                    continue
                if ct == tau(phi, 0, cm, 4) or ch == tau(phi, 0, cm, 1):
                    continue
                diffs.add((ct - ch) % 5)
            assert diffs == {result.alpha}
    assert seen_alpha > 0


def test_lemma1_broken_wheel_control_returns_none():
    g, p = build(BrokenWheel(4))
    phi = PhiAssignment.zero(g.edges())
    cs = ColorSystem.free(4).with_forbidden(2, {3, 4})
    result = lemma1_alpha(g, phi, cs, p, require_multi_wheel=False)
    assert result == AlphaResult("none")
    with pytest.raises(ExtensionError, match="multi-wheel"):
        lemma1_alpha(g, phi, cs, p)


def test_lemma1_alpha_invariant_under_principal_rerolls(rng, w5):
    g, p = w5
    for _ in range(100):
        phi = random_phi_on(g, rng)
        cs = ColorSystem.free(6)
        for v in (2, 3):
            cs = cs.with_forbidden(v, rng.sample(range(5), 2))
        base = lemma1_alpha(g, phi, cs, p)
        table = lemma1_failure_table(g, phi, cs, p)
        diffs = {base.alpha} if base.kind == "alpha" else set()
        for _ in range(3):
            rolled = phi
            for a, b in ((4, 0), (0, 1)):
                rolled = PhiAssignment(
                    5,
                    tuple(
                        (t, h, rng.randrange(5)) if {t, h} == {a, b} else (t, h, x)
                        for t, h, x in rolled.records
                    ),
                )
            redone = lemma1_alpha(g, rolled, cs, p)
            assert redone.kind != "none"
            assert lemma1_failure_table(g, rolled, cs, p) == table
            if redone.kind == "alpha":
                diffs.add(redone.alpha)
        assert len(diffs) <= 1


def test_lemma1_k4_has_no_failures(rng):
    g, p = build(Wheel(3))
    for _ in range(50):
        phi = random_phi_on(g, rng)
        assert lemma1_alpha(g, phi, ColorSystem.free(4), p).kind == "vacuous"


def test_lemma1_rejects_bad_input(w5):
    g, p = w5
    phi = PhiAssignment.zero(g.edges())
    with pytest.raises(ExtensionError, match="cap"):
        lemma1_alpha(g, phi, ColorSystem.free(6).with_forbidden(0, {1}), p)
    with pytest.raises(ExtensionError, match="precolorings"):
        lemma1_alpha(g, phi, ColorSystem.free(6).with_precolor(2, 1), p)
