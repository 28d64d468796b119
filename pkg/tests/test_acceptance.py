"""Acceptance criteria, each at its stated tolerance.

Every test records one ``[PASS]`` or ``[FAIL]`` line; the lines are printed
in the pytest terminal summary, and directly when the module is run as a
script (``python3 tests/test_acceptance.py``).
"""
import functools
import math
import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from graphgen import atlas_graphs, graphs_by_edge_count, to_graph
from linkflex.dquat import dq_to_isometry
from linkflex.errors import NewtonDiverged
from linkflex.loops import (DHLoop, alternating_square_sum, best_drive, bond_quadratics,
                            bricard_orthogonal, bricard_orthogonal_b5, closure_residual_angles,
                            common_root, find_configuration, loop_from_axes, random_6r,
                            trace_mobility)
from linkflex.ncpoly import (MotionPoly, all_factorizations, norm_poly, poly_distance, product,
                             random_normed_quaternion_poly)
from linkflex.pods import (Leg, borel_domain, borel_leg, borel_motion, duporcq_sixth_point,
                           group_point, hilbert_expand, leg_point, pairing, random_isometry)
from linkflex.rigidity import (Coloring, catalog, dixon1_data, dixon1_motion, dixon2_config,
                               edge_key, generic_placement, laman_bruteforce, laman_check,
                               max_length_residual, nac_check, nac_check_cycles, nac_enumerate,
                               nac_motion, rigidity_matrix, symmetric_embedding_line)
from linkflex.synth import (bennett_from_conic, ellipse_drawer, random_bennett_poly, sample_grid,
                            trace, trace_path_spread)


def criterion(number, title):
    """Record a pass/fail line for the wrapped acceptance test."""
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            t0 = time.perf_counter()
            try:
                note = fn(*args, **kwargs)
            except BaseException as exc:
                ACCEPTANCE_LINES.append("[FAIL] criterion %d: %s (%s: %s)"
                                        % (number, title, type(exc).__name__, str(exc).splitlines()[0][:160]
                                           if str(exc) else ""))
                raise
            line = "[PASS] criterion %d: %s (%.1f s)" % (number, title, time.perf_counter() - t0)
            if note:
                line += "; " + note
            ACCEPTANCE_LINES.append(line)
        return run
    return wrap


# ---------------------------------------------------------------------------
# 1. factorization counts
# ---------------------------------------------------------------------------

@criterion(1, "quaternion polynomials of degree 2, 3, 4 have 2, 6, 24 factorizations")
def test_c01_factorization_counts():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    for degree, expected in ((2, 2), (3, 6), (4, 24)):
        for _ in range(100):
            A = random_normed_quaternion_poly(degree, rng)
            # preconditions: squarefree norm without real roots
            roots = np.roots(norm_poly(A).coef[::-1])
            assert np.min(np.abs(roots.imag)) > 1e-6
            assert min(abs(p - q) for i, p in enumerate(roots) for q in roots[i + 1:]) > 1e-6
            facs = all_factorizations(A)
            assert len(facs) == expected
            for fs in facs:
                rel = poly_distance(product(fs), A) / max(1.0, float(np.max(np.abs(A.coeffs))))
                worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    assert worst < 1e-9
    assert elapsed < 10.0
    return "max relative product error %.1e, %.1f s" % (worst, elapsed)


# ---------------------------------------------------------------------------
# 2. ellipse drawer
# ---------------------------------------------------------------------------

@criterion(2, "ellipse drawer traces (x+2)^2/4 + y^2 = 1; b = 0 traces the x-axis")
def test_c02_ellipse_drawer():
    t0 = time.perf_counter()
    g, _ = ellipse_drawer(2.0, 1.0, 1.0, 1.0)
    ts = sample_grid(100)
    pts = trace(g, 4, 1, ts)
    spread = max(g.path_independence_residual(), trace_path_spread(g, 4, 1, ts))
    ell = float(np.max(np.abs((pts[:, 0] + 2) ** 2 / 4 + pts[:, 1] ** 2 - 1)))
    g0, _ = ellipse_drawer(2.0, 0.0, 1.0, 1.0)
    flat = float(np.max(np.abs(trace(g0, 4, 1, ts)[:, 1])))
    elapsed = time.perf_counter() - t0
    assert len(ts) == 100
    assert spread < 1e-8
    assert ell < 1e-7
    assert flat < 1e-8
    assert elapsed < 1.0
    return "path residual %.1e, ellipse residual %.1e, |y| %.1e" % (spread, ell, flat)


# ---------------------------------------------------------------------------
# 3. drawer constants
# ---------------------------------------------------------------------------

def _j_dual(h, k_coeff):
    """Check ``h = k_coeff k + x e j`` and return ``x``."""
    c = np.asarray(h.c)
    other = np.delete(c, [3, 6])
    assert np.max(np.abs(other)) < 1e-9
    assert abs(c[3] - k_coeff) < 1e-9
    return c[6]


@criterion(3, "drawer constants h4, h5, h6, h8, h9 follow the closed forms; h7 recomputed")
def test_c03_drawer_constants():
    rng = np.random.default_rng(3)
    worst = 0.0
    h7_gap = 0.0
    for _ in range(10):
        a, b, c, d = rng.uniform(-3, 3, 4)
        if abs(abs(a) - abs(b)) < 0.2:
            b += 0.5
        g, _ = ellipse_drawer(a, b, c, d)
        h = g.h
        expected = {4: (1, (a + b + 4 * d) / 6), 5: (2, (-2 * a - 2 * b + d) / 3),
                    6: (1, (-11 * a - 5 * b - 6 * c + 4 * d) / 18),
                    8: (-1, (-8 * a + 16 * b + 3 * c - 2 * d) / 9), 9: (2, (4 * a - 8 * b + d) / 3)}
        for r, (kc, x) in expected.items():
            worst = max(worst, abs(_j_dual(h[r], kc) - x))
        # the displayed h7 has no denominator; the computed value divides by 9
        h7 = _j_dual(h[7], 2)
        worst = max(worst, abs(h7 - (4 * a - 8 * b + 12 * c + d) / 9))
        h7_gap = max(h7_gap, abs(h7 - (4 * a - 8 * b + 12 * c + d)))
    assert worst < 1e-9
    assert h7_gap > 1e-3
    return "max deviation %.1e; h7 = 2k + (4a - 8b + 12c + d)/9 e j" % worst


# ---------------------------------------------------------------------------
# 4. Bennett synthesis
# ---------------------------------------------------------------------------

def _bennett_sweep(B, ts):
    """Closure residuals of the fixed DH loop along the motion of the two coupler axes."""
    (r1, _), (r2, _) = B.factorizations
    L1, K1, K2, L2 = B.axes
    loop0 = DHLoop(B.d, B.alpha, B.s)
    out = []
    for t in ts:
        K1t = K1.transformed(dq_to_isometry(MotionPoly.linear(r1)(t)))
        K2t = K2.transformed(dq_to_isometry(MotionPoly.linear(r2)(t)))
        loop_t, phi = loop_from_axes([L1, K1t, K2t, L2])
        drift = np.max(np.abs(np.r_[loop_t.d - loop0.d, loop_t.alpha - loop0.alpha, loop_t.s - loop0.s]))
        out.append((closure_residual_angles(loop0, phi), drift, phi))
    return loop0, out


@criterion(4, "Bennett synthesis: Bennett conditions, closure along sweeps, perturbed loops rigid")
def test_c04_bennett():
    rng = np.random.default_rng(4)
    ts = np.tan(np.linspace(-np.pi / 2, np.pi / 2, 52)[1:-1])      # 50 samples
    worst_eq1 = worst_closure = 0.0
    max_steps = 0
    params = ("d", "alpha", "s")
    for k in range(50):
        B = bennett_from_conic(random_bennett_poly(rng))
        worst_eq1 = max(worst_eq1, float(np.max(np.abs(B.bennett_residuals()))))
        loop0, sweep = _bennett_sweep(B, ts)
        worst_closure = max(worst_closure, max(r for r, _, _ in sweep))
        phi0 = sweep[len(sweep) // 2][2]
        if k < 3:
            drive = best_drive(loop0, phi0)
            res = trace_mobility(loop0, phi0, drive, phi0[drive] + np.linspace(0, 2 * np.pi, 50))
            worst_closure = max(worst_closure, res.max_residual)
        bad = loop0.perturbed(params[k % 3], k % 4, 1e-2)
        with pytest.raises(NewtonDiverged) as info:
            trace_mobility(bad, phi0, 0, phi0[0] + np.linspace(0, 0.5, 50), start_tol=1e-8)
        max_steps = max(max_steps, info.value.steps)
    assert worst_eq1 < 1e-8
    assert worst_closure < 1e-9
    assert max_steps <= 5
    return "Bennett residual %.1e, closure %.1e, perturbed loops fail after <= %d steps" % (
        worst_eq1, worst_closure, max_steps)


# ---------------------------------------------------------------------------
# 5. NAC colorings
# ---------------------------------------------------------------------------

@criterion(5, "NAC: fast check equals cycle check on all graphs with <= 8 edges; rigid seven-vertex graph 0, C4 6")
def test_c05_nac():
    levels = graphs_by_edge_count(8)
    assert [len(levels[m]) for m in range(1, 9)] == [1, 2, 5, 11, 26, 68, 177, 497]
    checked = 0
    for m, graphs in levels.items():
        for g in graphs:
            G = to_graph(g)
            edges = list(G.edges)
            # the first edge is red: the other half are the swapped colorings
            for mask in range(1, 2 ** m, 2):
                if mask == 2 ** m - 1:
                    continue
                c = Coloring.from_red(G, [e for i, e in enumerate(edges) if mask >> i & 1])
                assert nac_check(G, c) == nac_check_cycles(G, c), (edges, mask)
                checked += 1
    assert len(nac_enumerate(catalog.rigid_seven())) == 0
    assert len(nac_enumerate(catalog.cycle(4))) == 6
    worst = 0.0
    for G in (catalog.cycle(4), catalog.complete_bipartite(3, 3), catalog.three_prism()):
        for c in nac_enumerate(G):
            ref = nac_motion(G, c, 0.0, seed=5)
            lengths = {e: float(np.linalg.norm(ref[e[0]] - ref[e[1]])) for e in G.edges}
            for t in np.linspace(0, 2 * np.pi, 50):
                worst = max(worst, max_length_residual(G, nac_motion(G, c, t, seed=5), lengths))
    assert worst < 1e-12
    return "%d colorings compared on 787 graphs; motion length drift %.1e" % (checked, worst)


# ---------------------------------------------------------------------------
# 6. Laman
# ---------------------------------------------------------------------------

@criterion(6, "pebble game equals brute-force counting on all graphs with <= 6 vertices and |E| = 2|V| - 3")
def test_c06_laman():
    graphs = [g for g in atlas_graphs(6) if g.number_of_edges() == 2 * g.number_of_nodes() - 3]
    assert len(graphs) == 28
    laman = 0
    for g in graphs:
        G = to_graph(g)
        if len(G.vertices) != g.number_of_nodes():
            # isolated vertices are not representable by an edge list
            continue
        fast = bool(laman_check(G))
        assert fast == laman_bruteforce(G)
        laman += fast
    return "%d graphs, %d Laman" % (len(graphs), laman)


# ---------------------------------------------------------------------------
# 7. Dixon
# ---------------------------------------------------------------------------

@criterion(7, "Dixon I motions keep edge lengths; Dixon II K44 flexes, generic K44 does not")
def test_c07_dixon():
    rng = np.random.default_rng(7)
    worst = 0.0
    for a, b in ((2, 2), (2, 3), (3, 3), (3, 4), (4, 4)):
        G = catalog.complete_bipartite(a, b)
        c = rng.uniform(0.5, 2.0, a)
        d = rng.uniform(0.5, 2.0, b)
        lengths = {edge_key(u, v): math.sqrt(c[u - 1] + d[v - a - 1]) for u, v in G.edges}
        data = dixon1_data(G, lengths)
        lo, hi = data.domain
        for tau in np.linspace(lo, hi, 40):
            worst = max(worst, max_length_residual(G, dixon1_motion(G, lengths, tau, data=data), lengths))
    cfg = dixon2_config((1.0, 2.0), (3.0, 1.5))
    flex_d2 = rigidity_matrix(cfg.graph, cfg.placement).flex_count
    K44 = catalog.complete_bipartite(4, 4)
    flex_generic = rigidity_matrix(K44, generic_placement(K44, 2, seed=7)).flex_count
    assert worst < 1e-12
    assert flex_d2 >= 1
    assert flex_generic == 0
    return "edge residual %.1e; flexes: Dixon II %d, generic %d" % (worst, flex_d2, flex_generic)


# ---------------------------------------------------------------------------
# 8. symmetric embeddings
# ---------------------------------------------------------------------------

@criterion(8, "half-turn symmetric octahedron and icosahedron flex; generic placements do not")
def test_c08_symmetric():
    notes = []
    for name, G, tau in (("octahedron", catalog.octahedron(), catalog.octahedron_antipodal()),
                         ("icosahedron", catalog.icosahedron(), catalog.icosahedron_antipodal())):
        for seed in range(3):
            emb = symmetric_embedding_line(G, tau, seed=seed)
            sym = rigidity_matrix(G, emb.placement, 3).flex_count
            gen = rigidity_matrix(G, generic_placement(G, 3, seed=seed), 3).flex_count
            assert sym >= 1, (name, seed)
            assert gen == 0, (name, seed)
        notes.append("%s %d/%d" % (name, sym, gen))
    return "flexes symmetric/generic: " + ", ".join(notes)


# ---------------------------------------------------------------------------
# 9. pairing
# ---------------------------------------------------------------------------

@criterion(9, "pairing vanishes exactly when the leg length is realized (1000 samples)")
def test_c09_pairing():
    rng = np.random.default_rng(9)
    realized_max = 0.0
    other_min = np.inf
    for k in range(1000):
        iso = random_isometry(rng)
        a, b = rng.standard_normal(3), rng.standard_normal(3)
        d = float(np.linalg.norm(iso(a) - b))
        if k % 2:
            d = abs(d + rng.choice([-1, 1]) * rng.uniform(1e-3, 1.0))
            val = abs(pairing(group_point(iso), leg_point(Leg(a, b, d))))
            other_min = min(other_min, val)
            assert val > 1e-9
        else:
            val = abs(pairing(group_point(iso), leg_point(Leg(a, b, d))))
            realized_max = max(realized_max, val)
            assert val < 1e-9
    return "realized max %.1e, unrealized min %.1e" % (realized_max, other_min)


# ---------------------------------------------------------------------------
# 10. Duporcq
# ---------------------------------------------------------------------------

@criterion(10, "Duporcq sixth leg of 20 planar pentapods with span and Segre residuals < 1e-8")
def test_c10_duporcq():
    rng = np.random.default_rng(10)
    t0 = time.perf_counter()
    worst = 0.0
    real = 0
    for k in range(20):
        base = np.c_[rng.standard_normal((5, 2)), np.zeros(5)]
        plat = np.c_[rng.standard_normal((5, 2)), np.zeros(5)]
        legs = [Leg(a, b, float(rng.uniform(1, 3))) for a, b in zip(base, plat)]
        pt = duporcq_sixth_point(legs, seed=k)
        worst = max(worst, pt.span_residual, pt.segre_residual)
        real += pt.is_real
    elapsed = time.perf_counter() - t0
    assert worst < 1e-8
    assert elapsed < 30.0
    return "max residual %.1e, %d of 20 real, %.1f s" % (worst, real, elapsed)


# ---------------------------------------------------------------------------
# 11. Bricard-Borel
# ---------------------------------------------------------------------------

@criterion(11, "Bricard-Borel legs keep their length over the admissible angle range")
def test_c11_borel():
    alpha, beta = 1.0, -1.0
    rng = np.random.default_rng(11)
    lo, hi = borel_domain(alpha, beta)
    legs = [borel_leg(a, alpha, beta) for a in rng.standard_normal((20, 3))]
    worst = 0.0
    for theta in np.linspace(lo, hi, 200):
        for branch in (1, -1):
            m = borel_motion(alpha, beta, theta, branch)
            worst = max(worst, max(abs(g.length_under(m) - g.d) for g in legs))
    spot = borel_leg((1.0, 0.0, 0.0), alpha, beta)
    assert worst < 1e-10
    assert abs(spot.d - math.sqrt(3)) < 1e-12
    assert np.allclose(spot.b, (1.0, 0.0, 0.0), atol=1e-12)
    return "length drift %.1e; a = (1,0,0) gives d = %.15g" % (worst, spot.d)


# ---------------------------------------------------------------------------
# 12. bonds and Bricard orthogonal loops
# ---------------------------------------------------------------------------

@criterion(12, "bond quadratics share a root iff the alternating square sum vanishes; Bricard loop moves")
def test_c12_bonds():
    rng = np.random.default_rng(12)
    agree = 0
    for k in range(100):
        b = rng.uniform(0.5, 3.0, 6)
        if k % 2 == 0:
            while b[0] ** 2 - b[1] ** 2 + b[2] ** 2 - b[3] ** 2 + b[4] ** 2 < 0.25:
                b[:5] = rng.uniform(0.5, 3.0, 5)
            b[5] = bricard_orthogonal_b5(b[:5])
        loop = DHLoop(b, np.full(6, np.pi / 2), np.zeros(6))
        relation = abs(alternating_square_sum(b)) < 1e-9
        shared, _ = common_root(*bond_quadratics(loop, 1, (1, 1)), tol=1e-8)
        assert shared == relation, (b, alternating_square_sum(b))
        agree += 1
    # a generated Bricard orthogonal loop turns its driving joint through a full revolution
    b04 = (1.34, 2.99, 2.95, 2.15, 2.06)
    loop = bricard_orthogonal(list(b04) + [bricard_orthogonal_b5(b04)])
    phi = find_configuration(loop, seed=1)
    res = trace_mobility(loop, phi, 1, phi[1] + np.linspace(0, 2 * np.pi, 73)[1:])
    assert res.max_residual < 1e-8
    generic, phi6 = random_6r(12)
    with pytest.raises(NewtonDiverged) as info:
        trace_mobility(generic, phi6, 0, phi6[0] + np.linspace(0, 2 * np.pi, 73)[1:])
    return "%d/100 loops agree; Bricard full turn residual %.1e; generic 6R stops after %d steps" % (
        agree, res.max_residual, info.value.steps)


# ---------------------------------------------------------------------------
# 13. Hilbert expansion
# ---------------------------------------------------------------------------

@criterion(13, "(1 + 10t + 18t^2 + 10t^3 + t^4)/(1 - t)^2 expands to 1, 12, 41, 80, 120")
def test_c13_hilbert():
    assert hilbert_expand([1, 10, 18, 10, 1], 2, 5) == [1, 12, 41, 80, 120]


# ---------------------------------------------------------------------------
# 14. declared non-verification
# ---------------------------------------------------------------------------

@criterion(14, "declared out of scope: hexapod count 40, genus 41, 16 configurations of a 6R, 7 inversions")
def test_c14_declared_scope():
    import pathlib

    readme = (pathlib.Path(__file__).resolve().parents[1] / "README.md").read_text()
    assert "Not verified numerically" in readme
    for phrase in ("40", "genus 41", "16 complex configurations", "seven inversion"):
        assert phrase in readme
    return "documented in README; covered only by the property suites"


if __name__ == "__main__":
    warnings.simplefilter("ignore")
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            try:
                fn()
            except BaseException:
                pass
    for line in ACCEPTANCE_LINES:
        print(line)
