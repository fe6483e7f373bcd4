"""Release acceptance: every criterion is one test with a printed measurement.

The shared fixture replays one mixed insert/delete workload (128-point pool,
256 extra operations, aspect bound 2**10, per-update structural checks) for
every combination of accuracy target and update mode.  The remaining tests
pin scaling behaviour and cross-check the verification oracles against
independent implementations.
"""

import math
import random
import time

import pytest

from dynspan.harness import ScenarioConfig, lightness_sweep, plan_ops, run
from dynspan.metric import MetricSpace
from dynspan.oracle import (
    build_adjacency,
    dijkstra,
    floyd_warshall,
    mst_weight_kruskal,
    mst_weight_prim,
    validate_neighbor_lists,
    validate_net_hierarchy,
)

EPS_GRID = (0.25, 0.5, 1.0)
MODES = ("exact", "fast")
SEED = 0
PER_EPS_BUDGET_S = 120.0

# pinned from rehearsal runs before this file was frozen (see release notes):
# lightness sweep increments bottomed out at 309.8, recourse ratios centred
# on 4.5 with max degree ratio 20.5
SWEEP_MIN_INCREMENT = 150.0
SWEEP_BUDGET_S = 300.0
RECOURSE_BAND_CENTER = 4.5
DEGREE_RATIO_CAP = 41.0


def _grid_config(eps: float, mode: str) -> ScenarioConfig:
    return ScenarioConfig(
        generator="uniform-cube", n=128, dim=2, eps=eps, phi=2.0**10, seed=SEED,
        mode=mode, ops="mixed", num_ops=256, p_delete=0.4, check="every-update",
    )


@pytest.fixture(scope="module")
def grid_runs():
    out = {}
    for eps in EPS_GRID:
        for mode in MODES:
            t0 = time.monotonic()
            result = run(_grid_config(eps, mode))
            out[eps, mode] = (result, time.monotonic() - t0)
    return out


def test_criterion_1_exact_mode_survives_every_update_check(grid_runs):
    for eps in EPS_GRID:
        result, elapsed = grid_runs[eps, "exact"]
        s = result.summary
        print(f"exact eps={eps}: updates={s.updates} violations={s.violations} "
              f"elapsed={elapsed:.1f}s")
        assert s.updates == 128 + 256
        assert s.violations == 0, s.messages
        assert elapsed < PER_EPS_BUDGET_S


def test_criterion_2_fast_mode_survives_checks_and_estimate_sweep(grid_runs):
    for eps in EPS_GRID:
        result, elapsed = grid_runs[eps, "fast"]
        s = result.summary
        print(f"fast eps={eps}: updates={s.updates} violations={s.violations} "
              f"elapsed={elapsed:.1f}s")
        assert s.updates == 128 + 256
        assert s.violations == 0, s.messages  # includes the estimate sweep
        assert elapsed < PER_EPS_BUDGET_S


def test_criterion_3_final_stretch_within_target(grid_runs):
    for (eps, mode), (result, _) in grid_runs.items():
        stretch = result.summary.max_stretch
        bound = 1.0 + 3.0 * eps + 1e-9
        print(f"{mode} eps={eps}: max_stretch={stretch:.6f} bound={bound:.6f}")
        assert 1.0 <= stretch <= bound


def test_criterion_4_lightness_scales_with_instance_depth():
    t0 = time.monotonic()
    rows = lightness_sweep([32, 64, 128, 256, 512, 1024], eps=0.5, seed=SEED,
                           mode="exact")
    elapsed = time.monotonic() - t0
    base = [row["base_lightness"] for row in rows]
    light = [row["light_lightness"] for row in rows]
    increments = [b - a for a, b in zip(base, base[1:])]
    print(f"base lightness: {[round(x, 1) for x in base]}")
    print(f"output lightness: {[round(x, 3) for x in light]} elapsed={elapsed:.1f}s")
    for step in increments:
        assert step >= SWEEP_MIN_INCREMENT
    assert max(light) / min(light) <= 3.0
    assert elapsed < SWEEP_BUDGET_S


def test_criterion_5_recourse_tracks_aspect_bound():
    lo = RECOURSE_BAND_CENTER / 2.0
    hi = RECOURSE_BAND_CENTER * 2.0
    for phi in (2.0**8, 2.0**12, 2.0**16):
        config = ScenarioConfig(
            generator="uniform-cube", n=128, dim=2, eps=0.5, phi=phi, seed=SEED,
            mode="exact", ops="mixed", num_ops=256, p_delete=0.4, check="none",
        )
        result = run(config)
        logphi = math.log2(phi)
        ratio = result.summary.max_recourse / logphi
        degree_ratio = result.structure.base.max_degree() / logphi
        print(f"phi=2^{int(logphi)}: max_recourse={result.summary.max_recourse} "
              f"ratio={ratio:.3f} degree_ratio={degree_ratio:.3f}")
        assert lo <= ratio <= hi
        assert degree_ratio <= DEGREE_RATIO_CAP


def test_criterion_6_independent_distance_and_mst_oracles_agree():
    rng = random.Random(SEED)
    for trial in range(200):
        order = rng.randint(2, 50)
        nodes = list(range(order))
        edges = []
        for u in nodes:
            for v in nodes[u + 1:]:
                if rng.random() < 0.25:
                    edges.append((u, v, float(rng.randint(1, 100))))
        dense = floyd_warshall(nodes, edges)
        adj = build_adjacency(edges)
        for u in nodes:
            sparse = dijkstra(adj, u)
            for v in nodes:
                assert sparse.get(v, math.inf) == dense[u, v]
    print("200 shortest-path instances: heap search == dynamic programming")

    for trial in range(100):
        count = rng.randint(2, 100)
        space = MetricSpace(dim=2, phi=2.0**20)
        seen = set()
        pid = 0
        while pid < count:
            c = (float(rng.randint(0, 4000)), float(rng.randint(0, 4000)))
            if c in seen:
                continue
            seen.add(c)
            space.add_point(pid, c)
            pid += 1
        ids = sorted(space.active)
        a = mst_weight_prim(space, ids)
        b = mst_weight_kruskal(space, ids)
        assert a == pytest.approx(b, abs=1e-9)
    print("100 spanning-tree instances: greedy growth == sorted union-find")


def test_criterion_7_hierarchy_validity_and_locality_held_throughout(grid_runs):
    checked = 0
    for (eps, mode), (result, _) in grid_runs.items():
        assert result.summary.violations == 0, result.summary.messages
        assert validate_net_hierarchy(result.structure.hierarchy) == []
        assert validate_neighbor_lists(result.structure.hierarchy) == []
        checked += result.summary.updates
    print(f"structural checks clean after each of {checked} updates")


def test_criterion_8_both_update_paths_accept_the_same_workload(grid_runs):
    for eps in EPS_GRID:
        exact, _ = grid_runs[eps, "exact"]
        fast, _ = grid_runs[eps, "fast"]
        ops = lambda r: [(rep.op, rep.point) for rep in r.reports]
        assert ops(exact) == ops(fast)  # identical seeded sequence
        for result in (exact, fast):
            assert result.summary.violations == 0
            assert result.summary.max_stretch <= 1.0 + 3.0 * eps + 1e-9
        print(f"eps={eps}: shared {len(exact.reports)}-op sequence clean in both modes")
