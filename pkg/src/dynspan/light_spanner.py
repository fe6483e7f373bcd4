"""Dynamic low-stretch, low-weight spanner over a changing point set.

The maintained graph is a lazily pruned subset of a net-derived candidate
edge pool.  A candidate edge joins the output when the graph built from
strictly shorter output edges fails to connect its endpoints within
stretch 1+eps; it is dropped again when that path reappears.  Pruning
decisions are only revisited near an updated point, which keeps per-update
work local while a slack band between the join threshold (1+eps) and the
guaranteed separation (1+eps/3) absorbs the drift in between.

Two update strategies share all bookkeeping:

* ``exact`` settles each revisited edge with a truncated Dijkstra run
  over the current output edges, memoising decisions so unchanged
  regions are not re-searched.
* ``fast`` replaces the Dijkstra runs with cached coarse distance
  estimates read off small sketch graphs; the estimates live on a
  denser auxiliary candidate pool built with a much smaller eps and are
  refreshed only near the updated point.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as sparse_dijkstra

from .metric import scale_of
from .net_spanner import NetSpanner
from .net_tree import NetHierarchy
from .oracle import mst_weight_prim

Edge = tuple[int, int]
INF = math.inf

# headroom factor between the two candidate pools; the auxiliary pool's
# eps is the output eps divided by 3 * KAPPA * log2(phi)
KAPPA = 342


@dataclass
class StoredEstimate:
    value: float
    alpha: float  # guaranteed approximation factor recorded at write time


@dataclass
class EstimateStore:
    """Cached coarse distances, keyed by candidate-pool edge.

    ``dstar`` approximates the distance over output edges strictly below
    the pair's own scale; ``dlight`` approximates the plain distance over
    all output edges and is refreshed two scale iterations after the
    pair's own scale."""

    dstar: dict[Edge, StoredEstimate] = field(default_factory=dict)
    dlight: dict[Edge, StoredEstimate] = field(default_factory=dict)


@dataclass
class UpdateReport:
    op: str
    point: int
    added: list[Edge]
    removed: list[Edge]
    recourse: int
    time_ns: int
    ball_queries: int
    relaxations: int


def _distance_matrix(space, ids: list[int]) -> np.ndarray:
    if getattr(space, "dim", 0) > 0:
        pts = np.asarray([space.coords(i) for i in ids], dtype=float)
        diff = pts[:, None, :] - pts[None, :, :]
        return np.sqrt((diff * diff).sum(axis=-1))
    n = len(ids)
    m = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            m[a, b] = m[b, a] = space.distance(ids[a], ids[b])
    return m


class DynamicLightSpanner:
    """Maintains the output edge set under point insertions and deletions."""

    def __init__(self, space, eps: float, mode: str = "exact"):
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        if mode not in ("exact", "fast"):
            raise ValueError(f"unknown mode {mode!r}")
        self.space = space
        self.eps = float(eps)
        self.mode = mode
        self.top = space.top_scale
        self.eps_small = self.eps / (3.0 * KAPPA * max(1, self.top))
        self.counters: dict[str, int] = {"ball_queries": 0, "relaxations": 0}
        self.hierarchy = NetHierarchy(
            space, radius_factor=4.0 + 16.0 / self.eps_small, counters=self.counters
        )
        # base pool: candidates for the output; dense pool: carrier of
        # the cached estimates (a superset of base at every moment)
        self.base = NetSpanner(self.hierarchy, self.eps, indexed=True)
        self.dense = NetSpanner(self.hierarchy, self.eps_small, indexed=(mode == "fast"))
        self.light: set[Edge] = set()
        self.estimates = EstimateStore()
        self.last_net_changes: list[tuple[int, int, bool]] = []
        self._light_adj: dict[int, dict[int, tuple[float, int]]] = {}
        self._adds_per_scale = [0] * (self.top + 2)
        self._removes_per_scale = [0] * (self.top + 2)
        # pair -> (covered, adds_below, removes_below) at decision time
        self._memo: dict[Edge, tuple[bool, int, int]] = {}

    # -- output edge bookkeeping -----------------------------------------

    def _light_add(self, e: Edge) -> None:
        u, v = e
        w = self.space.distance(u, v)
        s = scale_of(w)
        self.light.add(e)
        self._light_adj.setdefault(u, {})[v] = (w, s)
        self._light_adj.setdefault(v, {})[u] = (w, s)
        self._adds_per_scale[s] += 1

    def _light_remove(self, e: Edge) -> None:
        u, v = e
        s = scale_of(self.space.distance(u, v))
        self.light.remove(e)
        del self._light_adj[u][v]
        del self._light_adj[v][u]
        if not self._light_adj[u]:
            del self._light_adj[u]
        if not self._light_adj[v]:
            del self._light_adj[v]
        self._removes_per_scale[s] += 1

    def _apply(self, u: int, v: int, covered: bool, added: set[Edge], removed: set[Edge]) -> None:
        e = (u, v) if u < v else (v, u)
        if covered:
            if e in self.light:
                self._light_remove(e)
                if e in added:
                    added.discard(e)
                else:
                    removed.add(e)
        else:
            if e not in self.light:
                self._light_add(e)
                if e in removed:
                    removed.discard(e)
                else:
                    added.add(e)

    # -- updates -----------------------------------------------------------

    def insert(self, pid: int, coords) -> UpdateReport:
        t0 = time.perf_counter_ns()
        q0 = self.counters["ball_queries"]
        r0 = self.counters["relaxations"]
        self.space.add_point(pid, coords)
        changes = self.hierarchy.insert(pid)
        self.last_net_changes = changes
        added: set[Edge] = set()
        removed: set[Edge] = set()
        self._sync_and_reselect(pid, changes, added, removed)
        return UpdateReport(
            op="insert",
            point=pid,
            added=sorted(added),
            removed=sorted(removed),
            recourse=len(added) + len(removed),
            time_ns=time.perf_counter_ns() - t0,
            ball_queries=self.counters["ball_queries"] - q0,
            relaxations=self.counters["relaxations"] - r0,
        )

    def delete(self, pid: int) -> UpdateReport:
        t0 = time.perf_counter_ns()
        q0 = self.counters["ball_queries"]
        r0 = self.counters["relaxations"]
        changes = self.hierarchy.delete(pid)
        self.space.remove_point(pid)
        self.last_net_changes = changes
        added: set[Edge] = set()
        removed: set[Edge] = set()
        self._sync_and_reselect(pid, changes, added, removed)
        return UpdateReport(
            op="delete",
            point=pid,
            added=sorted(added),
            removed=sorted(removed),
            recourse=len(added) + len(removed),
            time_ns=time.perf_counter_ns() - t0,
            ball_queries=self.counters["ball_queries"] - q0,
            relaxations=self.counters["relaxations"] - r0,
        )

    def _sync_and_reselect(
        self, pid: int, changes, added: set[Edge], removed: set[Edge]
    ) -> None:
        dense_added, dense_removed = self.dense.sync(changes)
        base_added, base_removed = self.base.sync(changes)
        for e in base_removed:
            self._memo.pop(e, None)
            if e in self.light:
                self._light_remove(e)
                if e in added:
                    added.discard(e)
                else:
                    removed.add(e)
        if self.mode == "fast":
            for e in dense_removed:
                self.estimates.dstar.pop(e, None)
                self.estimates.dlight.pop(e, None)
            self._reselect_fast(pid, added, removed)
            self._check_fresh_entries(base_added, dense_added)
        else:
            self._reselect_exact(pid, added, removed)

    # -- exact strategy ----------------------------------------------------

    def _reselect_exact(self, x: int, added: set[Edge], removed: set[Edge]) -> None:
        one = 1.0 + self.eps
        stop = max(2.0, one)
        for i in range(self.top + 1):
            pairs = self.base.edges_at_scale_in_ball(i, x, 4.0 * (1 << i))
            if not pairs:
                continue
            adds_below = sum(self._adds_per_scale[:i])
            removes_below = sum(self._removes_per_scale[:i])
            by_source: dict[int, list[tuple[int, float]]] = {}
            for u, v in pairs:
                w = self.space.distance(u, v)
                hit = self._memo.get((u, v))
                if hit is not None:
                    covered, a_seen, r_seen = hit
                    # a covered verdict survives any additions below, an
                    # uncovered verdict survives any removals below
                    if covered and r_seen == removes_below:
                        self._apply(u, v, True, added, removed)
                        continue
                    if not covered and a_seen == adds_below:
                        self._apply(u, v, False, added, removed)
                        continue
                by_source.setdefault(u, []).append((v, w))
            for u in sorted(by_source):
                group = by_source[u]
                cutoff = max(stop * w for _, w in group)
                dist = self._restricted_dijkstra(u, i, cutoff)
                for v, w in group:
                    covered = dist.get(v, INF) <= one * w
                    self._memo[(u, v)] = (covered, adds_below, removes_below)
                    self._apply(u, v, covered, added, removed)

    def _restricted_dijkstra(self, source: int, scale_limit: int, cutoff: float) -> dict[int, float]:
        """Distances over output edges of scale < scale_limit, truncated at cutoff."""
        adj = self._light_adj
        dist = {source: 0.0}
        heap = [(0.0, source)]
        relax = 0
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist.get(u, INF):
                continue
            if d > cutoff:
                break
            for v, (w, s) in adj.get(u, {}).items():
                if s >= scale_limit:
                    continue
                relax += 1
                nd = d + w
                if nd <= cutoff and nd < dist.get(v, INF):
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        self.counters["relaxations"] += relax
        return dist

    # -- fast strategy -------------------------------------------------------

    def _reselect_fast(self, x: int, added: set[Edge], removed: set[Edge]) -> None:
        one = 1.0 + self.eps
        for i in range(self.top + 1):
            self._update_estimates(x, i)
            for u, v in self.base.edges_at_scale_in_ball(i, x, 8.0 * (1 << i)):
                entry = self.estimates.dstar.get((u, v))
                if entry is None:
                    raise RuntimeError(f"missing separation estimate for pair ({u}, {v})")
                w = self.space.distance(u, v)
                self._apply(u, v, entry.value <= one * w, added, removed)

    def _update_estimates(self, x: int, i: int) -> None:
        """Refresh cached estimates for pool edges near x at scale iteration i."""
        radius = 4.0 * (1 << i)
        pairs_dl = (
            self.dense.edges_at_scale_in_ball(i - 2, x, radius) if i >= 2 else []
        )
        pairs_ds = self.dense.edges_at_scale_in_ball(i, x, radius)
        if not pairs_dl and not pairs_ds:
            return
        ids, index, graph = self._build_sketch(x, i)
        alpha = 1.0 + KAPPA * i * self.eps_small
        sources = sorted(
            {u for u, _ in pairs_dl if u in index}
            | {u for u, _ in pairs_ds if u in index}
        )
        rows: dict[int, np.ndarray] = {}
        if sources and graph is not None:
            mat = sparse_dijkstra(
                graph, directed=False, indices=[index[s] for s in sources]
            )
            rows = {s: mat[k] for k, s in enumerate(sources)}

        def sketch_dist(u: int, v: int) -> float:
            if u not in rows or v not in index:
                return INF
            return float(rows[u][index[v]])

        for u, v in pairs_dl:
            self.estimates.dlight[(u, v)] = StoredEstimate(sketch_dist(u, v), alpha)
        for u, v in pairs_ds:
            self.estimates.dstar[(u, v)] = StoredEstimate(sketch_dist(u, v), alpha)

    def _build_sketch(self, center: int, at_scale: int):
        """Small graph whose distances coarsely track output-graph distances.

        Vertices are net points near the center.  Pairs in the middle
        distance band contribute an edge exactly when they are currently
        in the output; pairs in the low band always contribute an edge,
        weighted by their cached output-graph distance.
        """
        iprime = max(0, scale_of(self.eps_small * float(1 << at_scale)) - 1)
        ids = sorted(self.hierarchy.ball(iprime, center, 7.0 * (1 << at_scale)))
        index = {pid: k for k, pid in enumerate(ids)}
        n = len(ids)
        if n == 0:
            return ids, index, None
        m = _distance_matrix(self.space, ids)
        band1_hi = 2.0 ** (at_scale - 1)
        band1_lo = 2.0 ** (at_scale - 3)
        band2_hi = band1_lo
        rows: list[int] = []
        cols: list[int] = []
        data: list[float] = []
        for a, b in self.light:
            ka = index.get(a)
            kb = index.get(b)
            if ka is None or kb is None:
                continue
            w = float(m[ka, kb])
            if band1_lo <= w < band1_hi:
                rows.append(ka)
                cols.append(kb)
                data.append(w)
        for ka, kb in zip(*np.nonzero(np.triu(m < band2_hi, 1))):
            pair = (ids[ka], ids[kb])
            entry = self.estimates.dlight.get(pair)
            if entry is None:
                raise RuntimeError(f"missing output-distance estimate for pair {pair}")
            if math.isinf(entry.value):
                continue
            rows.append(int(ka))
            cols.append(int(kb))
            data.append(entry.value)
        graph = csr_matrix((data, (rows, cols)), shape=(n, n))
        return ids, index, graph

    def estimate(self, u: int, v: int, at_scale: int, center: int) -> float:
        """Coarse distance between u and v read off one sketch graph."""
        ids, index, graph = self._build_sketch(center, at_scale)
        if graph is None or u not in index or v not in index:
            return INF
        row = sparse_dijkstra(graph, directed=False, indices=[index[u]])[0]
        return float(row[index[v]])

    def _check_fresh_entries(self, base_added: list[Edge], dense_added: list[Edge]) -> None:
        for e in base_added:
            assert e in self.estimates.dstar, f"pool edge {e} has no separation estimate"
        for e in dense_added:
            assert e in self.estimates.dstar, f"dense edge {e} has no separation estimate"
            if scale_of(self.space.distance(*e)) <= self.top - 2:
                assert e in self.estimates.dlight, f"dense edge {e} has no distance estimate"

    # -- queries ---------------------------------------------------------------

    def light_edges(self) -> list[Edge]:
        return sorted(self.light)

    def base_edges(self) -> list[Edge]:
        return self.base.edges()

    def edge_count(self) -> int:
        return len(self.light)

    def total_weight(self) -> float:
        dist = self.space.distance
        return sum(dist(u, v) for u, v in self.light)

    def lightness(self) -> float:
        """Output weight over minimum spanning tree weight of the active set."""
        ids = sorted(self.space.active)
        if len(ids) < 2:
            raise ValueError("lightness needs at least two active points")
        if not self.light:
            raise ValueError("output spanner has no edges")
        return self.total_weight() / mst_weight_prim(self.space, ids)

    def dump_spanner(self) -> str:
        """One line per output edge, ``u v length scale``, sorted by endpoints."""
        dist = self.space.distance
        lines = []
        for u, v in sorted(self.light):
            d = dist(u, v)
            lines.append(f"{u} {v} {d!r} {scale_of(d)}")
        return "\n".join(lines)

    def dump_estimates(self) -> str:
        """One line per cached pair, ``u v scale dstar dlight``, sorted."""
        keys = sorted(set(self.estimates.dstar) | set(self.estimates.dlight))
        lines = []
        for u, v in keys:
            s = scale_of(self.space.distance(u, v))
            a = self.estimates.dstar.get((u, v))
            b = self.estimates.dlight.get((u, v))
            sa = repr(a.value) if a else "-"
            sb = repr(b.value) if b else "-"
            lines.append(f"{u} {v} {s} {sa} {sb}")
        return "\n".join(lines)
