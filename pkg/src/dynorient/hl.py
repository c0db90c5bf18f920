"""Explicit 2-out orientation of a rooted dynamic forest via heavy paths.

A child edge is solid (heavy) when the child's subtree holds a strict
majority of the parent's: 2·size(c) > size(p).  Every vertex then has at most
one solid child edge, so orienting dashed edges child -> parent and leaving
solid directions fixed-but-arbitrary caps every out-degree at 2.

The structure shadows a LinkCutForest owned by the same engine: link, cut and
set_root must be called with identical arguments on both so the rootings
agree.  Maintenance is eager, walking ancestor paths and recomputing heavy
children; per-vertex lazy max-heaps over child sizes make each recheck cheap.

Each edge also carries a freshness stamp: the pair of endpoint load-versions
at the time its auxiliary payload (owned by the caller, via the refresher
callback) was last recomputed.  Solid edges are re-refreshed on every load
change of an endpoint, so they are always fresh; dashed edges go stale
silently and are brought up to date by clean_path right before a path search
needs them.
"""

import heapq

from .errors import CycleError, MissingEdgeError
from .forest import edge_key


class HeavyLightOrienter:

    def __init__(self, graph, refresher=None):
        self.g = graph
        self.refresher = refresher or (lambda a, b: None)
        self.parent = {}
        self.children = {}
        self.size = {}
        self.heavy = {}          # v -> heavy child or None
        self.child_heap = {}
        self.dir_tail = {}       # edge key -> stored tail vertex
        self.stamps = {}         # edge key -> (version at key[0], at key[1])
        self.out_edges = {}      # v -> set of keys oriented out of v

    # ------------------------------------------------------------------
    # bookkeeping helpers

    def _touch(self, v):
        if v not in self.parent:
            self.parent[v] = None
            self.children[v] = set()
            self.size[v] = 1
            self.heavy[v] = None
            self.child_heap[v] = []
            self.out_edges[v] = set()

    def root(self, v):
        self._touch(v)
        while self.parent[v] is not None:
            v = self.parent[v]
        return v

    def _root_path(self, v):
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        return path

    def has_edge(self, u, v):
        return edge_key(u, v) in self.dir_tail

    def is_solid(self, u, v):
        if self.parent.get(u) == v:
            return self.heavy[v] == u
        assert self.parent.get(v) == u, f"no tree edge {u},{v}"
        return self.heavy[u] == v

    def _set_direction(self, tail, head):
        key = edge_key(tail, head)
        old = self.dir_tail.get(key)
        if old == tail:
            return
        if old is not None:
            self.out_edges[old].discard(key)
        self.dir_tail[key] = tail
        self.out_edges[tail].add(key)

    def direction(self, u, v):
        key = edge_key(u, v)
        tail = self.dir_tail.get(key)
        if tail is None:
            raise MissingEdgeError(f"no tree edge {key}")
        return (tail, key[0] if tail == key[1] else key[1])

    def refresh_edge(self, a, b):
        self.refresher(a, b)
        key = edge_key(a, b)
        self.stamps[key] = (self.g.load_version[key[0]],
                            self.g.load_version[key[1]])

    def is_clean(self, a, b):
        key = edge_key(a, b)
        st = self.stamps.get(key)
        return (st is not None
                and st == (self.g.load_version[key[0]],
                           self.g.load_version[key[1]]))

    def _push_size(self, c):
        p = self.parent[c]
        if p is not None:
            heapq.heappush(self.child_heap[p], (-self.size[c], c))

    def _recompute_heavy(self, x):
        heap = self.child_heap[x]
        cand = None
        while heap:
            negs, c = heap[0]
            if self.parent.get(c) is not x or self.size[c] != -negs:
                heapq.heappop(heap)
                continue
            cand = c
            break
        if cand is not None and 2 * self.size[cand] <= self.size[x]:
            cand = None
        old = self.heavy[x]
        if old is cand:
            return
        if old is not None and self.parent.get(old) is x:
            # demoted solid edge: dashed edges always point child -> parent
            self._set_direction(old, x)
        self.heavy[x] = cand
        if cand is not None:
            # newly-heavy edges must be clean; direction stays as stored
            self.refresh_edge(cand, x)

    # ------------------------------------------------------------------
    # structure updates

    def _reroot(self, r):
        self._touch(r)
        path = self._root_path(r)
        if len(path) == 1:
            return
        n_total = self.size[path[-1]]
        old_sizes = [self.size[p] for p in path]
        for j in range(1, len(path)):
            self.children[path[j]].discard(path[j - 1])
        self.parent[r] = None
        self.size[r] = n_total
        for j in range(1, len(path)):
            self.parent[path[j]] = path[j - 1]
            self.children[path[j - 1]].add(path[j])
            self.size[path[j]] = n_total - old_sizes[j - 1]
            self._push_size(path[j])
        for p in path:
            self._recompute_heavy(p)
        # ancestry flipped along the path; re-point surviving dashed edges
        for j in range(1, len(path)):
            if self.heavy[path[j - 1]] is not path[j]:
                self._set_direction(path[j], path[j - 1])

    def set_root(self, r):
        self._reroot(r)

    def link(self, u, v):
        """Join u's tree below v.  v's side keeps its root; the new edge is
        initially directed u -> v."""
        self._touch(u)
        self._touch(v)
        if self.root(u) == self.root(v):
            raise CycleError(f"{u} and {v} already connected")
        self._reroot(u)
        k = self.size[u]
        self.parent[u] = v
        self.children[v].add(u)
        self._push_size(u)
        self._set_direction(u, v)
        self.refresh_edge(u, v)
        x = v
        while x is not None:
            self.size[x] += k
            self._push_size(x)
            self._recompute_heavy(x)
            x = self.parent[x]

    def cut(self, u, v):
        """Remove edge (u, v); u's side ends up rooted at u, v's side keeps
        the old root when it held it (same rule as the shadowed forest)."""
        if self.parent.get(u) == v:
            c, p = u, v
        elif self.parent.get(v) == u:
            c, p = v, u
        else:
            raise MissingEdgeError(f"no tree edge {edge_key(u, v)}")
        key = edge_key(u, v)
        self.children[p].discard(c)
        self.parent[c] = None
        tail = self.dir_tail.pop(key)
        self.out_edges[tail].discard(key)
        self.stamps.pop(key, None)
        k = self.size[c]
        x = p
        while x is not None:
            self.size[x] -= k
            self._push_size(x)
            self._recompute_heavy(x)
            x = self.parent[x]
        if c is v:
            self._reroot(u)

    # ------------------------------------------------------------------
    # queries

    def explicit_out_edges(self, v):
        """Stored out-directions incident to v, as (tail, head) pairs."""
        self._touch(v)
        out = []
        for key in self.out_edges[v]:
            head = key[0] if v == key[1] else key[1]
            out.append((v, head))
        out.sort()
        return out

    def out_degree(self, v):
        if v not in self.out_edges:
            return 0
        return len(self.out_edges[v])

    def path_vertices(self, u, v):
        """Tree path from u to v inclusive (root choice does not matter)."""
        pu = self._root_path(u)
        pv = self._root_path(v)
        index = {x: i for i, x in enumerate(pu)}
        meet = None
        for j, x in enumerate(pv):
            if x in index:
                meet = (index[x], j)
                break
        assert meet is not None, f"{u} and {v} not connected"
        i, j = meet
        return pu[:i + 1] + pv[:j][::-1]

    def light_edges_between(self, u, v):
        """Dashed edges on the u..v tree path."""
        self._touch(u)
        self._touch(v)
        if u == v:
            return []
        path = self.path_vertices(u, v)
        out = []
        for a, b in zip(path, path[1:]):
            if not self.is_solid(a, b):
                out.append((a, b))
        return out

    def clean_path(self, u, v, refresher=None):
        """Refresh every dashed edge on the u..v path (solid ones are always
        fresh by invariant)."""
        fn = refresher or self.refresh_edge
        edges = self.light_edges_between(u, v)
        for a, b in edges:
            fn(a, b)
        return edges

    def on_load_change(self, v):
        """Keep the all-solid-edges-clean invariant: refresh v's incident
        solid edges after its load moved."""
        if v not in self.parent:
            return
        h = self.heavy[v]
        if h is not None:
            self.refresh_edge(h, v)
        p = self.parent[v]
        if p is not None and self.heavy[p] is v:
            self.refresh_edge(v, p)
