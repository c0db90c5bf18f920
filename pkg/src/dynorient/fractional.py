"""Fractional orientation of edge bundles with 1-tight chain reorientation.

Every edge is a bundle of gamma copies; loads count out-copies per vertex.
Inserting a copy places it at the lower-load endpoint and then sheds the
surplus down a chain of tight out-copies (each flip moves one unit of load
to a strictly lighter vertex); deleting pulls a chain of tight in-copies the
other way.  Exactly one load changes per copy update.

Bundle counters can live in two places: the raw tables of GraphState, or as
the weight of a tree-resident edge in some LinkCutForest (the refinement and
partition layers park edges there so path-wide count shifts stay
logarithmic).  EdgeStore hides the split: reads and single-copy flips are
routed to wherever the authoritative counter sits, and tree-resident flips
are mirrored into the raw tables so neighbour sets stay truthful.  Path-wide
tree updates bypass the mirror on purpose; modes that can flip membership
that way (count touching zero) must register a neighbour-change provider so
update_nbrs can reconcile before anyone reads the sets.
"""

from .errors import MissingEdgeError, SelfLoopError, DuplicateEdgeError
from .forest import edge_key


def dedup_keep_last(keys):
    """Collapse duplicates keeping each key's final occurrence, in order."""
    seen = set()
    out = []
    for k in reversed(keys):
        if k in seen:
            continue
        seen.add(k)
        out.append(k)
    out.reverse()
    return out


class EdgeStore:
    """Routes bundle-counter access between raw tables and resident trees."""

    def __init__(self, graph):
        self.g = graph
        self.residency = {}

    def forest_of(self, u, v):
        return self.residency.get(edge_key(u, v))

    def place(self, u, v, forest):
        """Declare the tree edge (u, v) of `forest` authoritative for the
        bundle.  Raw counters must already agree (they do right after a
        link, which copies the current count into the edge weight)."""
        key = edge_key(u, v)
        assert key not in self.residency
        self.residency[key] = forest

    def release(self, u, v):
        """Hand the bundle back to the raw tables, writing the tree count
        through first."""
        key = edge_key(u, v)
        self.sync_bundle(u, v)
        del self.residency[key]

    def true_counts(self, u, v):
        """Authoritative (count toward v, count toward u) pair."""
        key = edge_key(u, v)
        f = self.residency.get(key)
        if f is None:
            return self.g.counts(u, v)
        cu = f.edge_weight(u, v)
        return cu, self.g.params.gamma - cu

    def sync_bundle(self, u, v):
        """Write a resident edge's count back into the raw tables.  Loads
        are untouched: they already account for every copy wherever its
        counter lives."""
        f = self.residency[edge_key(u, v)]
        cu = f.edge_weight(u, v)
        self.g.set_counts_raw(u, v, cu, self.g.params.gamma - cu)

    def flip_copy(self, u, v):
        """Reorient one copy from u->v to v->u (no load change)."""
        f = self.residency.get(edge_key(u, v))
        if f is None:
            self.g.move_copies(u, v, 1)
            return
        cu = f.edge_weight(u, v)
        assert cu >= 1, f"no copy {u}->{v} to flip"
        f.set_edge_weight(u, v, cu - 1)
        self.g.set_counts_raw(u, v, cu - 1, self.g.params.gamma - cu + 1)

    def add_copy(self, u, v):
        assert edge_key(u, v) not in self.residency, \
            "bundles only grow while raw"
        cu, cv = self.g.counts(u, v)
        self.g.set_counts_raw(u, v, cu + 1, cv)

    def remove_copy(self, u, v):
        assert edge_key(u, v) not in self.residency, \
            "bundles only shrink while raw"
        cu, cv = self.g.counts(u, v)
        assert cu >= 1, f"no copy {u}->{v} to remove"
        self.g.set_counts_raw(u, v, cu - 1, cv)

    def set_counts_true(self, u, v, cu, cv):
        """Overwrite both counters without touching loads.

        Only sound when the caller moves the same amount back elsewhere
        (cycle rotations shift every vertex's out-copies by +x on one
        incident edge and -x on the other).  Writes through to the resident
        forest so the tree copy stays the authority.
        """
        assert cu + cv == self.g.params.gamma
        f = self.residency.get(edge_key(u, v))
        if f is not None:
            f.set_edge_weight(u, v, cu)
        self.g.set_counts_raw(u, v, cu, cv)

    def set_bundle(self, u, v, cu, cv):
        """Overwrite both counters; endpoint loads shift by the change in
        their out-copy counts."""
        assert cu + cv == self.g.params.gamma
        old_u, old_v = self.true_counts(u, v)
        f = self.residency.get(edge_key(u, v))
        if f is not None:
            f.set_edge_weight(u, v, cu)
        self.g.set_counts_raw(u, v, cu, cv)
        if cu != old_u:
            self.g.bump_load(u, cu - old_u)
        if cv != old_v:
            self.g.bump_load(v, cv - old_v)


class FractionalOrienter:
    """Maintains 1-validity (s(tail) - s(head) <= 1 for every copy) under
    copy and bundle updates."""

    def __init__(self, graph, store=None):
        self.g = graph
        self.store = store or EdgeStore(graph)
        self.copy_insertions = 0
        self.copy_deletions = 0
        self.repairs = 0
        self.paranoid = False
        self._provider = None
        self._provider_bound = 0

    def register_nbr_provider(self, fn, bound):
        """fn(v) -> iterable of edge keys whose in/out status around v may
        have drifted since v was last touched (a superset is fine, bounded
        by `bound`)."""
        self._provider = fn
        self._provider_bound = bound

    def update_nbrs(self, v):
        """Reconcile v's neighbourhood: write listed resident bundles back
        so membership sets and heap keys match the true counters."""
        if self._provider is None:
            return
        keys = list(self._provider(v))
        if self.paranoid:
            assert len(keys) <= self._provider_bound, \
                (v, len(keys), self._provider_bound)
        for a, b in keys:
            if self.store.forest_of(a, b) is not None:
                self.store.sync_bundle(a, b)

    def tight_out_nbr(self, v):
        """First out-neighbour (id order) at least one unit lighter."""
        self.update_nbrs(v)
        return self.g.tight_out_nbr(v)

    def tight_in_nbr(self, v):
        """A heaviest in-neighbour, provided it is one unit heavier."""
        self.update_nbrs(v)
        w = self.g.max_load_in_nbr(v)
        if w is None or self.g.loads[w] < self.g.loads[v] + 1:
            return None
        return w

    # ------------------------------------------------------------------

    def insert_copy(self, u, v):
        """Add one copy to the bundle (creating it if needed), then shed the
        load surplus down a maximal tight chain.  Returns the keys of every
        bundle whose counters changed."""
        if u == v:
            raise SelfLoopError(f"copy {u}->{u}")
        g = self.g
        if not g.has_edge(u, v):
            g.add_bundle(u, v)
        self.update_nbrs(u)
        self.update_nbrs(v)
        if g.loads[u] <= g.loads[v]:
            w = u
            self.store.add_copy(u, v)
        else:
            w = v
            self.store.add_copy(v, u)
        log = [edge_key(u, v)]
        top = g.loads[w]
        while True:
            nxt = self.tight_out_nbr(w)
            if nxt is None:
                break
            self.store.flip_copy(w, nxt)
            log.append(edge_key(w, nxt))
            w = nxt
        g.bump_load(w, 1)
        self.copy_insertions += 1
        log = dedup_keep_last(log)
        assert len(log) <= 2 * top + 2, (len(log), top)
        return log

    def delete_copy(self, u, v):
        """Remove one copy from the bundle, direction u->v when it has any
        copies, v->u otherwise; then pull a maximal tight chain toward the
        vacated tail."""
        g = self.g
        cu, cv = self.store.true_counts(u, v)
        if cu > 0:
            w = u
            self.store.remove_copy(u, v)
        elif cv > 0:
            w = v
            self.store.remove_copy(v, u)
        else:
            raise MissingEdgeError(f"bundle {edge_key(u, v)} has no copies")
        log = [edge_key(u, v)]
        while True:
            nxt = self.tight_in_nbr(w)
            if nxt is None:
                break
            self.store.flip_copy(nxt, w)
            log.append(edge_key(nxt, w))
            w = nxt
        top = g.loads[w]
        g.bump_load(w, -1)
        self.copy_deletions += 1
        log = dedup_keep_last(log)
        assert len(log) <= 2 * top + 2, (len(log), top)
        return log

    def gamma_insert(self, u, v):
        """Insert a fresh bundle one copy at a time."""
        if self.g.has_edge(u, v):
            raise DuplicateEdgeError(f"bundle {edge_key(u, v)} exists")
        log = []
        for _ in range(self.g.params.gamma):
            log.extend(self.insert_copy(u, v))
        cu, cv = self.store.true_counts(u, v)
        assert cu + cv == self.g.params.gamma
        return dedup_keep_last(log)

    def gamma_delete(self, u, v):
        """Drain and drop a full raw bundle one copy at a time."""
        key = edge_key(u, v)
        if not self.g.has_edge(u, v):
            raise MissingEdgeError(f"no bundle {key}")
        assert self.store.forest_of(u, v) is None, \
            "resident bundles must be released before deletion"
        log = []
        for _ in range(self.g.params.gamma):
            log.extend(self.delete_copy(u, v))
        self.g.drop_bundle(u, v)
        return dedup_keep_last(log)
