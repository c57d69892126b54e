"""The (2,3)-pebble game: rank, independence, isostatic tests, circuits.

Each vertex starts with two pebbles.  An edge is accepted when four pebbles
can be gathered on its endpoints (two each); accepting orients the edge away
from the vertex that pays a pebble.  The invariant pebbles(v) + outdeg(v) == 2
holds throughout.  The number of accepted edges equals the generic rigidity
rank of the input, independent of insertion order.

When an edge (u, v) is rejected, the set R of vertices reachable from {u, v}
along the current orientation carries exactly three pebbles and spans exactly
2|R| - 3 accepted edges; those edges plus the rejected one form the unique
minimal dependent set (fundamental circuit) of the rejected edge.  Reach sets
are recorded at rejection time so circuits can be recovered afterwards.

Search order is deterministic (neighbors visited in vertex-key order), so the
whole report is reproducible for a fixed edge order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import GraphError
from .graphs import (Multigraph, PinnedGraph, contraction_star, fresh_id,
                     norm_edge, vkey)


class _PebbleState:
    """Mutable game state, confined to one pebble_rank invocation."""

    def __init__(self, vertices):
        self.pebbles = {v: 2 for v in vertices}
        self.out = {v: Counter() for v in vertices}

    def _hunt(self, root, forbidden):
        """DFS along the orientation for a pebbled vertex outside `forbidden`.

        Returns (target, predecessor map).  On failure target is None and the
        predecessor map's keys are the full out-closure of `root`.
        """
        pred = {root: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in sorted(self.out[x], key=vkey):
                if y in pred:
                    continue
                pred[y] = x
                if y not in forbidden and self.pebbles[y] > 0:
                    return y, pred
                stack.append(y)
        return None, pred

    def _pull_pebble(self, root, other):
        """Try to move one pebble to `root`, not stealing from `other`.

        Returns (moved, visited-or-None)."""
        target, pred = self._hunt(root, forbidden={root, other})
        if target is None:
            return False, set(pred)
        # reverse the path root -> ... -> target; the pebble walks back to root
        x = target
        while pred[x] is not None:
            p = pred[x]
            self.out[p][x] -= 1
            if not self.out[p][x]:
                del self.out[p][x]
            self.out[x][p] += 1
            x = p
        self.pebbles[target] -= 1
        self.pebbles[root] += 1
        return True, None

    def try_insert(self, u, v):
        """Attempt to accept edge (u, v).

        Returns (True, None) on acceptance or (False, reach) on rejection,
        where reach is the out-closure of {u, v} at the moment of failure.
        """
        peb = self.pebbles
        while peb[u] + peb[v] < 4:
            visited_u = visited_v = None
            if peb[u] < 2:
                moved, visited_u = self._pull_pebble(u, v)
                if moved:
                    continue
            if peb[v] < 2:
                moved, visited_v = self._pull_pebble(v, u)
                if moved:
                    continue
            reach = {u, v}
            if visited_u:
                reach |= visited_u
            if visited_v:
                reach |= visited_v
            return False, frozenset(reach)
        peb[u] -= 1
        self.out[u][v] += 1
        return True, None


@dataclass(frozen=True)
class RankReport:
    """Outcome of a pebble-game run over a multigraph.

    `independent` and `rejected` hold edge indices into ``graph.edges`` (the
    accepted set is a basis of the input's span; rejected edges are the
    dependent ones relative to the insertion order).  `reach` maps each
    rejected index to the vertex set recorded at its rejection.
    """

    graph: Multigraph
    rank: int
    independent: tuple
    rejected: tuple
    order: tuple
    reach: dict = field(repr=False)

    @property
    def independent_edges(self) -> tuple:
        return tuple(self.graph.edges[i] for i in self.independent)

    @property
    def rejected_edges(self) -> tuple:
        return tuple(self.graph.edges[i] for i in self.rejected)


def pebble_rank(m: Multigraph, edge_order: Optional[Sequence[int]] = None) -> RankReport:
    """Run the (2,3)-pebble game over all edges of `m`.

    `edge_order` is a permutation of edge indices; default is construction
    order.  The rank is order-independent; the accepted/rejected split is not.
    """
    if edge_order is None:
        order = tuple(range(m.m))
    else:
        order = tuple(edge_order)
        if sorted(order) != list(range(m.m)):
            raise GraphError("edge_order must be a permutation of edge indices")
    state = _PebbleState(m.vertices)
    independent = []
    rejected = []
    reach = {}
    for i in order:
        u, v = m.edges[i]
        ok, r = state.try_insert(u, v)
        if ok:
            independent.append(i)
        else:
            rejected.append(i)
            reach[i] = r
    return RankReport(graph=m, rank=len(independent),
                      independent=tuple(independent), rejected=tuple(rejected),
                      order=order, reach=reach)


def circuit_indices(report: RankReport, rejected_index: int) -> frozenset:
    """Edge indices of the fundamental circuit of one rejected edge."""
    if rejected_index not in report.reach:
        raise GraphError(f"edge index {rejected_index} was not rejected")
    r = report.reach[rejected_index]
    g = report.graph
    inside = {i for i in report.independent
              if g.edges[i][0] in r and g.edges[i][1] in r}
    inside.add(rejected_index)
    return frozenset(inside)


def fundamental_circuit(m: Multigraph, report: RankReport, e) -> Multigraph:
    """The unique minimal dependent set containing a rejected edge.

    `e` may be an edge index or an unordered vertex pair; with a pair, the
    first rejected copy is used (parallel rejected copies have equal
    circuits).  The result is returned as a multigraph on its support.
    """
    if report.graph is not m and report.graph != m:
        raise GraphError("report does not belong to this graph")
    if isinstance(e, int):
        idx = e
    else:
        target = norm_edge(*e)
        idx = next((i for i in report.rejected if m.edges[i] == target), None)
        if idx is None:
            raise GraphError(f"edge {target!r} was not rejected")
    idxs = circuit_indices(report, idx)
    edges = [m.edges[i] for i in sorted(idxs)]
    verts = {x for e_ in edges for x in e_}
    return Multigraph(verts, edges)


def is_independent(m: Multigraph) -> bool:
    """True iff no edge is rejected (the edge multiset is independent)."""
    return not pebble_rank(m).rejected


def is_isostatic(m: Multigraph) -> bool:
    """Minimally rigid: |E| = 2|V| - 3 and full rank."""
    return m.m == 2 * m.n - 3 and pebble_rank(m).rank == m.m


def is_circuit(m: Multigraph) -> bool:
    """Pebble-game circuit test over the support of the edges.

    A circuit has |E| = 2|V| - 2 and stays independent after removing any
    single edge copy.
    """
    support = m.support()
    if m.m == 0 or m.m != 2 * len(support) - 2:
        return False
    if pebble_rank(m).rank != m.m - 1:
        return False
    return all(not pebble_rank(m.without_edge_index(i)).rejected
               for i in range(m.m))


def generic_dof(m: Multigraph) -> int:
    """Generic degrees of freedom 2|V| - 3 - rank (0 for graphs on < 2 vertices)."""
    if m.n < 2:
        return 0
    return 2 * m.n - 3 - pebble_rank(m).rank


def _scaffold(pins, apex):
    """Isostatic pin scaffold: a path over the pins plus an apex joined to all."""
    path = list(zip(pins, pins[1:]))
    return path + [(apex, p) for p in pins]


def _augmented(g: PinnedGraph):
    pins = sorted(g.pins, key=vkey)
    apex = fresh_id(g.vertices, "p0")
    edges = list(g.edges) + _scaffold(pins, apex)
    return Multigraph(g.vertices | {apex}, edges), len(pins)


def pinned_isostatic(g: PinnedGraph) -> bool:
    """True iff |E| = 2|I| and the pin-scaffolded graph is generically rigid.

    Requires at least two pins.  The scaffold (pin path plus apex) is itself
    isostatic, so full rank of the union exactly captures rigidity of the
    pinned framework.
    """
    if len(g.pins) < 2:
        raise GraphError("pinned isostatic test needs at least two pins")
    if g.m != 2 * len(g.inner):
        return False
    aug, npins = _augmented(g)
    return pebble_rank(aug).rank == 2 * (len(g.inner) + npins + 1) - 3


def pinned_dof(g: PinnedGraph) -> int:
    """Generic motions of the pinned framework: 2|I| minus the pinned rank.

    The pinned rank is rank(augmented) - rank(scaffold); a single pin leaves
    the rotation about it free, which this count reflects.
    """
    if not g.pins:
        raise GraphError("pinned DOF needs at least one pin")
    aug, npins = _augmented(g)
    scaffold_rank = 2 * npins - 1
    return 2 * len(g.inner) - (pebble_rank(aug).rank - scaffold_rank)


def contraction_circuits(g: PinnedGraph, star=None):
    """Fundamental circuits of the pin contraction of `g`.

    For a pinned isostatic graph these are exactly its circuits; they are
    pairwise edge-disjoint and meet only in the contracted vertex.
    Returns (star, contraction, list of frozensets of edge indices).
    """
    if star is None:
        star = contraction_star(g)
    pins = g.pins
    medges = [((star if u in pins else u), (star if v in pins else v))
              for u, v in g.edges]
    m = Multigraph(g.inner | {star}, medges)
    rep = pebble_rank(m)
    return star, m, [circuit_indices(rep, i) for i in rep.rejected]
