"""Construction operations, enumeration of circuits and Assur graphs, and
replayable construction certificates.

Every rigidity circuit arises from K4 by edge-splits and 2-sums, and every
Assur graph on five or more vertices arises from a circuit by splitting one
vertex into pins; the dyad is the lone extra base (its contraction, the
doubled edge, sits outside the K4 closure).  The enumerations below implement
exactly those closures, deduplicating by canonical code, and the brute-force
oracles in :mod:`pinrig.counting` cross-check them in the test suite.

A certificate records a construction path from a base (dyad or K4) to a
target graph.  `certify` searches backwards with reverse edge-splits and
reverse 2-sums; `verify_certificate` replays forward in linear time and
compares canonical codes, enforcing a step grammar so that a passing
certificate with a dyad/K4 base really does witness the Assur property.
"""

from __future__ import annotations

import time
import warnings
from collections import Counter
from dataclasses import dataclass
from itertools import combinations


from .canon import canonical_code, canonical_relabel
from .errors import (CertificateError, CertificateSearchExhausted, GraphError,
                     PinrigWarning)
from .graphs import (Multigraph, PinnedGraph, complete_graph, contract_pins,
                     contraction_star, fresh_id, norm_edge,
                     split_contracted_vertex, vkey)
from .pebble import is_circuit

CERTIFY_TIME_LIMIT = 10.0
ENUM_MAX_VERTICES = 10


# -- Henneberg and circuit operations ----------------------------------------

def vertex_addition(g: Multigraph, u, w, new_vertex=None) -> Multigraph:
    """Attach a new 2-valent vertex to u and w (preserves independence)."""
    if u == w:
        raise GraphError("attachment vertices must be distinct")
    if u not in g.vertices or w not in g.vertices:
        raise GraphError("attachment vertices must exist")
    v = fresh_id(g.vertices, "v") if new_vertex is None else new_vertex
    if v in g.vertices:
        raise GraphError(f"new vertex {v!r} already present")
    return Multigraph(g.vertices | {v}, g.edges + ((u, v), (v, w)))


def edge_split(g, e, x, new_vertex=None):
    """Split edge e = (u, w) by a new vertex joined to u, w and a third vertex x.

    Works on multigraphs and on pinned graphs (the new vertex is inner).
    Takes independent sets to independent sets, circuits to circuits, and
    Assur graphs on at least four vertices to Assur graphs.
    """
    u, w = norm_edge(*e)
    if x == u or x == w:
        raise GraphError("third attachment must differ from the split edge's endpoints")
    if x not in g.vertices:
        raise GraphError(f"third attachment {x!r} must exist")
    v = fresh_id(g.vertices, "v") if new_vertex is None else new_vertex
    if v in g.vertices:
        raise GraphError(f"new vertex {v!r} already present")
    if isinstance(g, PinnedGraph):
        # two pinned attachments would collapse to a doubled edge under pin
        # contraction, so no circuit-level split corresponds to them
        if sum(1 for t in (u, w, x) if t in g.pins) > 1:
            raise GraphError("at most one of the three attachments may be pinned")
        rest = g.without_edge(u, w)
        return PinnedGraph(rest.inner | {v}, rest.pins,
                           rest.edges + ((v, u), (v, w), (v, x)))
    rest = g.without_edge(u, w)
    return Multigraph(rest.vertices | {v},
                      rest.edges + ((v, u), (v, w), (v, x)))


def two_sum(c1: Multigraph, c2: Multigraph, e1, e2, flip: bool = False) -> Multigraph:
    """Glue two circuits along an edge and delete the glued edge.

    Endpoints of e2 are identified with endpoints of e1 (crosswise when
    `flip`); remaining vertices of c2 are renamed if they collide with c1.
    For circuit inputs the result is a circuit with |V1|+|V2|-2 vertices and
    |E1|+|E2|-2 edges; non-circuit inputs only get a warning (the operation is
    still performed for experimentation).
    """
    e1 = norm_edge(*e1)
    if e1 not in c1.edges:
        raise GraphError(f"glue edge {e1!r} is not in the first graph")
    e2n = norm_edge(*e2)
    if e2n not in c2.edges:
        raise GraphError(f"glue edge {e2!r} is not in the second graph")
    for name, c in (("first", c1), ("second", c2)):
        if c.m != 2 * c.n - 2:
            warnings.warn(f"{name} 2-sum operand has {c.m} edges on {c.n} vertices, "
                          f"not a rigidity circuit count", PinrigWarning, stacklevel=2)
    a, b = e1
    cc, dd = e2n if not flip else (e2n[1], e2n[0])
    taken = set(c1.vertices)
    amap = {cc: a, dd: b}
    for w in sorted(c2.vertices - {cc, dd}, key=vkey):
        new = w
        while new in taken:
            new = f"{new}'"
        amap[w] = new
        taken.add(new)
    edges1 = list(c1.edges)
    edges1.remove(e1)
    edges2 = list(c2.edges)
    edges2.remove(e2n)
    mapped = [(amap[u], amap[v]) for u, v in edges2]
    return Multigraph(c1.vertices | set(amap.values()), edges1 + mapped)


def vertex_split(c: Multigraph, v, shared, moved, new_vertex=None) -> Multigraph:
    """Split v into two adjacent vertices, both of degree at least three.

    `shared` names the one neighbor joined to both halves; `moved` lists the
    neighbors (with multiplicity) handed to the new half, the rest staying
    with v.  Adds the connecting edge and the duplicated shared edge, so a
    circuit stays a circuit and an Assur graph grows to a larger one.
    """
    if v not in c.vertices:
        raise GraphError(f"vertex {v!r} not present")
    nbrs = c.neighbors(v)
    if not nbrs[shared]:
        raise GraphError(f"shared neighbor {shared!r} is not adjacent to {v!r}")
    moved = list(moved)
    moved_count = Counter(moved)
    rest_count = Counter(nbrs)
    rest_count[shared] -= 1
    if rest_count[shared] == 0:
        del rest_count[shared]
    if not all(moved_count[x] <= rest_count.get(x, 0) for x in moved_count):
        raise GraphError("moved neighbors must come from v's edges, excluding the shared one")
    if shared in moved_count:
        raise GraphError("the shared neighbor cannot also be moved")
    keep_count = rest_count - moved_count
    if not moved_count or not keep_count:
        raise GraphError("each side of the split must keep at least one non-shared edge")
    v2 = fresh_id(c.vertices, "v") if new_vertex is None else new_vertex
    if v2 in c.vertices:
        raise GraphError(f"new vertex {v2!r} already present")
    edges = [e for e in c.edges if v not in e]
    edges.extend((v, x) for x in sorted(keep_count.elements(), key=vkey))
    edges.extend((v2, x) for x in sorted(moved_count.elements(), key=vkey))
    edges.append((v, shared))
    edges.append((v2, shared))
    edges.append((v, v2))
    return Multigraph(c.vertices | {v2}, edges)


def pin_rearrangement(g: PinnedGraph, assignment) -> PinnedGraph:
    """Redistribute the pin-incident edges over a new pin set.

    `assignment` lists one ``(inner_endpoint, new_pin)`` pair per pin-incident
    edge; at least two distinct pins, none left empty.  The pin contraction is
    unchanged, so the Assur property is preserved.
    """
    star = contraction_star(g)
    m = contract_pins(g, star)
    return split_contracted_vertex(m, star, assignment)


# -- enumeration --------------------------------------------------------------

def _set_partitions(items):
    """All partitions of `items` into unlabeled nonempty blocks."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield ()
        return
    a = [0] * n
    while True:
        k = max(a) + 1
        blocks = [[] for _ in range(k)]
        for i, r in enumerate(a):
            blocks[r].append(items[i])
        yield tuple(tuple(bl) for bl in blocks)
        j = n - 1
        while j >= 1:
            if a[j] <= max(a[:j]):
                a[j] += 1
                for t in range(j + 1, n):
                    a[t] = 0
                break
            j -= 1
        else:
            return


def circuit_catalog(n_max: int) -> dict:
    """Representatives of all rigidity circuit classes on 4..n_max vertices.

    Closure of {K4} under edge-split and 2-sum, breadth-first by vertex count,
    deduplicated by canonical code.  Returns {vertex count: tuple of
    canonically labeled multigraphs}.
    """
    if not 4 <= n_max <= ENUM_MAX_VERTICES:
        raise GraphError(f"circuit enumeration supports 4..{ENUM_MAX_VERTICES} vertices")
    by_n = {4: {canonical_code(complete_graph(4)): canonical_relabel(complete_graph(4))}}
    for n in range(5, n_max + 1):
        found = {}
        for c in by_n.get(n - 1, {}).values():
            for u, w in set(c.edges):
                for x in sorted(c.vertices - {u, w}, key=vkey):
                    cand = edge_split(c, (u, w), x, new_vertex=n - 1)
                    code = canonical_code(cand)
                    if code not in found:
                        found[code] = canonical_relabel(cand)
        for n1 in range(4, (n + 2) // 2 + 1):
            n2 = n + 2 - n1
            if n2 < n1 or n2 not in by_n:
                continue
            for c1 in by_n[n1].values():
                for c2 in by_n[n2].values():
                    shifted = c2.relabeled({i: i + n1 for i in c2.vertices})
                    for e1 in set(c1.edges):
                        for e2 in set(shifted.edges):
                            for flip in (False, True):
                                cand = two_sum(c1, shifted, e1, e2, flip=flip)
                                code = canonical_code(cand)
                                if code not in found:
                                    found[code] = canonical_relabel(cand)
        by_n[n] = found
    return {n: tuple(reps[c] for c in sorted(reps))
            for n, reps in by_n.items() if reps}


def enumerate_circuits(n_max: int) -> frozenset:
    """Canonical codes of every circuit class reachable within n_max vertices."""
    return frozenset(canonical_code(g)
                     for reps in circuit_catalog(n_max).values() for g in reps)


def _dyad() -> PinnedGraph:
    return PinnedGraph({0}, {1, 2}, [(0, 1), (0, 2)])


def assur_catalog(n_max: int) -> dict:
    """Representatives of all Assur graph classes with at most n_max vertices.

    The dyad, plus every pin-splitting of every vertex of every circuit on at
    most n_max - 1 vertices (each pin must receive an edge, so no isolated
    pins appear).  Returns {total vertex count: tuple of pinned graphs}.
    """
    if not 3 <= n_max <= ENUM_MAX_VERTICES:
        raise GraphError(f"assur enumeration supports 3..{ENUM_MAX_VERTICES} vertices")
    buckets = {3: {canonical_code(_dyad()): canonical_relabel(_dyad())}}
    if n_max >= 5:
        for n_c, circuits in circuit_catalog(n_max - 1).items():
            for c in circuits:
                for v in sorted(c.vertices, key=vkey):
                    slots = sorted(c.neighbors(v).elements(), key=vkey)
                    max_pins = min(len(slots), n_max - (n_c - 1))
                    if max_pins < 2:
                        continue
                    for blocks in _set_partitions(slots):
                        k = len(blocks)
                        if not 2 <= k <= max_pins:
                            continue
                        assignment = [(nbr, n_c + bi)
                                      for bi, block in enumerate(blocks)
                                      for nbr in block]
                        g = split_contracted_vertex(c, v, assignment)
                        code = canonical_code(g)
                        bucket = buckets.setdefault(g.n, {})
                        if code not in bucket:
                            bucket[code] = canonical_relabel(g)
    return {n: tuple(reps[c] for c in sorted(reps))
            for n, reps in sorted(buckets.items())}


def enumerate_assur(n_max: int) -> frozenset:
    """Canonical codes of every Assur class with at most n_max vertices."""
    return frozenset(canonical_code(g)
                     for reps in assur_catalog(n_max).values() for g in reps)


# -- certificates --------------------------------------------------------------

@dataclass(frozen=True)
class ConstructionStep:
    """One replayable construction move; `params` is a sorted (key, value) tuple."""

    kind: str
    params: tuple

    def get(self, key):
        for k, v in self.params:
            if k == key:
                return v
        raise KeyError(key)


def step(kind: str, **params) -> ConstructionStep:
    return ConstructionStep(kind, tuple(sorted(params.items())))


@dataclass(frozen=True)
class Certificate:
    """A base graph, a list of construction steps, and the claimed result code.

    Bases: ``dyad`` (inner, pin, pin), ``k4`` (four vertices), ``edge`` (two
    vertices).  Replaying the steps from the base must land on a graph whose
    canonical code equals `claimed`.
    """

    base_kind: str
    base_vertices: tuple
    steps: tuple
    claimed: str


_MULTI_STEPS = {"edge": ("vertex-addition", "edge-split"),
                "k4": ("edge-split", "two-sum", "vertex-split")}
_PINNED_STEPS = ("edge-split", "pin-rearrange")


def _base_graph(cert: Certificate):
    vs = cert.base_vertices
    if cert.base_kind == "k4":
        if len(set(vs)) != 4:
            raise CertificateError("k4 base needs four distinct vertices")
        return complete_graph(vs)
    if cert.base_kind == "edge":
        if len(set(vs)) != 2:
            raise CertificateError("edge base needs two distinct vertices")
        return Multigraph(vs, [tuple(vs)])
    if cert.base_kind == "dyad":
        if len(set(vs)) != 3:
            raise CertificateError("dyad base needs three distinct vertices")
        inner, p1, p2 = vs
        return PinnedGraph({inner}, {p1, p2}, [(inner, p1), (inner, p2)])
    raise CertificateError(f"unknown base kind {cert.base_kind!r}")


def _apply_step(g, st: ConstructionStep):
    if st.kind == "vertex-addition":
        return vertex_addition(g, st.get("u"), st.get("w"), new_vertex=st.get("v"))
    if st.kind == "edge-split":
        if isinstance(g, PinnedGraph) and g.n < 4:
            raise CertificateError("pinned edge-split needs at least four vertices")
        return edge_split(g, (st.get("u"), st.get("w")), st.get("x"),
                          new_vertex=st.get("v"))
    if st.kind == "two-sum":
        other = replay_certificate(st.get("other"))
        if not isinstance(other, Multigraph):
            raise CertificateError("two-sum operand certificate must build a multigraph")
        a, b = st.get("a"), st.get("b")
        return two_sum(g, other, (a, b), (a, b), flip=False)
    if st.kind == "vertex-split":
        return vertex_split(g, st.get("v"), st.get("shared"),
                            st.get("moved"), new_vertex=st.get("v2"))
    if st.kind == "pin-split":
        return split_contracted_vertex(g, st.get("vertex"), st.get("assignment"))
    if st.kind == "pin-rearrange":
        return pin_rearrangement(g, st.get("assignment"))
    raise CertificateError(f"unknown step kind {st.kind!r}")


def replay_certificate(cert: Certificate):
    """Rebuild the certified graph, enforcing the step grammar.

    Multigraph-phase steps must be circuit-preserving for a ``k4`` base (or
    independence-preserving for an ``edge`` base); a single ``pin-split``
    moves to the pinned phase, after which only Assur-preserving pinned steps
    are allowed.  Runs in time linear in the certificate size.
    """
    g = _base_graph(cert)
    pinned = cert.base_kind == "dyad"
    for st in cert.steps:
        if pinned:
            if st.kind not in _PINNED_STEPS:
                raise CertificateError(f"step {st.kind!r} not allowed after pinning")
        elif st.kind == "pin-split":
            pinned = True
        elif st.kind not in _MULTI_STEPS[cert.base_kind]:
            raise CertificateError(
                f"step {st.kind!r} not allowed from base {cert.base_kind!r}")
        try:
            g = _apply_step(g, st)
        except GraphError as exc:
            raise CertificateError(f"step {st.kind!r} failed: {exc}") from None
    return g


def verify_certificate(cert: Certificate) -> bool:
    """Replay and compare canonical codes; False on any violation."""
    try:
        g = replay_certificate(cert)
        return canonical_code(g, max_vertices=max(12, g.n)) == cert.claimed
    except (CertificateError, GraphError):
        return False


def _components_without(m: Multigraph, a, b):
    rest = m.vertices - {a, b}
    seen = set()
    comps = []
    for start in sorted(rest, key=vkey):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in m.neighbors(x):
                if y in rest and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(comp)
    return comps


def _code_or_none(m: Multigraph):
    if m.n <= 12:
        return canonical_code(m)
    return None


def _reduce_circuit(m: Multigraph, deadline: float, dead: set):
    """Search a reduction of circuit `m` down to K4.

    Returns (base vertex tuple, forward step list) or None.  Reverse
    edge-splits are tried first, then reverse 2-sums at separation pairs.
    Failed canonical codes are memoized.
    """
    if m.n == 4 and m.m == 6 and m.is_simple():
        return tuple(sorted(m.vertices, key=vkey)), []
    if time.monotonic() > deadline:
        raise CertificateSearchExhausted("certificate search hit its time limit")
    code = _code_or_none(m)
    if code is not None and code in dead:
        return None

    for v in sorted(m.vertices, key=vkey):
        if m.degree(v) != 3:
            continue
        nbrs = sorted(m.neighbors(v), key=vkey)
        if len(nbrs) != 3:
            continue
        for a, b in combinations(nbrs, 2):
            if m.has_edge(a, b):
                continue
            third = next(x for x in nbrs if x not in (a, b))
            smaller = m.without_vertex(v).with_edge(a, b)
            if not is_circuit(smaller):
                continue
            sub = _reduce_circuit(smaller, deadline, dead)
            if sub is not None:
                base, steps = sub
                steps.append(step("edge-split", u=a, w=b, x=third, v=v))
                return base, steps

    for a, b in combinations(sorted(m.vertices, key=vkey), 2):
        comps = _components_without(m, a, b)
        if len(comps) < 2:
            continue
        groups = []
        for comp in comps:
            groups.append([i for i, e in enumerate(m.edges)
                           if e[0] in comp or e[1] in comp])
        ab_idx = [i for i, e in enumerate(m.edges) if set(e) == {a, b}]
        k = len(comps)
        for mask in range(1, (1 << k) - 1):
            if not mask & 1:
                continue  # fix component 0 on side one; halves the symmetry
            side1 = [i for ci in range(k) if mask >> ci & 1 for i in groups[ci]]
            side2 = [i for ci in range(k) if not mask >> ci & 1 for i in groups[ci]]
            for ab_side in range(len(ab_idx) + 1):
                e_side1 = side1 + ab_idx[:ab_side]
                e_side2 = side2 + ab_idx[ab_side:]
                c1 = Multigraph({a, b} | {x for i in e_side1 for x in m.edges[i]},
                                [m.edges[i] for i in sorted(e_side1)] + [(a, b)])
                c2 = Multigraph({a, b} | {x for i in e_side2 for x in m.edges[i]},
                                [m.edges[i] for i in sorted(e_side2)] + [(a, b)])
                if c1.n < 4 or c2.n < 4:
                    continue
                if not (is_circuit(c1) and is_circuit(c2)):
                    continue
                sub1 = _reduce_circuit(c1, deadline, dead)
                if sub1 is None:
                    continue
                sub2 = _reduce_circuit(c2, deadline, dead)
                if sub2 is None:
                    continue
                base2, steps2 = sub2
                other = Certificate(base_kind="k4", base_vertices=base2,
                                    steps=tuple(steps2),
                                    claimed=canonical_code(c2, max_vertices=max(12, c2.n)))
                base1, steps1 = sub1
                steps1.append(step("two-sum", a=a, b=b, other=other))
                return base1, steps1

    if code is not None:
        dead.add(code)
    return None


def certify(g: PinnedGraph, time_limit: float = CERTIFY_TIME_LIMIT) -> Certificate:
    """Search a construction certificate for an Assur graph.

    Dyads certify trivially; otherwise the pin contraction is reduced to K4
    (reverse edge-splits first, then reverse 2-sums, depth-first with memoized
    failures) and a final pin-split step rebuilds the pinned graph.  Raises
    CertificateSearchExhausted when the time box runs out; that is a search
    failure, not a disproof.
    """
    from .assur import is_assur  # local import to avoid a cycle

    verdict = is_assur(g, methods=("circuit",))
    if not verdict.overall:
        raise GraphError(f"certify requires an Assur graph ({verdict.reason or 'circuit condition fails'})")
    claimed = canonical_code(g, max_vertices=max(12, g.n))
    if len(g.inner) == 1:
        inner = next(iter(g.inner))
        p1, p2 = sorted(g.pins, key=vkey)
        return Certificate("dyad", (inner, p1, p2), (), claimed)
    star = contraction_star(g)
    m = contract_pins(g, star)
    deadline = time.monotonic() + time_limit
    found = _reduce_circuit(m, deadline, set())
    if found is None:
        raise CertificateSearchExhausted(
            "no reduction to K4 found (search exhausted)")
    base, steps = found
    assignment = tuple(sorted(((u, v) if v in g.pins else (v, u)
                               for u, v in g.edges if u in g.pins or v in g.pins),
                              key=lambda t: (vkey(t[0]), vkey(t[1]))))
    steps.append(step("pin-split", vertex=star, assignment=assignment))
    return Certificate("k4", base, tuple(steps), claimed)
