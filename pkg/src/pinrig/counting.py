"""Mobility counting and exhaustive counting oracles.

The fast structural machinery lives in :mod:`pinrig.pebble`; everything here
is either the engineering-level mobility count for linkage schemas or a
brute-force oracle meant to cross-check the fast paths on small inputs.
Oracles are exponential by design and refuse inputs above ORACLE_MAX_VERTICES.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GraphError, SizeLimitError
from .graphs import Multigraph, PinnedGraph, vkey

ORACLE_MAX_VERTICES = 12
OVERBRACE_MAX_LINKS = 12


@dataclass(frozen=True)
class LinkageSchema:
    """Links-and-joints description of a planar linkage.

    `joints` holds one frozenset of incident link ids per revolute joint; a
    joint pinning k links counts (k-1)-fold in the mobility formula.  The
    ground is an ordinary link that must be present.  `drivers` marks actuated
    links, each of which must sit between exactly two joints.
    """

    links: frozenset
    joints: tuple
    ground: object
    drivers: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "links", frozenset(self.links))
        object.__setattr__(self, "joints", tuple(frozenset(j) for j in self.joints))
        object.__setattr__(self, "drivers", frozenset(self.drivers))
        if self.ground not in self.links:
            raise GraphError(f"ground link {self.ground!r} is not among the links")
        if self.ground in self.drivers:
            raise GraphError("the ground link cannot be a driver")
        if not self.drivers <= self.links:
            raise GraphError("drivers must be links")
        for j in self.joints:
            if len(j) < 2:
                raise GraphError(f"joint {sorted(j, key=vkey)!r} pins fewer than two links")
            if not j <= self.links:
                raise GraphError(f"joint {sorted(j, key=vkey)!r} references unknown links")


@dataclass(frozen=True)
class DofReport:
    """Mobility prediction F = 3(L-1) - 2*sum(i-1)J_i with its breakdown.

    `overbraced` is True when some sub-collection of links has a negative
    count of its own (the prediction is then only a lower bound in a way the
    global number cannot show), False when none exists, and None when the
    schema was too large to scan.
    """

    dof: int
    link_count: int
    constraint_sum: int
    overbraced: Optional[bool] = None
    overbraced_witness: Optional[tuple] = None


def _joint_sum(joints):
    return sum(len(j) - 1 for j in joints)


def _induced_joint_sum(joints, subset):
    total = 0
    for j in joints:
        k = len(j & subset)
        if k >= 2:
            total += k - 1
    return total


def _scan_overbraced(schema):
    links = sorted(schema.links, key=vkey)
    n = len(links)
    best = None
    for mask in range(3, 1 << n):
        size = mask.bit_count()
        if size < 2:
            continue
        subset = frozenset(links[i] for i in range(n) if mask >> i & 1)
        f = 3 * (size - 1) - 2 * _induced_joint_sum(schema.joints, subset)
        if f < 0 and (best is None or size < len(best)):
            best = subset
    if best is None:
        return False, None
    return True, tuple(sorted(best, key=vkey))


def grubler_dof(schema: LinkageSchema) -> DofReport:
    """Planar mobility count for a linkage schema.

    The result is exact as an integer but only a lower bound on the actual
    degree of freedom; overbraced sub-collections (scanned exhaustively when
    the schema has at most OVERBRACE_MAX_LINKS links) are flagged because they
    make the global count undershoot.
    """
    l = len(schema.links)
    s = _joint_sum(schema.joints)
    f = 3 * (l - 1) - 2 * s
    if l <= OVERBRACE_MAX_LINKS:
        over, witness = _scan_overbraced(schema)
    else:
        over, witness = None, None
    return DofReport(dof=f, link_count=l, constraint_sum=s,
                     overbraced=over, overbraced_witness=witness)


def remove_drivers(schema: LinkageSchema) -> LinkageSchema:
    """Contract every driver link, identifying its two end joints.

    Each driver must be incident to exactly two joints.  The merged joint
    keeps the union of the remaining links; joints left with fewer than two
    links are dropped.
    """
    joints = [set(j) for j in schema.joints]
    for d in sorted(schema.drivers, key=vkey):
        idxs = [i for i, j in enumerate(joints) if d in j]
        if len(idxs) != 2:
            raise GraphError(
                f"driver {d!r} is incident to {len(idxs)} joints; exactly 2 required")
        i1, i2 = idxs
        merged = (joints[i1] | joints[i2]) - {d}
        joints[i1] = merged
        del joints[i2]
    joints = [j for j in joints if len(j) >= 2]
    return LinkageSchema(links=schema.links - schema.drivers,
                         joints=tuple(joints),
                         ground=schema.ground,
                         drivers=frozenset())


def bar_joint_dof(g: Multigraph) -> int:
    """Naive count 2|V| - 3 - |E| (may be negative; not the generic DOF)."""
    if g.n == 0:
        raise GraphError("empty graph")
    return 2 * g.n - 3 - g.m


def _edge_masks(vertices, edges):
    index = {v: i for i, v in enumerate(vertices)}
    return [(1 << index[u]) | (1 << index[v]) for u, v in edges]


def _laman_masks(n, emasks):
    """Laman check on a bitmask edge list: every vertex subset of size >= 2
    induces at most 2k-3 edges."""
    for mask in range(3, 1 << n):
        k = mask.bit_count()
        if k < 2:
            continue
        induced = sum(1 for em in emasks if em & mask == em)
        if induced > 2 * k - 3:
            return False
    return True


def laman_independent_oracle(g: Multigraph) -> bool:
    """Exhaustive Laman independence test (vertex-subset form)."""
    if g.n > ORACLE_MAX_VERTICES:
        raise SizeLimitError(f"laman oracle bound exceeded: {g.n} vertices")
    verts = sorted(g.vertices, key=vkey)
    return _laman_masks(len(verts), _edge_masks(verts, g.edges))


def laman_violation(g: Multigraph):
    """A violating vertex subset (smallest found) or None if independent."""
    if g.n > ORACLE_MAX_VERTICES:
        raise SizeLimitError(f"laman oracle bound exceeded: {g.n} vertices")
    verts = sorted(g.vertices, key=vkey)
    emasks = _edge_masks(verts, g.edges)
    best = None
    for mask in range(3, 1 << len(verts)):
        k = mask.bit_count()
        if k < 2 or (best is not None and k >= len(best)):
            continue
        induced = sum(1 for em in emasks if em & mask == em)
        if induced > 2 * k - 3:
            sub = tuple(verts[i] for i in range(len(verts)) if mask >> i & 1)
            best = sub
    return best


def circuit_oracle(g: Multigraph) -> bool:
    """True iff the edge set is a rigidity circuit: |E| = 2|V(E)| - 2 and every
    proper nonempty edge subset is independent (equivalently, dropping any one
    edge leaves an independent set).  Computed over the support of the edges."""
    support = g.support()
    nv = len(support)
    if nv > ORACLE_MAX_VERTICES:
        raise SizeLimitError(f"circuit oracle bound exceeded: {nv} vertices")
    if g.m == 0 or g.m != 2 * nv - 2:
        return False
    verts = sorted(support, key=vkey)
    emasks = _edge_masks(verts, g.edges)
    n = len(verts)
    for skip in range(len(emasks)):
        rest = emasks[:skip] + emasks[skip + 1:]
        if not _laman_masks(n, rest):
            return False
    return True


def pinned_conditions_oracle(g: PinnedGraph) -> bool:
    """Exhaustive check of the pinned counting conditions.

    Requires |E| = 2|I| and, for every induced subgraph with inner set I',
    pin set P' and at least one edge:

      |E'| <= 2|I'|      if |P'| >= 2
      |E'| <= 2|I'| - 1  if |P'| == 1
      |E'| <= 2|I'| - 3  if P' is empty
    """
    if g.n > ORACLE_MAX_VERTICES:
        raise SizeLimitError(f"pinned conditions oracle bound exceeded: {g.n} vertices")
    if g.m != 2 * len(g.inner):
        return False
    return _pinned_subgraph_violation(g) is None


def _pinned_subgraph_violation(g: PinnedGraph):
    """First violating induced subgraph, as (inner_subset, pin_subset, edges,
    bound), or None."""
    verts = sorted(g.inner, key=vkey) + sorted(g.pins, key=vkey)
    ni = len(g.inner)
    n = len(verts)
    emasks = _edge_masks(verts, g.edges)
    inner_mask = (1 << ni) - 1
    for mask in range(1, 1 << n):
        induced = sum(1 for em in emasks if em & mask == em)
        if induced == 0:
            continue
        ki = (mask & inner_mask).bit_count()
        kp = mask.bit_count() - ki
        bound = 2 * ki if kp >= 2 else (2 * ki - 1 if kp == 1 else 2 * ki - 3)
        if induced > bound:
            sub_i = tuple(verts[i] for i in range(ni) if mask >> i & 1)
            sub_p = tuple(verts[i] for i in range(ni, n) if mask >> i & 1)
            return sub_i, sub_p, induced, bound
    return None


def pinned_violation(g: PinnedGraph):
    """Witness for a failed pinned-conditions check, or None if it passes."""
    if g.n > ORACLE_MAX_VERTICES:
        raise SizeLimitError(f"pinned conditions oracle bound exceeded: {g.n} vertices")
    if g.m != 2 * len(g.inner):
        return ("edge count", g.m, 2 * len(g.inner))
    hit = _pinned_subgraph_violation(g)
    if hit is None:
        return None
    return ("subgraph",) + hit
