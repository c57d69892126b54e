"""Canonical codes for small colored graphs.

Isomorphism-invariant string codes for multigraphs and pinned graphs, used to
deduplicate enumeration output and to compare decomposition results.  Pins and
inner vertices form separate color classes; parallel-edge multiplicities are
part of the code.

The search is the classic refine-and-individualize scheme: iterated equitable
refinement of an ordered partition, and when a cell stays ambiguous, branch on
each of its vertices.  Every leaf yields a discrete ordering; the minimum
serialized form over all leaves is canonical.  No automorphism pruning is
done, which is fine at the intended desk scale (default bound 12 vertices).
"""

from __future__ import annotations

from .errors import SizeLimitError
from .graphs import Multigraph, PinnedGraph, vkey

DEFAULT_MAX_VERTICES = 12

CanonicalCode = str


def _as_colored(g):
    """Normalize either graph type to (kind, verts, colors, adjacency)."""
    if isinstance(g, PinnedGraph):
        kind = "P"
        verts = sorted(g.inner, key=vkey) + sorted(g.pins, key=vkey)
        colors = [0] * len(g.inner) + [1] * len(g.pins)
    elif isinstance(g, Multigraph):
        kind = "M"
        verts = sorted(g.vertices, key=vkey)
        colors = [0] * len(verts)
    else:
        raise TypeError(f"cannot canonicalize {type(g).__name__}")
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        i, j = index[u], index[v]
        adj[i][j] += 1
        adj[j][i] += 1
    return kind, verts, colors, adj


def _refine(cells, adj):
    """Equitable refinement of an ordered partition.

    Splits every cell by the multiset of edge multiplicities into each cell,
    keeping a deterministic cell order (parent position, then signature).
    """
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        # cell index per vertex for signature computation
        where = {}
        for ci, cell in enumerate(cells):
            for v in cell:
                where[v] = ci
        ncells = len(cells)
        out = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sigs = {}
            for v in cell:
                counts = [0] * ncells
                row = adj[v]
                for w, mult in enumerate(row):
                    if mult:
                        counts[where[w]] += mult
                sigs.setdefault(tuple(counts), []).append(v)
            if len(sigs) > 1:
                changed = True
            for key in sorted(sigs):
                out.append(sigs[key])
        cells = out
    return cells


def _split_cell(cells, v):
    out = []
    for cell in cells:
        if v in cell:
            out.append([v])
            out.append([w for w in cell if w != v])
        else:
            out.append(cell)
    return out


def _leaf_code(kind, order, colors, adj):
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    color_part = "".join(str(colors[v]) for v in order)
    entries = []
    for v in range(n):
        row = adj[v]
        i = pos[v]
        for w in range(v + 1, n):
            if row[w]:
                a, b = sorted((i, pos[w]))
                entries.append((a, b, row[w]))
    entries.sort()
    edge_part = ",".join(f"{a}-{b}x{m}" for a, b, m in entries)
    return f"{kind}{n}|{color_part}|{edge_part}"


def _cell_interchangeable(cell, adj, singleton):
    """True when any internal ordering of `cell` yields the same leaf code.

    Requires every edge from the cell to stay inside the cell or go to a
    singleton cell (stability then makes the external row parts identical),
    and the internal multiplicities to be uniform across all pairs (so the
    induced subgraph is permutation-invariant).
    """
    members = set(cell)
    for v in cell:
        for w, mult in enumerate(adj[v]):
            if mult and w not in singleton and w not in members:
                return False
    k = adj[cell[0]][cell[1]]
    return all(adj[u][v] == k for i, u in enumerate(cell) for v in cell[i + 1:])


def _fix_interchangeable(cells, adj):
    """Expand ambiguous cells whose members are provably interchangeable.

    Keeps graphs with many mutually equivalent vertices (isolated vertices,
    complete cells, parallel repeated components) from exploding the search;
    the leaf code does not depend on the order chosen for such a cell.
    """
    changed = True
    while changed:
        changed = False
        singleton = {cell[0] for cell in cells if len(cell) == 1}
        out = []
        for cell in cells:
            if len(cell) > 1 and _cell_interchangeable(cell, adj, singleton):
                out.extend([v] for v in cell)
                changed = True
            else:
                out.append(cell)
        cells = out
    return cells


def _search(kind, cells, colors, adj, best):
    cells = _refine(cells, adj)
    if any(len(c) > 1 for c in cells):
        cells = _fix_interchangeable(cells, adj)
    if all(len(c) == 1 for c in cells):
        order = [c[0] for c in cells]
        code = _leaf_code(kind, order, colors, adj)
        if best[0] is None or code < best[0]:
            best[0] = code
            best[1] = order
        return
    target = next(c for c in cells if len(c) > 1)
    for v in target:
        _search(kind, _split_cell(cells, v), colors, adj, best)


def canonical_form(g, max_vertices: int = DEFAULT_MAX_VERTICES):
    """Return ``(code, labeling)`` where labeling maps vertex -> canonical index."""
    kind, verts, colors, adj = _as_colored(g)
    n = len(verts)
    if n > max_vertices:
        raise SizeLimitError(
            f"canonicalization bound exceeded: {n} vertices > {max_vertices}")
    if n == 0:
        return f"{kind}0||", {}
    start = []
    if 0 in colors:
        start.append([i for i in range(n) if colors[i] == 0])
    if 1 in colors:
        start.append([i for i in range(n) if colors[i] == 1])
    best = [None, None]
    _search(kind, start, colors, adj, best)
    labeling = {verts[v]: i for i, v in enumerate(best[1])}
    return best[0], labeling


def canonical_code(g, max_vertices: int = DEFAULT_MAX_VERTICES) -> CanonicalCode:
    """Isomorphism-invariant code; equal codes iff graphs are isomorphic
    respecting vertex kinds and edge multiplicities."""
    return canonical_form(g, max_vertices)[0]


def canonical_relabel(g, max_vertices: int = DEFAULT_MAX_VERTICES):
    """The graph relabeled onto 0..n-1 in canonical order (a stable
    representative of its isomorphism class)."""
    _, lab = canonical_form(g, max_vertices)
    return g.relabeled(lab)
