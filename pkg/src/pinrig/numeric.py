"""Rigidity matrices, exact ranks, and first-order motion spaces.

The row for edge (i, j) at configuration p carries (p_i - p_j) in the two
columns of i and (p_j - p_i) in the columns of j; a first-order motion is a
velocity assignment annihilating every row.  For pinned graphs only inner
vertices get columns, so the kernel of the pinned matrix is exactly the space
of motions fixing the pins.

Three coordinate domains are supported:

* ``mod``      -- integers modulo the Mersenne prime 2**61 - 1; used for all
                  randomized generic queries (rank at a random configuration
                  equals the generic rank up to a Schwartz-Zippel failure
                  probability of at most degree/p per trial, so no tolerances
                  are involved);
* ``rational`` -- exact Fraction arithmetic for user-supplied int/rational
                  geometry;
* ``float``    -- elimination with a relative pivot threshold of 1e-9 for
                  binary-float geometry.  Pivots close to the threshold raise
                  a ConditioningWarning instead of silently deciding.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConditioningWarning, GraphError
from .graphs import PinnedGraph, vkey

PRIME = (1 << 61) - 1
FLOAT_PIVOT_RTOL = 1e-9
FLOAT_WARN_RTOL = 1e-6
DEFAULT_TRIALS = 8

Configuration = dict


@dataclass(frozen=True)
class RigidityMatrix:
    """Edge-by-coordinate matrix of the first-order length constraints.

    `columns` lists the vertices owning columns (two consecutive columns per
    vertex, x then y); pinned input graphs contribute columns for inner
    vertices only.  `field` is one of ``mod``, ``rational``, ``float``.
    """

    rows: tuple
    edges: tuple
    columns: tuple
    field: str

    @property
    def shape(self):
        return (len(self.rows), 2 * len(self.columns))

    def as_lists(self):
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class MotionBasis:
    """Basis of the first-order motion space of a pinned framework.

    Each vector maps every inner vertex to a velocity pair; pins are fixed.
    """

    vectors: tuple
    field: str

    @property
    def dim(self) -> int:
        return len(self.vectors)


def _field_of(config, field):
    if field != "auto":
        return field
    values = [c for xy in config.values() for c in xy]
    if any(isinstance(c, float) for c in values):
        return "float"
    if all(isinstance(c, (int, Fraction)) for c in values):
        return "rational"
    raise GraphError("cannot infer coordinate field from configuration values")


def build_rigidity_matrix(g, config: Configuration, field: str = "auto") -> RigidityMatrix:
    """Assemble the rigidity matrix of `g` at configuration `config`.

    `config` must give coordinates for every vertex; adjacent vertices must
    sit at distinct points.  For a PinnedGraph, columns exist only for inner
    vertices (pin coordinates still shape the rows).
    """
    if isinstance(g, PinnedGraph):
        col_vertices = sorted(g.inner, key=vkey)
    else:
        col_vertices = sorted(g.vertices, key=vkey)
    missing = [v for v in g.vertices if v not in config]
    if missing:
        raise GraphError(f"configuration misses vertices {sorted(missing, key=vkey)!r}")
    field = _field_of(config, field)

    def coords(v):
        x, y = config[v]
        if field == "mod":
            return x % PRIME, y % PRIME
        if field == "rational":
            return Fraction(x), Fraction(y)
        return float(x), float(y)

    pos = {v: coords(v) for v in g.vertices}
    col_of = {v: 2 * i for i, v in enumerate(col_vertices)}
    ncols = 2 * len(col_vertices)
    rows = []
    for u, v in g.edges:
        (xu, yu), (xv, yv) = pos[u], pos[v]
        dx, dy = xu - xv, yu - yv
        if field == "mod":
            dx, dy = dx % PRIME, dy % PRIME
        if dx == 0 and dy == 0:
            raise GraphError(f"adjacent vertices {u!r}, {v!r} share a location")
        row = [0] * ncols
        if u in col_of:
            row[col_of[u]], row[col_of[u] + 1] = dx, dy
        if v in col_of:
            ndx, ndy = -dx, -dy
            if field == "mod":
                ndx, ndy = ndx % PRIME, ndy % PRIME
            row[col_of[v]], row[col_of[v] + 1] = ndx, ndy
        rows.append(tuple(row))
    return RigidityMatrix(rows=tuple(rows), edges=tuple(g.edges),
                          columns=tuple(col_vertices), field=field)


# -- elimination kernels ----------------------------------------------------

def _rank_mod(rows, p=PRIME):
    """Row echelon rank over GF(p), destroying `rows`."""
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    m = len(rows)
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[c], -1, p)
        if inv != 1:
            prow[c:] = [(x * inv) % p for x in prow[c:]]
        for i in range(r + 1, m):
            f = rows[i][c]
            if f:
                ri = rows[i]
                ri[c:] = [(a - f * b) % p for a, b in zip(ri[c:], prow[c:])]
        r += 1
        if r == m:
            break
    return r


def _rref_exact(rows, inv, mul, sub):
    """Reduced row echelon form for an exact field given as operations.

    Returns (pivot column list, reduced rows)."""
    rows = [list(r) for r in rows]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        fac = inv(prow[c])
        rows[r] = prow = [mul(fac, x) for x in prow]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [sub(a, mul(f, b)) for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, rows[:r]


def _rref_mod(rows, p=PRIME):
    return _rref_exact(rows,
                       inv=lambda x: pow(x, -1, p),
                       mul=lambda a, b: (a * b) % p,
                       sub=lambda a, b: (a - b) % p)


def _rref_rational(rows):
    return _rref_exact(rows,
                       inv=lambda x: Fraction(1) / x,
                       mul=lambda a, b: a * b,
                       sub=lambda a, b: a - b)


def _rref_float(rows, rtol=FLOAT_PIVOT_RTOL):
    rows = [list(map(float, r)) for r in rows]
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    scale = max((abs(x) for r in rows for x in r), default=0.0) or 1.0
    cutoff = rtol * scale
    gray = FLOAT_WARN_RTOL * scale
    pivots = []
    r = 0
    for c in range(ncols):
        piv = max(range(r, m), key=lambda i: abs(rows[i][c]), default=None)
        if piv is None or abs(rows[piv][c]) <= cutoff:
            continue
        if abs(rows[piv][c]) < gray:
            warnings.warn(
                f"pivot {rows[piv][c]:.3e} is close to the zero threshold; "
                f"rank decisions may be unreliable", ConditioningWarning,
                stacklevel=3)
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        fac = 1.0 / prow[c]
        rows[r] = prow = [fac * x for x in prow]
        for i in range(m):
            if i != r and rows[i][c] != 0.0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return pivots, rows[:r]


def _kernel_basis(pivots, reduced, ncols, negate):
    """Kernel basis from an RREF: one vector per free column."""
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for r, c in enumerate(pivots):
            vec[c] = negate(reduced[r][f])
        basis.append(vec)
    return basis


def matrix_rank(mat: RigidityMatrix) -> int:
    rows = mat.as_lists()
    if mat.field == "mod":
        return _rank_mod(rows)
    if mat.field == "rational":
        return len(_rref_rational(rows)[1]) if rows else 0
    return len(_rref_float(rows)[1]) if rows else 0


def matrix_kernel(mat: RigidityMatrix):
    """Kernel basis vectors as flat coordinate lists."""
    ncols = mat.shape[1]
    if not mat.rows:
        basis = []
        for f in range(ncols):
            vec = [0] * ncols
            vec[f] = 1
            basis.append(vec)
        return basis
    if mat.field == "mod":
        pivots, red = _rref_mod(mat.as_lists())
        return _kernel_basis(pivots, red, ncols, lambda x: (-x) % PRIME)
    if mat.field == "rational":
        pivots, red = _rref_rational(mat.as_lists())
        return _kernel_basis(pivots, red, ncols, lambda x: -x)
    pivots, red = _rref_float(mat.as_lists())
    return _kernel_basis(pivots, red, ncols, lambda x: -x)


# -- randomized generic queries ---------------------------------------------

def random_configuration(g, rng: random.Random) -> Configuration:
    """Uniform random coordinates over GF(p) for every vertex, resampled until
    no adjacent pair collides (collision probability is ~ |E|/p)."""
    while True:
        config = {v: (rng.randrange(PRIME), rng.randrange(PRIME))
                  for v in g.vertices}
        if all(config[u] != config[v] for u, v in g.edges):
            return config


def generic_rank_randomized(g, seed: int = 0, trials: int = 3) -> int:
    """Generic rank of the (pinned) rigidity matrix via random prime-field
    configurations; the maximum over `trials` samples."""
    if trials < 1:
        raise GraphError("trials must be >= 1")
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        config = random_configuration(g, rng)
        mat = build_rigidity_matrix(g, config, field="mod")
        best = max(best, matrix_rank(mat))
    return best


def motion_space(g: PinnedGraph, config: Configuration, field: str = "auto") -> MotionBasis:
    """Kernel basis of the pinned rigidity matrix at `config`.

    An empty basis means the framework is pinned-rigid at this configuration.
    """
    mat = build_rigidity_matrix(g, config, field=field)
    flat = matrix_kernel(mat)
    cols = mat.columns
    vectors = []
    for vec in flat:
        vectors.append({v: (vec[2 * i], vec[2 * i + 1]) for i, v in enumerate(cols)})
    return MotionBasis(vectors=tuple(vectors), field=mat.field)


def all_inner_move(g: PinnedGraph, seed: int = 0, trials: int = DEFAULT_TRIALS) -> bool:
    """Decide whether some first-order motion moves every inner vertex.

    Samples random prime-field configurations and a random combination of the
    motion basis per trial; True as soon as one combination moves all inner
    vertices (which then holds generically).  False after all trials means
    some inner vertex is generically fixed, or there is no motion at all, up
    to the sampling error bound.
    """
    if not g.inner:
        raise GraphError("graph has no inner vertices")
    rng = random.Random(seed)
    for _ in range(trials):
        config = random_configuration(g, rng)
        mat = build_rigidity_matrix(g, config, field="mod")
        basis = matrix_kernel(mat)
        if not basis:
            continue
        coeffs = [rng.randrange(1, PRIME) for _ in basis]
        ncols = mat.shape[1]
        combo = [0] * ncols
        for lam, vec in zip(coeffs, basis):
            for i, x in enumerate(vec):
                if x:
                    combo[i] = (combo[i] + lam * x) % PRIME
        if all(combo[2 * i] or combo[2 * i + 1] for i in range(len(mat.columns))):
            return True
    return False
