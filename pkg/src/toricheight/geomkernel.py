"""Exact convex geometry over Q^n, with one optional lifted coordinate.

Points are tuples of exact values.  All coordinates are rationals except
possibly the last one, which may be a :class:`LogLinearNumber`; every
predicate is decided exactly (certified sign for the lifted coordinate).
Supported ambient dimension is small (<= 6): hulls are built with an
incremental beneath-beyond scheme and volumes by fanning a boundary
triangulation from a vertex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exactnum import LogLinearNumber, as_fraction, value_sign

__all__ = [
    "Polytope",
    "Facet",
    "Face",
    "FaceLattice",
    "AffineCell",
    "convex_hull",
    "upper_envelope",
    "volume",
    "minkowski_sum",
    "face_lattice",
    "lattice_normalize",
    "triangulate",
    "intersect_polytopes",
]

MAX_DIMENSION = 6


# ---------------------------------------------------------------------------
# value/vector helpers


def _as_value(x):
    if isinstance(x, LogLinearNumber):
        return x.constant if x.is_rational else x
    return as_fraction(x)


def _normalize_point(p) -> tuple:
    return tuple(_as_value(x) for x in p)


def _vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _dot(a, b):
    total = Fraction(0)
    for x, y in zip(a, b):
        total = total + x * y
    return total


def _is_lifted(x) -> bool:
    return isinstance(x, LogLinearNumber) and not x.is_rational


def _det_rational(rows) -> Fraction:
    m = [[as_fraction(x) for x in r] for r in rows]
    n = len(m)
    sign = 1
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        det *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * det


def det(rows):
    """Exact determinant; at most one column may contain irrational
    log-linear entries, and it is expanded by cofactors."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    lifted_cols = [j for j in range(n) if any(_is_lifted(r[j]) for r in rows)]
    if not lifted_cols:
        return _det_rational(rows)
    if len(lifted_cols) > 1:
        raise ValueError("more than one lifted column in a determinant")
    j = lifted_cols[0]
    total = LogLinearNumber()
    for i in range(n):
        minor = [list(r[:j]) + list(r[j + 1 :]) for t, r in enumerate(rows) if t != i]
        cof = _det_rational(minor)
        if cof:
            total = total + rows[i][j] * (cof if (i + j) % 2 == 0 else -cof)
    return total


def _solve_linear(a_rows, b):
    """Solve the square rational system ``A x = b``; the right-hand side may
    hold log-linear values, so the solution lives in the same span."""
    n = len(a_rows)
    m = [list(map(as_fraction, r)) for r in a_rows]
    rhs = [_as_value(x) for x in b]
    perm = list(range(n))
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            rhs[c], rhs[piv] = rhs[piv], rhs[c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
                rhs[i] = rhs[i] - rhs[c] * f
    x = [None] * n
    for i in range(n - 1, -1, -1):
        acc = rhs[i]
        for j in range(i + 1, n):
            acc = acc - x[j] * m[i][j]
        x[i] = acc / m[i][i]
    del perm
    return x


def _rank_rational(vectors) -> int:
    rows = [list(map(as_fraction, v)) for v in vectors]
    rank = 0
    cols = len(rows[0]) if rows else 0
    pivots = []
    for v in rows:
        v = list(v)
        for col, prow in pivots:
            if v[col]:
                f = v[col]
                v = [a - f * b for a, b in zip(v, prow)]
        col = next((j for j in range(cols) if v[j] != 0), None)
        if col is None:
            continue
        inv = Fraction(1) / v[col]
        v = [a * inv for a in v]
        pivots.append((col, v))
        rank += 1
    return rank


class _AffineRank:
    """Incremental rank of vectors whose last coordinate may be irrational.

    Rational columns are eliminated with rational pivots; residual vectors
    supported on the last coordinate alone contribute at most one extra
    dimension, decided by an exact zero test.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.pivots = []  # (column, normalized row)
        self.has_residual = False

    @property
    def rank(self) -> int:
        return len(self.pivots) + (1 if self.has_residual else 0)

    def try_add(self, vec) -> bool:
        if self.dim == 0:
            return False
        v = list(vec)
        for col, row in self.pivots:
            f = v[col]
            if isinstance(f, LogLinearNumber) or f != 0:
                v = [a - f * b for a, b in zip(v, row)]
        for col in range(self.dim - 1):
            if v[col] != 0:
                inv = Fraction(1) / as_fraction(v[col])
                v = [a * inv for a in v]
                self.pivots.append((col, v))
                return True
        last = v[self.dim - 1] if self.dim else Fraction(0)
        if value_sign(last) == 0:
            return False
        if self.has_residual:
            return False
        self.has_residual = True
        # the residual acts as a pivot row on the last coordinate only when
        # it is rational; an irrational residual still blocks further ones
        if not _is_lifted(last):
            inv = Fraction(1) / as_fraction(last)
            v = [a * inv for a in v]
            self.pivots.append((self.dim - 1, v))
            self.has_residual = False
        return True


def _affine_basis(points):
    """Indices of an affinely independent spanning subset, first point first."""
    tracker = _AffineRank(len(points[0]) if points[0] else 0)
    basis = [0]
    for i in range(1, len(points)):
        if tracker.try_add(_vsub(points[i], points[0])):
            basis.append(i)
    return basis, tracker.rank


# ---------------------------------------------------------------------------
# beneath-beyond hull core (full-dimensional input)


@dataclass(frozen=True)
class _SimplicialFacet:
    ids: frozenset
    normal: tuple
    offset: object


def _hyperplane(points):
    """Outward-unoriented hyperplane through d affinely independent points
    in R^d, as (normal, offset) with normal the cofactor vector."""
    d = len(points[0])
    rows = [_vsub(p, points[0]) for p in points[1:]]
    normal = []
    for j in range(d):
        minor = [[r[k] for k in range(d) if k != j] for r in rows]
        cof = det(minor)
        normal.append(cof if j % 2 == 0 else -cof)
    normal = tuple(normal)
    return normal, _dot(normal, points[0])


def _oriented_facet(ids, points, interior):
    normal, offset = _hyperplane([points[i] for i in ids])
    s = value_sign(_dot(normal, interior) - offset)
    if s == 0:
        raise ValueError("degenerate facet")
    if s > 0:
        normal = tuple(-x for x in normal)
        offset = -offset
    return _SimplicialFacet(frozenset(ids), normal, offset)


def _hull_core(points):
    """Simplicial boundary facets of the hull of full-dimensional points."""
    d = len(points[0])
    basis, rank = _affine_basis(points)
    if rank != d:
        raise ValueError("hull core requires full-dimensional input")
    interior = tuple(
        sum((points[i][j] for i in basis), Fraction(0)) / (d + 1) for j in range(d)
    )
    facets = [
        _oriented_facet([b for t, b in enumerate(basis) if t != s], points, interior)
        for s in range(d + 1)
    ]
    basis_set = set(basis)
    for ip in range(len(points)):
        if ip in basis_set:
            continue
        p = points[ip]
        visible = [F for F in facets if value_sign(_dot(F.normal, p) - F.offset) > 0]
        if not visible:
            continue
        visible_ids = {id(F) for F in visible}
        ridge_map = {}
        for F in facets:
            for drop in F.ids:
                ridge_map.setdefault(F.ids - {drop}, []).append(F)
        new_facets = []
        for ridge, shared in ridge_map.items():
            flags = [id(F) in visible_ids for F in shared]
            if any(flags) and not all(flags):
                new_facets.append(_oriented_facet(sorted(ridge) + [ip], points, interior))
        facets = [F for F in facets if id(F) not in visible_ids] + new_facets
    return facets


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Facet:
    """Supporting halfspace ``normal . x <= offset`` with its vertex set."""

    normal: tuple
    offset: object
    vertex_ids: tuple


@dataclass(frozen=True)
class AffineCell:
    """A cell of a regular subdivision together with its affine function."""

    vertices: tuple  # extreme points of the cell (rational)
    gradient: tuple
    offset: object

    def value_at(self, x):
        return _dot(self.gradient, x) + self.offset


class _Chart:
    """Affine chart of a proper affine subspace of Q^d."""

    def __init__(self, origin, basis):
        self.origin = origin
        self.basis = basis  # r linearly independent ambient vectors

    def to_chart(self, point):
        rhs = _vsub(point, self.origin)
        cols = self.basis
        r = len(cols)
        # least-squares-free exact solve: pick r independent rows
        rows_idx = []
        tracker = _AffineRank(r + 1)
        for i in range(len(self.origin)):
            row = [cols[j][i] for j in range(r)] + [Fraction(0)]
            if tracker.try_add(row):
                rows_idx.append(i)
            if len(rows_idx) == r:
                break
        a_rows = [[cols[j][i] for j in range(r)] for i in rows_idx]
        coords = _solve_linear(a_rows, [rhs[i] for i in rows_idx])
        # consistency on the remaining rows
        for i in range(len(self.origin)):
            acc = rhs[i]
            for j in range(r):
                acc = acc - coords[j] * cols[j][i]
            if value_sign(acc) != 0:
                return None
        return tuple(coords)

    def to_ambient(self, coords):
        out = list(self.origin)
        for j, c in enumerate(coords):
            out = [x + c * b for x, b in zip(out, self.basis[j])]
        return tuple(out)

    def pullback_affine(self, gradient, offset):
        """Ambient (gradient, offset) of an affine function given in chart
        coordinates; agrees with the original on the chart's subspace."""
        r = len(self.basis)
        d = len(self.origin)
        # M = (B^T B)^{-1} B^T, so ambient gradient = M^T g = B (B^T B)^{-1} g
        bt_b = [[_dot(self.basis[i], self.basis[j]) for j in range(r)] for i in range(r)]
        y = _solve_linear(bt_b, list(gradient))
        g_amb = tuple(
            sum((y[j] * self.basis[j][i] for j in range(r)), Fraction(0)) for i in range(d)
        )
        off_amb = offset - _dot(g_amb, self.origin)
        return g_amb, off_amb


class Polytope:
    """Exact convex polytope: vertex list (extreme points only) plus
    supporting halfspaces.  Lower-dimensional rational polytopes carry an
    affine chart; lifted polytopes (last coordinate log-linear) expose
    their upper/lower graph cells."""

    def __init__(self, ambient_dim, affine_dim, vertices, facets, kind, **extra):
        self.ambient_dim = ambient_dim
        self.affine_dim = affine_dim
        self.vertices = vertices
        self.facets = facets
        self._kind = kind
        self._chart = extra.get("chart")
        self._inner = extra.get("inner")
        self._boundary = extra.get("boundary")  # simplicial boundary, point tuples
        self._upper_cells = extra.get("upper_cells")
        self._lower_cells = extra.get("lower_cells")
        self._proj = extra.get("proj")
        self._volume = None

    # -- basic protocol -------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and frozenset(self.vertices) == frozenset(other.vertices)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Polytope(ambient={self.ambient_dim}, dim={self.affine_dim}, "
            f"vertices={len(self.vertices)})"
        )

    @property
    def is_full_dimensional(self):
        return self.affine_dim == self.ambient_dim

    # -- membership ------------------------------------------------------

    def contains(self, point) -> bool:
        point = _normalize_point(point)
        if len(point) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        if self._kind == "point":
            return point == self.vertices[0]
        if self._kind == "degenerate":
            coords = self._chart.to_chart(point)
            if coords is None:
                return False
            return self._inner.contains(coords)
        return all(value_sign(_dot(F.normal, point) - F.offset) <= 0 for F in self.facets)

    # -- volume -----------------------------------------------------------

    def volume(self):
        """Exact ambient-dimensional volume; degenerate polytopes have
        volume 0 and a zero-dimensional ambient space yields 1."""
        if self._volume is None:
            if self.ambient_dim == 0:
                self._volume = Fraction(1)
            elif self.affine_dim < self.ambient_dim:
                self._volume = Fraction(0)
            else:
                anchor = min(self.vertices)
                d = self.ambient_dim
                total = Fraction(0)
                for simplex in self._boundary:
                    if anchor in simplex:
                        continue
                    dmat = [_vsub(p, anchor) for p in simplex]
                    dv = det(dmat)
                    s = value_sign(dv)
                    if s < 0:
                        dv = -dv
                    if s != 0:
                        total = total + dv
                self._volume = total / factorial(d)
        return self._volume

    # -- lifted accessors ---------------------------------------------------

    def upper_cells(self):
        if self._upper_cells is None:
            raise ValueError("not a lifted polytope")
        return self._upper_cells

    def lower_cells(self):
        if self._lower_cells is None:
            raise ValueError("not a lifted polytope")
        return self._lower_cells


# ---------------------------------------------------------------------------
# construction


def _merge_facets(points, simplicial, keep_ids):
    """Group simplicial facets by hyperplane, compute true vertex set and
    per-facet vertex lists.  All data rational."""
    d = len(points[0])
    groups = {}
    for F in simplicial:
        denoms = [as_fraction(x).denominator for x in F.normal] + [
            as_fraction(F.offset).denominator
        ]
        lcm = 1
        for q in denoms:
            lcm = lcm * q // _gcd(lcm, q)
        ints = [int(as_fraction(x) * lcm) for x in F.normal] + [int(as_fraction(F.offset) * lcm)]
        g = 0
        for z in ints:
            g = _gcd(g, abs(z))
        key = tuple(z // g for z in ints)
        groups.setdefault(key, []).append(F)
    merged = []
    for key, fs in groups.items():
        normal = tuple(Fraction(z) for z in key[:-1])
        offset = Fraction(key[-1])
        members = frozenset(
            i for i in keep_ids if _dot(normal, points[i]) == offset
        )
        merged.append((normal, offset, members))
    # vertex test: active merged normals span the ambient space
    candidates = set()
    for _, _, members in merged:
        candidates |= members
    vertex_ids = []
    for i in sorted(candidates):
        active = [normal for normal, offset, members in merged if i in members]
        if len(active) >= d and _rank_rational(active) == d:
            vertex_ids.append(i)
    return merged, vertex_ids


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _build_rational(points):
    """Polytope of deduplicated rational points (any affine dimension)."""
    d = len(points[0])
    if d == 0:
        return Polytope(0, 0, (tuple(),), (), "point")
    basis, rank = _affine_basis(points)
    if rank == 0:
        return Polytope(d, 0, (points[0],), (), "point")
    if rank < d:
        chart = _Chart(points[basis[0]], [_vsub(points[b], points[basis[0]]) for b in basis[1:]])
        inner_pts = [chart.to_chart(p) for p in points]
        inner = _build_rational(inner_pts)
        verts = tuple(chart.to_ambient(v) for v in inner.vertices)
        return Polytope(d, inner.affine_dim, verts, inner.facets, "degenerate", chart=chart, inner=inner)
    simplicial = _hull_core(points)
    merged, vertex_ids = _merge_facets(points, simplicial, range(len(points)))
    order = {pid: k for k, pid in enumerate(vertex_ids)}
    vertices = tuple(points[i] for i in vertex_ids)
    facets = tuple(
        Facet(normal, offset, tuple(sorted(order[i] for i in members if i in order)))
        for normal, offset, members in merged
    )
    boundary = tuple(tuple(points[i] for i in sorted(F.ids)) for F in simplicial)
    return Polytope(d, d, vertices, facets, "full", boundary=boundary)


def _env_cells_from_facets(points, facets, side):
    """Merged graph cells (projected) of the upper (side=+1) or lower
    (side=-1) facets of a full-dimensional lifted hull."""
    d = len(points[0])
    k = d - 1
    groups = {}
    for F in facets:
        nu_last = as_fraction(F.normal[k])
        s = (nu_last > 0) - (nu_last < 0)
        if s != side:
            continue
        gradient = tuple(-F.normal[j] / nu_last for j in range(k))
        offset = F.offset / nu_last
        groups.setdefault((gradient, offset), set()).update(F.ids)
    cells = []
    for (gradient, offset), ids in sorted(groups.items(), key=lambda kv: sorted(kv[1])):
        bases = [points[i][:k] for i in sorted(ids)]
        proj = _build_rational(_dedup(bases))
        cells.append(AffineCell(proj.vertices, gradient, offset))
    return cells


def _dedup(points):
    seen = set()
    out = []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _flat_affine(points):
    """Affine function through lifted points lying on one non-vertical
    hyperplane; bases must span the base space."""
    k = len(points[0]) - 1
    bases = [p[:k] for p in points]
    tracker = _AffineRank(k) if k else None
    chosen = [0]
    for i in range(1, len(points)):
        if k == 0:
            break
        if tracker.try_add(_vsub(bases[i], bases[0])):
            chosen.append(i)
    rows = [list(bases[i]) + [Fraction(1)] for i in chosen]
    rhs = [points[i][k] for i in chosen]
    sol = _solve_linear(rows, rhs)
    return tuple(sol[:k]), sol[k]


def _build_lifted(points):
    """Polytope of deduplicated points whose last coordinate is lifted.

    The base projections must span their space; the hull is either the
    graph of a single affine function (flat) or full-dimensional.
    """
    d = len(points[0])
    k = d - 1
    bases = _dedup([p[:k] for p in points])
    proj = _build_rational(bases)
    if proj.affine_dim < k:
        raise ValueError("lifted hull over a degenerate projection is unsupported")
    if k == 0:
        lifts = [p[0] for p in points]
        lo = min(lifts)
        hi = max(lifts)
        if value_sign(hi - lo) == 0:
            cell = AffineCell((tuple(),), (), lo)
            return Polytope(
                1, 0, ((lo,),), (Facet((Fraction(1),), lo, (0,)), Facet((Fraction(-1),), -lo, (0,))),
                "lifted-flat", upper_cells=(cell,), lower_cells=(cell,), proj=proj,
            )
        up = AffineCell((tuple(),), (), hi)
        down = AffineCell((tuple(),), (), lo)
        verts = ((lo,), (hi,))
        facets = (Facet((Fraction(1),), hi, (1,)), Facet((Fraction(-1),), -lo, (0,)))
        boundary = (((hi,),), ((lo,),))
        return Polytope(
            1, 1, verts, facets, "lifted-full",
            upper_cells=(up,), lower_cells=(down,), proj=proj, boundary=boundary,
        )
    tracker = _AffineRank(d)
    for p in points[1:]:
        tracker.try_add(_vsub(p, points[0]))
    rank = tracker.rank
    if rank == k:
        gradient, offset = _flat_affine(points)
        cell = AffineCell(proj.vertices, gradient, offset)
        verts = tuple((*b, cell.value_at(b)) for b in proj.vertices)
        facets = _lifted_facets([cell], [cell], proj, verts)
        return Polytope(
            d, k, verts, facets, "lifted-flat",
            upper_cells=(cell,), lower_cells=(cell,), proj=proj,
        )
    simplicial = _hull_core(points)
    upper = _env_cells_from_facets(points, simplicial, +1)
    lower = _env_cells_from_facets(points, simplicial, -1)
    vset = []
    for cell in upper:
        for b in cell.vertices:
            vset.append((*b, cell.value_at(b)))
    for cell in lower:
        for b in cell.vertices:
            vset.append((*b, cell.value_at(b)))
    verts = tuple(sorted(_dedup(vset)))
    facets = _lifted_facets(upper, lower, proj, verts)
    boundary = tuple(tuple(points[i] for i in sorted(F.ids)) for F in simplicial)
    return Polytope(
        d, d, verts, facets, "lifted-full",
        upper_cells=tuple(upper), lower_cells=tuple(lower), proj=proj, boundary=boundary,
    )


def _lifted_facets(upper, lower, proj, vertices):
    """Supporting halfspaces of a lifted polytope: one per graph cell plus
    the vertical extensions of the projection's facets."""
    k = proj.ambient_dim
    facets = []

    def saturating(normal, offset):
        return tuple(
            i for i, v in enumerate(vertices) if value_sign(_dot(normal, v) - offset) == 0
        )

    for cell in upper:
        normal = tuple(-g for g in cell.gradient) + (Fraction(1),)
        facets.append(Facet(normal, cell.offset, saturating(normal, cell.offset)))
    for cell in lower:
        normal = tuple(cell.gradient) + (Fraction(-1),)
        facets.append(Facet(normal, -cell.offset, saturating(normal, -cell.offset)))
    proj_facets = proj.facets if proj.affine_dim == k else ()
    for F in proj_facets:
        normal = tuple(F.normal) + (Fraction(0),)
        facets.append(Facet(normal, F.offset, saturating(normal, F.offset)))
    return tuple(facets)


def convex_hull(points) -> Polytope:
    """Exact convex hull.  Handles lower-dimensional rational input via an
    affine chart; lifted input (log-linear last coordinate) must project
    onto a full-dimensional rational configuration."""
    pts = [_normalize_point(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("dimension mismatch")
    for p in pts:
        if any(_is_lifted(x) for x in p[: d - 1]):
            raise ValueError("only the last coordinate may be lifted")
    pts = _dedup(pts)
    if d == 0:
        return Polytope(0, 0, (tuple(),), (), "point")
    lifted = any(_is_lifted(p[-1]) for p in pts)
    if d > MAX_DIMENSION + (1 if lifted else 0):
        raise ValueError(f"ambient dimension {d} exceeds the supported bound")
    if lifted:
        return _build_lifted(pts)
    return _build_rational(sorted(pts))


def upper_envelope(points) -> list[AffineCell]:
    """Regular subdivision induced by the upper envelope of lifted points.

    ``points`` are ``(base, lift)`` pairs; the returned cells partition the
    hull of the bases and carry the affine function of the envelope piece,
    all in the bases' ambient coordinates.
    """
    gens = []
    for base, lift in points:
        gens.append((tuple(as_fraction(x) for x in base), _as_value(lift)))
    gens = _dedup(gens)
    if not gens:
        raise ValueError("need at least one point")
    k = len(gens[0][0])
    bases = _dedup([g[0] for g in gens])
    basis, rank = _affine_basis(bases) if k else ([0], 0)
    if rank == 0:
        best = gens[0][1]
        for _, lift in gens[1:]:
            if value_sign(lift - best) > 0:
                best = lift
        return [AffineCell((bases[0],), tuple(Fraction(0) for _ in range(k)), best)]
    chart = None
    if rank < k:
        origin = bases[basis[0]]
        chart = _Chart(origin, [_vsub(bases[b], origin) for b in basis[1:]])
        gens = [(chart.to_chart(b), lift) for b, lift in gens]
    hull = _build_lifted([(*b, lift) for b, lift in gens])
    cells = list(hull.upper_cells())
    if chart is not None:
        out = []
        for cell in cells:
            g_amb, off_amb = chart.pullback_affine(cell.gradient, cell.offset)
            out.append(
                AffineCell(tuple(chart.to_ambient(v) for v in cell.vertices), g_amb, off_amb)
            )
        cells = out
    return cells


def volume(p: Polytope):
    """Exact ambient-dimensional volume of a polytope."""
    return p.volume()


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    if p.ambient_dim != q.ambient_dim:
        raise ValueError("dimension mismatch")
    return convex_hull([_vadd(a, b) for a in p.vertices for b in q.vertices])


def triangulate(p: Polytope):
    """Full-dimensional simplices (as vertex tuples) partitioning p, fanned
    from the lexicographically least vertex."""
    if p.ambient_dim == 0 or p.affine_dim < p.ambient_dim:
        raise ValueError("triangulate needs a full-dimensional polytope")
    anchor = min(p.vertices)
    out = []
    for simplex in p._boundary:
        if anchor in simplex:
            continue
        if value_sign(det([_vsub(q, anchor) for q in simplex])) != 0:
            out.append((anchor,) + simplex)
    if not out:
        raise ValueError("empty triangulation")
    return out


# ---------------------------------------------------------------------------
# face lattice


@dataclass(frozen=True)
class Face:
    dim: int
    vertex_ids: frozenset


class FaceLattice:
    """All faces of a rational polytope, generated by intersecting facet
    vertex sets; the empty face is excluded and the polytope is the top."""

    def __init__(self, polytope: Polytope):
        if polytope._kind in ("lifted-full", "lifted-flat"):
            raise ValueError("face lattice is only supported for rational polytopes")
        self.polytope = polytope
        base = polytope._inner if polytope._kind == "degenerate" else polytope
        n = len(polytope.vertices)
        sets = {frozenset(F.vertex_ids) for F in base.facets}
        sets.add(frozenset(range(n)))
        changed = True
        while changed:
            changed = False
            for a, b in itertools.combinations(list(sets), 2):
                c = a & b
                if c and c not in sets:
                    sets.add(c)
                    changed = True
        faces = []
        for ids in sets:
            pts = [polytope.vertices[i] for i in sorted(ids)]
            if len(pts) == 1:
                dim = 0
            else:
                tracker = _AffineRank(polytope.ambient_dim)
                for q in pts[1:]:
                    tracker.try_add(_vsub(q, pts[0]))
                dim = tracker.rank
            faces.append(Face(dim, frozenset(ids)))
        self.faces = sorted(faces, key=lambda f: (f.dim, sorted(f.vertex_ids)))
        self._poly_cache = {}

    def faces_of_dim(self, d: int):
        return [f for f in self.faces if f.dim == d]

    @property
    def top(self) -> Face:
        return self.faces[-1]

    @staticmethod
    def leq(f: Face, g: Face) -> bool:
        return f.vertex_ids <= g.vertex_ids

    def face_polytope(self, face: Face) -> Polytope:
        if face not in self._poly_cache:
            self._poly_cache[face] = convex_hull(
                [self.polytope.vertices[i] for i in sorted(face.vertex_ids)]
            )
        return self._poly_cache[face]


def face_lattice(p: Polytope) -> FaceLattice:
    return FaceLattice(p)


# ---------------------------------------------------------------------------
# polytope intersection (used for common refinements, dimension <= 3)


def intersect_polytopes(p: Polytope, q: Polytope):
    """Intersection of two full-dimensional rational polytopes, or None if
    it is empty.  Vertices are enumerated from the joint halfspace system,
    which keeps this practical only in low dimension."""
    d = p.ambient_dim
    if d != q.ambient_dim:
        raise ValueError("dimension mismatch")
    if d > 3:
        raise ValueError("intersection supported only up to dimension 3")
    if not (p.is_full_dimensional and q.is_full_dimensional):
        raise ValueError("intersection needs full-dimensional operands")
    constraints = [(F.normal, F.offset) for F in p.facets] + [
        (F.normal, F.offset) for F in q.facets
    ]
    candidates = []
    for subset in itertools.combinations(range(len(constraints)), d):
        rows = [constraints[i][0] for i in subset]
        if _rank_rational(rows) != d:
            continue
        x = _solve_linear(rows, [constraints[i][1] for i in subset])
        x = tuple(x)
        if all(_dot(n, x) <= o for n, o in constraints):
            candidates.append(x)
    candidates = _dedup(candidates)
    if not candidates:
        return None
    return convex_hull(candidates)


# ---------------------------------------------------------------------------
# integer lattice normalization


def _integer_row_hnf(rows):
    """Row-style Hermite normal form basis of the row lattice: echelon rows
    with positive pivots and reduced entries above each pivot."""
    m = [list(map(int, r)) for r in rows]
    if not m:
        return []
    n_cols = len(m[0])
    pr = 0
    pivots = []
    for col in range(n_cols):
        while True:
            nz = [i for i in range(pr, len(m)) if m[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][col]))
            m[pr], m[i0] = m[i0], m[pr]
            done = True
            for i in range(pr + 1, len(m)):
                if m[i][col] != 0:
                    f = m[i][col] // m[pr][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
                    if m[i][col] != 0:
                        done = False
            if done:
                break
        if pr < len(m) and m[pr][col] != 0:
            if m[pr][col] < 0:
                m[pr] = [-a for a in m[pr]]
            for i in range(pr):
                f = m[i][col] // m[pr][col]
                if f:
                    m[i] = [a - f * b for a, b in zip(m[i], m[pr])]
            pivots.append(col)
            pr += 1
    return [m[i] for i in range(pr)], pivots


def lattice_normalize(vectors):
    """Coordinates of integer vectors in a basis of their difference lattice.

    Returns ``(B, r, basis)`` where ``basis`` is a Hermite-form basis of the
    lattice generated by the differences ``a_i - a_0``, ``r`` its rank, and
    ``B`` the coordinate vectors of the differences, which generate Z^r.
    """
    vecs = [tuple(int(x) for x in v) for v in vectors]
    if not vecs:
        raise ValueError("need at least one vector")
    a0 = vecs[0]
    diffs = [tuple(x - y for x, y in zip(v, a0)) for v in vecs]
    basis, pivots = _integer_row_hnf(diffs)
    r = len(basis)
    coords = []
    for dvec in diffs:
        d = list(dvec)
        x = [0] * r
        for i, col in enumerate(pivots):
            q, rem = divmod(d[col], basis[i][col])
            if rem:
                raise ArithmeticError("difference not in the computed lattice")
            x[i] = q
            d = [a - q * b for a, b in zip(d, basis[i])]
        if any(d):
            raise ArithmeticError("difference not in the computed lattice")
        coords.append(tuple(x))
    return coords, r, tuple(tuple(row) for row in basis)
