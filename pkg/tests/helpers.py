"""Independent oracles shared by the test modules."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import sympy
from sympy.matrices.normalforms import invariant_factors

from almostnormal import CoordSystem, matching_matrix
from almostnormal.bundled import all_fixtures
from almostnormal.triangulation import EDGES, other_corners

FIXTURES = all_fixtures()
SMALL = {k: t for k, t in FIXTURES.items() if t.tet_count <= 2}
CLOSED = {k: t for k, t in FIXTURES.items() if t.is_closed}
LENS = {
    (2, 1): "lens_2_1",
    (3, 1): "lens_3_1",
    (4, 1): "lens_4_1",
    (5, 1): "lens_5_1",
    (5, 2): "lens_5_2",
    (7, 2): "lens_7_2",
    (8, 3): "lens_8_3",
    (11, 1): "lens_11_1",
    (14, 1): "lens_14_1",
}


def cellular_h1(tri):
    """H_1 from the cellular chain complex faces -> edges -> vertices.

    Returns (rank, torsion) using sympy's invariant factors; no dual graph,
    no edge walks.
    """
    skel = tri.skeleton
    nf, ne, nv = len(skel.face_classes), len(skel.edge_classes), len(skel.vertex_classes)
    d2 = [[0] * nf for _ in range(ne)]
    for k, members in enumerate(skel.face_classes):
        i, f = members[0]
        a, b, c = other_corners(f)
        for sign, (x, y) in ((1, (b, c)), (-1, (a, c)), (1, (a, b))):
            e = EDGES.index((x, y))
            cls, rev = skel.edge_slot[i, e]
            d2[cls][k] += -sign if rev else sign
    d1 = [[0] * ne for _ in range(nv)]
    for k, members in enumerate(skel.edge_classes):
        i, e = members[0]
        a, b = EDGES[e]
        d1[skel.vertex_slot[i, b]][k] += 1
        d1[skel.vertex_slot[i, a]][k] -= 1
    m2 = sympy.Matrix(d2) if nf else sympy.zeros(ne, 0)
    m1 = sympy.Matrix(d1)
    assert (m1 * m2).is_zero_matrix
    rank1 = m1.rank()
    factors = [abs(int(x)) for x in invariant_factors(m2, domain=sympy.ZZ) if x != 0] if nf else []
    rank = ne - rank1 - len(factors)
    return rank, tuple(x for x in factors if x > 1)


def integer_decomposer(rays):
    """Membership test for non-negative integer combinations of ``rays``."""
    rays = [tuple(r) for r in rays]

    @lru_cache(maxsize=None)
    def ok(v):
        if not any(v):
            return True
        for r in rays:
            w = tuple(a - b for a, b in zip(v, r))
            if min(w) >= 0 and ok(w):
                return True
        return False

    return ok


def in_rational_cone(x, rays):
    """Exact test for x in the cone of ``rays`` (Caratheodory subsets)."""
    if not any(x):
        return True
    cand = [r for r in rays if all(x[k] or not r[k] for k in range(len(x)))]
    rank = sympy.Matrix([list(r) for r in cand]).rank() if cand else 0
    for size in range(1, rank + 1):
        for sub in combinations(cand, size):
            m = sympy.Matrix([list(r) for r in sub]).T
            if m.rank() < size:
                continue
            try:
                sol, params = m.gauss_jordan_solve(sympy.Matrix(list(x)))
            except ValueError:
                continue
            if not params and all(Fraction(str(s)) >= 0 for s in sol):
                return True
    return False


def bounded_combinations(rays, bound, eqs):
    """Constraint-satisfying non-negative integer combinations in the box."""
    zero = tuple([0] * eqs.dim)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for v in frontier:
            for r in rays:
                w = tuple(a + b for a, b in zip(v, r))
                if w not in seen and max(w) <= bound and eqs.satisfies_constraints(w):
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def rref_rows(rows):
    m = sympy.Matrix([list(r) for r in rows])
    red, _ = m.rref()
    return [tuple(int(x) for x in red.row(k)) for k in range(red.rows) if any(red.row(k))]


def system_rows(tri, system):
    return matching_matrix(tri, system).rows


ALL_SYSTEMS = list(CoordSystem)


@lru_cache(maxsize=None)
def equations(name, system):
    return matching_matrix(FIXTURES[name], system)


@lru_cache(maxsize=None)
def oracle(name, system, bound=4):
    from almostnormal import brute_force_admissible

    return frozenset(brute_force_admissible(equations(name, system), bound))


@lru_cache(maxsize=None)
def vertex_rays(name, system):
    from almostnormal import enumerate_vertex_rays

    return enumerate_vertex_rays(equations(name, system), name)


def uncovered(name, system, bound=4):
    """Oracle points that are not non-negative integer combinations of rays.

    JOINT points are mapped into quad-octagon coordinates first.
    """
    from almostnormal import from_joint

    if system is CoordSystem.JOINT:
        dec = integer_decomposer(vertex_rays(name, CoordSystem.QUAD_OCT).rays)
        return [x for x in sorted(oracle(name, system, bound)) if not dec(from_joint(x))]
    dec = integer_decomposer(vertex_rays(name, system).rays)
    return [x for x in sorted(oracle(name, system, bound)) if not dec(x)]


def extension_problems(tri, u, eps=None):
    """Reasons the extension of quad-octagon vector ``u`` breaks its contract."""
    from almostnormal import extend_to_standard, project

    an = matching_matrix(tri, CoordSystem.AN_STD)
    e = extend_to_standard(u, tri) if eps is None else eps
    out = []
    if project(e) != tuple(u):
        out.append("projection")
    if not an.in_kernel(e):
        out.append("kernel")
    for members in tri.skeleton.vertex_classes:
        if min(e[10 * i + c] for i, c in members) != 0:
            out.append("minimality")
    return out


def link_excess(tri, diff):
    """Coefficients c_k with diff = sum c_k * link_k, or None if no such form."""
    n = tri.tet_count
    if any(diff[10 * i + 4 + k] for i in range(n) for k in range(6)):
        return None
    coefs = []
    for members in tri.skeleton.vertex_classes:
        vals = {diff[10 * i + c] for i, c in members}
        if len(vals) != 1:
            return None
        coefs.append(vals.pop())
    return coefs
