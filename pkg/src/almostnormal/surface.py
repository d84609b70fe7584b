"""Surfaces from coordinate vectors.

Conversions between the 10n standard almost normal coordinates, the 6n
quad-octagon coordinates and the 3n joint coordinates; the Euler
characteristic as a linear functional; and an explicit reconstruction of the
surface as a cell complex of discs, arcs and edge points, from which the
connected components are read off.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .coords import (
    EDGES,
    CoordSystem,
    CoordVector,
    edge_weight_coefficients,
    quad_separating,
    vertex_link_vector,
)
from .triangulation import Triangulation, edge_walk, is_orientable, other_corners

AN = CoordSystem.AN_STD
QO = CoordSystem.QUAD_OCT


class SurfaceError(ValueError):
    pass


def _entries(vec, system, n=None):
    if isinstance(vec, CoordVector):
        if vec.system is not system:
            raise SurfaceError(f"expected a {system.name} vector, got {vec.system.name}")
        vec = vec.entries
    vec = tuple(int(x) for x in vec)
    if len(vec) % system.per_tet or (n is not None and len(vec) != system.dim(n)):
        raise SurfaceError(f"length {len(vec)} does not fit {system.name} coordinates")
    return vec


def project(vec) -> tuple:
    """Drop the triangle coordinates of a standard almost normal vector."""
    v = _entries(vec, AN)
    out = []
    for i in range(len(v) // 10):
        out.extend(v[10 * i + 4 : 10 * i + 10])
    return tuple(out)


def to_joint(vec) -> tuple:
    v = _entries(vec, QO)
    out = []
    for i in range(len(v) // 6):
        for m in range(3):
            q, k = v[6 * i + m], v[6 * i + 3 + m]
            if q and k:
                raise SurfaceError(
                    f"tetrahedron {i} has both quadrilateral and octagon type {m}"
                )
            out.append(q - k)
    return tuple(out)


def from_joint(vec) -> tuple:
    v = _entries(vec, CoordSystem.JOINT)
    out = []
    for i in range(len(v) // 3):
        block = v[3 * i : 3 * i + 3]
        out.extend(max(x, 0) for x in block)
        out.extend(max(-x, 0) for x in block)
    return tuple(out)


# --- the extension map ----------------------------------------------------

def _cut_terms(u6, i, f, c):
    """Quadrilateral and octagon arcs of tetrahedron i on face f cutting corner c."""
    skip = quad_separating(c, f)
    total = u6[6 * i + skip]
    for m in range(3):
        if m != skip:
            total += u6[6 * i + 3 + m]
    return total


def arrow_labels(tri: Triangulation, vec):
    """Label K on every internal link edge, with t(source) - t(target) = K.

    Keys are ``(source, target, face)`` where source and target are corner
    slots, source is the lexicographically smaller one, and ``face`` is the
    face of the source tetrahedron crossed.
    """
    u = _entries(vec, QO, tri.tet_count)
    labels = {}
    for i in range(tri.tet_count):
        for c in range(4):
            for f in other_corners(c):
                g = tri.gluings[i][f]
                if g is None:
                    continue
                j, p = g
                src, tgt = (i, c), (j, p[c])
                if (src, f) > (tgt, p[f]):
                    continue
                labels[src, tgt, f] = _cut_terms(u, j, p[f], p[c]) - _cut_terms(u, i, f, c)
    return labels


def cocycle_sums(tri: Triangulation, vec):
    """Signed label sums around each internal link vertex.

    Link vertices are edge ends; the result maps ``(edge class, end)`` with
    ``end`` 0 for the canonical lower corner and 1 for the other, to the sum
    of t(triangle) - t(next triangle) around that end.  All sums vanish
    exactly when the quad-octagon matching equations hold.
    """
    u = _entries(vec, QO, tri.tet_count)
    skel = tri.skeleton
    out = {}
    for k, members in enumerate(skel.edge_classes):
        if skel.edge_boundary[k]:
            continue
        tet, e = members[0]
        a, b = EDGES[e]
        steps = edge_walk(tri, tet, a, b)
        for end in (0, 1):
            total = 0
            for i, up, lo, _entry, x in steps:
                face = 6 - up - lo - x
                c = up if end == 0 else lo
                j, p = tri.gluings[i][face]
                total += _cut_terms(u, j, p[face], p[c]) - _cut_terms(u, i, face, c)
            out[k, end] = total
    return out


def extend_to_standard(vec, tri: Triangulation) -> tuple:
    """The link-minimal standard almost normal vector projecting to ``vec``."""
    u = _entries(vec, QO, tri.tet_count)
    if any(x < 0 for x in u):
        raise SurfaceError("extension needs a non-negative vector")
    n = tri.tet_count
    skel = tri.skeleton
    t = {}
    for members in skel.vertex_classes:
        root = members[0]
        vals = {root: 0}
        queue = deque([root])
        while queue:
            i, c = queue.popleft()
            for f in other_corners(c):
                g = tri.gluings[i][f]
                if g is None:
                    continue
                j, p = g
                nb = (j, p[c])
                # t(i,c) + cut(i,f,c) = t(j,p[c]) + cut(j,p[f],p[c])
                val = vals[i, c] + _cut_terms(u, i, f, c) - _cut_terms(u, j, p[f], p[c])
                if nb not in vals:
                    vals[nb] = val
                    queue.append(nb)
                elif vals[nb] != val:
                    raise SurfaceError(
                        "arrow labels are not a coboundary: the quad-octagon matching equations fail"
                    )
        low = min(vals.values())
        for slot, x in vals.items():
            t[slot] = x - low
    out = []
    for i in range(n):
        out.extend(t[i, c] for c in range(4))
        out.extend(u[6 * i : 6 * i + 6])
    return tuple(out)


def link_vectors(tri: Triangulation, system=AN):
    return [vertex_link_vector(tri, k, system) for k in range(len(tri.skeleton.vertex_classes))]


# --- Euler characteristic -------------------------------------------------

def edge_weights(vec, tri: Triangulation):
    """Number of times the surface meets each edge class."""
    v = _entries(vec, AN, tri.tet_count)
    out = []
    for members in tri.skeleton.edge_classes:
        i, e = members[0]
        a, b = EDGES[e]
        ts, qs, ks = edge_weight_coefficients(a, b)
        w = sum(x * v[10 * i + c] for c, x in enumerate(ts))
        w += sum(x * v[10 * i + 4 + m] for m, x in enumerate(qs))
        w += sum(x * v[10 * i + 7 + m] for m, x in enumerate(ks))
        out.append(w)
    return tuple(out)


def euler_characteristic(vec, tri: Triangulation) -> int:
    v = _entries(vec, AN, tri.tet_count)
    if any(x < 0 for x in v):
        raise SurfaceError("Euler characteristic needs a non-negative vector")
    faces = sum(v)
    verts = sum(edge_weights(v, tri))
    edges = 0
    for members in tri.skeleton.face_classes:
        i, f = members[0]
        b = 10 * i
        edges += sum(v[b + c] for c in other_corners(f))
        edges += sum(v[b + 4 : b + 7]) + 2 * sum(v[b + 7 : b + 10])
    return verts - edges + faces


def octagon_count(vec) -> int:
    v = _entries(vec, AN)
    return sum(v[10 * i + 7 + m] for i in range(len(v) // 10) for m in range(3))


# --- cell complex ---------------------------------------------------------

@dataclass
class CellComplex:
    """Discs, arcs and edge points of a reconstructed surface.

    Discs are ``(kind, tet, type, copy)`` with kind ``'t'``, ``'q'`` or
    ``'k'``.  ``arcs`` maps each arc ``(tet, face, corner, level)`` to its
    disc; ``arc_class`` sends it to a canonical representative across its
    face class, and ``arc_points`` gives the two edge points it joins.
    """

    tri: Triangulation
    vector: tuple
    discs: list = field(default_factory=list)
    arcs: dict = field(default_factory=dict)
    arc_class: dict = field(default_factory=dict)
    arc_points: dict = field(default_factory=dict)

    @property
    def is_empty(self):
        return not self.discs


def _stack_type(v, i):
    """The single non-zero quad/octagon type of a tetrahedron, if any."""
    found = None
    for kind, off in (("q", 4), ("k", 7)):
        for m in range(3):
            if v[10 * i + off + m]:
                if found is not None:
                    raise SurfaceError(
                        f"tetrahedron {i} has two quadrilateral/octagon types; "
                        "the discs cannot be embedded disjointly"
                    )
                found = (kind, m, v[10 * i + off + m])
    return found


def _corner_cut(kind, m, f, c):
    if kind == "q":
        return quad_separating(c, f) == m
    return quad_separating(c, f) != m


def build_cell_complex(vec, tri: Triangulation) -> CellComplex:
    v = _entries(vec, AN, tri.tet_count)
    if any(x < 0 for x in v):
        raise SurfaceError("cannot build a surface from a negative vector")
    n = tri.tet_count
    skel = tri.skeleton
    cx = CellComplex(tri, v)
    stacks = [_stack_type(v, i) for i in range(n)]
    for i in range(n):
        for c in range(4):
            cx.discs.extend(("t", i, c, r) for r in range(v[10 * i + c]))
        if stacks[i]:
            kind, m, cnt = stacks[i]
            cx.discs.extend((kind, i, m, r) for r in range(cnt))

    def arc_count(i, f, c):
        count = v[10 * i + c]
        st = stacks[i]
        if st and _corner_cut(st[0], st[1], f, c):
            count += st[2]
        return count

    for i in range(n):
        st = stacks[i]
        for f in range(4):
            for c in other_corners(f):
                tc = v[10 * i + c]
                for level in range(arc_count(i, f, c)):
                    if level < tc:
                        disc = ("t", i, c, level)
                    else:
                        kind, m, cnt = st
                        r = level - tc
                        if c not in (0, m + 1):
                            r = cnt - 1 - r
                        disc = (kind, i, m, r)
                    cx.arcs[i, f, c, level] = disc

    def point(i, a, b, pos_from_a):
        """Canonical identifier of an edge point given from corner a."""
        lo, hi = min(a, b), max(a, b)
        e = EDGES.index((lo, hi))
        k, rev = skel.edge_slot[i, e]
        w = arc_count_on_edge(i, lo, hi)
        pos = pos_from_a if a == lo else w - 1 - pos_from_a
        if rev:
            pos = w - 1 - pos
        return (k, pos)

    def arc_count_on_edge(i, a, b):
        ts, qs, ks = edge_weight_coefficients(a, b)
        w = v[10 * i + a] + v[10 * i + b]
        st = stacks[i]
        if st:
            coef = qs if st[0] == "q" else ks
            w += coef[st[1]] * st[2]
        return w

    for (i, f, c, level) in cx.arcs:
        ends = []
        for d in other_corners(f, c):
            ends.append(point(i, c, d, level))
        cx.arc_points[i, f, c, level] = tuple(ends)
        g = tri.gluings[i][f]
        if g is None:
            cx.arc_class[i, f, c, level] = (i, f, c, level)
            continue
        j, p = g
        if arc_count(i, f, c) != arc_count(j, p[f], p[c]):
            raise SurfaceError(
                f"arc counts differ across face {f} of tetrahedron {i}; "
                "the matching equations fail"
            )
        other = (j, p[f], p[c], level)
        cx.arc_class[i, f, c, level] = min((i, f, c, level), other)
    return cx


@dataclass(frozen=True)
class Component:
    vector: tuple
    chi: int
    octagons: int
    is_vertex_link: bool
    classification: str

    def to_json(self):
        return {
            "vector": list(self.vector),
            "chi": self.chi,
            "octagons": self.octagons,
            "vertex_link": self.is_vertex_link,
            "class": self.classification,
        }


@dataclass(frozen=True)
class SurfaceReport:
    components: tuple
    edge_weights: tuple

    @property
    def classification(self):
        if not self.components:
            return "Empty"
        return "+".join(c.classification for c in self.components)

    @property
    def chi(self):
        return sum(c.chi for c in self.components)

    def to_json(self):
        return {
            "components": [c.to_json() for c in self.components],
            "edge_weights": list(self.edge_weights),
        }


def _classify(vec, chi, octs, links, orientable):
    if not any(vec):
        return "Empty", False
    if vec in links:
        return "VertexLink", True
    if chi == 2 and octs == 0:
        return "NormalSphere", False
    if chi == 2 and octs == 1:
        return "AlmostNormalSphere", False
    if chi == 0 and orientable:
        return "Torus", False
    return f"Other({chi})", False


def components(cx: CellComplex) -> SurfaceReport:
    tri = cx.tri
    parent = {d: d for d in cx.discs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_class = {}
    for arc, cls in cx.arc_class.items():
        by_class.setdefault(cls, []).append(cx.arcs[arc])
    for ds in by_class.values():
        for d in ds[1:]:
            ra, rb = find(ds[0]), find(d)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

    groups = {}
    for d in cx.discs:
        groups.setdefault(find(d), []).append(d)
    arcs_of, points_of = {}, {}
    for arc, disc in cx.arcs.items():
        root = find(disc)
        arcs_of.setdefault(root, set()).add(cx.arc_class[arc])
        points_of.setdefault(root, set()).update(cx.arc_points[arc])

    links = {tuple(x) for x in link_vectors(tri)}
    orientable = is_orientable(tri)
    comps = []
    for root in sorted(groups):
        vec = [0] * (10 * tri.tet_count)
        octs = 0
        for kind, i, m, _ in groups[root]:
            if kind == "t":
                vec[10 * i + m] += 1
            elif kind == "q":
                vec[10 * i + 4 + m] += 1
            else:
                vec[10 * i + 7 + m] += 1
                octs += 1
        vec = tuple(vec)
        chi = len(points_of.get(root, ())) - len(arcs_of.get(root, ())) + len(groups[root])
        cls, is_link = _classify(vec, chi, octs, links, orientable)
        comps.append(Component(vec, chi, octs, is_link, cls))
    comps.sort(key=lambda c: c.vector, reverse=True)
    return SurfaceReport(tuple(comps), edge_weights(cx.vector, tri))


def surface_report(vec, tri: Triangulation) -> SurfaceReport:
    return components(build_cell_complex(vec, tri))
