"""Disc types, coordinate systems and matching equations.

Within one tetrahedron:

* triangle type ``c`` cuts off corner ``c``;
* quadrilateral type ``m`` (0, 1, 2) separates corners ``{0, m+1}`` from the
  other two, so it never meets the edges ``0(m+1)`` and the opposite edge;
* octagon type ``m`` meets each of those two edges twice and the remaining
  four edges once.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .triangulation import EDGES, Triangulation, edge_walk, other_corners


class CoordSystem(enum.Enum):
    STD = "std"
    QUAD = "quad"
    AN_STD = "an-std"
    QUAD_OCT = "quad-oct"
    JOINT = "joint"

    @property
    def per_tet(self):
        return _PER_TET[self]

    def dim(self, n):
        return self.per_tet * n

    @property
    def has_octagons(self):
        return self in (CoordSystem.AN_STD, CoordSystem.QUAD_OCT)

    @property
    def has_triangles(self):
        return self in (CoordSystem.STD, CoordSystem.AN_STD)

    @classmethod
    def parse(cls, text):
        text = text.strip().lower().replace("_", "-")
        for s in cls:
            if s.value == text:
                return s
        raise ValueError(f"unknown coordinate system {text!r}")


_PER_TET = {
    CoordSystem.STD: 7,
    CoordSystem.QUAD: 3,
    CoordSystem.AN_STD: 10,
    CoordSystem.QUAD_OCT: 6,
    CoordSystem.JOINT: 3,
}


def quad_separating(a, b):
    """The quadrilateral type separating corners {a, b} from the other two."""
    if a == b:
        raise ValueError("corners must differ")
    if 0 in (a, b):
        return a + b - 1
    return 6 - a - b - 1


def quad_edges(m):
    """The two edges (as corner pairs) never met by quadrilateral type m."""
    pair = (0, m + 1)
    return pair, other_corners(*pair)


def octagon_corners_on_face(m, f):
    """Corners of face f cut off by the two arcs of octagon type m."""
    return tuple(c for c in other_corners(f) if quad_separating(c, f) != m)


def edge_weight_coefficients(a, b):
    """Times each disc type of one tetrahedron meets the edge joining a and b.

    Returns ``(triangles, quads, octagons)`` as 4-, 3- and 3-tuples.
    """
    tri = tuple(1 if c in (a, b) else 0 for c in range(4))
    skip = quad_separating(a, b)
    quads = tuple(0 if m == skip else 1 for m in range(3))
    octs = tuple(2 if m == skip else 1 for m in range(3))
    return tri, quads, octs


# positions within one tetrahedron's block

def tri_pos(system, i, c):
    return system.per_tet * i + c


def quad_pos(system, i, m):
    if system.has_triangles:
        return system.per_tet * i + 4 + m
    return system.per_tet * i + m


def oct_pos(system, i, m):
    if system is CoordSystem.AN_STD:
        return 10 * i + 7 + m
    if system is CoordSystem.QUAD_OCT:
        return 6 * i + 3 + m
    raise ValueError(f"{system.name} has no octagon coordinates")


def octagon_positions(system, n):
    if not system.has_octagons:
        return ()
    return tuple(oct_pos(system, i, m) for i in range(n) for m in range(3))


def triangle_positions(system, n):
    if not system.has_triangles:
        return ()
    return tuple(tri_pos(system, i, c) for i in range(n) for c in range(4))


@dataclass(frozen=True)
class CoordVector:
    system: CoordSystem
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))
        if len(self.entries) % self.system.per_tet:
            raise ValueError(
                f"length {len(self.entries)} is not a multiple of {self.system.per_tet}"
            )

    @property
    def tet_count(self):
        return len(self.entries) // self.system.per_tet

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]


@dataclass(frozen=True)
class EquationSystem:
    """Matching equations plus "at most one non-zero" constraint groups."""

    system: CoordSystem
    tet_count: int
    rows: tuple
    provenance: tuple
    constraint_groups: tuple
    global_octagon_group: tuple | None = None

    @property
    def dim(self):
        return self.system.dim(self.tet_count)

    @property
    def all_groups(self):
        groups = list(self.constraint_groups)
        if self.global_octagon_group:
            groups.append(self.global_octagon_group)
        return groups

    def evaluate(self, vec):
        return [sum(a * x for a, x in zip(row, vec) if a) for row in self.rows]

    def in_kernel(self, vec):
        return all(v == 0 for v in self.evaluate(vec))

    def satisfies_constraints(self, vec):
        return all(sum(1 for p in g if vec[p]) <= 1 for g in self.all_groups)

    def to_text(self):
        return "\n".join(" ".join(str(a) for a in row) for row in self.rows) + ("\n" if self.rows else "")

    def to_json(self):
        return {
            "system": self.system.value,
            "tet_count": self.tet_count,
            "dim": self.dim,
            "rows": [list(r) for r in self.rows],
            "provenance": [list(p) if isinstance(p, tuple) else p for p in self.provenance],
            "constraint_groups": [list(g) for g in self.constraint_groups],
            "global_octagon_group": list(self.global_octagon_group) if self.global_octagon_group else None,
        }


def constraint_sets(tri_or_n, system: CoordSystem):
    """Local constraint groups and the global octagon group (or None)."""
    n = tri_or_n if isinstance(tri_or_n, int) else tri_or_n.tet_count
    groups = []
    for i in range(n):
        g = [quad_pos(system, i, m) for m in range(3)]
        if system.has_octagons:
            g += [oct_pos(system, i, m) for m in range(3)]
        groups.append(tuple(g))
    glob = octagon_positions(system, n) if system.has_octagons else None
    return tuple(groups), glob


def _arc_terms(system, i, f, c):
    """Disc coordinates of tetrahedron i giving arcs on face f around corner c."""
    terms = [tri_pos(system, i, c), quad_pos(system, i, quad_separating(c, f))]
    if system.has_octagons:
        skip = quad_separating(c, f)
        terms += [oct_pos(system, i, m) for m in range(3) if m != skip]
    return terms


def _standard_rows(tri, system):
    skel = tri.skeleton
    dim = system.dim(tri.tet_count)
    rows, prov = [], []
    for k, members in enumerate(skel.face_classes):
        if len(members) != 2:
            continue
        i, f = members[0]
        j, p = tri.gluings[i][f]
        g = p[f]
        for c in other_corners(f):
            row = [0] * dim
            for pos in _arc_terms(system, i, f, c):
                row[pos] += 1
            for pos in _arc_terms(system, j, g, p[c]):
                row[pos] -= 1
            rows.append(tuple(row))
            prov.append(("face", k, c))
    return rows, prov


def edge_row_terms(tri, edge_class):
    """Signed quadrilateral and octagon types around an internal edge class.

    Returns a list of ``(tet, up_quad, down_quad)`` in walk order, or None for
    a boundary edge.
    """
    skel = tri.skeleton
    if skel.edge_boundary[edge_class]:
        return None
    tet, e = skel.edge_classes[edge_class][0]
    a, b = EDGES[e]
    out = []
    for i, u, l, entry, ex in edge_walk(tri, tet, a, b):
        out.append((i, quad_separating(u, entry), quad_separating(u, ex)))
    return out


def _quad_rows(tri, system):
    skel = tri.skeleton
    n = tri.tet_count
    base = CoordSystem.QUAD if system is CoordSystem.JOINT else system
    rows, prov = [], []
    for k in range(len(skel.edge_classes)):
        terms = edge_row_terms(tri, k)
        if terms is None:
            continue
        row = [0] * base.dim(n)
        for i, up, down in terms:
            row[quad_pos(base, i, up)] += 1
            row[quad_pos(base, i, down)] -= 1
            if base.has_octagons:
                # octagon "up" and "down" are swapped relative to the quads
                row[oct_pos(base, i, down)] += 1
                row[oct_pos(base, i, up)] -= 1
        rows.append(tuple(row))
        prov.append(("edge", k))
    return rows, prov


def matching_matrix(tri: Triangulation, system: CoordSystem) -> EquationSystem:
    if system.has_triangles:
        rows, prov = _standard_rows(tri, system)
    else:
        rows, prov = _quad_rows(tri, system)
    groups, glob = constraint_sets(tri, system)
    return EquationSystem(system, tri.tet_count, tuple(rows), tuple(prov), groups, glob)


def vertex_link_vector(tri: Triangulation, vertex_class: int, system=CoordSystem.STD):
    """Standard vector of the vertex link: one triangle per corner slot."""
    vec = [0] * system.dim(tri.tet_count)
    for i, c in tri.skeleton.vertex_classes[vertex_class]:
        vec[tri_pos(system, i, c)] += 1
    return tuple(vec)


class Verdict(enum.Enum):
    ADMISSIBLE_NORMAL = "AdmissibleNormal"
    ADMISSIBLE_ALMOST_NORMAL = "AdmissibleAlmostNormal"
    INADMISSIBLE = "Inadmissible"


@dataclass(frozen=True)
class Admissibility:
    verdict: Verdict
    reason: str = ""

    @property
    def admissible(self):
        return self.verdict is not Verdict.INADMISSIBLE

    def __str__(self):
        if self.reason:
            return f"{self.verdict.value}({self.reason})"
        return self.verdict.value


def _bad(reason):
    return Admissibility(Verdict.INADMISSIBLE, reason)


def check_admissible(vec: CoordVector, tri: Triangulation, eqs: EquationSystem | None = None) -> Admissibility:
    system = vec.system
    n = tri.tet_count
    if len(vec) != system.dim(n):
        raise ValueError(
            f"{system.name} vector of length {len(vec)} does not fit {n} tetrahedra"
        )
    eqs = eqs or matching_matrix(tri, system)
    entries = vec.entries
    negatives = [x for x in entries if x < 0]
    if system is CoordSystem.JOINT:
        if len(negatives) > 1:
            return _bad("more than one negative coordinate")
        if negatives and negatives[0] != -1:
            return _bad("negative coordinate is not -1")
    elif negatives:
        return _bad("negative coordinate")
    if not eqs.in_kernel(entries):
        return _bad("matching equations fail")
    for g in eqs.constraint_groups:
        if sum(1 for p in g if entries[p]) > 1:
            return _bad(f"tetrahedron {g[0] // system.per_tet} has two non-zero quad/octagon types")
    if system is CoordSystem.JOINT:
        if negatives:
            return Admissibility(Verdict.ADMISSIBLE_ALMOST_NORMAL)
        return Admissibility(Verdict.ADMISSIBLE_NORMAL)
    if system.has_octagons:
        octs = [entries[p] for p in eqs.global_octagon_group if entries[p]]
        if len(octs) > 1:
            return _bad("more than one non-zero octagon coordinate")
        if octs:
            if octs[0] != 1:
                return _bad("octagon coordinate is not 1")
            return Admissibility(Verdict.ADMISSIBLE_ALMOST_NORMAL)
    return Admissibility(Verdict.ADMISSIBLE_NORMAL)


def as_vector(system: CoordSystem, entries: Sequence[int]) -> CoordVector:
    return CoordVector(system, tuple(entries))
