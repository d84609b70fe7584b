"""
Triangulations of compact 3-manifolds given by face gluing tables.

Conventions used throughout the package:

* tetrahedron corners are labelled 0-3;
* edge ``k`` of a tetrahedron joins the corners ``EDGES[k]``, i.e. edges are
  numbered 01, 02, 03, 12, 13, 23;
* face ``f`` is the face opposite corner ``f``;
* a gluing of face ``f`` of tetrahedron ``i`` is a pair ``(j, p)`` where ``p``
  is a permutation of (0, 1, 2, 3) sending each corner of tetrahedron ``i`` to
  the corner of tetrahedron ``j`` it is identified with.  Face ``f`` is glued
  to face ``p[f]``.

Faces, edges and vertices of the triangulation are identification classes of
*slots*: ``(tet, face)``, ``(tet, edge)`` and ``(tet, corner)`` pairs.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = {}
for _k, (_a, _b) in enumerate(EDGES):
    EDGE_INDEX[_a, _b] = _k
    EDGE_INDEX[_b, _a] = _k

Perm = tuple  # 4-tuple of ints
Gluing = Optional[tuple]  # None (boundary) or (target tet, Perm)


class TriangulationError(ValueError):
    """Raised for malformed or unsupported triangulations."""


class ParseError(TriangulationError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


def perm_inverse(p):
    inv = [0] * 4
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def perm_sign(p):
    """+1 for an even permutation of (0, 1, 2, 3), -1 for an odd one."""
    sign = 1
    seen = [False] * 4
    for start in range(4):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = p[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def other_corners(*corners):
    return tuple(c for c in range(4) if c not in corners)


@dataclass(frozen=True)
class Triangulation:
    """A set of ``tet_count`` tetrahedra with some faces glued in pairs.

    ``gluings[i][f]`` is ``None`` for a boundary face, otherwise ``(j, p)``.
    The constructor checks that gluings are involutive and well formed.
    """

    tet_count: int
    gluings: tuple
    name: str = ""

    def __post_init__(self):
        n = self.tet_count
        if n < 1:
            raise TriangulationError("a triangulation needs at least one tetrahedron")
        if len(self.gluings) != n:
            raise TriangulationError(f"expected gluings for {n} tetrahedra, got {len(self.gluings)}")
        norm = []
        for i, row in enumerate(self.gluings):
            if len(row) != 4:
                raise TriangulationError(f"tetrahedron {i} must have 4 face entries")
            new_row = []
            for f, g in enumerate(row):
                if g is None:
                    new_row.append(None)
                    continue
                j, p = g
                p = tuple(int(x) for x in p)
                if not 0 <= j < n:
                    raise TriangulationError(f"face ({i},{f}) glued to tetrahedron {j} out of range")
                if sorted(p) != [0, 1, 2, 3]:
                    raise TriangulationError(f"face ({i},{f}) has invalid permutation {p}")
                if j == i and p[f] == f:
                    raise TriangulationError(f"face ({i},{f}) is glued to itself")
                new_row.append((int(j), p))
            norm.append(tuple(new_row))
        object.__setattr__(self, "gluings", tuple(norm))
        for i in range(n):
            for f in range(4):
                g = self.gluings[i][f]
                if g is None:
                    continue
                j, p = g
                back = self.gluings[j][p[f]]
                if back is None or back[0] != i or back[1] != perm_inverse(p):
                    raise TriangulationError(
                        f"gluing of face ({i},{f}) to ({j},{p[f]}) is not involutive"
                    )

    def __repr__(self):
        return f"Triangulation(n={self.tet_count}, name={self.name!r})"

    def glued(self, tet, face):
        return self.gluings[tet][face]

    @property
    def is_closed(self):
        return all(g is not None for row in self.gluings for g in row)

    @cached_property
    def skeleton(self) -> "Skeleton":
        return build_skeleton(self)

    def to_text(self):
        lines = [f"# {self.name}" if self.name else None, f"tets {self.tet_count}"]
        for i, row in enumerate(self.gluings):
            cells = []
            for g in row:
                if g is None:
                    cells.append("bdry")
                else:
                    cells.append(f"{g[0]}:{''.join(str(x) for x in g[1])}")
            lines.append(f"tet {i}: " + " ".join(cells))
        return "\n".join(line for line in lines if line is not None) + "\n"


_TET_LINE = re.compile(r"^tet\s+(\d+)\s*:\s*(.*)$")
_GLUE_TOKEN = re.compile(r"^(\d+):([0-3]{4})$")


def parse_triangulation(text, name=""):
    """Parse the plain-text gluing table format.

    ::

        # comment
        tets 1
        tet 0: 0:1230 bdry 0:0213 0:3012
    """
    n = None
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            if line.startswith("#") and not name and n is None and not rows:
                label = line[1:].strip()
                if label:
                    name = label
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "tets" or not parts[1].isdigit():
                raise ParseError("expected header 'tets <n>'", lineno, 1)
            n = int(parts[1])
            if n < 1:
                raise ParseError("tetrahedron count must be positive", lineno, 6)
            continue
        m = _TET_LINE.match(line)
        if not m:
            raise ParseError("expected 'tet <i>: <g0> <g1> <g2> <g3>'", lineno, 1)
        i = int(m.group(1))
        if i >= n:
            raise ParseError(f"tetrahedron index {i} out of range", lineno, raw.find(m.group(1)) + 1)
        if i in rows:
            raise ParseError(f"tetrahedron {i} listed twice", lineno, 1)
        tokens = m.group(2).split()
        if len(tokens) != 4:
            raise ParseError(f"expected 4 face entries, got {len(tokens)}", lineno, raw.find(":") + 2)
        row = []
        for tok in tokens:
            col = raw.find(tok) + 1
            if tok == "bdry":
                row.append(None)
                continue
            gm = _GLUE_TOKEN.match(tok)
            if not gm:
                raise ParseError(f"bad face entry {tok!r}", lineno, col)
            j = int(gm.group(1))
            p = tuple(int(c) for c in gm.group(2))
            if j >= n:
                raise ParseError(f"face glued to tetrahedron {j}, out of range", lineno, col)
            if sorted(p) != [0, 1, 2, 3]:
                raise ParseError(f"{gm.group(2)!r} is not a permutation", lineno, col)
            row.append((j, p))
        rows[i] = tuple(row)
    if n is None:
        raise ParseError("missing 'tets <n>' header")
    missing = [i for i in range(n) if i not in rows]
    if missing:
        raise ParseError(f"no gluing line for tetrahedron {missing[0]}")
    return Triangulation(n, tuple(rows[i] for i in range(n)), name)


def load_triangulation(path):
    from pathlib import Path

    path = Path(path)
    return parse_triangulation(path.read_text(encoding="ascii"), name=path.stem)


class _UnionFind:
    """Union-find over hashable slots, with a parity bit per element.

    The parity records whether an element is identified with its class
    representative "reversed"; it is only meaningful for edges.
    """

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.parity = {x: 0 for x in items}

    def find(self, x):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # path compression, accumulating parity towards the root
        acc = 0
        for y in reversed(path):
            acc ^= self.parity[y]
            self.parity[y] = acc
            self.parent[y] = root
        return root

    def parity_of(self, x):
        self.find(x)
        return self.parity[x]

    def union(self, x, y, flip=0):
        """Merge; return False if this contradicts the recorded parities."""
        rx, ry = self.find(x), self.find(y)
        px, py = self.parity[x], self.parity[y]
        if rx == ry:
            return (px ^ py) == flip
        if ry < rx:
            rx, ry, px, py = ry, rx, py, px
        # keep the lexicographically least slot as representative
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ flip
        return True


@dataclass(frozen=True)
class Skeleton:
    """Identification classes of faces, edges and vertices.

    Classes are numbered in order of their least slot.  For edges,
    ``edge_slot[(tet, e)] = (class, reversed)`` where ``reversed`` tells
    whether the slot's (low corner, high corner) orientation disagrees with the
    class's canonical orientation (that of its least slot).
    """

    face_classes: tuple
    edge_classes: tuple
    vertex_classes: tuple
    face_boundary: tuple
    edge_boundary: tuple
    vertex_boundary: tuple
    face_slot: dict = field(repr=False)
    edge_slot: dict = field(repr=False)
    vertex_slot: dict = field(repr=False)
    vertex_link_euler: tuple = ()

    @property
    def v(self):
        return len(self.vertex_classes)

    @property
    def internal_edges(self):
        return [k for k, b in enumerate(self.edge_boundary) if not b]

    @property
    def internal_faces(self):
        return [k for k, b in enumerate(self.face_boundary) if not b]

    def summary(self):
        return {
            "faces": len(self.face_classes),
            "edges": len(self.edge_classes),
            "vertices": len(self.vertex_classes),
            "boundary_faces": sum(self.face_boundary),
            "boundary_edges": sum(self.edge_boundary),
            "boundary_vertices": sum(self.vertex_boundary),
            "edge_degrees": [len(c) for c in self.edge_classes],
            "vertex_link_euler": list(self.vertex_link_euler),
        }


def _classes(uf, slots):
    groups = {}
    for s in sorted(slots):
        groups.setdefault(uf.find(s), []).append(s)
    ordered = sorted(groups.values(), key=lambda g: g[0])
    index = {}
    for k, members in enumerate(ordered):
        for s in members:
            index[s] = k
    return tuple(tuple(g) for g in ordered), index


def build_skeleton(tri: Triangulation) -> Skeleton:
    n = tri.tet_count
    face_slots = [(i, f) for i in range(n) for f in range(4)]
    edge_slots = [(i, e) for i in range(n) for e in range(6)]
    vertex_slots = [(i, c) for i in range(n) for c in range(4)]
    fuf = _UnionFind(face_slots)
    euf = _UnionFind(edge_slots)
    vuf = _UnionFind(vertex_slots)
    for i in range(n):
        for f in range(4):
            g = tri.gluings[i][f]
            if g is None:
                continue
            j, p = g
            fuf.union((i, f), (j, p[f]))
            corners = other_corners(f)
            for c in corners:
                vuf.union((i, c), (j, p[c]))
            for a_idx in range(3):
                for b_idx in range(a_idx + 1, 3):
                    a, b = corners[a_idx], corners[b_idx]
                    flip = 1 if p[a] > p[b] else 0
                    if not euf.union((i, EDGE_INDEX[a, b]), (j, EDGE_INDEX[p[a], p[b]]), flip):
                        raise TriangulationError(
                            f"edge {a}{b} of tetrahedron {i} is identified with itself in reverse"
                        )

    face_classes, face_index = _classes(fuf, face_slots)
    edge_classes, edge_index = _classes(euf, edge_slots)
    vertex_classes, vertex_index = _classes(vuf, vertex_slots)

    face_boundary = tuple(len(c) == 1 for c in face_classes)
    edge_bdry = [False] * len(edge_classes)
    vertex_bdry = [False] * len(vertex_classes)
    for i in range(n):
        for f in range(4):
            if tri.gluings[i][f] is None:
                corners = other_corners(f)
                for c in corners:
                    vertex_bdry[vertex_index[i, c]] = True
                for a_idx in range(3):
                    for b_idx in range(a_idx + 1, 3):
                        e = EDGE_INDEX[corners[a_idx], corners[b_idx]]
                        edge_bdry[edge_index[i, e]] = True

    # canonical orientation of each edge slot relative to its class
    edge_slot = {}
    for s in edge_slots:
        edge_slot[s] = (edge_index[s], bool(euf.parity_of(s)))

    skel = Skeleton(
        face_classes=face_classes,
        edge_classes=edge_classes,
        vertex_classes=vertex_classes,
        face_boundary=face_boundary,
        edge_boundary=tuple(edge_bdry),
        vertex_boundary=tuple(vertex_bdry),
        face_slot=face_index,
        edge_slot=edge_slot,
        vertex_slot=vertex_index,
    )
    eulers = []
    for k in range(len(vertex_classes)):
        link = _vertex_link(tri, skel, k)
        chi = link.euler_characteristic
        if chi == 2 and not link.has_boundary:
            pass
        elif chi == 1 and link.has_boundary:
            pass
        else:
            kind = "bounded" if link.has_boundary else "closed"
            raise TriangulationError(
                f"vertex {k} has a {kind} link with Euler characteristic {chi}; "
                "only sphere and disc links are supported"
            )
        eulers.append(chi)
    object.__setattr__(skel, "vertex_link_euler", tuple(eulers))
    return skel


@dataclass(frozen=True)
class LinkSurface:
    """Triangulated link of a vertex class.

    ``triangles`` lists corner slots ``(tet, corner)``; the link triangle of a
    slot has one side for each face of the tetrahedron containing the corner.
    ``adjacency[(slot, face)]`` gives the link triangle across that side and
    the face it is entered through, or ``None`` on the boundary.
    """

    vertex: int
    triangles: tuple
    adjacency: dict = field(repr=False)
    vertex_count: int = 0

    @property
    def edge_count(self):
        internal = sum(1 for v in self.adjacency.values() if v is not None)
        boundary = sum(1 for v in self.adjacency.values() if v is None)
        return internal // 2 + boundary

    @property
    def has_boundary(self):
        return any(v is None for v in self.adjacency.values())

    @property
    def euler_characteristic(self):
        return self.vertex_count - self.edge_count + len(self.triangles)

    def dual_edges(self):
        """Internal link edges as pairs ``((slot, face), (slot', face'))``, each once."""
        out = []
        for key in sorted(self.adjacency):
            other = self.adjacency[key]
            if other is None:
                continue
            if key <= other:
                out.append((key, other))
        return out


def _vertex_link(tri, skel, k):
    slots = skel.vertex_classes[k]
    adjacency = {}
    for i, c in slots:
        for f in other_corners(c):
            g = tri.gluings[i][f]
            adjacency[(i, c), f] = None if g is None else ((g[0], g[1][c]), g[1][f])
    # link vertices are edge ends (tet, corner at this vertex, other corner),
    # identified across glued faces
    ends = [(i, c, d) for (i, c) in slots for d in other_corners(c)]
    uf = _UnionFind(ends)
    for i, c, d in ends:
        for f in other_corners(c, d):
            g = tri.gluings[i][f]
            if g is not None:
                j, p = g
                uf.union((i, c, d), (j, p[c], p[d]))
    nverts = len({uf.find(x) for x in ends})
    return LinkSurface(vertex=k, triangles=tuple(slots), adjacency=adjacency, vertex_count=nverts)


def vertex_link(tri: Triangulation, vertex_class: int) -> LinkSurface:
    skel = tri.skeleton
    if not 0 <= vertex_class < len(skel.vertex_classes):
        raise IndexError(f"vertex class {vertex_class} out of range")
    return _vertex_link(tri, skel, vertex_class)


def is_orientable(tri: Triangulation) -> bool:
    """Two-colour tetrahedra so that every gluing reverses orientation."""
    sign = [0] * tri.tet_count
    for start in range(tri.tet_count):
        if sign[start]:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for g in tri.gluings[i]:
                if g is None:
                    continue
                j, p = g
                # an odd gluing permutation joins like-oriented tetrahedra
                want = sign[i] if perm_sign(p) < 0 else -sign[i]
                if sign[j] == 0:
                    sign[j] = want
                    queue.append(j)
                elif sign[j] != want:
                    return False
    return True


def edge_walk(tri: Triangulation, tet, a, b):
    """Walk once around the edge joining corners ``a``, ``b`` of ``tet``.

    Yields ``(tet, upper, lower, entry, exit)`` tuples, where ``upper`` and
    ``lower`` are the corners of the edge in that tetrahedron, ``entry`` is the
    third corner of the face we arrived through and ``exit`` is the third
    corner of the face we leave through.  The walk starts by leaving through
    the face opposite the smaller of the two remaining corners.  Returns
    ``None`` instead of a list if the walk hits the boundary.
    """
    c, d = other_corners(a, b)
    start = (tet, a, b, d)
    steps = []
    i, u, l, x = tet, a, b, d  # leave through the face containing x
    entry = c
    while True:
        steps.append((i, u, l, entry, x))
        face = other_corners(u, l, x)[0]
        g = tri.gluings[i][face]
        if g is None:
            return None
        j, p = g
        nu, nl, nentry = p[u], p[l], p[x]
        nx = other_corners(nu, nl, nentry)[0]
        i, u, l, x, entry = j, nu, nl, nx, nentry
        if (i, u, l, x) == start:
            return steps
        if len(steps) > 6 * tri.tet_count:
            raise TriangulationError("edge walk did not close up")
