"""Finitely generated abelian groups, Smith normal form, and H_1 of a triangulation."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .triangulation import Triangulation, TriangulationError, edge_walk, EDGES


@dataclass(frozen=True)
class AbelianGroup:
    rank: int
    torsion: tuple = ()

    @property
    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Order of the group, or None if infinite."""
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def __str__(self):
        parts = ["Z"] * min(self.rank, 1)
        if self.rank > 1:
            parts = [f"Z^{self.rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}


def smith_diagonal(matrix, ncols=None):
    """Diagonal entries of the Smith normal form of an integer matrix.

    Returns the non-zero invariant factors ``d_1 | d_2 | ...`` (all positive).
    The input is not modified.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = ncols if ncols is not None else (len(a[0]) if a else 0)
    diag = []
    r0 = 0
    while True:
        # pick the smallest non-zero entry in the remaining block as pivot
        pivot = None
        for i in range(r0, rows):
            for j in range(r0, cols):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        a[r0], a[pi] = a[pi], a[r0]
        for row in a:
            row[r0], row[pj] = row[pj], row[r0]
        while True:
            p = a[r0][r0]
            dirty = False
            for i in range(r0 + 1, rows):
                if a[i][r0]:
                    q = a[i][r0] // p
                    if q:
                        ri, rp = a[i], a[r0]
                        for j in range(r0, cols):
                            ri[j] -= q * rp[j]
                    if a[i][r0]:
                        dirty = True
            for j in range(r0 + 1, cols):
                if a[r0][j]:
                    q = a[r0][j] // p
                    if q:
                        for i in range(r0, rows):
                            a[i][j] -= q * a[i][r0]
                    if a[r0][j]:
                        dirty = True
            if not dirty:
                # the pivot must divide the rest of the block
                bad = None
                for i in range(r0 + 1, rows):
                    for j in range(r0 + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(r0, cols):
                    a[r0][j] += a[bad][j]
                continue
            # move the smallest remaining entry of the pivot row/column up
            best = (abs(p), r0, r0)
            for i in range(r0 + 1, rows):
                if a[i][r0] and abs(a[i][r0]) < best[0]:
                    best = (abs(a[i][r0]), i, r0)
            for j in range(r0 + 1, cols):
                if a[r0][j] and abs(a[r0][j]) < best[0]:
                    best = (abs(a[r0][j]), r0, j)
            _, bi, bj = best
            if bi != r0:
                a[r0], a[bi] = a[bi], a[r0]
            if bj != r0:
                for row in a:
                    row[r0], row[bj] = row[bj], row[r0]
        diag.append(abs(a[r0][r0]))
        r0 += 1
        if r0 >= rows or r0 >= cols:
            break
    return diag


def abelian_group_from_presentation(relations, generators):
    """The group ``Z^generators / <relations>``."""
    if generators == 0:
        return AbelianGroup(0, ())
    diag = smith_diagonal(relations, generators) if relations else []
    torsion = tuple(d for d in diag if d > 1)
    return AbelianGroup(generators - len(diag), torsion)


def homology_presentation(tri: Triangulation):
    """Relation matrix for H_1 of a closed triangulation.

    Generators are the face classes whose dual edges lie outside a BFS
    spanning tree of the dual graph; there is one relation per edge class.
    """
    if not tri.is_closed:
        raise TriangulationError("first homology is only implemented for closed triangulations")
    skel = tri.skeleton
    nfaces = len(skel.face_classes)
    in_tree = [False] * nfaces
    seen = [False] * tri.tet_count
    seen[0] = True
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for f in range(4):
            j, _ = tri.gluings[i][f]
            if not seen[j]:
                seen[j] = True
                in_tree[skel.face_slot[i, f]] = True
                queue.append(j)
    gens = [k for k in range(nfaces) if not in_tree[k]]
    column = {k: c for c, k in enumerate(gens)}
    rows = []
    for members in skel.edge_classes:
        tet, e = members[0]
        a, b = EDGES[e]
        row = [0] * len(gens)
        for i, u, l, _entry, x in edge_walk(tri, tet, a, b):
            face = 6 - u - l - x
            k = skel.face_slot[i, face]
            if k in column:
                row[column[k]] += 1 if skel.face_classes[k][0] == (i, face) else -1
        rows.append(row)
    return rows, len(gens)


def first_homology(tri: Triangulation) -> AbelianGroup:
    rows, ngens = homology_presentation(tri)
    return abelian_group_from_presentation(rows, ngens)
