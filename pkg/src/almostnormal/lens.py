"""Layered triangulations of lens spaces.

A layered solid torus is grown from the one-tetrahedron solid torus by
repeatedly gluing a new tetrahedron onto its two boundary faces across one
boundary edge.  Each boundary edge carries a slope ``(m, w)`` in the first
homology of the boundary torus, where ``w`` is the number of times the edge
meets a meridian disc.  Folding the two boundary faces together across an
edge ``x`` kills the other diagonal ``k`` of the square formed by the
remaining two edges, which produces the lens space ``L(|w_k|, m_k)``.

The search over layering sequences is done on slopes alone; the gluings are
then realised combinatorially and checked with the skeleton and homology code.
"""
from __future__ import annotations

from collections import deque
from math import gcd

from .homology import first_homology
from .triangulation import (
    EDGE_INDEX,
    Triangulation,
    TriangulationError,
    is_orientable,
    other_corners,
)

# boundary edge slopes of the one-tetrahedron layered solid torus, in the
# order (weight 1, weight 2, weight 3)
_BASE_SLOPES = ((0, 1), (1, 2), (1, 3))


def _add(u, v, s=1):
    return (u[0] + s * v[0], u[1] + s * v[1])


def _same_curve(u, v):
    return u == v or u == (-v[0], -v[1])


def _normal(u):
    return u if (u[1], u[0]) > (0, 0) else (-u[0], -u[1])


def _diagonal(y, z, x):
    """The one of y+z, y-z that is not the edge x (up to sign)."""
    s = _add(y, z)
    return _normal(_add(y, z, -1) if _same_curve(s, x) else s)


def _q_matches(p, m, q):
    if p == 1:
        return True
    m %= p
    if gcd(m, p) != 1:
        return False
    inv = pow(m, -1, p)
    return q % p in {m, (-m) % p, inv, (-inv) % p}


def _plan(p, q, max_layers):
    """Shortest sequence of layering moves followed by a fold giving L(p,q).

    Returns ``(moves, fold)`` where each move and the fold index into the
    current slope triple.
    """
    start = (_BASE_SLOPES, ())
    queue = deque([start])
    while queue:
        slopes, moves = queue.popleft()
        for x in range(3):
            y, z = (slopes[k] for k in range(3) if k != x)
            kappa = _diagonal(y, z, slopes[x])
            if abs(kappa[1]) == p and _q_matches(p, kappa[0], q):
                return moves, x
        if len(moves) >= max_layers:
            continue
        weights = sorted(abs(s[1]) for s in slopes)
        if weights[0] > p:
            continue
        largest = max(range(3), key=lambda k: abs(slopes[k][1]))
        for x in range(3):
            if x == largest:
                continue  # layering on the longest edge undoes the last layer
            y, z = (slopes[k] for k in range(3) if k != x)
            new = list(slopes)
            new[x] = _diagonal(y, z, slopes[x])
            queue.append((tuple(new), moves + (x,)))
    return None


class _Builder:
    """A layered solid torus under construction, with boundary slopes."""

    def __init__(self):
        # faces 3 and 0 of the base tetrahedron glued with a twist
        self.gluings = [[(0, (3, 0, 1, 2)), None, None, (0, (1, 2, 3, 0))]]
        self.faces = ((0, 1), (0, 2))
        self.slopes = {}  # edge slot in faces[0] -> slope

    def triangulation(self):
        return Triangulation(len(self.gluings), tuple(tuple(r) for r in self.gluings))

    def boundary_edges(self):
        """Edge slots of the first boundary face, as (corner, corner) pairs."""
        tet, f = self.faces[0]
        cs = other_corners(f)
        return [(cs[0], cs[1]), (cs[0], cs[2]), (cs[1], cs[2])]

    def _class_of(self, skel, tet, pair):
        return skel.edge_slot[tet, EDGE_INDEX[pair]][0]

    def _matching_pair(self, skel, pair):
        """Corners in the second boundary face of the edge ``pair`` of the first."""
        (t1, _), (t2, f2) = self.faces
        k = self._class_of(skel, t1, pair)
        cs = other_corners(f2)
        for a, b in ((cs[0], cs[1]), (cs[0], cs[2]), (cs[1], cs[2])):
            if self._class_of(skel, t2, (a, b)) == k:
                return (a, b)
        raise TriangulationError("boundary is not a one-vertex torus")

    def _perms(self, src_face, dst_face, src_pair, dst_pair):
        """Perms sending src_face to dst_face and src_pair onto dst_pair."""
        out = []
        for order in (dst_pair, dst_pair[::-1]):
            perm = [None] * 4
            perm[src_face] = dst_face
            perm[src_pair[0]], perm[src_pair[1]] = order
            rest_src = [c for c in range(4) if perm[c] is None]
            rest_dst = [c for c in range(4) if c not in perm]
            if len(rest_src) != 1:
                continue
            perm[rest_src[0]] = rest_dst[0]
            out.append(tuple(perm))
        return out

    def layer(self, pair):
        """Layer a new tetrahedron across the boundary edge ``pair`` of faces[0]."""
        old = self.triangulation()
        skel = old.skeleton
        (t1, f1), (t2, f2) = self.faces
        pair2 = self._matching_pair(skel, pair)
        slope_by_class = {self._class_of(skel, t1, pr): s for pr, s in self.slopes.items()}
        x_slope = slope_by_class[self._class_of(skel, t1, pair)]
        y, z = (s for pr, s in self.slopes.items() if pr != pair)
        new_slope = _diagonal(y, z, x_slope)
        t = len(self.gluings)
        for pa in self._perms(3, f1, (0, 1), pair):
            for pb in self._perms(2, f2, (0, 1), pair2):
                gl = [list(r) for r in self.gluings]
                gl.append([None, None, (t2, pb), (t1, pa)])
                gl[t1][f1] = (t, _inv(pa))
                gl[t2][f2] = (t, _inv(pb))
                try:
                    tri = Triangulation(t + 1, tuple(tuple(r) for r in gl))
                    nskel = tri.skeleton
                except TriangulationError:
                    continue
                if not is_orientable(tri) or sum(nskel.edge_boundary) != 3:
                    continue
                cls = {self._class_of(nskel, t1, pr): s for pr, s in self.slopes.items()}
                slopes = {}
                for pr in ((1, 2), (1, 3), (2, 3)):
                    k = self._class_of(nskel, t, pr)
                    slopes[pr] = cls.get(k, new_slope)
                if sorted(slopes.values()) != sorted([y, z, new_slope]):
                    continue
                self.gluings = gl
                self.faces = ((t, 0), (t, 1))
                self.slopes = slopes
                return
        raise TriangulationError("could not layer a tetrahedron")

    def fold(self, pair, expected_order):
        skel = self.triangulation().skeleton
        (t1, f1), (t2, f2) = self.faces
        pair2 = self._matching_pair(skel, pair)
        for perm in self._perms(f1, f2, pair, pair2):
            gl = [list(r) for r in self.gluings]
            gl[t1][f1] = (t2, perm)
            gl[t2][f2] = (t1, _inv(perm))
            try:
                tri = Triangulation(len(gl), tuple(tuple(r) for r in gl))
                tri.skeleton
            except TriangulationError:
                continue
            if not is_orientable(tri):
                continue
            if first_homology(tri).order == expected_order:
                return tri
        raise TriangulationError("could not fold the boundary")


def _inv(p):
    inv = [0] * 4
    for a, b in enumerate(p):
        inv[b] = a
    return tuple(inv)


def _base_builder():
    """The base solid torus with slopes attached to its boundary edges.

    Which boundary edge carries which slope is found by folding across each
    edge in turn: the three folds give homology of order 1, 4 and 5.
    """
    b = _Builder()
    order_to_slope = {}
    for x in range(3):
        y, z = (_BASE_SLOPES[k] for k in range(3) if k != x)
        order_to_slope[abs(_diagonal(y, z, _BASE_SLOPES[x])[1])] = _BASE_SLOPES[x]
    for pair in b.boundary_edges():
        skel = b.triangulation().skeleton
        (t1, f1), (t2, f2) = b.faces
        pair2 = b._matching_pair(skel, pair)
        for perm in b._perms(f1, f2, pair, pair2):
            gl = [list(r) for r in b.gluings]
            gl[t1][f1] = (t2, perm)
            gl[t2][f2] = (t1, _inv(perm))
            try:
                tri = Triangulation(1, tuple(tuple(r) for r in gl))
                tri.skeleton
            except TriangulationError:
                continue
            if is_orientable(tri):
                b.slopes[pair] = order_to_slope[first_homology(tri).order]
                break
    if sorted(b.slopes.values()) != sorted(_BASE_SLOPES):
        raise TriangulationError("base solid torus has unexpected boundary slopes")
    return b


def make_layered_lens_space(p: int, q: int, max_layers: int | None = None) -> Triangulation:
    """A closed, orientable layered triangulation of the lens space L(p, q)."""
    if not isinstance(p, int) or not isinstance(q, int) or p < 1:
        raise ValueError(f"invalid lens space parameters ({p}, {q})")
    if p == 1:
        if q != 0:
            raise ValueError("L(1, q) requires q = 0")
    elif not (0 <= q < p) or gcd(p, q) != 1:
        raise ValueError(f"L({p},{q}) needs 0 <= q < p and gcd(p, q) = 1")
    plan = _plan(p, q, max_layers if max_layers is not None else p + 3)
    if plan is None:
        raise ValueError(f"no layering sequence found for L({p},{q})")
    moves, fold = plan
    b = _base_builder()
    seq = _slope_sequence(moves)
    for step, x in enumerate(moves):
        b.layer(_edge_with_slope(b, seq[step][x]))
    tri = b.fold(_edge_with_slope(b, seq[-1][fold]), p)
    return Triangulation(tri.tet_count, tri.gluings, f"L({p},{q})")


def _slope_sequence(moves):
    slopes = _BASE_SLOPES
    seq = [slopes]
    for x in moves:
        y, z = (slopes[k] for k in range(3) if k != x)
        new = list(slopes)
        new[x] = _diagonal(y, z, slopes[x])
        slopes = tuple(new)
        seq.append(slopes)
    return seq


def _edge_with_slope(b, slope):
    for pr, s in b.slopes.items():
        if s == slope:
            return pr
    raise TriangulationError(f"no boundary edge with slope {slope}")
