"""
Extreme rays of a matching-equation cone, by filtered double description.

The cone is ``{x >= 0 : A x = 0}``.  We start from the unit rays of the
non-negative orthant and intersect with one hyperplane at a time.  After each
hyperplane only rays satisfying every "at most one non-zero" group survive;
since those groups describe a union of faces of the orthant, a combination of
two rays can only satisfy them if the union of their supports does, which
lets us reject a pair before doing any arithmetic on it.

All arithmetic is on Python integers.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .coords import CoordSystem, EquationSystem, octagon_positions


class EnumerationError(ValueError):
    pass


class GuardExceeded(EnumerationError):
    pass


def primitive(vec):
    g = 0
    for x in vec:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def _zero_mask(vec):
    m = 0
    for k, x in enumerate(vec):
        if x == 0:
            m |= 1 << k
    return m


def _group_masks(eqs):
    return [sum(1 << p for p in g) for g in eqs.all_groups]


def _support_ok(support, group_masks):
    for g in group_masks:
        s = support & g
        if s & (s - 1):
            return False
    return True


@dataclass(frozen=True)
class StageStats:
    stage: int
    rays_in: int
    rays_kept: int
    pairs_tested: int
    millis: float

    def to_json(self):
        return {
            "stage": self.stage,
            "rays_in": self.rays_in,
            "rays_kept": self.rays_kept,
            "pairs_tested": self.pairs_tested,
            "millis": round(self.millis, 3),
        }


@dataclass(frozen=True)
class RaySet:
    system: CoordSystem
    tet_count: int
    rays: tuple
    stats: tuple = field(default=(), compare=False)
    name: str = ""

    def __len__(self):
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    @property
    def total_millis(self):
        return sum(s.millis for s in self.stats)

    def to_text(self):
        return "".join(" ".join(str(x) for x in r) + "\n" for r in self.rays)

    def to_json(self, timings=True):
        stats = [s.to_json() for s in self.stats]
        if not timings:
            for s in stats:
                s.pop("millis")
        return {
            "system": self.system.value,
            "tet_count": self.tet_count,
            "dim": self.system.dim(self.tet_count),
            "rays": [list(r) for r in self.rays],
            "stats": stats,
        }


class _RankTracker:
    """Incremental rank of a set of rational row vectors."""

    def __init__(self):
        self.pivots = []  # (column, row) with row[column] == 1

    def add(self, row):
        r = [Fraction(x) for x in row]
        for col, prow in self.pivots:
            if r[col]:
                f = r[col]
                r = [a - f * b for a, b in zip(r, prow)]
        for col, x in enumerate(r):
            if x:
                r = [a / x for a in r]
                self.pivots.append((col, r))
                return True
        return False

    @property
    def rank(self):
        return len(self.pivots)


def enumerate_vertex_rays(eqs: EquationSystem, name="") -> RaySet:
    """Primitive extreme rays of the cone, filtered by the constraint groups.

    JOINT equations are treated as the quadrilateral cone on the non-negative
    orthant; the joint system is not a cone and only its conversions are
    supported.
    """
    d = eqs.dim
    for row in eqs.rows:
        if len(row) != d:
            raise EnumerationError(f"row of length {len(row)} in a {d}-dimensional system")
    for g in eqs.all_groups:
        if any(not 0 <= p < d for p in g):
            raise EnumerationError("constraint group refers to a position outside the system")
    groups = _group_masks(eqs)
    full = (1 << d) - 1

    # each ray is stored as (entries, zero mask)
    rays = []
    for k in range(d):
        v = [0] * d
        v[k] = 1
        rays.append((tuple(v), full & ~(1 << k)))

    stats = []
    rank = _RankTracker()
    for stage, h in enumerate(eqs.rows):
        t0 = time.perf_counter()
        rays_in = len(rays)
        rank.add(h)
        nz = [(k, a) for k, a in enumerate(h) if a]
        zero, pos, neg = [], [], []
        for r in rays:
            val = sum(a * r[0][k] for k, a in nz)
            if val > 0:
                pos.append((r, val))
            elif val < 0:
                neg.append((r, val))
            else:
                zero.append(r)
        pairs = 0
        new = []
        if pos and neg:
            # after this stage the cone has dimension d - rank, so an edge of
            # it needs at least d - rank - 1 tight coordinates
            need = d - rank.rank - 2
            masks = [r[1] for r in rays]
            for (u, hu) in pos:
                zu = u[1]
                for (v, hv) in neg:
                    pairs += 1
                    common = zu & v[1]
                    if bin(common).count("1") < need:
                        continue
                    if not _support_ok(full & ~common, groups):
                        continue
                    adjacent = True
                    for m in masks:
                        if m & common == common and m != zu and m != v[1]:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    w = primitive([hu * b - hv * a for a, b in zip(u[0], v[0])])
                    new.append((w, _zero_mask(w)))
        rays = zero + new
        # filtering; combined pairs were already screened on their supports
        rays = [r for r in rays if _support_ok(full & ~r[1], groups)]
        stats.append(
            StageStats(stage, rays_in, len(rays), pairs, (time.perf_counter() - t0) * 1000.0)
        )
    out = tuple(sorted(set(r[0] for r in rays)))
    return RaySet(eqs.system, eqs.tet_count, out, tuple(stats), name)


@dataclass(frozen=True)
class StarPartition:
    normal: tuple
    almost_normal: tuple
    rejected: tuple


def apply_star_filter(rays: RaySet) -> StarPartition:
    """Split rays by their octagon coordinates: none, a single 1, or anything else."""
    if not rays.system.has_octagons:
        raise EnumerationError(f"{rays.system.name} rays have no octagon coordinates")

    octs = octagon_positions(rays.system, rays.tet_count)
    normal, almost, rejected = [], [], []
    for r in rays.rays:
        vals = [r[p] for p in octs if r[p]]
        if not vals:
            normal.append(r)
        elif len(vals) == 1 and vals[0] == 1:
            almost.append(r)
        else:
            rejected.append(r)
    return StarPartition(tuple(normal), tuple(almost), tuple(rejected))


def _rref(rows, d, column_order):
    """Reduced row echelon form over the rationals, pivoting in column_order.

    Returns a list of (pivot column, row) with row[pivot] == 1.
    """
    work = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r0 = 0
    for col in column_order:
        sel = next((k for k in range(r0, len(work)) if work[k][col]), None)
        if sel is None:
            continue
        work[r0], work[sel] = work[sel], work[r0]
        piv = work[r0][col]
        work[r0] = [x / piv for x in work[r0]]
        for k in range(len(work)):
            if k != r0 and work[k][col]:
                f = work[k][col]
                work[k] = [a - f * b for a, b in zip(work[k], work[r0])]
        pivots.append(col)
        r0 += 1
    return [(col, work[k]) for k, col in enumerate(pivots)]


def brute_force_admissible(eqs: EquationSystem, bound: int, node_budget: int = 10**8):
    """All integer points of the constrained cone with entries at most ``bound``.

    Entries range over ``[0, bound]``; for JOINT, over ``[-1, bound]`` with at
    most one negative entry.  The equations are put in reduced echelon form;
    free coordinates are enumerated and pivot coordinates solved for, with
    interval pruning on every echelon row.  Raises GuardExceeded once more than
    ``node_budget`` partial assignments have been visited.
    """
    if bound < 0:
        raise EnumerationError("bound must be non-negative")
    d = eqs.dim
    joint = eqs.system is CoordSystem.JOINT
    lo = -1 if joint else 0
    groups = eqs.all_groups
    constrained = sorted({p for g in groups for p in g})
    free_first = [p for p in range(d) if p not in set(constrained)]
    echelon = _rref(eqs.rows, d, free_first + constrained)
    pivot_cols = {col for col, _ in echelon}
    free = [p for p in constrained if p not in pivot_cols]
    free += [p for p in free_first if p not in pivot_cols]
    # pivot = -sum(coef * free value), kept as integer numerators over a
    # common denominator per row
    solved = []
    for col, row in echelon:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        coefs = [(f, -int(row[f] * den)) for f in free if row[f]]
        solved.append((col, den, coefs))
    nfree = len(free)
    # partial numerator range still reachable from unassigned free variables
    rest_min = [[0] * (nfree + 1) for _ in solved]
    rest_max = [[0] * (nfree + 1) for _ in solved]
    touching = [[] for _ in range(nfree)]
    for ri, (_, _, coefs) in enumerate(solved):
        cmap = dict(coefs)
        for k in range(nfree - 1, -1, -1):
            a = cmap.get(free[k], 0)
            rest_min[ri][k] = rest_min[ri][k + 1] + min(a * lo, a * bound)
            rest_max[ri][k] = rest_max[ri][k + 1] + max(a * lo, a * bound)
            if a:
                touching[k].append((ri, a))
    group_of = [[] for _ in range(d)]
    for gi, g in enumerate(groups):
        for p in g:
            group_of[p].append(gi)
    used = [0] * len(groups)
    partial = [0] * len(solved)
    vec = [0] * d
    out = set()
    nodes = 0
    negatives = 0

    def feasible(k):
        for ri, (_, den, _) in enumerate(solved):
            s = partial[ri]
            if s + rest_max[ri][k] < lo * den or s + rest_min[ri][k] > bound * den:
                return False
        return True

    def finish():
        pivots = []
        neg = negatives
        for ri, (col, den, _) in enumerate(solved):
            num = partial[ri]
            if num % den:
                return
            x = num // den
            if x < lo or x > bound:
                return
            if x < 0:
                neg += 1
                if neg > 1:
                    return
            pivots.append((col, x))
        for col, x in pivots:
            vec[col] = x
        ok = all(sum(1 for p in g if vec[p]) <= 1 for g in groups)
        if ok:
            out.add(tuple(vec))
        for col, _ in pivots:
            vec[col] = 0

    def rec(k):
        nonlocal nodes, negatives
        nodes += 1
        if nodes > node_budget:
            raise GuardExceeded(f"brute force exceeded {node_budget} nodes")
        if k == nfree:
            finish()
            return
        p = free[k]
        blocked = any(used[gi] for gi in group_of[p])
        for x in ([0] if blocked else range(lo, bound + 1)):
            if x < 0 and negatives:
                continue
            if x:
                for ri, a in touching[k]:
                    partial[ri] += a * x
                for gi in group_of[p]:
                    used[gi] += 1
                if x < 0:
                    negatives += 1
            vec[p] = x
            if feasible(k + 1):
                rec(k + 1)
            if x:
                for ri, a in touching[k]:
                    partial[ri] -= a * x
                for gi in group_of[p]:
                    used[gi] -= 1
                if x < 0:
                    negatives -= 1
        vec[p] = 0

    if feasible(0):
        rec(0)
    return out


def in_cone2(r, s, t):
    """Whether r = a*s + b*t for some rationals a, b >= 0."""
    d = len(r)
    cols = None
    for i in range(d):
        for j in range(i + 1, d):
            if s[i] * t[j] - s[j] * t[i]:
                cols = (i, j)
                break
        if cols:
            break
    if cols is None:
        return False
    i, j = cols
    det = s[i] * t[j] - s[j] * t[i]
    a = Fraction(r[i] * t[j] - r[j] * t[i], det)
    b = Fraction(s[i] * r[j] - s[j] * r[i], det)
    if a < 0 or b < 0:
        return False
    return all(a * s[k] + b * t[k] == r[k] for k in range(d))


def matrix_rank(rows):
    rt = _RankTracker()
    for r in rows:
        rt.add(r)
    return rt.rank


def is_extreme(ray, eqs: EquationSystem):
    """Rank test: the tight constraints at ``ray`` cut out a line."""
    d = eqs.dim
    tight = [tuple(1 if k == p else 0 for k in range(d)) for p in range(d) if ray[p] == 0]
    return matrix_rank(list(eqs.rows) + tight) == d - 1
