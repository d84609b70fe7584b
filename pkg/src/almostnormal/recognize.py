"""3-sphere recognition on closed triangulations, up to the decomposition step.

The pipeline runs three checks in turn: a homology/orientability gate, a
0-efficiency test by enumeration in standard coordinates, and a search for an
octagonal almost normal 2-sphere among the quad-octagon vertex surfaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coords import CoordSystem, CoordVector, check_admissible, matching_matrix
from .dd import apply_star_filter, enumerate_vertex_rays
from .homology import first_homology
from .surface import build_cell_complex, components, extend_to_standard, project, to_joint
from .triangulation import Triangulation, TriangulationError, is_orientable


class RecognitionError(ValueError):
    pass


def _require_closed(tri):
    if not tri.is_closed:
        raise RecognitionError("this operation needs a closed triangulation")


def _pad_std(vec):
    """Standard normal coordinates as standard almost normal ones."""
    out = []
    for i in range(len(vec) // 7):
        out.extend(vec[7 * i : 7 * i + 7])
        out.extend((0, 0, 0))
    return tuple(out)


def _strip_octagons(vec):
    out = []
    for i in range(len(vec) // 10):
        out.extend(vec[10 * i : 10 * i + 7])
    return tuple(out)


@dataclass(frozen=True)
class ZeroEfficiency:
    zero_efficient: bool
    witness: tuple | None = None  # standard (7n) vector of a normal sphere
    rays_checked: int = 0

    def __str__(self):
        return "ZeroEfficient" if self.zero_efficient else f"NotZeroEfficient({list(self.witness)})"


def verify_zero_efficiency(tri: Triangulation) -> ZeroEfficiency:
    """Look for a normal 2-sphere other than a vertex link among vertex surfaces.

    A one-sided projective plane counts too, through the sphere bounding its
    regular neighbourhood (twice its vector).
    """
    _require_closed(tri)
    rays = enumerate_vertex_rays(matching_matrix(tri, CoordSystem.STD))
    for ray in rays:
        report = components(build_cell_complex(_pad_std(ray), tri))
        for comp in report.components:
            if comp.classification == "NormalSphere":
                return ZeroEfficiency(False, _strip_octagons(comp.vector), len(rays))
            if comp.chi == 1 and not comp.is_vertex_link:
                double = tuple(2 * x for x in comp.vector)
                dr = components(build_cell_complex(double, tri))
                if len(dr.components) == 1 and dr.components[0].classification == "NormalSphere":
                    return ZeroEfficiency(False, _strip_octagons(double), len(rays))
    return ZeroEfficiency(True, None, len(rays))


@dataclass(frozen=True)
class Certificate:
    quad_oct: tuple
    an_std: tuple

    @property
    def joint(self):
        return to_joint(self.quad_oct)

    def to_json(self):
        return {
            "quad_oct": list(self.quad_oct),
            "joint": list(self.joint),
            "an_std": list(self.an_std),
        }


def find_almost_normal_sphere(tri: Triangulation) -> Certificate | None:
    _require_closed(tri)
    rays = enumerate_vertex_rays(matching_matrix(tri, CoordSystem.QUAD_OCT))
    for ray in apply_star_filter(rays).almost_normal:
        report = components(build_cell_complex(extend_to_standard(ray, tri), tri))
        for comp in report.components:
            if comp.classification == "AlmostNormalSphere":
                return Certificate(project(comp.vector), comp.vector)
    return None


def verify_certificate(cert: Certificate, tri: Triangulation) -> bool:
    verdict = check_admissible(CoordVector(CoordSystem.QUAD_OCT, cert.quad_oct), tri)
    if verdict.verdict.value != "AdmissibleAlmostNormal":
        return False
    if project(cert.an_std) != cert.quad_oct:
        return False
    report = components(build_cell_complex(cert.an_std, tri))
    return (
        len(report.components) == 1
        and report.components[0].chi == 2
        and report.components[0].octagons == 1
    )


@dataclass(frozen=True)
class RecognitionOutcome:
    verdict: str  # "Sphere", "NotSphere" or "Inconclusive"
    reason: str
    certificate: Certificate | None = None
    multi_vertex: bool = False
    diagnostics: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "multi_vertex_shortcut": self.multi_vertex,
            "diagnostics": dict(self.diagnostics),
        }


def recognize_sphere(tri: Triangulation) -> RecognitionOutcome:
    _require_closed(tri)
    diag = {"vertices": tri.skeleton.v, "tet_count": tri.tet_count}
    orientable = is_orientable(tri)
    diag["orientable"] = orientable
    if not orientable:
        return RecognitionOutcome("NotSphere", "triangulation is not orientable", diagnostics=diag)
    h1 = first_homology(tri)
    diag["h1"] = str(h1)
    diag["h1_trivial"] = h1.is_trivial
    if not h1.is_trivial:
        return RecognitionOutcome("NotSphere", f"first homology is {h1}", diagnostics=diag)
    ze = verify_zero_efficiency(tri)
    diag["zero_efficient"] = ze.zero_efficient
    if not ze.zero_efficient:
        diag["normal_sphere"] = list(ze.witness)
        return RecognitionOutcome(
            "Inconclusive",
            "triangulation is not 0-efficient; it must be decomposed along a normal "
            "sphere and crushed, which this tool does not do",
            diagnostics=diag,
        )
    if tri.skeleton.v > 1:
        return RecognitionOutcome(
            "Sphere",
            "0-efficient with more than one vertex",
            multi_vertex=True,
            diagnostics=diag,
        )
    cert = find_almost_normal_sphere(tri)
    if cert is None:
        return RecognitionOutcome(
            "NotSphere", "no octagonal almost normal 2-sphere among vertex surfaces", diagnostics=diag
        )
    return RecognitionOutcome("Sphere", "octagonal almost normal 2-sphere found", cert, diagnostics=diag)


__all__ = [
    "Certificate",
    "RecognitionError",
    "RecognitionOutcome",
    "TriangulationError",
    "ZeroEfficiency",
    "find_almost_normal_sphere",
    "recognize_sphere",
    "verify_certificate",
    "verify_zero_efficiency",
]
