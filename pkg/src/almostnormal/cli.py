"""Command-line interface: ``almostnormal <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bundled
from .coords import CoordSystem, matching_matrix
from .dd import EnumerationError, apply_star_filter, brute_force_admissible, enumerate_vertex_rays
from .homology import first_homology
from .lens import make_layered_lens_space
from .recognize import RecognitionError, recognize_sphere
from .surface import SurfaceError, build_cell_complex, components, extend_to_standard, surface_report
from .triangulation import (
    Triangulation,
    TriangulationError,
    is_orientable,
    parse_triangulation,
)

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2

BENCH_NOTE = (
    "census homology spheres are not bundled; layered lens-space "
    "triangulations of comparable size stand in for them"
)


class InputError(Exception):
    """File could not be read or parsed."""


def load_input(path) -> Triangulation:
    """Read a triangulation file, or a bundled fixture by name."""
    p = Path(path)
    if p.exists():
        try:
            text = p.read_text(encoding="ascii")
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        name = p.stem
    elif str(path) in bundled.fixture_names():
        text = bundled.fixture_text(str(path))
        name = str(path)
    else:
        raise InputError(f"no such file or bundled triangulation: {path}")
    try:
        return parse_triangulation(text, name=name)
    except TriangulationError as exc:
        raise InputError(f"{path}: {exc}") from exc


def dumps(doc) -> str:
    doc = dict(doc)
    doc["format_version"] = FORMAT_VERSION
    return json.dumps(doc, sort_keys=True, indent=2)


def _fmt(vec):
    return "(" + ", ".join(str(x) for x in vec) + ")"


# --- commands ---------------------------------------------------------------

def cmd_info(tri, args):
    skel = tri.skeleton
    doc = {
        "name": tri.name,
        "tet_count": tri.tet_count,
        "closed": tri.is_closed,
        "orientable": is_orientable(tri),
        "skeleton": skel.summary(),
    }
    if tri.is_closed:
        doc["h1"] = first_homology(tri).to_json()
    if args.json:
        return dumps(doc)
    lines = [
        f"{tri.name or 'triangulation'}: {tri.tet_count} tetrahedra",
        f"  closed: {'yes' if tri.is_closed else 'no'}",
        f"  orientable: {'yes' if doc['orientable'] else 'no'}",
        f"  faces: {len(skel.face_classes)}  edges: {len(skel.edge_classes)}  vertices: {skel.v}",
        f"  edge degrees: {' '.join(str(len(c)) for c in skel.edge_classes)}",
        f"  vertex links (Euler characteristic): {' '.join(str(x) for x in skel.vertex_link_euler)}",
    ]
    if tri.is_closed:
        lines.append(f"  H1: {first_homology(tri)}")
    return "\n".join(lines)


def cmd_equations(tri, args):
    eqs = matching_matrix(tri, args.system)
    if args.json:
        return dumps({"name": tri.name, "equations": eqs.to_json()})
    head = f"{len(eqs.rows)} matching equations in {args.system.value} coordinates (dimension {eqs.dim})"
    return head + "\n" + eqs.to_text().rstrip("\n")


def cmd_enumerate(tri, args):
    eqs = matching_matrix(tri, args.system)
    rays = enumerate_vertex_rays(eqs, name=tri.name)
    doc = {"name": tri.name, "rays": rays.to_json()}
    oracle = None
    if args.bound is not None:
        oracle = sorted(brute_force_admissible(eqs, args.bound))
        doc["oracle"] = {"bound": args.bound, "points": [list(v) for v in oracle]}
    if args.system.has_octagons:
        part = apply_star_filter(rays)
        doc["star"] = {
            "normal": [list(r) for r in part.normal],
            "almost_normal": [list(r) for r in part.almost_normal],
            "rejected": [list(r) for r in part.rejected],
        }
    if args.json:
        return dumps(doc)
    lines = [f"{len(rays)} vertex rays in {args.system.value} coordinates"]
    lines += [" ".join(str(x) for x in r) for r in rays.rays]
    if oracle is not None:
        lines.append(f"{len(oracle)} admissible points with entries at most {args.bound}")
        lines += [" ".join(str(x) for x in v) for v in oracle]
    return "\n".join(lines)


def _standard_for(tri, system, ray):
    """The standard almost normal vector of a ray in any system."""
    n = tri.tet_count
    if system is CoordSystem.AN_STD:
        return tuple(ray)
    if system is CoordSystem.STD:
        out = []
        for i in range(n):
            out.extend(ray[7 * i : 7 * i + 7])
            out.extend((0, 0, 0))
        return tuple(out)
    if system is CoordSystem.QUAD_OCT:
        return extend_to_standard(ray, tri)
    qo = []
    for i in range(n):
        qo.extend(ray[3 * i : 3 * i + 3])
        qo.extend((0, 0, 0))
    return extend_to_standard(qo, tri)


def cmd_surfaces(tri, args):
    eqs = matching_matrix(tri, args.system)
    rays = enumerate_vertex_rays(eqs, name=tri.name)
    reports = []
    for ray in rays.rays:
        std = _standard_for(tri, args.system, ray)
        try:
            rep = surface_report(std, tri)
            reports.append({"ray": list(ray), "standard": list(std), "report": rep.to_json()})
        except SurfaceError as exc:
            reports.append({"ray": list(ray), "standard": list(std), "error": str(exc)})
    if args.json:
        return dumps({"name": tri.name, "system": args.system.value, "surfaces": reports})
    lines = []
    for r in reports:
        lines.append(f"ray {_fmt(r['ray'])}")
        if "error" in r:
            lines.append(f"  not embeddable: {r['error']}")
            continue
        comps = r["report"]["components"]
        for c in comps:
            lines.append(f"  {c['class']}: chi={c['chi']} octagons={c['octagons']} {_fmt(c['vector'])}")
        if not comps:
            lines.append("  Empty")
    return "\n".join(lines) if lines else "no vertex rays"


def cmd_recognize(tri, args):
    outcome = recognize_sphere(tri)
    if args.json:
        return dumps({"name": tri.name, "outcome": outcome.to_json()})
    lines = [f"{outcome.verdict}: {outcome.reason}"]
    if outcome.certificate:
        lines.append(f"  certificate (quad-oct): {_fmt(outcome.certificate.quad_oct)}")
        lines.append(f"  certificate (joint):    {_fmt(outcome.certificate.joint)}")
    for k in sorted(outcome.diagnostics):
        lines.append(f"  {k}: {outcome.diagnostics[k]}")
    return "\n".join(lines)


def cmd_gen_lens(args):
    tri = make_layered_lens_space(args.p, args.q)
    text = tri.to_text()
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="ascii")
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc}") from exc
    if args.json:
        return dumps({"name": tri.name, "tet_count": tri.tet_count, "text": text, "output": args.output})
    if args.output:
        return f"wrote {tri.name} ({tri.tet_count} tetrahedra) to {args.output}"
    return text.rstrip("\n")


def _certificate_exists(tri, system, rays):
    for ray in apply_star_filter(rays).almost_normal:
        std = extend_to_standard(ray, tri) if system is CoordSystem.QUAD_OCT else ray
        rep = components(build_cell_complex(std, tri))
        if any(c.classification == "AlmostNormalSphere" for c in rep.components):
            return True
    return False


def bench_record(tri: Triangulation, repeat: int = 1) -> dict:
    """Time vertex enumeration in both almost normal systems on one input."""
    runs = {}
    for system in (CoordSystem.AN_STD, CoordSystem.QUAD_OCT):
        eqs = matching_matrix(tri, system)
        best = None
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter()
            rays = enumerate_vertex_rays(eqs, name=tri.name)
            ms = (time.perf_counter() - t0) * 1000.0
            if best is None or ms < best[0]:
                best = (ms, rays)
        ms, rays = best
        runs[system] = {
            "system": system.value,
            "dim": eqs.dim,
            "rays": len(rays),
            "stage_rays": [s.rays_kept for s in rays.stats],
            "stats": [s.to_json() for s in rays.stats],
            "millis": round(ms, 3),
            "certificate": _certificate_exists(tri, system, rays),
        }
    an, qo = runs[CoordSystem.AN_STD], runs[CoordSystem.QUAD_OCT]
    speedup = an["millis"] / qo["millis"] if qo["millis"] > 0 else None
    return {
        "name": tri.name,
        "tet_count": tri.tet_count,
        "an_std": an,
        "quad_oct": qo,
        "speedup": round(speedup, 3) if speedup is not None else None,
        "certificate_verdicts_agree": an["certificate"] == qo["certificate"],
        "note": BENCH_NOTE,
    }


def cmd_bench(tri, args):
    rec = bench_record(tri, args.repeat)
    if args.json:
        return dumps({"bench": rec})
    lines = [f"benchmark on {rec['name']} (n = {rec['tet_count']})", f"  note: {rec['note']}"]
    for key in ("an_std", "quad_oct"):
        r = rec[key]
        lines.append(
            f"  {r['system']:>8}: dim {r['dim']:>4}  rays {r['rays']:>5}  "
            f"max stage {max(r['stage_rays'], default=0):>6}  {r['millis']:>10.1f} ms  "
            f"certificate {'yes' if r['certificate'] else 'no'}"
        )
    lines.append(f"  speedup (an-std / quad-oct): {rec['speedup']}")
    return "\n".join(lines)


# --- argument parsing -------------------------------------------------------

def _system(text):
    try:
        return CoordSystem.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="almostnormal",
        description="Normal and almost normal surfaces in 3-manifold triangulations.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="reserved; nothing is random")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_path(name, help_text, system_default=None):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("path", help="triangulation file, or the name of a bundled one")
        if system_default is not None:
            p.add_argument(
                "--system",
                type=_system,
                default=CoordSystem.parse(system_default),
                help="std, quad, an-std, quad-oct or joint",
            )
        return p

    with_path("info", "skeleton, orientability and homology")
    with_path("equations", "matching equations", "quad")
    p = with_path("enumerate", "vertex rays by filtered double description", "quad-oct")
    p.add_argument("--bound", type=int, default=None, help="also list admissible points up to this bound")
    with_path("surfaces", "reconstruct and classify vertex surfaces", "quad-oct")
    with_path("recognize", "3-sphere recognition")
    p = with_path("bench", "compare an-std and quad-oct enumeration")
    p.add_argument("--repeat", type=int, default=1, help="report the fastest of this many runs")
    p = sub.add_parser("gen-lens", parents=[common], help="write a layered lens space")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("-o", "--output", default=None)
    sub.add_parser("fixtures", parents=[common], help="list bundled triangulations")
    return parser


COMMANDS = {
    "info": cmd_info,
    "equations": cmd_equations,
    "enumerate": cmd_enumerate,
    "surfaces": cmd_surfaces,
    "recognize": cmd_recognize,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen-lens":
            out = cmd_gen_lens(args)
        elif args.command == "fixtures":
            names = bundled.fixture_names()
            out = dumps({"fixtures": names}) if args.json else "\n".join(names)
        else:
            tri = load_input(args.path)
            out = COMMANDS[args.command](tri, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (TriangulationError, RecognitionError, EnumerationError, SurfaceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
