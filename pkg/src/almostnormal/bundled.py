"""Triangulations shipped with the package."""
from __future__ import annotations

from importlib import resources

from .triangulation import Triangulation, parse_triangulation


def _root():
    return resources.files("almostnormal") / "fixtures"


def fixture_names():
    return sorted(p.name[:-4] for p in _root().iterdir() if p.name.endswith(".tri"))


def fixture_text(name):
    return (_root() / f"{name}.tri").read_text(encoding="ascii")


def load_fixture(name) -> Triangulation:
    if name not in fixture_names():
        raise KeyError(f"no bundled triangulation named {name!r}")
    return parse_triangulation(fixture_text(name), name=name)


def all_fixtures():
    return {name: load_fixture(name) for name in fixture_names()}
