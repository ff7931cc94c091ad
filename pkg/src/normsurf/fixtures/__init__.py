"""Shipped surface models, loadable by name (``load_fixture("a1")``)."""
from __future__ import annotations

from importlib import resources

from ..surface import NormalSurfaceModel, parse_model


def fixture_path(name: str, negative: bool = False):
    base = resources.files(__name__)
    if negative:
        base = base / "negative"
    return base / (name if name.endswith(".json") else f"{name}.json")


def fixture_names(negative: bool = False) -> list[str]:
    base = resources.files(__name__)
    if negative:
        base = base / "negative"
    return sorted(
        p.name[:-5] for p in base.iterdir() if p.name.endswith(".json") and p.name != "expected.json"
    )


def load_fixture(name: str) -> NormalSurfaceModel:
    return parse_model(fixture_path(name).read_text())
