"""Finite-model workbench for ideal convergence of sequences and nets."""

from __future__ import annotations

from importlib import resources

from .epset import EpSet, NatIdeal, natural_density
from .ideals import FiniteIdeal, enumerate_ideals
from .topology import FiniteTopology, validate_topology
from .verdict import Verdict
from .workspace import Workspace, load_workspace, parse_workspace

__all__ = [
    "EpSet",
    "FiniteIdeal",
    "FiniteTopology",
    "NatIdeal",
    "Verdict",
    "Workspace",
    "enumerate_ideals",
    "fixture_paths",
    "load_workspace",
    "natural_density",
    "parse_workspace",
    "validate_topology",
]


def fixture_paths() -> list[str]:
    """Paths of the bundled workspace fixtures, sorted by name."""
    root = resources.files("iconv") / "fixtures"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".ws"))
