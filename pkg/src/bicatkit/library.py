"""Bundled presentation fixtures and the default probe target library."""
from __future__ import annotations

from importlib import resources

from .core import Bicategory, PseudofunctorData
from .presentation import (
    Presentation,
    load_presentation_with_sigma,
    load_pseudofunctor,
)

BICATEGORIES = ("triv", "split", "iso", "grpd", "chain_src", "chain_tgt")

# targets probes are enumerated into, unless overridden
DEFAULT_PROBE_TARGETS = ("triv", "iso", "grpd", "split")


def fixture_text(filename: str) -> str:
    return resources.files("bicatkit.fixtures").joinpath(filename).read_text()


def load_fixture(name: str) -> Presentation:
    return load_presentation_with_sigma(fixture_text(f"{name}.bic"), name=name)


def load_fixture_bicategory(name: str) -> Bicategory:
    return load_fixture(name).bicategory


def load_chain_pseudofunctor() -> PseudofunctorData:
    src = load_fixture_bicategory("chain_src")
    tgt = load_fixture_bicategory("chain_tgt")
    return load_pseudofunctor(fixture_text("chain_f.pf"), src, tgt, name="chain_f")
