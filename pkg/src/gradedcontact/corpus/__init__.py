"""Curated structure corpus: witnesses for both directions of the Q^2 test."""

from __future__ import annotations

from importlib import resources

VALID = (
    "zero",
    "constant-bivector",
    "so3",
    "contact-r3",
    "pure-r",
)

INVALID = (
    "nonjacobi-xpx",
    "nonjacobi-bivector-r",
    "nonjacobi-flipped-r",
)

ALL = VALID + INVALID


def corpus_path(name: str):
    """Filesystem path of a shipped corpus file."""
    if name not in ALL:
        raise KeyError(f"no corpus structure named {name!r}")
    return resources.files(__name__) / f"{name}.jacobi.json"


def load(name: str):
    from ..structfile import load_structure

    return load_structure(corpus_path(name))


def iter_named():
    """Yield (name, structure, expected_valid) over the whole corpus."""
    for name in ALL:
        yield name, load(name), name in VALID
