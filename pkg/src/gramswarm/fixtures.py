"""Access to packaged fixture files (grammars, trail map, reference programs)."""

from __future__ import annotations

from importlib.resources import files

EVOLVED_PROGRAMS = (
    "gmfo_ant",
    "gwo_ant",
    "gmfo_regression",
    "gwo_regression",
    "gmfo_mux3",
    "gwo_mux3",
)


def fixture_text(name: str) -> str:
    return (files("gramswarm") / "fixtures" / name).read_text(encoding="utf-8")


def evolved_program_text(name: str) -> str:
    if name not in EVOLVED_PROGRAMS:
        raise KeyError(f"unknown reference program {name!r}; choose from {EVOLVED_PROGRAMS}")
    return fixture_text(f"evolved_programs/{name}.txt")
