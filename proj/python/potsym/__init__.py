"""Conservation laws, point transformations and potential symmetries of
1+1 dimensional PDEs.

    >>> s = Session("system HEAT { u_t = u_xx; } cv C = (u, -u_x) on HEAT;")
    >>> s.run("verify-cl", cv="C")["status"]
    'verified'
"""

from __future__ import annotations

import os
from pathlib import Path

from . import _potsym
from ._potsym import PotsymError, default_catalog_dir, operations

__all__ = ["PotsymError", "Session", "catalog_dir", "list_cases", "operations", "run_all", "run_case"]


class Session:
    """A set of declarations; operations run against it by name."""

    def __init__(self, defs: str = "") -> None:
        self._s = _potsym.Session(defs)

    def load(self, defs: str) -> None:
        self._s.load(defs)

    def run(self, operation: str, **args: object) -> dict:
        return self._s.run(operation, {k: str(v) for k, v in args.items()})

    def expr(self, text: str) -> str:
        return self._s.expr(text)

    def field(self, text: str) -> str:
        return self._s.field(text)

    def names(self) -> dict:
        return self._s.names()


def catalog_dir() -> Path:
    if os.environ.get("POTSYM_CATALOG_DIR"):
        return Path(os.environ["POTSYM_CATALOG_DIR"])
    bundled = Path(__file__).parent / "data" / "catalog"
    return bundled if bundled.is_dir() else Path(default_catalog_dir())


def list_cases(directory: os.PathLike | None = None) -> list[tuple[str, str]]:
    return _potsym.list_cases(Path(directory or catalog_dir()))


def run_case(case_id: str, directory: os.PathLike | None = None, seed: int = 1) -> dict:
    return _potsym.run_case(Path(directory or catalog_dir()), case_id, seed)


def run_all(directory: os.PathLike | None = None, jobs: int = 1, seed: int = 1) -> list[dict]:
    return _potsym.run_all(Path(directory or catalog_dir()), jobs, seed)
