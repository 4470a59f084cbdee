"""Integer feasibility of difference constraints ``x_u - x_v <= c``.

Bounds become edges to a zero node; a negative cycle in the constraint graph
is exactly infeasibility, and shortest-path potentials give an integral
solution otherwise.
"""
from __future__ import annotations

import numpy as np

from . import kernels
from .regions import UNBOUNDED


class DiffSystem:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.zero = nvars
        self._src: list[int] = []
        self._dst: list[int] = []
        self._w: list[int] = []

    def copy(self) -> DiffSystem:
        out = DiffSystem(self.nvars)
        out._src, out._dst, out._w = list(self._src), list(self._dst), list(self._w)
        return out

    def diff_le(self, u: int, v: int, c) -> DiffSystem:
        """Add ``x_u - x_v <= c``."""
        if c == UNBOUNDED:
            return self
        self._src.append(v)
        self._dst.append(u)
        self._w.append(int(c))
        return self

    def upper(self, u: int, c) -> DiffSystem:
        return self.diff_le(u, self.zero, c)

    def lower(self, u: int, c) -> DiffSystem:
        return self.diff_le(self.zero, u, -int(c))

    def bounds(self, offset: int, lo, hi) -> DiffSystem:
        for i, (a, b) in enumerate(zip(lo, hi)):
            self.lower(offset + i, a)
            self.upper(offset + i, b)
        return self

    def solve(self) -> list[int] | None:
        dist = kernels.bellman_ford(
            self.nvars + 1,
            np.asarray(self._src, dtype=np.int64),
            np.asarray(self._dst, dtype=np.int64),
            np.asarray(self._w, dtype=np.int64),
        )
        if dist is None:
            return None
        z = dist[self.zero]
        return [int(d - z) for d in dist[: self.nvars]]


def solve_outside_window(system: DiffSystem, vars_: range, bound: int) -> list[int] | None:
    """Solve ``system`` with at least one of ``vars_`` strictly above ``bound``."""
    for v in vars_:
        sol = system.copy().lower(v, bound + 1).solve()
        if sol is not None:
            return sol
    return None
