"""Size budgets shared by the library and the command line."""

from __future__ import annotations

from dataclasses import dataclass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Budget:
    # covers up to this many vertices get full invariant factors
    exact_threshold: int = 1500
    max_exact_vertices: int = 5000
    max_modpk_vertices: int = 50000
    # root-of-unity orbit evaluations allowed for one analytic level
    max_orbits: int = 2_000_000

    def check_exact(self, vertices: int):
        if vertices > self.max_exact_vertices:
            raise BudgetExceeded(f"{vertices} vertices exceeds the exact budget {self.max_exact_vertices}")

    def check_modpk(self, vertices: int):
        if vertices > self.max_modpk_vertices:
            raise BudgetExceeded(f"{vertices} vertices exceeds the p-local budget {self.max_modpk_vertices}")


DEFAULT_BUDGET = Budget()
