"""Run configuration shared by the CLI and the scripts."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .einstein import SolverParams

ENV_PREFIX = "IWASAWA_"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    n_seeds: int = 2
    tol: float = 1e-10
    max_iters: int = 4000
    precision_bits: int = 64
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64")
        if self.n_seeds < 1:
            raise ValueError("n_seeds must be at least 1")

    @property
    def seeds(self) -> tuple[int, ...]:
        return tuple(self.seed + i for i in range(self.n_seeds))

    def solver_params(self) -> SolverParams:
        return SolverParams(tol=self.tol, max_iters=self.max_iters)

    @classmethod
    def from_env(cls, base: "RunConfig | None" = None, environ=None) -> "RunConfig":
        """Apply IWASAWA_TOL, IWASAWA_PRECISION_BITS, ... on top of ``base``."""
        environ = os.environ if environ is None else environ
        base = base or cls()
        updates = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is None:
                continue
            kind = type(getattr(base, f.name)) if getattr(base, f.name) is not None else str
            updates[f.name] = kind(raw)
        return replace(base, **updates)
