"""Job configuration shared by the command line and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .diagrams import Weight
from .rewriting import KEEP, ZERO

FORMATS = ("json", "text")
DEFAULT_SEED = 20240917


class ConfigError(ValueError):
    """Invalid job configuration; the message names the offending flag."""


@dataclass
class JobConfig:
    mu: tuple[Weight, ...] = ()
    b: int | None = None
    kappa: tuple[int, ...] | None = None
    rho: tuple[int, ...] | None = None
    qcap: int = 8
    delta_mode: str = KEEP
    bounds: dict[str, Any] = field(default_factory=dict)
    output: str = "text"
    seed: int = DEFAULT_SEED
    threads: int = 1

    def __post_init__(self):
        self.mu = tuple(self.mu)
        if self.kappa is not None:
            self.kappa = tuple(self.kappa)
        if self.rho is not None:
            self.rho = tuple(self.rho)
        self.validate()

    def validate(self) -> None:
        if self.qcap <= 0:
            raise ConfigError("--qmax must be positive")
        if self.threads <= 0:
            raise ConfigError("--threads must be positive")
        if self.delta_mode not in (KEEP, ZERO):
            raise ConfigError(f"--delta must be {KEEP!r} or {ZERO!r}")
        if self.output not in FORMATS:
            raise ConfigError(f"--format must be one of {', '.join(FORMATS)}")
        for name, value in self.bounds.items():
            if value < 0:
                raise ConfigError(f"--{name} must be nonnegative")
        for flag, comp in (("--kappa", self.kappa), ("--rho", self.rho)):
            if comp is None:
                continue
            if self.mu and len(comp) != len(self.mu):
                raise ConfigError(f"{flag} has {len(comp)} parts but --mu has {len(self.mu)} weights")
            if any(part < 0 for part in comp):
                raise ConfigError(f"{flag} parts must be nonnegative")
            if self.b is not None and sum(comp) != self.b:
                raise ConfigError(f"{flag} does not sum to --b")
        if self.kappa is not None and self.rho is not None and sum(self.kappa) != sum(self.rho):
            raise ConfigError("--kappa and --rho have different totals")
        if self.b is None:
            comp = self.rho if self.rho is not None else self.kappa
            if comp is not None:
                self.b = sum(comp)
        if self.b is not None and self.b < 0:
            raise ConfigError("--b must be nonnegative")
