"""Run configuration shared by the verifier and the command line."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace
from typing import Mapping, Optional

from .errors import DomainError

__all__ = ["ToleranceConfig"]


def _default_workers() -> int:
    return max(1, os.cpu_count() or 1)


@dataclass(frozen=True)
class ToleranceConfig:
    """Verification knobs.

    ``tol_rel`` is the relative tolerance for records that do not declare
    their own.  Records whose natural accuracy is bounded (truncated FL
    partial sums, near-pole points) carry a looser tolerance of their own,
    unless ``force_tol`` is set, in which case ``tol_rel`` applies everywhere
    and ``tol_abs`` is capped at ``tol_rel``.
    """

    tol_rel: float = 1e-9
    tol_abs: float = 1e-12
    max_terms: int = 10**6
    fl_partial_N: int = 10**4
    quad_tol: float = 1e-10
    workers: int = 0  # 0: one per CPU
    force_tol: bool = False

    def __post_init__(self):
        for name in ("tol_rel", "tol_abs", "quad_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and v > 0.0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if self.max_terms < 100:
            raise DomainError("max_terms must be at least 100")
        if self.fl_partial_N < 4:
            raise DomainError("fl_partial_N must be at least 4")
        if self.workers < 0:
            raise DomainError("workers must be nonnegative")
        if self.workers == 0:
            object.__setattr__(self, "workers", _default_workers())

    def with_tol_rel(self, tol_rel: float) -> "ToleranceConfig":
        """Force a single relative tolerance on every record."""
        return replace(self, tol_rel=tol_rel, tol_abs=min(self.tol_abs, tol_rel), force_tol=True)

    def effective(self, record_tol_rel: Optional[float], record_tol_abs: Optional[float]):
        """(tol_rel, tol_abs) to apply to one comparison."""
        if self.force_tol:
            return self.tol_rel, self.tol_abs
        rel = self.tol_rel if record_tol_rel is None else record_tol_rel
        ab = self.tol_abs if record_tol_abs is None else record_tol_abs
        return rel, ab

    @classmethod
    def from_env(cls, env: Optional[Mapping[str, str]] = None, **kwargs) -> "ToleranceConfig":
        """Defaults, then FLLAB_* environment overrides, then explicit kwargs."""
        env = os.environ if env is None else env
        cfg = cls(**{k: v for k, v in kwargs.items() if k != "tol_rel"})
        try:
            if "FLLAB_MAX_TERMS" in env:
                cfg = replace(cfg, max_terms=int(env["FLLAB_MAX_TERMS"]))
            if "FLLAB_WORKERS" in env:
                cfg = replace(cfg, workers=int(env["FLLAB_WORKERS"]))
            if "FLLAB_TOL_REL" in env:
                cfg = cfg.with_tol_rel(float(env["FLLAB_TOL_REL"]))
        except ValueError as exc:
            raise DomainError(f"bad FLLAB_* environment value: {exc}") from None
        if kwargs.get("tol_rel") is not None:
            cfg = cfg.with_tol_rel(kwargs["tol_rel"])
        return cfg

    def as_dict(self) -> dict:
        return asdict(self)
