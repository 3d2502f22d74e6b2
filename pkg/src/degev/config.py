"""Run configuration: tolerances, node budgets, seed, norm convention."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class RunConfig:
    """Tolerances and budgets shared by all operations.

    Defaults are sized for dense desk-scale problems (dim <= a few hundred).
    ``quad_tol`` is relative to the magnitude of the computed value,
    ``trunc_tol`` bounds the neglected contour tail, ``solve_tol`` is the
    per-dimension relative residual of a pencil solve, ``range_tol`` gates
    membership in range(M), ``fit_tol`` gates certificate revalidation,
    ``tail_tol`` gates convergence of intermediate-space integrals and
    ``resid_tol`` is the admissible equation residual of a solution trace.
    """

    quad_tol: float = 1e-7
    trunc_tol: float = 1e-10
    solve_tol_per_dim: float = 1e-12
    range_tol: float = 1e-8
    fit_tol: float = 0.1
    tail_tol: float = 1e-4
    resid_tol: float = 1e-5

    contour_nodes: int = 800
    contour_nodes_max: int = 12800
    nodes_per_panel: int = 4
    eta_cut_cap: float = 1e6
    xi_nodes: int = 160
    xi_min: float = 1e-6
    xi_max: float = 1e8
    max_power_iters: int = 2000
    power_iter_tol: float = 1e-12
    dense_threshold: int = 512
    rcond_min: float = 1e-12
    beta_gap: float = 1e-3
    region_margin: float = 0.05

    seed: int = 7042
    norm: str = "l2"

    def __post_init__(self) -> None:
        for name in ("quad_tol", "trunc_tol", "solve_tol_per_dim", "range_tol",
                     "fit_tol", "tail_tol", "resid_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.contour_nodes % 2 != 0:
            raise ValueError("contour_nodes must be even")
        if self.norm not in ("l2", "linf"):
            raise ValueError("norm must be 'l2' or 'linf'")

    def replace(self, **kw) -> "RunConfig":
        return dataclasses.replace(self, **kw)


DEFAULT_CONFIG = RunConfig()


def load_config(path: str) -> RunConfig:
    """Read a JSON config file; unknown keys are rejected."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} col {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ParseError(f"{path}: unknown config keys {sorted(unknown)}")
    try:
        return RunConfig(**raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def save_config(path: str, config: RunConfig) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(dataclasses.asdict(config), fh, indent=2, sort_keys=True)
        fh.write("\n")
