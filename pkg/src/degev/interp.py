"""Intermediate-space norms built from resolvent smoothness on (0, inf).

For an index (gamma, p) the seminorm is the L^p norm, against the measure
dxi/xi, of xi^gamma * A (xi I - A)^{-1} x over xi in (0, inf), with the sup
taken instead when p = inf.  The A-action is evaluated without forming A:
A (xi I - A)^{-1} x = xi * M (xi M - L)^{-1} x - x.

These norms are the package's declared measurement convention for all
intermediate-space quantities downstream; every report carries the
quadrature window and a tail estimate so the convention stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_CONFIG, RunConfig
from .errors import Diverged
from .operators import OperatorPair, as_vector, vec_norm

__all__ = [
    "InterpolationIndex", "InterpNormReport", "InterpEvaluator",
    "interp_norm", "interp_operator_norm",
]

_GOLDEN_STEPS = 48
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class InterpolationIndex:
    """Pair (gamma, p) selecting an intermediate-space norm; p may be inf."""

    gamma: float
    p: float = math.inf

    def __post_init__(self) -> None:
        if not (0.0 < self.gamma < 1.0):
            raise ValueError("gamma must lie in (0, 1)")
        if not (self.p >= 1.0):
            raise ValueError("p must be >= 1 (math.inf for the sup norm)")

    @property
    def is_sup(self) -> bool:
        return math.isinf(self.p)


@dataclass(frozen=True)
class InterpNormReport:
    """Norm report: total = x_norm + seminorm, with tail diagnostics."""

    x_norm: float
    seminorm: float
    total: float
    xi_min: float
    xi_max: float
    tail_estimate: float
    converged: bool


class InterpEvaluator:
    """Shared-factorization evaluator for one pair and one index.

    Factorizes (xi_j M - L) once per quadrature node so that norms of many
    vectors (probe sets, trace differences) cost only triangular solves.
    """

    def __init__(self, pair: OperatorPair, idx: InterpolationIndex,
                 config: RunConfig = DEFAULT_CONFIG):
        self.pair = pair
        self.idx = idx
        self.config = config
        n = config.xi_nodes
        u_lo, u_hi = math.log(config.xi_min), math.log(config.xi_max)
        h = (u_hi - u_lo) / n
        self.u = u_lo + (np.arange(n) + 0.5) * h
        self.du = h
        self.xi = np.exp(self.u)
        self._factors = [sla.lu_factor(xi * pair.M - pair.L) for xi in self.xi]

    # -- pointwise integrand -------------------------------------------------

    def _h_block(self, X: np.ndarray) -> np.ndarray:
        """Integrand values ||xi^g A(xi-A)^{-1} x|| per node (rows) and column."""
        X = np.atleast_2d(X.T).T  # promote vector to single column
        out = np.empty((self.xi.size, X.shape[1]))
        g = self.idx.gamma
        for j, (xi, fac) in enumerate(zip(self.xi, self._factors)):
            act = xi * (self.pair.M @ sla.lu_solve(fac, X)) - X
            w = xi ** g
            for k in range(X.shape[1]):
                out[j, k] = w * vec_norm(act[:, k], self.pair.norm)
        return out

    def _h_at(self, xi: float, x: np.ndarray) -> float:
        fac = sla.lu_factor(xi * self.pair.M - self.pair.L)
        act = xi * (self.pair.M @ sla.lu_solve(fac, x)) - x
        return xi ** self.idx.gamma * vec_norm(act, self.pair.norm)

    def _refine_max(self, x: np.ndarray, k: int, h: np.ndarray) -> float:
        """Golden-section polish of a grid argmax (deterministic step count)."""
        lo = self.u[k - 1] if k > 0 else self.u[0]
        hi = self.u[k + 1] if k + 1 < self.u.size else self.u[-1]
        if hi <= lo:
            return float(h[k])
        a, b = lo, hi
        c1 = b - _INV_PHI * (b - a)
        c2 = a + _INV_PHI * (b - a)
        f1 = self._h_at(math.exp(c1), x)
        f2 = self._h_at(math.exp(c2), x)
        best = max(float(h[k]), f1, f2)
        for _ in range(_GOLDEN_STEPS):
            if f1 < f2:
                a, c1, f1 = c1, c2, f2
                c2 = a + _INV_PHI * (b - a)
                f2 = self._h_at(math.exp(c2), x)
            else:
                b, c2, f2 = c2, c1, f1
                c1 = b - _INV_PHI * (b - a)
                f1 = self._h_at(math.exp(c1), x)
            best = max(best, f1, f2)
        return best

    # -- norms ----------------------------------------------------------------

    def _column_report(self, x: np.ndarray, h: np.ndarray,
                       refine: bool) -> InterpNormReport:
        cfg = self.config
        x_norm = vec_norm(x, self.pair.norm)
        hmax = float(h.max()) if h.size else 0.0
        if hmax == 0.0:
            return InterpNormReport(x_norm, 0.0, x_norm, cfg.xi_min, cfg.xi_max,
                                    0.0, True)
        floor = 1e-13 * hmax

        def slope(i0: int, i1: int) -> float:
            if h[i0] <= floor or h[i1] <= floor:
                return math.nan
            return (math.log(h[i1]) - math.log(h[i0])) / (self.u[i1] - self.u[i0])

        q_lo = slope(1, 0)   # decay rate towards xi -> 0 (positive = decaying)
        q_hi = slope(-2, -1)  # growth rate towards xi -> inf (negative = decaying)

        if self.idx.is_sup:
            k = int(np.argmax(h))
            if k == h.size - 1 and not math.isnan(q_hi) and q_hi > 1e-3:
                raise Diverged("sup integrand still rising at the window top")
            semi = self._refine_max(x, k, h) if refine else hmax
            tail = max(float(h[0]), float(h[-1]))
            total = x_norm + semi
            return InterpNormReport(x_norm, semi, total, cfg.xi_min, cfg.xi_max,
                                    tail, tail <= cfg.tail_tol * max(total, 1e-300))

        p = self.idx.p
        body = float(np.sum(h ** p)) * self.du
        tail_lo = 0.0
        if h[0] > floor:
            if math.isnan(q_lo) or q_lo <= 0.0:
                q_lo = self.idx.gamma  # analytic decay floor near xi = 0
            tail_lo = float(h[0]) ** p / (p * q_lo)
        tail_hi = 0.0
        if h[-1] > floor:
            if math.isnan(q_hi) or q_hi >= -1e-3:
                raise Diverged("upper tail of the seminorm integral fails to decay")
            tail_hi = float(h[-1]) ** p / (p * (-q_hi))
        semi = (body + tail_lo + tail_hi) ** (1.0 / p)
        # report tails on the same scale as the seminorm
        tail = (tail_lo + tail_hi) ** (1.0 / p)
        total = x_norm + semi
        return InterpNormReport(x_norm, semi, total, cfg.xi_min, cfg.xi_max,
                                tail, tail <= cfg.tail_tol * max(total, 1e-300))

    def norm(self, x, refine: bool = True) -> InterpNormReport:
        x = as_vector(x, self.pair.dim)
        if x.ndim != 1:
            raise ValueError("norm expects a single vector")
        h = self._h_block(x)[:, 0]
        return self._column_report(x, h, refine)

    def norm_many(self, X, refine: bool = True) -> np.ndarray:
        """Totals for a block of column vectors (shared factorizations).

        For the sup norm, the argmax polish is applied only to columns whose
        grid sup is within 30% of the block maximum: polishing improves a
        column by at most O(grid spacing^2), so distant columns cannot
        overtake the leaders.
        """
        X = as_vector(X, self.pair.dim)
        if X.ndim == 1:
            X = X[:, None]
        H = self._h_block(X)
        do_refine = np.full(X.shape[1], refine)
        if refine and self.idx.is_sup and X.shape[1] > 1:
            sups = H.max(axis=0)
            do_refine = sups >= 0.7 * float(sups.max())
        return np.array([
            self._column_report(X[:, k], H[:, k], bool(do_refine[k])).total
            for k in range(X.shape[1])
        ])

    def operator_norm(self, op, probes: np.ndarray | None = None,
                      refine: bool = True) -> float:
        """sup over probes of ||op x||_{interp} / ||x||_X.

        The default probe set is all basis vectors plus 2*dim seeded random
        unit vectors, making the result deterministic for a given config.
        """
        dim = self.pair.dim
        if probes is None:
            rng = np.random.default_rng(self.config.seed)
            rand = rng.standard_normal((dim, 2 * dim)) + 1j * rng.standard_normal((dim, 2 * dim))
            rand /= np.linalg.norm(rand, axis=0)
            probes = np.concatenate([np.eye(dim, dtype=complex), rand], axis=1)
        mat = op if isinstance(op, np.ndarray) else None
        if mat is None:
            cols = [as_vector(op(probes[:, j]), dim) for j in range(probes.shape[1])]
            B = np.stack(cols, axis=1)
        else:
            B = mat @ probes
        totals = self.norm_many(B, refine=refine)
        denom = np.array([vec_norm(probes[:, j], self.pair.norm)
                          for j in range(probes.shape[1])])
        return float(np.max(totals / denom))


def interp_norm(pair: OperatorPair, idx: InterpolationIndex, x,
                config: RunConfig = DEFAULT_CONFIG) -> InterpNormReport:
    """Intermediate-space norm of one vector (fresh evaluator per call)."""
    return InterpEvaluator(pair, idx, config).norm(x)


def interp_operator_norm(pair: OperatorPair, idx: InterpolationIndex, apply,
                         config: RunConfig = DEFAULT_CONFIG) -> float:
    """Probe-based operator norm from X into the intermediate space."""
    return InterpEvaluator(pair, idx, config).operator_norm(apply)
