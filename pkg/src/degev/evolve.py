"""Solution traces for D_t(Mv) = Lv + f and the convolution operators.

The trace w(t) = Mv(t) is assembled as e^{tA}u0 plus the forced convolution
q1, and its derivative as e^{tA}g0 + q2 + q3, where

    [q1 g](t) = integral_0^t e^{(t-s)A} g(s) ds,
    [q2 f](t) = e^{tA} (f(t) - f(0)),
    [q3 f](t) = integral_0^t A e^{(t-s)A} (f(s) - f(t)) ds.

q1 and q3 are evaluated by exchanging the time integral with the contour
integral: the inner time integral against e^{(t-s)*lambda} has an exact
closed form for both supported forcing representations (vector polynomials
and piecewise-linear samples), obtained by repeated integration by parts.
The parts of the closed form that decay only algebraically along the contour
are subtracted and integrated exactly through powers of A^{-1} = M L^{-1},
leaving an exponentially damped kernel.  This evaluation is uniformly
accurate for all t, including the endpoint region where time-domain graded
rules would need semigroup values at scales the contour cannot resolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .certify import SectorCertificate
from .config import DEFAULT_CONFIG, RunConfig
from .contour import ContourSpec, adaptive_contour_apply, propagate
from .errors import (
    ConsistencyMissing, DegenerateGrid, InadmissibleExponents, ValidationError,
)
from .operators import OperatorPair, as_vector, inv_a_apply, vec_norm

__all__ = [
    "Forcing", "ProblemInstance", "SolutionTrace", "ConstantLedger",
    "q1_apply", "q2_apply", "q3_apply", "solve", "constants_ledger",
]

_MIN_SAMPLES_PER_UNIT_TIME = 32


# ---------------------------------------------------------------------------
# forcing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Forcing:
    """Time-dependent right-hand side with declared smoothness exponent mu.

    ``polynomial`` forcing stores vector coefficients (f(t) = sum c_k t^k);
    ``samples`` forcing stores a time grid with piecewise-linear evaluation
    between samples.  The declared mu is metadata: measured smoothness comes
    from :meth:`holder_seminorm` so bounds never trust the declaration.
    """

    kind: str
    mu: float
    coeffs: np.ndarray | None = None
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("polynomial", "samples"):
            raise ValidationError(f"unknown forcing kind {self.kind!r}")
        if not (0.0 < self.mu <= 1.0):
            raise ValidationError("forcing mu must lie in (0, 1]")
        if self.kind == "polynomial":
            if self.coeffs is None:
                raise ValidationError("polynomial forcing requires coeffs")
            c = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
            if not np.all(np.isfinite(c)):
                raise ValidationError("forcing coefficients must be finite")
            object.__setattr__(self, "coeffs", c)
        else:
            if self.times is None or self.values is None:
                raise ValidationError("sampled forcing requires times and values")
            tms = np.asarray(self.times, dtype=float)
            vals = np.asarray(self.values, dtype=complex)
            if tms.ndim != 1 or tms.size < 2:
                raise ValidationError("sampled forcing needs at least two times")
            if np.any(np.diff(tms) <= 0):
                raise DegenerateGrid("forcing sample times must strictly increase")
            if tms[0] != 0.0:
                raise ValidationError("forcing samples must start at t = 0")
            if vals.shape[0] != tms.size:
                raise ValidationError("forcing values/times length mismatch")
            if not np.all(np.isfinite(vals)):
                raise ValidationError("forcing values must be finite")
            object.__setattr__(self, "times", tms)
            object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        if self.kind == "polynomial":
            return self.coeffs.shape[1]
        return self.values.shape[1]

    @property
    def degree(self) -> int:
        if self.kind != "polynomial":
            raise ValueError("degree only defined for polynomial forcing")
        return self.coeffs.shape[0] - 1

    def value(self, t: float) -> np.ndarray:
        if self.kind == "polynomial":
            out = np.zeros(self.dim, dtype=complex)
            for k in range(self.coeffs.shape[0] - 1, -1, -1):
                out = out * t + self.coeffs[k]
            return out
        tms, vals = self.times, self.values
        if t <= tms[0]:
            return vals[0].copy()
        if t >= tms[-1]:
            return vals[-1].copy()
        j = int(np.searchsorted(tms, t, side="right")) - 1
        w = (t - tms[j]) / (tms[j + 1] - tms[j])
        return (1.0 - w) * vals[j] + w * vals[j + 1]

    def derivatives_at(self, t: float) -> list[np.ndarray]:
        """All derivative values f^(k)(t), k >= 1 (polynomial only)."""
        d = self.degree
        out = []
        c = self.coeffs
        for k in range(1, d + 1):
            acc = np.zeros(self.dim, dtype=complex)
            for j in range(d, k - 1, -1):
                fall = math.factorial(j) / math.factorial(j - k)
                acc += fall * c[j] * (t ** (j - k))
            out.append(acc)
        return out

    def derivatives_at_zero(self) -> list[np.ndarray]:
        return [math.factorial(k) * self.coeffs[k]
                for k in range(1, self.degree + 1)]

    def _segment_slopes(self) -> np.ndarray:
        dt = np.diff(self.times)[:, None]
        return np.diff(self.values, axis=0) / dt

    def slope_left(self, t: float) -> np.ndarray:
        """Slope of the segment ending at t (first segment for t near 0)."""
        slopes = self._segment_slopes()
        j = int(np.searchsorted(self.times, t, side="left")) - 1
        j = min(max(j, 0), slopes.shape[0] - 1)
        return slopes[j]

    def interior_knots(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Knots strictly inside (0, t) with slope jumps across them."""
        slopes = self._segment_slopes()
        taus, jumps = [], []
        for i in range(1, self.times.size - 1):
            tau = self.times[i]
            if 0.0 < tau < t:
                taus.append(tau)
                jumps.append(slopes[i] - slopes[i - 1])
        return np.asarray(taus), (np.asarray(jumps) if jumps
                                  else np.zeros((0, self.dim), dtype=complex))

    def check_coverage(self, t: float) -> None:
        if self.kind != "samples":
            return
        if t > self.times[-1] + 1e-12:
            raise ValidationError(f"forcing samples end before t = {t:g}")
        need = max(2, math.ceil(_MIN_SAMPLES_PER_UNIT_TIME * t))
        have = int(np.count_nonzero(self.times <= t + 1e-12))
        if have < need:
            raise ValidationError(
                f"forcing needs >= {need} samples on [0, {t:g}], has {have}")

    # -- measured smoothness -------------------------------------------------

    def sup_norm(self, grid, norm: str) -> float:
        return max(vec_norm(self.value(float(t)), norm) for t in grid)

    def holder_seminorm(self, delta: float, grid, norm: str) -> float:
        """Measured seminorm sup ||f(t)-f(s)|| / (t-s)^delta over grid pairs."""
        ts = np.asarray(grid, dtype=float)
        vals = [self.value(float(t)) for t in ts]
        best = 0.0
        for i in range(ts.size):
            for j in range(i + 1, ts.size):
                gap = ts[j] - ts[i]
                if gap <= 0:
                    continue
                best = max(best, vec_norm(vals[j] - vals[i], norm) / gap ** delta)
        return best


# ---------------------------------------------------------------------------
# problem instance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProblemInstance:
    """Problem data (M, L, f, u0, T) plus optional compatibility data.

    ``u0`` must lie in range(M).  When ``v0`` is supplied, M v0 = u0 is
    enforced and g0 = L v0 + f(0) is derived (or validated when given); g0
    must lie in range(M) for the derivative representation to hold down to
    t = 0.
    """

    pair: OperatorPair
    f: Forcing
    u0: np.ndarray
    T: float
    v0: np.ndarray | None = None
    g0: np.ndarray | None = None

    def __post_init__(self) -> None:
        cfg = DEFAULT_CONFIG
        if self.T <= 0:
            raise ValidationError("T must be positive")
        if self.f.dim != self.pair.dim:
            raise ValidationError("forcing dimension mismatch")
        u0 = as_vector(self.u0, self.pair.dim)
        object.__setattr__(self, "u0", u0)
        _require_in_range(self.pair, u0, cfg.range_tol, "u0")
        if self.v0 is not None:
            v0 = as_vector(self.v0, self.pair.dim)
            object.__setattr__(self, "v0", v0)
            scale = max(1.0, float(np.linalg.norm(u0)))
            if np.linalg.norm(self.pair.M @ v0 - u0) > cfg.range_tol * scale:
                raise ValidationError("v0 violates M v0 = u0")
            derived = self.pair.L @ v0 + self.f.value(0.0)
            if self.g0 is None:
                object.__setattr__(self, "g0", derived)
            else:
                g0 = as_vector(self.g0, self.pair.dim)
                gscale = max(1.0, float(np.linalg.norm(derived)))
                if np.linalg.norm(g0 - derived) > cfg.range_tol * gscale:
                    raise ValidationError("g0 violates g0 = L v0 + f(0)")
                object.__setattr__(self, "g0", g0)
            _require_in_range(self.pair, self.g0, cfg.range_tol, "g0")
        elif self.g0 is not None:
            raise ValidationError("g0 given without v0")

    @property
    def has_consistency_data(self) -> bool:
        return self.v0 is not None and self.g0 is not None


def _require_in_range(pair: OperatorPair, x: np.ndarray, tol: float,
                      name: str) -> None:
    w, *_ = np.linalg.lstsq(pair.M, x, rcond=None)
    resid = np.linalg.norm(pair.M @ w - x)
    if resid > tol * max(1.0, float(np.linalg.norm(x))):
        raise ValidationError(
            f"{name} is not in range(M): residual {resid:.2e} exceeds {tol:.1e}")


# ---------------------------------------------------------------------------
# contour kernels (exact inner time integrals)
# ---------------------------------------------------------------------------

def _q1_kernel(pair: OperatorPair, f: Forcing, t: float,
               config: RunConfig):
    """Kernel K(lambda), pointwise tail bound and A^{-k} correction for q1."""
    if f.kind == "polynomial":
        dk0 = [f.value(0.0)] + f.derivatives_at_zero()
        dkt = [f.value(t)] + f.derivatives_at(t)

        def cols(lam: complex) -> np.ndarray:
            acc = np.zeros(pair.dim, dtype=complex)
            for k, g in enumerate(dk0):
                acc += g * lam ** (-(k + 1))
            return np.exp(t * lam) * acc

        def bound(lam: complex) -> float:
            r = max(abs(lam), 1e-30)
            return math.exp(t * lam.real) * sum(
                np.linalg.norm(g) * r ** (-(k + 1)) for k, g in enumerate(dk0))

        corr = np.zeros(pair.dim, dtype=complex)
        for k, g in enumerate(dkt):
            corr -= inv_a_apply(pair, g, k + 1, config)
        return cols, bound, corr

    f.check_coverage(t)
    g0 = f.value(0.0)
    gp0 = f.slope_left(min(t, float(f.times[1])))
    gt = f.value(t)
    gpt = f.slope_left(t)
    taus, jumps = f.interior_knots(t)

    def cols(lam: complex) -> np.ndarray:
        acc = np.exp(t * lam) * (g0 / lam + gp0 / lam ** 2)
        for tau, jmp in zip(taus, jumps):
            acc += jmp * (np.exp((t - tau) * lam) / lam ** 2)
        return acc

    def bound(lam: complex) -> float:
        r = max(abs(lam), 1e-30)
        b = math.exp(t * lam.real) * (np.linalg.norm(g0) / r
                                      + np.linalg.norm(gp0) / r ** 2)
        for tau, jmp in zip(taus, jumps):
            b += np.linalg.norm(jmp) * math.exp((t - tau) * lam.real) / r ** 2
        return b

    corr = -(inv_a_apply(pair, gt, 1, config)
             + inv_a_apply(pair, gpt, 2, config))
    return cols, bound, corr


def _q3_kernel(pair: OperatorPair, f: Forcing, t: float,
               config: RunConfig):
    """Kernel, tail bound and correction for q3 (one extra lambda power)."""
    f0t = f.value(0.0) - f.value(t)
    if f.kind == "polynomial":
        dk0 = f.derivatives_at_zero()
        dkt = f.derivatives_at(t)

        def cols(lam: complex) -> np.ndarray:
            acc = f0t.astype(complex).copy()
            for k, g in enumerate(dk0, start=1):
                acc += g * lam ** (-k)
            return np.exp(t * lam) * acc

        def bound(lam: complex) -> float:
            r = max(abs(lam), 1e-30)
            return math.exp(t * lam.real) * (
                np.linalg.norm(f0t)
                + sum(np.linalg.norm(g) * r ** (-k)
                      for k, g in enumerate(dk0, start=1)))

        corr = np.zeros(pair.dim, dtype=complex)
        for k, g in enumerate(dkt, start=1):
            corr -= inv_a_apply(pair, g, k, config)
        return cols, bound, corr

    f.check_coverage(t)
    fp0 = f.slope_left(min(t, float(f.times[1])))
    fpt = f.slope_left(t)
    taus, jumps = f.interior_knots(t)

    def cols(lam: complex) -> np.ndarray:
        acc = np.exp(t * lam) * (f0t + fp0 / lam)
        for tau, jmp in zip(taus, jumps):
            acc += jmp * (np.exp((t - tau) * lam) / lam)
        return acc

    def bound(lam: complex) -> float:
        r = max(abs(lam), 1e-30)
        b = math.exp(t * lam.real) * (np.linalg.norm(f0t)
                                      + np.linalg.norm(fp0) / r)
        for tau, jmp in zip(taus, jumps):
            b += np.linalg.norm(jmp) * math.exp((t - tau) * lam.real) / r
        return b

    corr = -inv_a_apply(pair, fpt, 1, config)
    return cols, bound, corr


def _forcing_scale(f: Forcing, t: float, norm: str) -> float:
    grid = np.linspace(0.0, max(t, 1e-12), 9)
    return max(f.sup_norm(grid, norm), 1e-30)


def _run_kernel(pair: OperatorPair, cert: SectorCertificate, t: float,
                kernel, config: RunConfig) -> tuple[np.ndarray, float]:
    cols, bound, corr = kernel
    contour = ContourSpec.for_time(cert, t, config)
    value, est, _ = adaptive_contour_apply(
        pair, contour, cols,
        scale_hint=max(float(np.linalg.norm(corr)), 1e-30), config=config,
        resolvent_bound=cert.bound_at,
        column_bound=lambda eta: bound(contour.lam(eta)))
    return value + corr, est


def q1_apply(prob: ProblemInstance, cert: SectorCertificate, t: float,
             config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Convolution of the smoothing family with the forcing at time t."""
    _check_t(prob, t)
    if t == 0.0:
        return np.zeros(prob.pair.dim, dtype=complex)
    value, _ = _run_kernel(prob.pair, cert, t,
                           _q1_kernel(prob.pair, prob.f, t, config), config)
    return value


def q2_apply(prob: ProblemInstance, cert: SectorCertificate, t: float,
             config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """e^{tA} applied to the forcing increment f(t) - f(0); zero at t = 0."""
    _check_t(prob, t)
    if t == 0.0:
        return np.zeros(prob.pair.dim, dtype=complex)
    inc = prob.f.value(t) - prob.f.value(0.0)
    return propagate(prob.pair, cert, t, 0, inc, config).value


def q3_apply(prob: ProblemInstance, cert: SectorCertificate, t: float,
             config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Smoothed-increment convolution (A-weighted); zero at t = 0."""
    _check_t(prob, t)
    if t == 0.0:
        return np.zeros(prob.pair.dim, dtype=complex)
    value, _ = _run_kernel(prob.pair, cert, t,
                           _q3_kernel(prob.pair, prob.f, t, config), config)
    return value


def _check_t(prob: ProblemInstance, t: float) -> None:
    if not (0.0 <= t <= prob.T + 1e-12):
        raise ValueError(f"t = {t:g} outside [0, T = {prob.T:g}]")


# ---------------------------------------------------------------------------
# solution traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionTrace:
    """Trace of Mv (and optionally its derivative) on a time grid.

    ``residual`` holds, per interior point, the norm of M v(t) - Mv(t) with
    v(t) = L^{-1}(DtMv(t) - f(t)) recovered from the derivative (NaN when no
    derivative was computed), relative to 1 + ||Mv(t)||.  ``init_decay``
    records ||M L^{-1}(Mv(t_k) - u0)|| at the three smallest positive grid
    points: the weak sense in which the initial value is attained.
    """

    grid: np.ndarray
    mv: np.ndarray
    dt_mv: np.ndarray | None
    quad_error: np.ndarray
    residual: np.ndarray
    init_decay: np.ndarray


def solve(prob: ProblemInstance, cert: SectorCertificate, grid,
          with_derivative: bool = False,
          config: RunConfig = DEFAULT_CONFIG) -> SolutionTrace:
    """Assemble the solution trace on a grid starting at 0.

    All contour integrals sharing a grid point reuse the same pencil
    factorizations by stacking their kernels as columns of one quadrature.
    """
    ts = np.asarray(grid, dtype=float)
    if ts.ndim != 1 or ts.size < 2:
        raise DegenerateGrid("grid must contain at least two points")
    if ts[0] != 0.0:
        raise DegenerateGrid("grid must start at 0")
    if np.any(np.diff(ts) <= 0):
        raise DegenerateGrid("grid must strictly increase")
    if ts[-1] > prob.T + 1e-12:
        raise DegenerateGrid("grid exceeds the problem horizon T")
    if with_derivative and not prob.has_consistency_data:
        raise ConsistencyMissing(
            "derivative trace requires compatibility data (v0, g0)")

    pair, f = prob.pair, prob.f
    dim = pair.dim
    K = ts.size
    mv = np.empty((K, dim), dtype=complex)
    dt_mv = np.empty((K, dim), dtype=complex) if with_derivative else None
    quad = np.zeros(K)
    mv[0] = prob.u0
    if with_derivative:
        dt_mv[0] = prob.g0

    for k in range(1, K):
        t = float(ts[k])
        kernels = [_q1_kernel(pair, f, t, config)]
        if with_derivative:
            kernels.append(_q3_kernel(pair, f, t, config))
        cols_list = [kr[0] for kr in kernels]
        bounds = [kr[1] for kr in kernels]
        u0 = prob.u0
        inc = f.value(t) - f.value(0.0)
        contour = ContourSpec.for_time(cert, t, config)
        lam_of = contour.lam

        def columns(lam: complex) -> np.ndarray:
            parts = [np.exp(t * lam) * u0]
            if with_derivative:
                parts.append(np.exp(t * lam) * prob.g0)
                parts.append(np.exp(t * lam) * inc)
            parts.extend(fn(lam) for fn in cols_list)
            return np.stack(parts, axis=1)

        base = vec_norm(u0, pair.norm) + vec_norm(inc, pair.norm)
        if with_derivative:
            base += vec_norm(prob.g0, pair.norm)

        def column_bound(eta: float) -> float:
            lam = lam_of(eta)
            b = math.exp(t * lam.real) * base
            return b + sum(fn(lam) for fn in bounds)

        value, est, _ = adaptive_contour_apply(
            pair, contour, columns,
            scale_hint=max(base, _forcing_scale(f, t, pair.norm)),
            config=config, resolvent_bound=cert.bound_at,
            column_bound=column_bound)
        quad[k] = est
        if with_derivative:
            mv[k] = value[:, 0] + value[:, 3] + kernels[0][2]
            dt_mv[k] = value[:, 1] + value[:, 2] + value[:, 4] + kernels[1][2]
        else:
            mv[k] = value[:, 0] + value[:, 1] + kernels[0][2]

    residual = np.full(K, math.nan)
    if with_derivative:
        for k in range(1, K):
            rhs = dt_mv[k] - f.value(float(ts[k]))
            v = np.linalg.solve(pair.L, rhs)
            residual[k] = (vec_norm(pair.M @ v - mv[k], pair.norm)
                           / (1.0 + vec_norm(mv[k], pair.norm)))

    n_init = min(3, K - 1)
    init = np.empty(n_init)
    for j in range(n_init):
        diff = mv[j + 1] - prob.u0
        init[j] = vec_norm(inv_a_apply(pair, diff, 1, config), pair.norm)
    return SolutionTrace(grid=ts, mv=mv, dt_mv=dt_mv, quad_error=quad,
                         residual=residual, init_decay=init)


# ---------------------------------------------------------------------------
# constants ledger
# ---------------------------------------------------------------------------

_ALL_CONSTANTS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8")


@dataclass(frozen=True)
class ConstantLedger:
    """Evaluated bound constants with provenance tags.

    Constants whose denominators are not strictly positive hold inf and are
    tagged 'inadmissible'.  Empirically estimated inputs (the smoothing
    prefactors ``tilde_c`` and the interpolation constant ``c_gamma_p``) are
    tagged 'empirical' and that tag propagates to every derived constant.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    tilde_c: tuple
    c_gamma_p: float
    provenance: dict = field(default_factory=dict)


def _c1_single(T: float, n: int, alpha: float, beta: float, gamma: float,
               tilde_c, c_gamma_p: float) -> float:
    """Prefactor of the small-time smoothing bound for one power n."""
    cn, cn1 = tilde_c[n], tilde_c[n + 1]
    C = c_gamma_p * cn ** (1.0 - gamma) * (cn + cn1) ** gamma
    Cp = 2.0 ** ((2.0 * (n + 1.0 - beta) + gamma) / alpha) * cn * C
    return C + Cp * T ** (gamma / alpha)


def constants_ledger(cert: SectorCertificate, idx, T: float, sigma: float,
                     mu: float, n: int, tilde_c, c_gamma_p: float,
                     require=_ALL_CONSTANTS) -> ConstantLedger:
    """Evaluate the bound constants exactly as assembled by the estimates.

    ``tilde_c`` are the fitted smoothing prefactors (k = 0, 1, 2) and
    ``c_gamma_p`` the empirical interpolation constant; both are tagged
    'empirical'.  ``require`` lists the constants whose denominators must be
    strictly positive; others degrade to inf.  c1 is maximised over the
    powers k <= max(n, 1) actually invoked by the bounds it feeds.
    """
    alpha, beta = cert.alpha, cert.beta
    gamma = idx.gamma
    if n not in (0, 1):
        raise ValueError("n must be 0 or 1 (tilde_c covers powers up to 2)")
    if len(tilde_c) < 3:
        raise ValueError("tilde_c must provide powers 0, 1, 2")
    if not (0.0 < sigma < 1.0):
        raise InadmissibleExponents("sigma must lie in (0, 1)")
    if not (0.0 < mu <= 1.0):
        raise InadmissibleExponents("mu must lie in (0, 1]")

    c1 = max(_c1_single(T, k, alpha, beta, gamma, tilde_c, c_gamma_p)
             for k in range(max(n, 1) + 1))

    dens = {
        "a+b-1-g": alpha + beta - 1.0 - gamma,
        "2a+b-2-g-as": 2.0 * alpha + beta - 2.0 - gamma - alpha * sigma,
        "am+a+b-2-g": alpha * mu + alpha + beta - 2.0 - gamma,
        "am+2a+b-3-g-as": (alpha * mu + 2.0 * alpha + beta - 3.0 - gamma
                           - alpha * sigma),
        "2+g-a-b": 2.0 + gamma - alpha - beta,
    }

    bad: dict[str, list[str]] = {}

    def guarded(name: str, needed: list[str], expr) -> float:
        missing = [d for d in needed if dens[d] <= 0.0]
        if missing:
            bad[name] = missing
            return math.inf
        return expr()

    c2 = guarded("c2", ["a+b-1-g", "2a+b-2-g-as"], lambda: alpha * c1 * (
        T ** ((1.0 - alpha) / alpha) * (T ** sigma + 1.0) / dens["a+b-1-g"]
        + (1.0 / sigma) / dens["2a+b-2-g-as"]))
    c3 = guarded("c3", ["a+b-1-g"], lambda: alpha / dens["a+b-1-g"] * c1
                 * (2.0 * T ** sigma + 1.0))
    c4 = guarded("c4", ["a+b-1-g"], lambda: c_gamma_p + c1
                 * T ** (dens["a+b-1-g"] / alpha - sigma) * (T ** sigma + 1.0))
    c5 = c1 * (T ** ((1.0 - alpha) / alpha) * (T ** sigma + 1.0) + 1.0 / sigma)
    c8 = guarded("c8", ["am+2a+b-3-g-as", "2+g-a-b", "am+a+b-2-g"], lambda: (
        (1.0 / sigma) / dens["am+2a+b-3-g-as"]
        + alpha * mu * T ** ((1.0 - alpha) / alpha)
        / (dens["2+g-a-b"] * dens["am+a+b-2-g"])))
    c7 = alpha * c1 * c8 if math.isfinite(c8) else math.inf
    c6 = guarded("c6", ["am+a+b-2-g"], lambda: alpha * c1 * (
        T ** ((1.0 - alpha + alpha * sigma) / alpha) / dens["am+a+b-2-g"] + c8))
    if not math.isfinite(c8) and "c6" not in bad:
        c6 = math.inf
        bad["c6"] = bad.get("c8", ["c8"])

    failed = sorted(set(require) & set(bad))
    if failed:
        detail = "; ".join(f"{k}: {','.join(bad[k])}" for k in failed)
        raise InadmissibleExponents(f"non-positive denominators for {detail}")

    prov = {"tilde_c": "empirical", "c_gamma_p": "empirical"}
    for name in _ALL_CONSTANTS:
        prov[name] = "inadmissible" if name in bad else "assembled+empirical"
    return ConstantLedger(c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6, c7=c7,
                          c8=c8, tilde_c=tuple(float(v) for v in tilde_c),
                          c_gamma_p=float(c_gamma_p), provenance=prov)
