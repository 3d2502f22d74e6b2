"""Empirical certification of the resolvent decay region and exponents.

The artifact probes ||M (lam*M - L)^{-1}|| on grids covering the region
boundary Re lam = -c(|Im lam| + 1)^alpha and interior curves, then fits the
decay exponent beta from the imaginary-axis samples and records the smallest
admissible prefactor.  Certification is sampled, not symbolic: the residual
of the fitted bound is reported rather than hidden.  A dense pencil
eigenvalue pre-filter rejects candidate regions that contain spectrum, which
grid sampling alone cannot detect reliably.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_CONFIG, RunConfig
from .errors import IllConditioned, InsufficientDecay, SingularPencil
from .operators import OperatorPair, operator_norm, pencil_solve

__all__ = [
    "RegionProbePlan", "SectorCertificate", "boundary_point",
    "probe_resolvent_norms", "fit_certificate", "certify_pair",
    "validate_certificate", "pencil_eigenvalues",
]

DEFAULT_ALPHA_GRID = (1.0, 0.95, 0.9, 0.85, 0.8, 0.7, 0.6, 0.5)
DEFAULT_C_GRID = (5.0, 2.0, 1.0, 0.5, 0.2, 0.1, 0.05)


@dataclass(frozen=True)
class RegionProbePlan:
    """Grid layout for resolvent-norm probing.

    ``n_boundary`` points go on the region boundary, ``n_interior`` on each
    of ``radial_levels`` interior curves (the innermost being the imaginary
    axis, which always includes lambda = 0).
    """

    eta_max: float = 1e3
    n_boundary: int = 64
    n_interior: int = 48
    radial_levels: int = 3

    def __post_init__(self) -> None:
        if self.n_boundary < 16:
            raise ValueError("n_boundary must be >= 16")
        if self.eta_max <= 1.0:
            raise ValueError("eta_max must exceed 1")


@dataclass(frozen=True)
class SectorCertificate:
    """Fitted region and decay parameters (alpha, beta, c, C).

    ``samples`` records every probed (lambda, norm) pair and ``residual`` the
    maximal relative violation of norm <= C (|lambda|+1)^{-beta} over them
    (zero at construction since C is the max ratio).
    """

    alpha: float
    beta: float
    c: float
    C: float
    samples: tuple = field(repr=False, default=())
    residual: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.beta < self.alpha <= 1.0):
            raise ValueError("certificate requires 0 < beta < alpha <= 1")
        if self.c <= 0 or self.C <= 0:
            raise ValueError("certificate constants must be positive")

    def bound_at(self, lam: complex) -> float:
        return self.C * (abs(lam) + 1.0) ** (-self.beta)


def boundary_point(alpha: float, c: float, eta: float) -> complex:
    """Point on the region boundary at imaginary height eta."""
    return -c * (abs(eta) + 1.0) ** alpha + 1j * eta


def _eta_grid(eta_max: float, n: int) -> np.ndarray:
    """Symmetric grid 0, +-logspace covering [1e-1, eta_max]."""
    half = max(8, (n - 1) // 2)
    pos = np.logspace(-1.0, math.log10(eta_max), half)
    return np.concatenate([-pos[::-1], [0.0], pos])


def _norm_at(pair: OperatorPair, lam: complex, config: RunConfig) -> float:
    res = pair.M @ pencil_solve(pair, lam, np.eye(pair.dim, dtype=complex), config)
    return operator_norm(res, pair.dim, norm=pair.norm, config=config)


def probe_resolvent_norms(pair: OperatorPair, plan: RegionProbePlan,
                          alpha: float, c: float,
                          config: RunConfig = DEFAULT_CONFIG) -> list[tuple[complex, float]]:
    """Sample ||M (lam*M - L)^{-1}|| on the boundary and interior curves.

    Returns one (lambda, norm) pair per grid point; the grid contains
    lambda = 0 and both half-branches eta >< 0.  SingularPencil and
    IllConditioned propagate: they signal that the candidate region is not
    contained in the admissible set and must be shrunk.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must be in (0, 1]")
    if c <= 0:
        raise ValueError("c must be positive")
    samples: list[tuple[complex, float]] = []
    levels = [k / plan.radial_levels for k in range(plan.radial_levels)] + [1.0]
    for s in levels:
        n = plan.n_boundary if s == 1.0 else plan.n_interior
        for eta in _eta_grid(plan.eta_max, n):
            lam = -s * c * (abs(eta) + 1.0) ** alpha + 1j * eta
            samples.append((complex(lam), _norm_at(pair, lam, config)))
    return samples


def pencil_eigenvalues(pair: OperatorPair) -> np.ndarray:
    """Finite eigenvalues of the pencil lambda*M - L (dense solve)."""
    ev = sla.eigvals(pair.L, pair.M)
    return ev[np.isfinite(ev)]


def _region_clear_of_spectrum(eigs: np.ndarray, alpha: float, c: float,
                              margin: float) -> bool:
    if eigs.size == 0:
        return True
    boundary = -c * (np.abs(eigs.imag) + 1.0) ** alpha
    return bool(np.all(eigs.real <= (1.0 + margin) * boundary))


def _imag_axis_mask(lams: np.ndarray) -> np.ndarray:
    return np.abs(lams.real) <= 1e-12 * (1.0 + np.abs(lams))


def fit_certificate(samples, alpha_grid=None, c_grid=None, *,
                    prober=None, config: RunConfig = DEFAULT_CONFIG,
                    alpha: float | None = None, c: float | None = None) -> SectorCertificate:
    """Fit (alpha, beta, c, C) from probe samples.

    beta is the least-squares slope of log(norm) against log(|lambda|+1)
    restricted to imaginary-axis samples; C is the max ratio
    norm * (|lambda|+1)^beta over all samples.  When ``prober`` is given the
    region (alpha, c) is chosen lexicographically (largest alpha, then
    largest c) among the grid candidates for which probing succeeds, and the
    probed samples are merged in.  Otherwise (alpha, c) must be supplied.
    """
    samples = list(samples or [])
    if prober is not None:
        if alpha_grid is None:
            alpha_grid = DEFAULT_ALPHA_GRID
        if c_grid is None:
            c_grid = DEFAULT_C_GRID
        found = None
        for a in sorted(alpha_grid, reverse=True):
            for cc in sorted(c_grid, reverse=True):
                try:
                    probed = prober(a, cc)
                except (SingularPencil, IllConditioned):
                    continue
                if probed is None:
                    continue
                found = (a, cc, list(probed))
                break
            if found:
                break
        if found is None:
            raise InsufficientDecay("no candidate region admits a full probe sweep")
        alpha, c, probed = found
        samples = samples + probed
    if alpha is None or c is None:
        raise ValueError("alpha and c required when no prober is given")

    lams = np.array([s[0] for s in samples], dtype=complex)
    norms = np.array([s[1] for s in samples], dtype=float)
    if len(samples) < 32:
        raise ValueError("need at least 32 samples to fit a certificate")
    scale = np.abs(lams) + 1.0
    if math.log10(scale.max() / scale.min()) < 2.0:
        raise ValueError("samples must span at least two decades of |lambda|")

    mask = _imag_axis_mask(lams) & (norms > 0)
    if np.count_nonzero(mask) < 8:
        raise ValueError("need at least 8 imaginary-axis samples for the decay fit")
    x = np.log(scale[mask])
    y = np.log(norms[mask])
    slope, _ = np.polyfit(x, y, 1)
    beta = -float(slope)
    if beta <= 0:
        raise InsufficientDecay(f"fitted decay exponent {beta:.3g} is not positive")
    if beta >= alpha:
        beta = alpha - config.beta_gap
        if beta <= 0:
            raise InsufficientDecay("alpha too small to clamp beta below it")
    prefactor = float(np.max(norms * scale ** beta))
    cert = SectorCertificate(alpha=float(alpha), beta=beta, c=float(c),
                             C=prefactor, samples=tuple(samples), residual=0.0)
    return cert


def validate_certificate(cert: SectorCertificate, extra_samples=()) -> float:
    """Max relative violation of the certified bound over old + new samples."""
    worst = 0.0
    for lam, norm in list(cert.samples) + list(extra_samples):
        bound = cert.bound_at(lam)
        if bound > 0:
            worst = max(worst, norm / bound - 1.0)
    return max(0.0, worst)


def certify_pair(pair: OperatorPair, plan: RegionProbePlan | None = None,
                 alpha_grid=None, c_grid=None,
                 config: RunConfig = DEFAULT_CONFIG) -> SectorCertificate:
    """Full certification sweep for an operator pair.

    Candidate regions whose boundary does not clear the (dense) pencil
    spectrum by ``region_margin`` are rejected before probing; probing and
    fitting then proceed on the largest surviving region.
    """
    plan = plan or RegionProbePlan()
    eigs = pencil_eigenvalues(pair)
    if eigs.size and np.max(eigs.real) >= 0:
        raise InsufficientDecay(
            "pencil spectrum reaches the closed right half plane; "
            "no admissible region exists")

    def prober(a: float, cc: float):
        if not _region_clear_of_spectrum(eigs, a, cc, config.region_margin):
            return None
        return probe_resolvent_norms(pair, plan, a, cc, config)

    return fit_certificate([], alpha_grid, c_grid, prober=prober, config=config)
