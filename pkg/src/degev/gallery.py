"""Built-in test problems with known degeneracy profiles.

Each builder is deterministic given its parameters and returns a full
problem instance (pair, forcing, initial data, horizon) ready for the
solver and the measurement harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnknownEntry
from .evolve import Forcing, ProblemInstance
from .operators import OperatorPair

__all__ = ["GalleryEntry", "GALLERY", "build_gallery", "gallery_names"]


@dataclass(frozen=True)
class GalleryEntry:
    """Catalog record: builder parameters and the certificate it should earn.

    ``expected_certificate`` is (alpha, beta) with a note on how the values
    were obtained; None when the entry's certificate is resolution-dependent.
    """

    name: str
    default_size: int
    expected_certificate: tuple | None
    notes: str


GALLERY = {
    "analytic-diag": GalleryEntry(
        name="analytic-diag",
        default_size=64,
        expected_certificate=(1.0, 0.999,
                              "resolvent-norm sampling oracle; beta clamped "
                              "just below alpha"),
        notes="M = I, L = diag(-1..-N); bounded analytic reference case"),
    "degenerate-heat": GalleryEntry(
        name="degenerate-heat",
        default_size=16,
        expected_certificate=None,
        notes="M = diag(x_i) with the mass profile m(x) = x vanishing at the "
              "left edge; L = second-difference Dirichlet Laplacian / h^2"),
    "jordan-cascade": GalleryEntry(
        name="jordan-cascade",
        default_size=32,
        expected_certificate=None,
        notes="conjugate pairs of 2x2 upper-triangular blocks with "
              "eigenvalues on the curve Re = -(|Im|+1)^0.85 and nilpotent "
              "coupling growing like (|Im|+1)^(2*0.85-0.6); certified decay "
              "strictly below the region exponent"),
    "singular-mass": GalleryEntry(
        name="singular-mass",
        default_size=2,
        expected_certificate=(1.0, 0.999,
                              "closed-form resolvent diag(1/(lam+1), 0); "
                              "beta clamped just below alpha"),
        notes="M = diag(1, 0), L = diag(-1, -2); smallest degenerate pair"),
}

_JORDAN_ALPHA = 0.85
_JORDAN_BETA = 0.6


def gallery_names() -> list[str]:
    return sorted(GALLERY)


def _parse(name: str) -> tuple[str, int]:
    """Split 'family-N' into (family, N); bare family names use the default."""
    for family, entry in GALLERY.items():
        if name == family:
            return family, entry.default_size
        if name.startswith(family + "-"):
            tail = name[len(family) + 1:]
            try:
                return family, int(tail)
            except ValueError:
                break
    raise UnknownEntry(f"no gallery entry matches {name!r}; "
                       f"known families: {gallery_names()}")


def _analytic_diag(n: int) -> ProblemInstance:
    if n < 2:
        raise UnknownEntry("analytic-diag needs N >= 2")
    M = np.eye(n, dtype=complex)
    L = -np.diag(np.arange(1.0, n + 1.0)).astype(complex)
    pair = OperatorPair(M=M, L=L)
    w = np.ones(n) / math.sqrt(n)
    forcing = Forcing(kind="polynomial", mu=0.9, coeffs=np.stack([w, w]))
    return ProblemInstance(pair=pair, f=forcing, u0=w, T=1.0, v0=w)


def _degenerate_heat(n: int) -> ProblemInstance:
    if n < 2:
        raise UnknownEntry("degenerate-heat needs N >= 2")
    h = 1.0 / (n + 1)
    x = np.arange(1, n + 1) * h
    M = np.diag(x).astype(complex)
    L = (np.diag(-2.0 * np.ones(n)) + np.diag(np.ones(n - 1), 1)
         + np.diag(np.ones(n - 1), -1)).astype(complex) / h ** 2
    pair = OperatorPair(M=M, L=L)
    v0 = np.sin(math.pi * x)
    u0 = M @ v0
    w = M @ np.sin(2.0 * math.pi * x)
    forcing = Forcing(kind="polynomial", mu=0.9, coeffs=np.stack([w, w]))
    return ProblemInstance(pair=pair, f=forcing, u0=u0, T=1.0, v0=v0)


def _jordan_cascade(n: int) -> ProblemInstance:
    if n < 8 or n % 4:
        raise UnknownEntry("jordan-cascade needs N divisible by 4, N >= 8")
    levels = n // 4
    L = np.zeros((n, n), dtype=complex)
    k = 0
    for j in range(levels):
        y = 3.0 ** j
        kappa = (y + 1.0) ** (2.0 * _JORDAN_ALPHA - _JORDAN_BETA)
        for sgn in (1.0, -1.0):  # conjugate pair keeps the spectrum symmetric
            mu_j = -((y + 1.0) ** _JORDAN_ALPHA) + 1j * sgn * y
            L[k, k] = mu_j
            L[k + 1, k + 1] = mu_j
            L[k, k + 1] = kappa
            k += 2
    pair = OperatorPair(M=np.eye(n, dtype=complex), L=L)
    v0 = np.ones(n, dtype=complex) / math.sqrt(n)
    w = np.array([(-1.0) ** k for k in range(n)], dtype=complex) / math.sqrt(n)
    forcing = Forcing(kind="polynomial", mu=0.9, coeffs=np.stack([w, w]))
    return ProblemInstance(pair=pair, f=forcing, u0=v0, T=1.0, v0=v0)


def _singular_mass(n: int) -> ProblemInstance:
    if n != 2:
        raise UnknownEntry("singular-mass is defined for N = 2 only")
    pair = OperatorPair(M=np.diag([1.0, 0.0]).astype(complex),
                        L=np.diag([-1.0, -2.0]).astype(complex))
    # f(t) = (1 + t, 1); v0 = (1, 1/2) makes g0 = L v0 + f(0) = 0 in range(M)
    forcing = Forcing(kind="polynomial", mu=0.9,
                      coeffs=np.array([[1.0, 1.0], [1.0, 0.0]], dtype=complex))
    return ProblemInstance(pair=pair, f=forcing, u0=np.array([1.0, 0.0]),
                           T=1.0, v0=np.array([1.0, 0.5]))


_BUILDERS = {
    "analytic-diag": _analytic_diag,
    "degenerate-heat": _degenerate_heat,
    "jordan-cascade": _jordan_cascade,
    "singular-mass": _singular_mass,
}


def build_gallery(name: str, size: int | None = None) -> ProblemInstance:
    """Build a gallery problem, e.g. 'degenerate-heat-16' or 'analytic-diag'."""
    family, n = _parse(name)
    if size is not None:
        n = size
    return _BUILDERS[family](n)
