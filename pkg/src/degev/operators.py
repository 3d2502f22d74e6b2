"""Complex dense linear algebra for operator pairs (M, L).

The induced operator A = L M^{-1} with domain M(D(L)) is never materialised:
every A-action is a composition of pencil solves with multiplications by M.
All operations are pure functions of their inputs; factorizations are not
cached across calls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.linalg import lapack

from .config import DEFAULT_CONFIG, RunConfig
from .errors import IllConditioned, NoConvergence, NotInDomain, SingularPencil

__all__ = [
    "OperatorPair", "DomainNormReport", "vec_norm", "as_vector",
    "pencil_solve", "resolvent_apply", "operator_norm", "domain_norm",
    "inv_a_apply",
]


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Coerce to a complex vector (or dim x m block) with finite entries."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim not in (1, 2):
        raise ValueError("expected a vector or a block of column vectors")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"expected leading dimension {dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def vec_norm(x: np.ndarray, norm: str = "l2") -> float:
    """Vector norm in the configured convention ('l2' or 'linf').

    For a 2-D block the norm is taken per column and the max returned.
    """
    a = np.asarray(x)
    if a.ndim == 2:
        if a.shape[1] == 0:
            return 0.0
        return float(max(vec_norm(a[:, j], norm) for j in range(a.shape[1])))
    if norm == "l2":
        return float(np.linalg.norm(a))
    if norm == "linf":
        return float(np.max(np.abs(a))) if a.size else 0.0
    raise ValueError(f"unknown norm convention {norm!r}")


@dataclass(frozen=True)
class OperatorPair:
    """The matrices M and L of a pencil, with the norm convention of X.

    L must be invertible: the inverse A^{-1} = M L^{-1} and the weak
    initial-condition recovery both rely on L-solves.  This is enforced at
    construction through a conditioned factorization.
    """

    M: np.ndarray
    L: np.ndarray
    norm: str = "l2"

    def __post_init__(self) -> None:
        M = np.array(self.M, dtype=complex)
        L = np.array(self.L, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("M must be square")
        if L.shape != M.shape:
            raise ValueError("M and L must have identical shape")
        if not (np.all(np.isfinite(M)) and np.all(np.isfinite(L))):
            raise ValueError("matrix entries must be finite")
        if self.norm not in ("l2", "linf"):
            raise ValueError("norm must be 'l2' or 'linf'")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "L", L)
        # conditioned solve against L; rejects non-invertible L up front
        _factorize(L, rcond_min=DEFAULT_CONFIG.rcond_min,
                   what="L (must be invertible)")

    @property
    def dim(self) -> int:
        return self.M.shape[0]


@dataclass(frozen=True)
class DomainNormReport:
    """Graph-norm report: ||x|| + ||A x|| with A x = L(M^{-1}x)."""

    x_norm: float
    ax_norm: float
    total: float = field(default=0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "total", self.x_norm + self.ax_norm)


def _factorize(P: np.ndarray, rcond_min: float, what: str = "pencil"):
    """LU-factorize with a reciprocal condition estimate.

    Raises SingularPencil on exact rank deficiency and IllConditioned when
    the condition estimate exceeds 1/rcond_min.
    """
    anorm = float(np.linalg.norm(P, 1)) if P.size else 0.0
    if anorm == 0.0:
        raise SingularPencil(f"{what} is the zero matrix")
    try:
        lu, piv = sla.lu_factor(P)
    except (sla.LinAlgError, ValueError) as exc:
        raise SingularPencil(f"{what}: factorization failed ({exc})") from exc
    diag = np.abs(np.diag(lu))
    if not np.all(np.isfinite(lu)) or np.min(diag) == 0.0:
        raise SingularPencil(f"{what}: rank deficient factorization")
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    if info != 0:
        raise SingularPencil(f"{what}: condition estimate failed (info={info})")
    if rcond < rcond_min:
        raise IllConditioned(
            f"{what}: reciprocal condition estimate {rcond:.2e} below {rcond_min:.1e}")
    return lu, piv


def pencil_solve(pair: OperatorPair, lam: complex, rhs,
                 config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Solve (lam*M - L) y = rhs with one step of iterative refinement.

    ``rhs`` may be a vector or a block of column vectors.  The residual is
    verified against ``solve_tol_per_dim * dim * ||rhs||``; exceeding it
    signals a solve too close to the pencil spectrum.
    """
    rhs = as_vector(rhs, pair.dim)
    P = lam * pair.M - pair.L
    lu_piv = _factorize(P, config.rcond_min, what=f"pencil at lambda={lam:g}")
    y = sla.lu_solve(lu_piv, rhs)
    r = rhs - P @ y
    y = y + sla.lu_solve(lu_piv, r)
    r = rhs - P @ y
    tol = config.solve_tol_per_dim * pair.dim
    rhs_scale = np.linalg.norm(rhs)
    if rhs_scale > 0 and np.linalg.norm(r) > tol * rhs_scale:
        raise IllConditioned(
            f"pencil at lambda={lam:g}: residual {np.linalg.norm(r):.2e} "
            f"exceeds {tol:.1e} * ||rhs||")
    return y


def resolvent_apply(pair: OperatorPair, lam: complex, x,
                    config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Apply (lam*I - A)^{-1} = M (lam*M - L)^{-1} without forming A."""
    return pair.M @ pencil_solve(pair, lam, x, config)


def _materialize(op, dim: int, config: RunConfig) -> np.ndarray:
    """Build the dense matrix of a linear callback by probing basis vectors."""
    if isinstance(op, np.ndarray):
        if op.shape != (dim, dim):
            raise ValueError("matrix shape mismatch")
        return np.asarray(op, dtype=complex)
    if dim > config.dense_threshold:
        raise ValueError(
            f"dim {dim} exceeds dense threshold {config.dense_threshold}; "
            "pass the matrix explicitly")
    cols = [as_vector(op(np.eye(dim, dtype=complex)[:, j]), dim) for j in range(dim)]
    mat = np.stack(cols, axis=1)
    # probabilistic linearity check on two random pairs
    rng = np.random.default_rng(0x5EED)
    for _ in range(2):
        u = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        a, b = complex(rng.standard_normal()), complex(rng.standard_normal())
        lhs = as_vector(op(a * u + b * v), dim)
        rhs = a * as_vector(op(u), dim) + b * as_vector(op(v), dim)
        scale = np.linalg.norm(rhs) + 1.0
        if np.linalg.norm(lhs - rhs) > 1e-8 * scale:
            raise ValueError("callback is not linear within tolerance")
    return mat


def operator_norm(op, dim: int, norm: str = "l2",
                  config: RunConfig = DEFAULT_CONFIG) -> float:
    """Operator norm of a linear map given as matrix or callback.

    The l2 (spectral) norm is computed by power iteration on the composition
    with the adjoint action, run on a small orthonormal block with
    Rayleigh-Ritz extraction so clustered singular values do not stall it;
    the linf norm is the exact max absolute row sum.  Raises NoConvergence
    if the iteration does not settle within max_power_iters.
    """
    mat = _materialize(op, dim, config)
    if norm == "linf":
        return float(np.max(np.abs(mat).sum(axis=1))) if mat.size else 0.0
    if norm != "l2":
        raise ValueError(f"operator norm unavailable for convention {norm!r}")
    scale = float(np.max(np.abs(mat))) if mat.size else 0.0
    if scale == 0.0:
        return 0.0
    rng = np.random.default_rng(0xA17E)
    b = min(4, dim)
    V = rng.standard_normal((dim, b)) + 1j * rng.standard_normal((dim, b))
    V, _ = np.linalg.qr(V)
    sigma2_prev = -1.0
    settled = 0
    for _ in range(config.max_power_iters):
        W = mat.conj().T @ (mat @ V)
        S = V.conj().T @ W  # Rayleigh-Ritz projection of the Gram action
        sigma2 = float(np.max(np.linalg.eigvalsh(0.5 * (S + S.conj().T))))
        if abs(sigma2 - sigma2_prev) <= config.power_iter_tol * max(sigma2, 1e-300):
            settled += 1
            if settled >= 2:
                return float(np.sqrt(max(sigma2, 0.0)))
        else:
            settled = 0
        sigma2_prev = sigma2
        wn = np.linalg.norm(W)
        if wn == 0.0:
            return 0.0
        V, _ = np.linalg.qr(W)
    raise NoConvergence(
        f"power iteration did not settle in {config.max_power_iters} steps")


def domain_norm(pair: OperatorPair, x,
                config: RunConfig = DEFAULT_CONFIG) -> DomainNormReport:
    """Graph norm ||x|| + ||A x|| with A x = L w, M w = x.

    The preimage w is the minimum-norm least-squares solution; x must lie in
    range(M) within range_tol or NotInDomain is raised.
    """
    x = as_vector(x, pair.dim)
    if x.ndim != 1:
        raise ValueError("domain_norm expects a single vector")
    w, *_ = np.linalg.lstsq(pair.M, x, rcond=None)
    resid = np.linalg.norm(pair.M @ w - x)
    scale = max(1.0, float(np.linalg.norm(x)))
    if resid > config.range_tol * scale:
        raise NotInDomain(
            f"range residual {resid:.2e} exceeds {config.range_tol:.1e} * max(1,||x||)")
    ax = pair.L @ w
    return DomainNormReport(x_norm=vec_norm(x, pair.norm),
                            ax_norm=vec_norm(ax, pair.norm))


def inv_a_apply(pair: OperatorPair, x, power: int = 1,
                config: RunConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Apply A^{-k} = (M L^{-1})^k by alternating L-solves and M-products."""
    if power < 0:
        raise ValueError("power must be >= 0")
    y = as_vector(x, pair.dim)
    if power == 0:
        return y
    lu_piv = _factorize(pair.L, config.rcond_min, what="L")
    for _ in range(power):
        y = pair.M @ sla.lu_solve(lu_piv, y)
    return y
