"""Dense complex linear algebra kernel.

Matrices are two-dimensional ``numpy`` arrays of ``complex128``; the helpers
here add the pieces the frame-theory layers need on top of LAPACK:
rank-revealing SVD with a scale-invariant cutoff, Moore-Penrose
pseudo-inverses, orthonormal range bases and projectors, range-inclusion
tests with the associated factorization (given operators L1, L2 with
R(L1) inside R(L2) there is an X with L2 X = L1, and the least lambda with
L1 L1* <= lambda^2 L2 L2* equals the norm of the minimal X), inverses of an
operator restricted to a subspace, and a sufficient invertibility margin for
perturbed operators.

All "closed range" hypotheses of the underlying operator theory are vacuous
here: everything is finite dimensional, and only numerical rank is ever
tested. Every object is an immutable value and every function is pure, so
unrestricted concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InternalConsistencyError,
    NonFiniteInput,
    NotInvertible,
    RangeNotIncluded,
    RankDeficientRestriction,
    ShapeMismatch,
)

__all__ = [
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "SvdFactors",
    "Subspace",
    "OperatorEnv",
    "CheckResult",
    "RestrictedMap",
    "MarginReport",
    "as_matrix",
    "spectral_norm",
    "herm_eigvals",
    "min_eig",
    "svd_decompose",
    "pseudo_inverse",
    "range_projector",
    "range_inclusion_check",
    "douglas_solve",
    "majorization_constant",
    "restricted_inverse",
    "neumann_invertibility_margin",
]


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical thresholds shared across the toolkit.

    ``identity_tol`` is the relative tolerance for operator identities
    (checks compare residuals against ``identity_tol * max(1, scale)``).
    Numerical rank keeps singular values above
    ``sigma_max * max(rows, cols) * rank_scale`` unless ``rank_override``
    fixes an absolute cutoff.
    """

    identity_tol: float = 1e-10
    rank_scale: float = 2.0 ** -40
    rank_override: float | None = None

    def rank_cutoff(self, shape: tuple[int, int], sigma_max: float) -> float:
        if self.rank_override is not None:
            return self.rank_override
        return sigma_max * max(shape) * self.rank_scale

    def threshold(self, scale: float) -> float:
        return self.identity_tol * max(1.0, scale)

    def with_tol(self, tol: float | None) -> "TolerancePolicy":
        if tol is None:
            return self
        return TolerancePolicy(tol, self.rank_scale, self.rank_override)


DEFAULT_POLICY = TolerancePolicy()


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Coerce to a read-only 2-d complex128 array, rejecting NaN/Inf."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    if a.ndim != 2 or a.size == 0:
        raise ShapeMismatch(f"{name} must be a nonempty 2-d array, got shape {a.shape}")
    if not (np.all(np.isfinite(a.real)) and np.all(np.isfinite(a.imag))):
        raise NonFiniteInput(f"{name} contains NaN or Inf entries")
    a = a.copy()
    a.setflags(write=False)
    return a


def spectral_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2))


def herm_eigvals(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Hermitian part (ascending)."""
    return np.linalg.eigvalsh((h + h.conj().T) / 2.0)


def min_eig(h: np.ndarray) -> float:
    return float(herm_eigvals(h)[0])


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD with a committed numerical rank.

    ``left_vectors`` and ``right_vectors`` have orthonormal columns;
    ``singular_values`` is descending and ``rank`` counts values above
    ``rank_tolerance``.
    """

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray
    rank: int
    rank_tolerance: float

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.conj().T


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^n carried by an orthonormal column basis (n x k)."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128).copy()
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise ShapeMismatch(
                f"basis must be {self.ambient_dim} x k, got shape {b.shape}"
            )
        if b.shape[1]:
            gram = b.conj().T @ b
            if np.linalg.norm(gram - np.eye(b.shape[1])) > 1e-10:
                raise ShapeMismatch("basis columns are not orthonormal")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    @staticmethod
    def full(n: int) -> "Subspace":
        return Subspace(n, np.eye(n, dtype=np.complex128))


def svd_decompose(m, policy: TolerancePolicy = DEFAULT_POLICY) -> SvdFactors:
    """Thin SVD of ``m`` with the policy's rank cutoff applied.

    Deterministic for fixed input; raises NonFiniteInput on NaN/Inf.
    """
    a = as_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    sigma_max = float(s[0]) if s.size else 0.0
    cutoff = policy.rank_cutoff(a.shape, sigma_max)
    rank = int(np.sum(s > cutoff))
    factors = SvdFactors(u, s, vh.conj().T, rank, cutoff)
    resid = np.linalg.norm(factors.reconstruct() - a)
    if resid > 1e-10 * max(1.0, float(np.linalg.norm(a))):
        raise InternalConsistencyError(
            f"SVD reconstruction residual {resid:.3e} exceeds tolerance", float(resid)
        )
    return factors


def pseudo_inverse(m, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Moore-Penrose pseudo-inverse, rank-truncated per the policy."""
    f = svd_decompose(m, policy)
    if f.rank == 0:
        return np.zeros((f.right_vectors.shape[0], f.left_vectors.shape[0]), dtype=np.complex128)
    u = f.left_vectors[:, : f.rank]
    v = f.right_vectors[:, : f.rank]
    s = f.singular_values[: f.rank]
    return (v / s) @ u.conj().T


def range_projector(m, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[Subspace, np.ndarray]:
    """Orthonormal basis of R(m) and the orthogonal projector onto it."""
    f = svd_decompose(m, policy)
    basis = f.left_vectors[:, : f.rank]
    sub = Subspace(basis.shape[0], basis)
    return sub, sub.projector()


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict carrying its residual and the threshold used."""

    ok: bool
    residual: float
    threshold: float

    def __bool__(self) -> bool:
        return self.ok


def range_inclusion_check(
    l1, l2, tol: float | None = None, policy: TolerancePolicy = DEFAULT_POLICY
) -> CheckResult:
    """Test R(l1) inside R(l2) via the residual of (I - P_{R(l2)}) l1."""
    a = as_matrix(l1, "l1")
    b = as_matrix(l2, "l2")
    if a.shape[0] != b.shape[0]:
        raise ShapeMismatch(f"row counts differ: {a.shape[0]} vs {b.shape[0]}")
    _, proj = range_projector(b, policy)
    residual = spectral_norm(a - proj @ a)
    threshold = (tol if tol is not None else policy.identity_tol) * max(1.0, spectral_norm(a))
    return CheckResult(residual <= threshold, residual, threshold)


def douglas_solve(l1, l2, policy: TolerancePolicy = DEFAULT_POLICY) -> np.ndarray:
    """Minimal-norm X with l2 X = l1, available exactly when R(l1) is in R(l2).

    X = pinv(l2) l1, whose rows live in R(l2*); raises RangeNotIncluded when
    the inclusion fails at tolerance.
    """
    a = as_matrix(l1, "l1")
    b = as_matrix(l2, "l2")
    check = range_inclusion_check(a, b, policy=policy)
    if not check:
        raise RangeNotIncluded(
            f"R(l1) not contained in R(l2): residual {check.residual:.3e} "
            f"> threshold {check.threshold:.3e}",
            check.residual,
        )
    x = pseudo_inverse(b, policy) @ a
    resid = spectral_norm(b @ x - a)
    if resid > policy.threshold(spectral_norm(a)):
        raise InternalConsistencyError(
            f"factorization residual {resid:.3e} despite range inclusion", resid
        )
    return x


def _psd_pinv_sqrt(g: np.ndarray, policy: TolerancePolicy) -> np.ndarray:
    """Hermitian PSD pseudo-inverse square root via eigendecomposition."""
    w, v = np.linalg.eigh((g + g.conj().T) / 2.0)
    wmax = float(w[-1]) if w.size else 0.0
    cutoff = policy.rank_cutoff(g.shape, wmax)
    inv_sqrt = np.where(w > cutoff, 1.0 / np.sqrt(np.maximum(w, 1e-300)), 0.0)
    return (v * inv_sqrt) @ v.conj().T


def majorization_constant(l1, l2, policy: TolerancePolicy = DEFAULT_POLICY) -> float:
    """Least lambda >= 0 with l1 l1* <= lambda^2 l2 l2*.

    Computed as the spectral norm of the minimal Douglas solution and
    cross-checked by an independent eigenvalue route on the Gram matrices;
    disagreement beyond 1e-8 raises InternalConsistencyError.
    """
    a = as_matrix(l1, "l1")
    b = as_matrix(l2, "l2")
    x = douglas_solve(a, b, policy)
    lam = spectral_norm(x)

    g1 = a @ a.conj().T
    g2 = b @ b.conj().T
    half = _psd_pinv_sqrt(g2, policy)
    lam_cc = float(np.sqrt(max(0.0, float(herm_eigvals(half @ g1 @ half)[-1]))))
    if abs(lam - lam_cc) > 1e-8 * max(1.0, lam):
        raise InternalConsistencyError(
            f"majorization routes disagree: {lam!r} vs {lam_cc!r}", abs(lam - lam_cc)
        )
    slack = min_eig(lam**2 * g2 - g1)
    if slack < -1e-9 * max(1.0, spectral_norm(g1)):
        raise InternalConsistencyError(
            f"lambda^2 L2 L2* - L1 L1* indefinite at the computed lambda: {slack:.3e}", -slack
        )
    return lam


@dataclass(frozen=True)
class RestrictedMap:
    """Inverse of ``s`` viewed as a bijection from a subspace V onto s(V).

    ``matrix`` is the full-space realization: it annihilates s(V)-perp and
    maps s(V) back onto V, so ``matrix @ s`` acts as the identity on V.
    """

    matrix: np.ndarray
    domain: Subspace
    codomain: Subspace
    proj_domain: np.ndarray

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    @property
    def adjoint_matrix(self) -> np.ndarray:
        return self.matrix.conj().T

    def norm(self) -> float:
        return spectral_norm(self.matrix)


def restricted_inverse(s, v: Subspace, policy: TolerancePolicy = DEFAULT_POLICY) -> RestrictedMap:
    """Invert ``s`` restricted to ``v``; requires s injective on v.

    Raises RankDeficientRestriction when ``s`` collapses ``v``.
    """
    a = as_matrix(s, "s")
    if a.shape[1] != v.ambient_dim:
        raise ShapeMismatch(
            f"operator acts on C^{a.shape[1]} but subspace lives in C^{v.ambient_dim}"
        )
    image = a @ v.basis
    f = svd_decompose(image, policy) if v.dim else None
    if v.dim and f.rank < v.dim:
        raise RankDeficientRestriction(
            f"operator collapses the subspace: rank {f.rank} < dim {v.dim}"
        )
    matrix = v.basis @ pseudo_inverse(image, policy) if v.dim else np.zeros(
        (v.ambient_dim, a.shape[0]), dtype=np.complex128
    )
    if v.dim:
        domain = Subspace(a.shape[0], f.left_vectors[:, : f.rank])
    else:
        domain = Subspace(a.shape[0], np.zeros((a.shape[0], 0), dtype=np.complex128))
    return RestrictedMap(matrix, domain, v, domain.projector())


@dataclass(frozen=True)
class MarginReport:
    """Invertibility verdict for a perturbed operator.

    ``margin`` is 1/norm(t^-1) (the smallest singular value of t); whenever
    ``distance`` < ``margin`` the perturbed operator is invertible. Outside
    that sufficient condition the verdict is settled by a direct rank test
    and ``settled_by`` says which route decided.
    """

    distance: float
    margin: float
    invertible: bool
    settled_by: str  # "margin" or "rank"


def neumann_invertibility_margin(
    t, u, policy: TolerancePolicy = DEFAULT_POLICY
) -> MarginReport:
    """Perturbation margin: norm(t - u) against 1/norm(t^-1).

    Square t must be invertible at tolerance. Rectangular t (a restriction
    expressed against a subspace basis) is accepted when it has full column
    rank; "invertible" then means injective, which is invertibility onto
    the image.
    """
    a = as_matrix(t, "t")
    b = as_matrix(u, "u")
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    if a.shape[0] < a.shape[1]:
        raise ShapeMismatch(f"t has more columns than rows: {a.shape}")
    fa = svd_decompose(a, policy)
    if fa.rank < a.shape[1]:
        raise NotInvertible(
            f"t is singular at tolerance (rank {fa.rank} of {a.shape[1]})"
        )
    margin = float(fa.singular_values[-1])
    distance = spectral_norm(a - b)
    if distance < margin:
        return MarginReport(distance, margin, True, "margin")
    rank_u = svd_decompose(b, policy).rank
    return MarginReport(distance, margin, rank_u == b.shape[1], "rank")


@dataclass(frozen=True)
class OperatorEnv:
    """An operator K bundled with its pseudo-inverse and range geometry.

    Satisfies K K^dagger = P_{R(K)} and P_{R(K)} K = K; ``adjoint()`` swaps
    the roles of K and K*, which is how every K*-frame question is asked.
    """

    k: np.ndarray
    k_adjoint: np.ndarray
    k_pinv: np.ndarray
    range_k: Subspace
    range_k_adjoint: Subspace
    proj_range_k: np.ndarray
    proj_range_k_adjoint: np.ndarray

    @staticmethod
    def from_matrix(k, policy: TolerancePolicy = DEFAULT_POLICY) -> "OperatorEnv":
        a = as_matrix(k, "k")
        if a.shape[0] != a.shape[1]:
            raise ShapeMismatch(f"operator must be square, got {a.shape}")
        f = svd_decompose(a, policy)
        r = f.rank
        basis_range = f.left_vectors[:, :r]
        basis_corange = f.right_vectors[:, :r]
        if r:
            pinv = (basis_corange / f.singular_values[:r]) @ basis_range.conj().T
        else:
            pinv = np.zeros_like(a.conj().T)
        env = OperatorEnv(
            k=a,
            k_adjoint=as_matrix(a.conj().T),
            k_pinv=as_matrix(pinv, "k_pinv"),
            range_k=Subspace(a.shape[0], basis_range),
            range_k_adjoint=Subspace(a.shape[1], basis_corange),
            proj_range_k=as_matrix(basis_range @ basis_range.conj().T, "proj"),
            proj_range_k_adjoint=as_matrix(basis_corange @ basis_corange.conj().T, "proj"),
        )
        env._self_check(policy)
        return env

    def _self_check(self, policy: TolerancePolicy) -> None:
        scale = max(1.0, spectral_norm(self.k))
        resid = spectral_norm(self.k @ self.k_pinv - self.proj_range_k)
        if resid > 1e-10 * scale:
            raise InternalConsistencyError(
                f"K K^dagger differs from the range projector by {resid:.3e}", resid
            )
        resid = spectral_norm(self.proj_range_k @ self.k - self.k)
        if resid > 1e-10 * scale:
            raise InternalConsistencyError(
                f"P_R(K) K differs from K by {resid:.3e}", resid
            )

    @property
    def dim(self) -> int:
        return self.k.shape[0]

    @property
    def rank(self) -> int:
        return self.range_k.dim

    def is_zero(self) -> bool:
        return self.rank == 0

    def norm(self) -> float:
        return spectral_norm(self.k)

    def pinv_norm(self) -> float:
        return spectral_norm(self.k_pinv)

    def adjoint(self) -> "OperatorEnv":
        return OperatorEnv(
            k=self.k_adjoint,
            k_adjoint=self.k,
            k_pinv=as_matrix(self.k_pinv.conj().T),
            range_k=self.range_k_adjoint,
            range_k_adjoint=self.range_k,
            proj_range_k=self.proj_range_k_adjoint,
            proj_range_k_adjoint=self.proj_range_k,
        )

    @staticmethod
    def identity(n: int) -> "OperatorEnv":
        return OperatorEnv.from_matrix(np.eye(n, dtype=np.complex128))
