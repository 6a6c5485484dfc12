"""Finite frames and their bounds relative to an operator K.

A sequence F = {f_i} in C^n is a K-frame when
``A |K* f|^2 <= sum_i |<f, f_i>|^2 <= B |f|^2`` for some A, B > 0; with
K = I this is the classical frame condition. The synthesis operator T_F maps
coefficients to ``sum_i c_i f_i`` (columns f_i), the analysis operator is its
adjoint, and the frame operator is S_F = T_F T_F*. Existence of the lower
bound is equivalent to R(K) being contained in R(T_F), and the optimal
constants are eigenvalue quantities: B = sigma_max(T_F)^2 and
A = 1 / lambda^2 for the least lambda with K K* <= lambda^2 S_F.

The functions here always compute optimal bounds; ``validate_bounds``
confirms user-supplied (possibly non-optimal) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IndexExceedsDimension,
    InternalConsistencyError,
    NotMinimal,
    ShapeMismatch,
    ZeroOperator,
    NotKFrame,
)
from .linalg import (
    DEFAULT_POLICY,
    OperatorEnv,
    TolerancePolicy,
    as_matrix,
    herm_eigvals,
    majorization_constant,
    min_eig,
    pseudo_inverse,
    range_inclusion_check,
    spectral_norm,
    svd_decompose,
)

__all__ = [
    "Frame",
    "FrameOperators",
    "FrameBounds",
    "BoundsValidation",
    "TightnessReport",
    "build_frame_ops",
    "optimal_bessel_bound",
    "k_frame_check",
    "validate_bounds",
    "tightness_check",
    "bessel_as_k_frame",
    "minimality_check",
    "biorthogonal_sequence",
]


@dataclass(frozen=True)
class Frame:
    """Ordered finite sequence of vectors in C^n, stored as rows (N x n)."""

    vectors: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.vectors, dtype=np.complex128)
        if raw.ndim != 2:
            raise ShapeMismatch(
                f"frame vectors must form a 2-d array (N x n), got shape {raw.shape}"
            )
        v = as_matrix(raw, "frame vectors")
        if v.shape[0] < 1:
            raise ShapeMismatch("a frame needs at least one vector")
        object.__setattr__(self, "vectors", v)

    @property
    def ambient_dim(self) -> int:
        return self.vectors.shape[1]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, i: int) -> np.ndarray:
        return self.vectors[i]

    @property
    def synthesis(self) -> np.ndarray:
        """n x N matrix whose i-th column is f_i (a pure transpose)."""
        return self.vectors.T

    @property
    def analysis(self) -> np.ndarray:
        return self.vectors.conj()

    @property
    def frame_operator(self) -> np.ndarray:
        return self.synthesis @ self.analysis

    @property
    def gram(self) -> np.ndarray:
        """N x N Gram matrix with entries <f_j, f_i>."""
        return self.analysis @ self.synthesis

    def map(self, operator: np.ndarray) -> "Frame":
        """Frame with vectors {A f_i} for a matrix A."""
        return Frame((as_matrix(operator, "operator") @ self.synthesis).T)

    def scaled(self, c: complex) -> "Frame":
        return Frame(c * self.vectors)

    @staticmethod
    def from_vectors(vectors) -> "Frame":
        return Frame(np.asarray(vectors, dtype=np.complex128))

    @staticmethod
    def standard_basis(n: int) -> "Frame":
        return Frame(np.eye(n, dtype=np.complex128))


@dataclass(frozen=True)
class FrameOperators:
    synthesis: np.ndarray
    analysis: np.ndarray
    frame_op: np.ndarray


def build_frame_ops(f: Frame) -> FrameOperators:
    """Synthesis (n x N), analysis (N x n) and frame operator (n x n)."""
    syn = f.synthesis
    ana = f.analysis
    s = syn @ ana
    if min_eig(s) < -1e-10 * max(1.0, spectral_norm(s)):
        raise InternalConsistencyError("frame operator is not positive semidefinite")
    return FrameOperators(syn, ana, s)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    optimal: bool = True


def optimal_bessel_bound(f: Frame) -> float:
    """Least valid B in sum_i |<f, f_i>|^2 <= B |f|^2, i.e. sigma_max(T_F)^2."""
    s = svd_decompose(f.synthesis).singular_values
    return float(s[0] ** 2)


def k_frame_check(
    f: Frame, env: OperatorEnv, policy: TolerancePolicy = DEFAULT_POLICY
) -> FrameBounds:
    """Optimal K-frame bounds (A, B) of ``f`` against the operator of ``env``.

    Raises NotKFrame when R(K) is not contained in R(T_F) (exactly the
    failure of the lower bound), ZeroOperator for K = 0 (the condition is
    vacuous and every downstream formula divides by A). The Douglas route
    A = 1/|pinv(T_F) K|^2 is cross-checked against the eigenvalue route
    A = 1/lambda_max(K* pinv(S_F) K).
    """
    if f.ambient_dim != env.dim:
        raise ShapeMismatch(
            f"frame lives in C^{f.ambient_dim}, operator acts on C^{env.dim}"
        )
    if env.is_zero():
        raise ZeroOperator("K = 0: every Bessel sequence qualifies vacuously; refusing")
    syn = f.synthesis
    inclusion = range_inclusion_check(env.k, syn, policy=policy)
    if not inclusion:
        raise NotKFrame(
            f"R(K) not contained in R(T_F): residual {inclusion.residual:.3e} "
            f"> {inclusion.threshold:.3e}",
            inclusion.residual,
        )
    upper = optimal_bessel_bound(f)
    lam = majorization_constant(env.k, syn, policy)
    lower = 1.0 / lam**2

    s_pinv = pseudo_inverse(f.frame_operator, policy)
    lam_max = float(herm_eigvals(env.k_adjoint @ s_pinv @ env.k)[-1])
    lower_cc = 1.0 / lam_max
    if abs(lower - lower_cc) > 1e-8 * max(1.0, lower):
        raise InternalConsistencyError(
            f"optimal lower bound routes disagree: {lower!r} vs {lower_cc!r}",
            abs(lower - lower_cc),
        )
    return FrameBounds(lower, upper, optimal=True)


@dataclass(frozen=True)
class BoundsValidation:
    """Verdict on a user-supplied bound pair, with the eigenvalue slacks."""

    valid: bool
    lower_ok: bool
    upper_ok: bool
    lower_slack: float  # min eig of S_F - a K K*  (>= 0 up to tolerance when valid)
    upper_slack: float  # b - lambda_max(S_F)
    threshold: float


def validate_bounds(
    f: Frame, env: OperatorEnv, a: float, b: float, policy: TolerancePolicy = DEFAULT_POLICY
) -> BoundsValidation:
    """Check a K-frame inequality pair: a K K* <= S_F and S_F <= b I."""
    if f.ambient_dim != env.dim:
        raise ShapeMismatch("frame/operator dimension mismatch")
    s = f.frame_operator
    gram_k = env.k @ env.k_adjoint
    scale = max(1.0, spectral_norm(s))
    thr = policy.identity_tol * scale
    lower_slack = min_eig(s - a * gram_k)
    upper_slack = b - float(herm_eigvals(s)[-1])
    lower_ok = lower_slack >= -thr
    upper_ok = upper_slack >= -thr
    return BoundsValidation(lower_ok and upper_ok, lower_ok, upper_ok, lower_slack, upper_slack, thr)


@dataclass(frozen=True)
class TightnessReport:
    """Whether S_F = A K K* for some A (tight), with A = 1 meaning Parseval."""

    tight: bool
    constant: float | None
    parseval: bool
    residual: float
    threshold: float


def tightness_check(
    f: Frame, env: OperatorEnv, policy: TolerancePolicy = DEFAULT_POLICY
) -> TightnessReport:
    """Best-fit tightness constant and the residual of S_F - A K K*."""
    if f.ambient_dim != env.dim:
        raise ShapeMismatch("frame/operator dimension mismatch")
    s = f.frame_operator
    gram_k = env.k @ env.k_adjoint
    scale = max(1.0, spectral_norm(s))
    thr = policy.identity_tol * scale
    denom = float(np.real(np.trace(gram_k @ gram_k)))
    if denom <= 0.0:
        resid = spectral_norm(s)
        return TightnessReport(resid <= thr, None, False, resid, thr)
    const = float(np.real(np.trace(gram_k @ s))) / denom
    resid = spectral_norm(s - const * gram_k)
    tight = resid <= thr
    parseval = tight and abs(const - 1.0) <= policy.identity_tol
    return TightnessReport(tight, const if tight else None, parseval, resid, thr)


def bessel_as_k_frame(f: Frame, policy: TolerancePolicy = DEFAULT_POLICY) -> OperatorEnv:
    """Operator K with K e_i = f_i on the first N standard basis vectors.

    Any finite sequence is Bessel, and against this K it is a Parseval
    K-frame: K* f = {<f, f_i>} gives K K* = S_F exactly. Requires N <= n so
    the standard basis can index the vectors; embed first otherwise.
    """
    n, big_n = f.ambient_dim, f.size
    if big_n > n:
        raise IndexExceedsDimension(
            f"{big_n} vectors need an ambient dimension of at least {big_n}, got {n}"
        )
    k = np.zeros((n, n), dtype=np.complex128)
    k[:, :big_n] = f.synthesis
    return OperatorEnv.from_matrix(k, policy)


def minimality_check(f: Frame, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """True iff T_F has trivial kernel (sum c_i f_i = 0 forces c = 0)."""
    return svd_decompose(f.synthesis, policy).rank == f.size


def biorthogonal_sequence(f: Frame, policy: TolerancePolicy = DEFAULT_POLICY) -> Frame:
    """The unique biorthogonal sequence inside span{f_i}.

    G = T_F (T_F* T_F)^-1 satisfies <f_i, g_j> = delta_ij with every g_j in
    the span of the f_i; requires a minimal sequence.
    """
    if not minimality_check(f, policy):
        raise NotMinimal("sequence is not minimal: synthesis operator has a kernel")
    g_syn = pseudo_inverse(f.synthesis, policy).conj().T
    return Frame(g_syn.T)
