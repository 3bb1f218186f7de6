"""Pointwise curvature constructions on almost Hermitian spaces.

Sign convention (fixed throughout the package, documented here because half
the literature uses the opposite one): the curvature tensor is

    R(X, Y, Z, U) = g(nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, U)

so that a space of constant sectional curvature ``c`` has ``R = c * pi1`` and
the holomorphic sectional curvature of a unit vector is ``H(X) =
R(X, JX, JX, X)``.  All model constructors and test oracles use this
convention.

Frame sums in the classical trace definitions are implemented as metric
contractions (inverse-metric index raising), valid in any coordinate basis;
orthonormal-frame summation survives only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .multilinear import (
    TOL_ALG,
    CurvTensor,
    DimensionMismatchError,
    SymBilinear,
    SymmetryError,
    _check_same_dim,
    _norm_sq_rank2,
    invariant_norm,
    require_curvature_class,
)

__all__ = [
    "HermitianPoint",
    "RicciFamily",
    "PointValidationError",
    "Violation",
    "DegeneratePlaneError",
    "AntiholomorphyError",
    "HscEstimate",
    "IdentityDefects",
    "standard_J",
    "flat_point",
    "point_violations",
    "validate_point",
    "sigma_forms",
    "phi_psi",
    "star",
    "ricci_family",
    "hsc",
    "ahsc",
    "constant_hsc_estimate",
    "direct_sum",
    "space_form_tensor",
    "complex_space_form_tensor",
    "identity_defects",
    "rk_project",
    "random_hermitian_point",
    "random_curvature_tensor",
]


@dataclass(frozen=True)
class Violation:
    """One failed point invariant: which one, and the worst defect observed."""

    invariant: str
    defect: float


class PointValidationError(ValueError):
    """Metric/almost-complex data does not define a valid Hermitian point."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        detail = "; ".join(f"{v.invariant} (defect {v.defect:.3e})" for v in violations)
        super().__init__(f"invalid Hermitian point: {detail}")


class DegeneratePlaneError(ValueError):
    """The two vectors do not span a 2-plane."""


class AntiholomorphyError(ValueError):
    """The plane is not antiholomorphic; carries the J-pairing defect."""

    def __init__(self, defect: float):
        super().__init__(f"plane is not antiholomorphic (J-pairing defect {defect:.3e})")
        self.defect = float(defect)


@dataclass(frozen=True, eq=False)
class HermitianPoint:
    """A 2m-dimensional metric plus compatible almost complex structure.

    ``g`` is positive definite and symmetric, ``J`` squares to minus the
    identity and preserves ``g``.  Construct through :func:`validate_point`;
    the constructor itself trusts its inputs.
    """

    dim: int
    g: SymBilinear
    J: np.ndarray

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @property
    def m(self) -> int:
        return self.dim // 2

    @property
    def g_mat(self) -> np.ndarray:
        return self.g.components

    @cached_property
    def g_inv(self) -> np.ndarray:
        inv = np.linalg.inv(self.g.components)
        inv = 0.5 * (inv + inv.T)
        inv.setflags(write=False)
        return inv

    def inner(self, X, Y) -> float:
        return float(X @ self.g_mat @ Y)

    def apply_J(self, X) -> np.ndarray:
        return self.J @ X


def standard_J(dim: int) -> np.ndarray:
    """Block almost complex structure: J e_{2a} = e_{2a+1}, J e_{2a+1} = -e_{2a}."""
    if dim % 2:
        raise DimensionMismatchError(f"dim must be even, got {dim}")
    J = np.zeros((dim, dim))
    for a in range(dim // 2):
        J[2 * a + 1, 2 * a] = 1.0
        J[2 * a, 2 * a + 1] = -1.0
    return J


def flat_point(dim: int) -> HermitianPoint:
    """Euclidean metric with the standard block structure."""
    return validate_point(np.eye(dim), standard_J(dim))


def point_violations(g, J, tol: float = TOL_ALG) -> list[Violation]:
    """Check all Hermitian-point invariants; return every violation found.

    ``g`` may be a :class:`SymBilinear` or a raw square array.
    """
    g_arr = np.asarray(g.components if isinstance(g, SymBilinear) else g, dtype=float)
    J_arr = np.asarray(J, dtype=float)
    violations: list[Violation] = []

    if g_arr.ndim != 2 or g_arr.shape[0] != g_arr.shape[1]:
        raise DimensionMismatchError(f"metric must be square, got shape {g_arr.shape}")
    n = g_arr.shape[0]
    if J_arr.shape != (n, n):
        raise DimensionMismatchError(
            f"J shape {J_arr.shape} does not match metric dimension {n}"
        )
    if not (np.all(np.isfinite(g_arr)) and np.all(np.isfinite(J_arr))):
        violations.append(Violation("finite components", float("inf")))
        return violations
    if n % 2:
        violations.append(Violation("even dimension", float(n % 2)))

    sym_defect = float(np.max(np.abs(g_arr - g_arr.T)))
    if sym_defect > tol:
        violations.append(Violation("metric symmetry", sym_defect))

    j_defect = float(np.max(np.abs(J_arr @ J_arr + np.eye(n))))
    if j_defect > tol:
        violations.append(Violation("J squares to -identity", j_defect))

    try:
        np.linalg.cholesky(0.5 * (g_arr + g_arr.T))
    except np.linalg.LinAlgError:
        min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (g_arr + g_arr.T))))
        violations.append(Violation("metric positive definite", abs(min(min_eig, 0.0))))

    compat_defect = float(np.max(np.abs(J_arr.T @ g_arr @ J_arr - g_arr)))
    if compat_defect > tol:
        violations.append(Violation("Hermitian compatibility g(JX,JY)=g(X,Y)", compat_defect))

    return violations


def validate_point(g, J, tol: float = TOL_ALG) -> HermitianPoint:
    """Validate (g, J) and return a :class:`HermitianPoint`, or raise with all violations."""
    violations = point_violations(g, J, tol)
    if violations:
        raise PointValidationError(violations)
    g_arr = np.asarray(g.components if isinstance(g, SymBilinear) else g, dtype=float)
    n = g_arr.shape[0]
    return HermitianPoint(n, SymBilinear(n, 0.5 * (g_arr + g_arr.T)), np.asarray(J, dtype=float))


# ---------------------------------------------------------------------------
# universal curvature-class generators and the two Ricci-to-curvature maps
# ---------------------------------------------------------------------------

def sigma_forms(point: HermitianPoint) -> tuple[CurvTensor, CurvTensor]:
    """The two universal curvature-class tensors built from g and J.

    pi1(X,Y,Z,U) = g(X,U)g(Y,Z) - g(X,Z)g(Y,U)
    pi2(X,Y,Z,U) = g(X,JU)g(Y,JZ) - g(X,JZ)g(Y,JU) - 2 g(X,JY)g(Z,JU)

    Constant sectional curvature c is ``c * pi1``; constant holomorphic
    sectional curvature mu is ``(mu/4) * (pi1 + pi2)``.
    """
    g = point.g_mat
    gJ = g @ point.J  # gJ[i, j] = g(e_i, J e_j), antisymmetric
    pi1 = np.einsum("il,jk->ijkl", g, g) - np.einsum("ik,jl->ijkl", g, g)
    pi2 = (
        np.einsum("il,jk->ijkl", gJ, gJ)
        - np.einsum("ik,jl->ijkl", gJ, gJ)
        - 2.0 * np.einsum("ij,kl->ijkl", gJ, gJ)
    )
    return CurvTensor(point.dim, pi1), CurvTensor(point.dim, pi2)


def phi_psi(point: HermitianPoint, Q: SymBilinear) -> tuple[CurvTensor, CurvTensor]:
    """The two linear maps sending a symmetric bilinear form to a rank-4 tensor.

    phi(Q)(X,Y,Z,U) = g(X,U)Q(Y,Z) - g(X,Z)Q(Y,U) + g(Y,Z)Q(X,U) - g(Y,U)Q(X,Z)

    psi(Q)(X,Y,Z,U) = g(X,JU)Q(Y,JZ) - g(X,JZ)Q(Y,JU) - 2 g(X,JY)Q(Z,JU)
                    + g(Y,JZ)Q(X,JU) - g(Y,JU)Q(X,JZ) - 2 g(Z,JU)Q(X,JY)

    phi(g) = 2 pi1 and psi(g) = 2 pi2.
    """
    _check_same_dim(point.dim, Q.dim)
    g = point.g_mat
    Qm = Q.components
    gJ = g @ point.J
    QJ = Qm @ point.J  # QJ[i, j] = Q(e_i, J e_j)
    phi = (
        np.einsum("il,jk->ijkl", g, Qm)
        - np.einsum("ik,jl->ijkl", g, Qm)
        + np.einsum("jk,il->ijkl", g, Qm)
        - np.einsum("jl,ik->ijkl", g, Qm)
    )
    psi = (
        np.einsum("il,jk->ijkl", gJ, QJ)
        - np.einsum("ik,jl->ijkl", gJ, QJ)
        - 2.0 * np.einsum("ij,kl->ijkl", gJ, QJ)
        + np.einsum("jk,il->ijkl", gJ, QJ)
        - np.einsum("jl,ik->ijkl", gJ, QJ)
        - 2.0 * np.einsum("kl,ij->ijkl", gJ, QJ)
    )
    return CurvTensor(point.dim, phi), CurvTensor(point.dim, psi)


def star(point: HermitianPoint, R: CurvTensor, sym_tol: float = TOL_ALG) -> CurvTensor:
    """The holomorphically symmetrized companion of a curvature tensor.

    The output is the unique curvature-class tensor that is invariant under
    rotating both vectors of the first pair by J and agrees with the input on
    every holomorphic plane:

        R*(JX, JY, Z, U) = R*(X, Y, Z, U),   R*(X, JX, JX, X) = R(X, JX, JX, X).

    ``sym_tol`` bounds the symmetry defects the input may carry (use a looser
    value for finite-difference curvature).
    """
    _check_same_dim(point.dim, R.dim)
    require_curvature_class(R, sym_tol, "star()")
    A, J = R.components, point.J
    t1 = np.einsum("ijpq,pk,ql->ijkl", A, J, J)  # R(X,Y,JZ,JU)
    t2 = np.einsum("pqkl,pi,qj->ijkl", A, J, J)  # R(JX,JY,Z,U)
    t3 = _rotate_all_slots(A, J)  # R(JX,JY,JZ,JU)
    u1 = np.einsum("abjl,ai,bk->ijkl", A, J, J)  # R(JX,JZ,Y,U)
    u2 = np.einsum("abil,aj,bk->ijkl", A, J, J)  # R(JY,JZ,X,U)
    u3 = np.einsum("ikpq,pj,ql->ijkl", A, J, J)  # R(X,Z,JY,JU)
    u4 = np.einsum("jkpq,pi,ql->ijkl", A, J, J)  # R(Y,Z,JX,JU)
    u5 = np.einsum("jbpl,bk,pi->ijkl", A, J, J)  # R(Y,JZ,JX,U)
    u6 = np.einsum("ibpl,bk,pj->ijkl", A, J, J)  # R(X,JZ,JY,U)
    u7 = np.einsum("akiq,aj,ql->ijkl", A, J, J)  # R(JY,Z,X,JU)
    u8 = np.einsum("akjq,ai,ql->ijkl", A, J, J)  # R(JX,Z,Y,JU)
    out = (3.0 / 16.0) * (A + t1 + t2 + t3) + (1.0 / 16.0) * (
        u1 - u2 + u3 - u4 + u5 - u6 + u7 - u8
    )
    return CurvTensor(point.dim, out)


@dataclass(frozen=True, eq=False)
class RicciFamily:
    """The six trace outputs of one curvature tensor.

    ``S`` is the plain Ricci trace, ``S_prime`` the J-twisted trace
    ``sum_i R(X, E_i, J E_i, J Y)``, ``S_star`` the Ricci trace of the
    holomorphically symmetrized tensor; ``tau``/``tau_prime``/``tau_star``
    are the corresponding scalar traces.
    """

    S: SymBilinear
    S_prime: SymBilinear
    S_star: SymBilinear
    tau: float
    tau_prime: float
    tau_star: float


def _rotate_all_slots(A: np.ndarray, J: np.ndarray) -> np.ndarray:
    """A(JX, JY, JZ, JU), one slot at a time (a five-operand einsum is dim^8)."""
    out = np.einsum("pjkl,pi->ijkl", A, J)
    out = np.einsum("iqkl,qj->ijkl", out, J)
    out = np.einsum("ijrl,rk->ijkl", out, J)
    return np.einsum("ijks,sl->ijkl", out, J)


def _ricci(g_inv: np.ndarray, R: np.ndarray) -> np.ndarray:
    return np.einsum("bc,abcd->ad", g_inv, R)


def _j_twisted_ricci(g_inv: np.ndarray, J: np.ndarray, R: np.ndarray) -> np.ndarray:
    twisted = np.einsum("abpq,pc,ql->abcl", R, J, J)
    return np.einsum("bc,abcl->al", g_inv, twisted)


def _trace(g_inv: np.ndarray, Q: np.ndarray) -> float:
    return float(np.einsum("ad,ad->", g_inv, Q))


def _symmetrized(Q: np.ndarray, tol: float, what: str) -> np.ndarray:
    asym = float(np.max(np.abs(Q - Q.T)))
    if asym > tol:
        raise SymmetryError(f"{what} is not symmetric", asym)
    return 0.5 * (Q + Q.T)


def ricci_family(
    point: HermitianPoint, R: CurvTensor, sym_tol: float = TOL_ALG
) -> RicciFamily:
    """All six trace outputs of ``R``, computed as metric contractions.

    The J-twisted trace is symmetric for every tensor invariant under the
    simultaneous J-rotation of all four slots (and for all model tensors);
    outside that class it can be genuinely asymmetric, in which case this
    raises :class:`SymmetryError` rather than silently symmetrizing.
    """
    _check_same_dim(point.dim, R.dim)
    require_curvature_class(R, sym_tol, "ricci_family()")
    gi, J, A = point.g_inv, point.J, R.components
    n = point.dim
    S = _symmetrized(_ricci(gi, A), sym_tol, "Ricci trace")
    Sp = _symmetrized(_j_twisted_ricci(gi, J, A), sym_tol, "J-twisted Ricci trace")
    Rs = star(point, R, sym_tol).components
    Ss = _symmetrized(_ricci(gi, Rs), sym_tol, "Ricci trace of the symmetrized tensor")
    return RicciFamily(
        S=SymBilinear(n, S),
        S_prime=SymBilinear(n, Sp),
        S_star=SymBilinear(n, Ss),
        tau=_trace(gi, S),
        tau_prime=_trace(gi, Sp),
        tau_star=_trace(gi, Ss),
    )


# ---------------------------------------------------------------------------
# sectional curvatures
# ---------------------------------------------------------------------------

def hsc(point: HermitianPoint, R: CurvTensor, X) -> float:
    """Holomorphic sectional curvature of the plane spanned by X and JX."""
    X = np.asarray(X, dtype=float)
    gXX = point.inner(X, X)
    if gXX <= 0.0 or not np.isfinite(gXX):
        raise ValueError("hsc requires a nonzero vector")
    JX = point.apply_J(X)
    return R(X, JX, JX, X) / gXX**2


def ahsc(
    point: HermitianPoint, R: CurvTensor, X, Y, tol: float = TOL_ALG
) -> float:
    """Sectional curvature of the antiholomorphic plane spanned by X and Y.

    The span must be 2-dimensional and orthogonal to its own J-image;
    ``g(X, Y)`` itself is arbitrary (the Gram determinant normalizes it).
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    gXX, gYY, gXY = point.inner(X, X), point.inner(Y, Y), point.inner(X, Y)
    if gXX <= 0.0 or gYY <= 0.0:
        raise DegeneratePlaneError("ahsc requires two nonzero vectors")
    gram = gXX * gYY - gXY**2
    if gram <= tol * gXX * gYY:
        raise DegeneratePlaneError(f"vectors are parallel (Gram determinant {gram:.3e})")
    scale = np.sqrt(gXX * gYY)
    JX, JY = point.apply_J(X), point.apply_J(Y)
    pairing = max(
        abs(point.inner(X, JY)), abs(point.inner(X, JX)), abs(point.inner(Y, JY))
    ) / scale
    if pairing > tol:
        raise AntiholomorphyError(pairing)
    return R(X, Y, Y, X) / gram


class HscEstimate(NamedTuple):
    mu_hat: float
    defect: float


def constant_hsc_estimate(
    point: HermitianPoint, R: CurvTensor, sym_tol: float = TOL_ALG
) -> HscEstimate:
    """Global constant-holomorphic-curvature estimate with certification residual.

    ``mu_hat`` is read off the scalar trace of the symmetrized tensor
    (``tau_star / (m (m+1))``) rather than from a single direction, so the
    returned defect is a global residual: it vanishes exactly when the
    symmetrized tensor is ``(mu_hat / 4)(pi1 + pi2)``, i.e. when the point has
    pointwise constant holomorphic sectional curvature ``mu_hat``.
    """
    Rs = star(point, R, sym_tol)
    tau_star = _trace(point.g_inv, _ricci(point.g_inv, Rs.components))
    m = point.m
    mu_hat = tau_star / (m * (m + 1))
    pi1, pi2 = sigma_forms(point)
    defect = invariant_norm(point, Rs - (mu_hat / 4.0) * (pi1 + pi2))
    return HscEstimate(mu_hat=float(mu_hat), defect=defect)


# ---------------------------------------------------------------------------
# model tensors and products
# ---------------------------------------------------------------------------

def space_form_tensor(point: HermitianPoint, c: float) -> CurvTensor:
    """Curvature of constant sectional curvature ``c``: c * pi1."""
    pi1, _ = sigma_forms(point)
    return float(c) * pi1

def complex_space_form_tensor(point: HermitianPoint, mu: float) -> CurvTensor:
    """Curvature of constant holomorphic sectional curvature ``mu``: (mu/4)(pi1 + pi2)."""
    pi1, pi2 = sigma_forms(point)
    return (float(mu) / 4.0) * (pi1 + pi2)


def direct_sum(
    p1: HermitianPoint, R1: CurvTensor, p2: HermitianPoint, R2: CurvTensor
) -> tuple[HermitianPoint, CurvTensor]:
    """Riemannian-product point and curvature: block data, no mixed components."""
    _check_same_dim(p1.dim, R1.dim)
    _check_same_dim(p2.dim, R2.dim)
    n1, n2 = p1.dim, p2.dim
    n = n1 + n2
    g = np.zeros((n, n))
    g[:n1, :n1] = p1.g_mat
    g[n1:, n1:] = p2.g_mat
    J = np.zeros((n, n))
    J[:n1, :n1] = p1.J
    J[n1:, n1:] = p2.J
    R = np.zeros((n,) * 4)
    R[:n1, :n1, :n1, :n1] = R1.components
    R[n1:, n1:, n1:, n1:] = R2.components
    return validate_point(g, J), CurvTensor(n, R)


# ---------------------------------------------------------------------------
# identity diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityDefects:
    """Pointwise identity residuals of one curvature tensor.

    kahler          max-abs of R(X,Y,Z,U) - R(X,Y,JZ,JU) over index tuples
    rk              max-abs of R - R(J.,J.,J.,J.) over index tuples
    star_relation   invariant norm of 4 S* - (S + 3 S')  (vanishes when rk does)
    id_1_5          |full contraction of (S - S') against (S - 5 S')|; this
                    vanishes for the nearly Kahler models and is informational
                    for general input
    """

    kahler: float
    rk: float
    star_relation: float
    id_1_5: float


def identity_defects(
    point: HermitianPoint, R: CurvTensor, sym_tol: float = TOL_ALG
) -> IdentityDefects:
    """Evaluate the standard pointwise identity residuals of ``R``."""
    _check_same_dim(point.dim, R.dim)
    require_curvature_class(R, sym_tol, "identity_defects()")
    gi, J, A = point.g_inv, point.J, R.components
    RJ34 = np.einsum("ijpq,pk,ql->ijkl", A, J, J)
    RJ4 = _rotate_all_slots(A, J)
    S = _ricci(gi, A)
    Sp = _j_twisted_ricci(gi, J, A)
    Ss = _ricci(gi, star(point, R, sym_tol).components)
    rel = 4.0 * Ss - (S + 3.0 * Sp)
    contraction = np.einsum("ac,bd,ab,cd->", gi, gi, S - Sp, S - 5.0 * Sp)
    return IdentityDefects(
        kahler=float(np.max(np.abs(A - RJ34))),
        rk=float(np.max(np.abs(A - RJ4))),
        star_relation=float(np.sqrt(max(_norm_sq_rank2(gi, rel), 0.0))),
        id_1_5=float(abs(contraction)),
    )


def rk_project(point: HermitianPoint, R: CurvTensor) -> CurvTensor:
    """Average ``R`` with its image under J-rotation of all four slots.

    The result is the nearest tensor invariant under that rotation; it stays
    curvature-class.
    """
    A, J = R.components, point.J
    RJ4 = _rotate_all_slots(A, J)
    return CurvTensor(point.dim, 0.5 * (A + RJ4))


# ---------------------------------------------------------------------------
# seeded generators (scenario and test support)
# ---------------------------------------------------------------------------

def random_hermitian_point(dim: int, seed: int, orthonormal: bool = False) -> HermitianPoint:
    """Seeded valid Hermitian point; non-orthonormal coordinates unless requested.

    Conjugating the flat data (identity metric, block J) by a random invertible
    matrix M gives g = M^-T M^-1 and J = M J0 M^-1, which satisfy every point
    invariant exactly.
    """
    if orthonormal:
        return flat_point(dim)
    rng = np.random.default_rng(seed)
    J0 = standard_J(dim)
    while True:
        M = np.eye(dim) + 0.3 * rng.standard_normal((dim, dim))
        if abs(np.linalg.det(M)) > 0.1:
            break
    M_inv = np.linalg.inv(M)
    g = M_inv.T @ M_inv
    g = 0.5 * (g + g.T)
    return validate_point(g, M @ J0 @ M_inv, tol=1e-9)


def random_curvature_tensor(dim: int, seed: int, scale: float = 1.0) -> CurvTensor:
    """Seeded random curvature-class tensor (no further structure).

    A raw random array is projected onto the curvature symmetry class:
    antisymmetrize both pairs, symmetrize the pair swap, then remove the
    totally antisymmetric (4-form) part, which is exactly the failure of the
    first Bianchi identity inside that symmetry class.
    """
    rng = np.random.default_rng(seed)
    T = scale * rng.standard_normal((dim,) * 4)
    T = 0.5 * (T - T.transpose(1, 0, 2, 3))
    T = 0.5 * (T - T.transpose(0, 1, 3, 2))
    T = 0.5 * (T + T.transpose(2, 3, 0, 1))
    bianchi_part = (T + T.transpose(1, 2, 0, 3) + T.transpose(2, 0, 1, 3)) / 3.0
    return CurvTensor(dim, T - bianchi_part)
