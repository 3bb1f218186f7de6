"""The two trace-corrected curvature tensors and the 4-frame obstruction.

``generalized_bochner`` removes the Ricci and scalar parts of the
holomorphically symmetrized tensor; it vanishes exactly on products of two
spaces of opposite constant holomorphic sectional curvature.
``rk_bochner`` is the analogous five-term correction available once the
curvature is invariant under J-rotation of all four slots (dimension >= 6);
its vanishing forces the curvature to vanish on orthonormal 4-frames that
span antiholomorphic planes, which :func:`antiholo_4frame_defect` samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import (
    HermitianPoint,
    _ricci,
    _j_twisted_ricci,
    _rotate_all_slots,
    _symmetrized,
    _trace,
    phi_psi,
    sigma_forms,
    star,
)
from .multilinear import (
    TOL_ALG,
    CurvTensor,
    SymBilinear,
    _check_same_dim,
    invariant_norm,
    require_curvature_class,
)

__all__ = [
    "BochnerOutput",
    "DimensionTooSmallError",
    "NotRKError",
    "FrameSamplingError",
    "generalized_bochner",
    "rk_bochner",
    "rhs_2_1",
    "nk_flat_form_3_4",
    "antiholo_4frame_defect",
    "sample_antiholomorphic_frame",
]


class DimensionTooSmallError(ValueError):
    """The five-term corrected tensor needs m > 2 (denominators m-1, m-2)."""


class NotRKError(ValueError):
    """Input curvature is not invariant under J-rotation of all four slots."""

    def __init__(self, defect: float, tol: float):
        super().__init__(
            f"curvature is not RK (defect {defect:.3e} above tolerance {tol:.1e}); "
            "pass allow_non_rk=True to evaluate the formula anyway"
        )
        self.defect = float(defect)


class FrameSamplingError(RuntimeError):
    """Constraint projection failed repeatedly while sampling frames."""


@dataclass(frozen=True, eq=False)
class BochnerOutput:
    """A trace-corrected curvature tensor with its invariant norm.

    ``coefficients_used`` records the scalar prefactors actually applied, so a
    report can show which correction weights produced the tensor.
    ``out_of_domain`` marks results of the RK formula forced onto non-RK input.
    """

    tensor: CurvTensor
    norm: float
    coefficients_used: dict[str, float]
    out_of_domain: bool = False


def generalized_bochner(
    point: HermitianPoint, R: CurvTensor, sym_tol: float = TOL_ALG
) -> BochnerOutput:
    """Trace-free part of the holomorphically symmetrized curvature.

    B* = R* - (phi + psi)(S*) / (2(m+2)) + tau* (pi1 + pi2) / (4(m+1)(m+2))
    """
    _check_same_dim(point.dim, R.dim)
    m = point.m
    Rs = star(point, R, sym_tol)
    gi = point.g_inv
    S_star = SymBilinear(
        point.dim, _symmetrized(_ricci(gi, Rs.components), sym_tol, "Ricci of R*")
    )
    tau_star = _trace(gi, S_star.components)
    phi, psi = phi_psi(point, S_star)
    pi1, pi2 = sigma_forms(point)
    c_ricci = 1.0 / (2.0 * (m + 2))
    c_scalar = tau_star / (4.0 * (m + 1) * (m + 2))
    B = Rs - c_ricci * (phi + psi) + c_scalar * (pi1 + pi2)
    return BochnerOutput(
        tensor=B,
        norm=invariant_norm(point, B),
        coefficients_used={"ricci_correction": c_ricci, "scalar_correction": c_scalar},
    )


def rk_bochner(
    point: HermitianPoint,
    R: CurvTensor,
    sym_tol: float = TOL_ALG,
    rk_tol: float = TOL_ALG,
    allow_non_rk: bool = False,
) -> BochnerOutput:
    """Five-term trace-corrected curvature for RK tensors, dimension >= 6.

    B = R - (phi + psi)(S + 3S') / (8(m+2)) - (3 phi - psi)(S - S') / (8(m-2))
          + (tau + 3 tau')(pi1 + pi2) / (16(m+1)(m+2))
          + (tau - tau')(3 pi1 - pi2) / (16(m-1)(m-2))

    Refuses non-RK input (the correction terms assume the J-twisted trace is
    symmetric); ``allow_non_rk=True`` evaluates the formula anyway, with the
    J-twisted trace symmetrized, and marks the output ``out_of_domain``.
    """
    _check_same_dim(point.dim, R.dim)
    m = point.m
    if m <= 2:
        raise DimensionTooSmallError(
            f"the corrected tensor requires dimension >= 6, got {point.dim}"
        )
    require_curvature_class(R, max(sym_tol, rk_tol), "rk_bochner()")
    A, J, gi = R.components, point.J, point.g_inv
    rk_defect = float(
        np.max(np.abs(A - _rotate_all_slots(A, J)))
    )
    out_of_domain = rk_defect > rk_tol
    if out_of_domain and not allow_non_rk:
        raise NotRKError(rk_defect, rk_tol)

    S = _ricci(gi, A)
    S = 0.5 * (S + S.T)
    Sp = _j_twisted_ricci(gi, J, A)
    Sp = 0.5 * (Sp + Sp.T)
    tau, tau_p = _trace(gi, S), _trace(gi, Sp)
    phi_a, psi_a = phi_psi(point, SymBilinear(point.dim, S + 3.0 * Sp))
    phi_b, psi_b = phi_psi(point, SymBilinear(point.dim, S - Sp))
    pi1, pi2 = sigma_forms(point)
    c1 = 1.0 / (8.0 * (m + 2))
    c2 = 1.0 / (8.0 * (m - 2))
    c3 = (tau + 3.0 * tau_p) / (16.0 * (m + 1) * (m + 2))
    c4 = (tau - tau_p) / (16.0 * (m - 1) * (m - 2))
    B = (
        R
        - c1 * (phi_a + psi_a)
        - c2 * (3.0 * phi_b - psi_b)
        + c3 * (pi1 + pi2)
        + c4 * (3.0 * pi1 - pi2)
    )
    return BochnerOutput(
        tensor=B,
        norm=invariant_norm(point, B),
        coefficients_used={
            "sum_correction": c1,
            "difference_correction": c2,
            "scalar_sum_correction": c3,
            "scalar_difference_correction": c4,
        },
        out_of_domain=out_of_domain,
    )


def rhs_2_1(point: HermitianPoint, S_star: SymBilinear, tau_star: float) -> CurvTensor:
    """The closed form the symmetrized curvature takes when its trace-free part vanishes.

    Written out term by term (ten Ricci-type terms and five metric terms) as an
    independent route: adding the trace-free part back must reproduce the
    symmetrized tensor exactly, which cross-checks the assembled correction maps.
    """
    _check_same_dim(point.dim, S_star.dim)
    m = point.m
    g, J, Q = point.g_mat, point.J, S_star.components
    gJ = g @ J
    QJ = Q @ J
    ricci_block = (
        np.einsum("il,jk->ijkl", g, Q)        # g(X,U) S*(Y,Z)
        - np.einsum("ik,jl->ijkl", g, Q)      # - g(X,Z) S*(Y,U)
        + np.einsum("jk,il->ijkl", g, Q)      # + g(Y,Z) S*(X,U)
        - np.einsum("jl,ik->ijkl", g, Q)      # - g(Y,U) S*(X,Z)
        + np.einsum("il,jk->ijkl", gJ, QJ)    # + g(X,JU) S*(Y,JZ)
        - np.einsum("ik,jl->ijkl", gJ, QJ)    # - g(X,JZ) S*(Y,JU)
        + np.einsum("jk,il->ijkl", gJ, QJ)    # + g(Y,JZ) S*(X,JU)
        - np.einsum("jl,ik->ijkl", gJ, QJ)    # - g(Y,JU) S*(X,JZ)
        - 2.0 * np.einsum("ij,kl->ijkl", gJ, QJ)  # - 2 g(X,JY) S*(Z,JU)
        - 2.0 * np.einsum("kl,ij->ijkl", gJ, QJ)  # - 2 g(Z,JU) S*(X,JY)
    )
    metric_block = (
        np.einsum("il,jk->ijkl", g, g)
        - np.einsum("ik,jl->ijkl", g, g)
        + np.einsum("il,jk->ijkl", gJ, gJ)
        - np.einsum("ik,jl->ijkl", gJ, gJ)
        - 2.0 * np.einsum("ij,kl->ijkl", gJ, gJ)
    )
    out = ricci_block / (2.0 * (m + 2)) - tau_star / (4.0 * (m + 1) * (m + 2)) * metric_block
    return CurvTensor(point.dim, out)


def nk_flat_form_3_4(point: HermitianPoint, S: SymBilinear, tau: float) -> CurvTensor:
    """Closed curvature form of the non-Kahler constant-ratio case (m > 2).

    R = (phi + psi)(S) / (2(m+2)) - (4m+3) tau (pi1 + pi2) / (10 m (m+1)(m+2))
        + tau (3 pi1 - pi2) / (20 m (m-1))
    """
    _check_same_dim(point.dim, S.dim)
    m = point.m
    if m <= 2:
        raise DimensionTooSmallError(f"the closed form requires dimension >= 6, got {point.dim}")
    phi, psi = phi_psi(point, S)
    pi1, pi2 = sigma_forms(point)
    return (
        (1.0 / (2.0 * (m + 2))) * (phi + psi)
        - ((4.0 * m + 3.0) * tau / (10.0 * m * (m + 1) * (m + 2))) * (pi1 + pi2)
        + (tau / (20.0 * m * (m - 1))) * (3.0 * pi1 - pi2)
    )


def sample_antiholomorphic_frame(
    point: HermitianPoint,
    rng: np.random.Generator,
    count: int,
    constraint_tol: float = 1e-10,
    max_attempts: int = 200,
) -> np.ndarray:
    """Orthonormal vectors v_1..v_count whose span is orthogonal to its J-image.

    Each new vector is projected (twice, for numerical orthogonality) against
    every previous vector and its J-image, then normalized; self-pairing
    g(v, Jv) vanishes identically because g(., J.) is antisymmetric.  Raises
    :class:`FrameSamplingError` with the attempt count if projection keeps
    collapsing (needs dim >= 2 * count).
    """
    g, J = point.g_mat, point.J
    if point.dim < 2 * count:
        raise FrameSamplingError(
            f"no {count}-frame with antiholomorphic span exists in dimension {point.dim}"
        )
    frame: list[np.ndarray] = []
    obstacles: list[np.ndarray] = []
    attempts = 0
    while len(frame) < count:
        attempts += 1
        if attempts > max_attempts:
            raise FrameSamplingError(
                f"constraint projection failed {max_attempts} times "
                f"(collected {len(frame)}/{count} vectors)"
            )
        v = rng.standard_normal(point.dim)
        for _ in range(2):
            for u in obstacles:
                v = v - (u @ g @ v) * u
        nrm2 = float(v @ g @ v)
        if nrm2 < 1e-12:
            continue
        v = v / np.sqrt(nrm2)
        residual = max((abs(u @ g @ v) for u in obstacles), default=0.0)
        if residual > constraint_tol:
            continue
        Jv = J @ v
        Jv = Jv / np.sqrt(float(Jv @ g @ Jv))
        frame.append(v)
        obstacles.extend([v, Jv])
    return np.array(frame)


def antiholo_4frame_defect(
    point: HermitianPoint,
    R: CurvTensor,
    samples: int = 512,
    seed: int = 0,
    constraint_tol: float = 1e-10,
) -> float | None:
    """Largest |R(x, y, z, u)| over sampled orthonormal antiholomorphic 4-frames.

    Returns ``None`` below dimension 8: a 4-dimensional antiholomorphic plane
    together with its J-image needs 8 dimensions.  Deterministic given the
    seed; the max-reduction makes the result order-independent.
    """
    _check_same_dim(point.dim, R.dim)
    if point.dim < 8:
        return None
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x, y, z, u = sample_antiholomorphic_frame(point, rng, 4, constraint_tol)
        worst = max(worst, abs(R(x, y, z, u)))
    return worst
