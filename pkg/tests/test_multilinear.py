"""Tensor storage, invariant norms, frames, and symmetry diagnostics."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bochnerkit.curvature import (
    flat_point,
    random_curvature_tensor,
    random_hermitian_point,
    sigma_forms,
    star,
    validate_point,
)
from bochnerkit.multilinear import (
    TOL_ALG,
    CurvTensor,
    DegenerateFrameError,
    DimensionMismatchError,
    NonFiniteError,
    SymBilinear,
    SymmetryError,
    curvature_symmetry_defects,
    gram_schmidt,
    invariant_norm,
    orthonormalize,
    require_curvature_class,
)


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------

def test_curvtensor_rejects_odd_dim():
    with pytest.raises(DimensionMismatchError):
        CurvTensor(3, np.zeros((3, 3, 3, 3)))


def test_curvtensor_rejects_wrong_shape():
    with pytest.raises(DimensionMismatchError):
        CurvTensor(4, np.zeros((4, 4, 4)))


def test_curvtensor_rejects_nan():
    bad = np.zeros((4,) * 4)
    bad[0, 1, 1, 0] = np.nan
    with pytest.raises(NonFiniteError):
        CurvTensor(4, bad)


def test_symbilinear_rejects_asymmetric():
    Q = np.eye(4)
    Q[0, 1] = 1e-6
    with pytest.raises(SymmetryError):
        SymBilinear(4, Q)


def test_components_are_read_only(flat4):
    pi1, _ = sigma_forms(flat4)
    with pytest.raises(ValueError):
        pi1.components[0, 0, 0, 0] = 1.0


# ---------------------------------------------------------------------------
# invariant norm
# ---------------------------------------------------------------------------

def _norm_oracle_pi1(dim):
    # explicit double loop over an orthonormal frame:
    # |pi1|^2 = sum_{ij} (<e_i,e_i><e_j,e_j> - <e_i,e_j>^2)^2 summed with
    # multiplicity 2 over the (ij),(ji) slots of each nonzero component
    g = np.eye(dim)
    total = 0.0
    for i in range(dim):
        for j in range(dim):
            total += 2.0 * (g[i, i] * g[j, j] - g[i, j] ** 2) ** 2
    return np.sqrt(total)


def test_invariant_norm_zero(flat4):
    assert invariant_norm(flat4, CurvTensor.zero(4)) == 0.0
    assert invariant_norm(flat4, SymBilinear.zero(4)) == 0.0


def test_invariant_norm_pi1_flat_dim4(flat4):
    pi1, _ = sigma_forms(flat4)
    expected = _norm_oracle_pi1(4)
    assert expected == pytest.approx(np.sqrt(24.0), abs=1e-15)
    assert invariant_norm(flat4, pi1) == pytest.approx(expected, abs=1e-12)


def test_desk_scale_maximum_dimension():
    """dim 12 is the stated desk-scale ceiling; everything stays exact there."""
    point = flat_point(12)
    pi1, pi2 = sigma_forms(point)
    assert curvature_symmetry_defects(pi1).max() == 0.0
    assert curvature_symmetry_defects(pi2).max() == 0.0
    assert invariant_norm(point, pi1) == pytest.approx(_norm_oracle_pi1(12), abs=1e-11)
    out = star(point, random_curvature_tensor(12, seed=1))
    assert curvature_symmetry_defects(out).max() < TOL_ALG


@given(c=st.floats(-1e3, 1e3, allow_nan=False))
@settings(max_examples=30, deadline=None)
def test_invariant_norm_homogeneous(c):
    point = flat_point(4)
    pi1, _ = sigma_forms(point)
    assert invariant_norm(point, c * pi1) == pytest.approx(
        abs(c) * invariant_norm(point, pi1), rel=1e-12, abs=1e-12
    )


@given(seed=st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_invariant_norm_frame_independent(seed):
    """Pulling back tensor and metric through any basis change preserves the norm."""
    dim = 4
    point = flat_point(dim)
    T = random_curvature_tensor(dim, seed)
    rng = np.random.default_rng(seed + 1)
    while True:
        M = np.eye(dim) + 0.4 * rng.standard_normal((dim, dim))
        if np.linalg.cond(M) < 20.0:  # keep roundoff amplification bounded
            break
    g2 = M.T @ point.g_mat @ M
    J2 = np.linalg.solve(M, point.J @ M)
    point2 = validate_point(0.5 * (g2 + g2.T), J2, tol=1e-8)
    T2 = CurvTensor(dim, np.einsum("pqrs,pi,qj,rk,sl->ijkl", T.components, M, M, M, M))
    assert invariant_norm(point2, T2) == pytest.approx(
        invariant_norm(point, T), rel=1e-9
    )


def test_invariant_norm_positive_definite(flat4):
    T = random_curvature_tensor(4, seed=5)
    assert T.max_abs() > 100 * TOL_ALG
    assert invariant_norm(flat4, T) > 0.0
    tiny = CurvTensor(4, 1e-14 * T.components / T.max_abs())
    assert invariant_norm(flat4, tiny) < 4**2 * TOL_ALG


def test_invariant_norm_dimension_mismatch(flat4):
    with pytest.raises(DimensionMismatchError):
        invariant_norm(flat4, CurvTensor.zero(6))


# ---------------------------------------------------------------------------
# orthonormalization
# ---------------------------------------------------------------------------

def test_orthonormalize_identity_metric_dim2():
    point = flat_point(2)
    frame = orthonormalize(point, seed=1)
    gram = frame.vectors @ point.g_mat @ frame.vectors.T
    assert np.allclose(gram, np.eye(2), atol=TOL_ALG)


def test_orthonormalize_scaled_metric_unit_length():
    g = np.diag([4.0, 1.0, 1.0, 1.0])
    J = np.zeros((4, 4))
    # compatible J for this metric: scale the block structure
    J[1, 0], J[0, 1] = 2.0, -0.5
    J[3, 2], J[2, 3] = 1.0, -1.0
    point = validate_point(g, J)
    frame = orthonormalize(point, seed=3)
    for v in frame:
        assert float(v @ g @ v) == pytest.approx(1.0, abs=TOL_ALG)


def test_orthonormalize_deterministic(flat6):
    f1 = orthonormalize(flat6, seed=9)
    f2 = orthonormalize(flat6, seed=9)
    assert np.array_equal(f1.vectors, f2.vectors)


def test_orthonormalize_idempotent(skew_point6):
    frame = orthonormalize(skew_point6, seed=11)
    again = gram_schmidt(skew_point6, frame.vectors)
    assert np.max(np.abs(again - frame.vectors)) < TOL_ALG


def test_gram_schmidt_degenerate_basis(flat4):
    basis = np.zeros((4, 4))
    basis[:, 0] = 1.0  # rank one
    with pytest.raises(DegenerateFrameError):
        gram_schmidt(flat4, basis)


@given(seed=st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_orthonormalize_random_points(seed):
    point = random_hermitian_point(6, seed)
    frame = orthonormalize(point, seed=seed + 1)
    gram = frame.vectors @ point.g_mat @ frame.vectors.T
    assert np.max(np.abs(gram - np.eye(6))) < TOL_ALG


# ---------------------------------------------------------------------------
# symmetry diagnostics
# ---------------------------------------------------------------------------

def test_defects_vanish_on_pi1(flat6):
    pi1, pi2 = sigma_forms(flat6)
    for T in (pi1, pi2):
        d = curvature_symmetry_defects(T)
        assert d.max() == 0.0


def test_defects_detect_constructed_violation():
    T = np.zeros((4,) * 4)
    T[0, 1, 0, 1] = 1.0  # lone entry breaks both antisymmetries
    d = curvature_symmetry_defects(CurvTensor(4, T))
    assert d.antisym12 > 0 and d.antisym34 > 0


def test_star_output_is_curvature_class(flat6):
    for seed in range(5):
        R = random_curvature_tensor(6, seed)
        out = star(flat6, R)
        assert curvature_symmetry_defects(out).max() < TOL_ALG


def test_require_curvature_class_raises():
    T = np.zeros((4,) * 4)
    T[0, 1, 0, 1] = 1.0
    with pytest.raises(SymmetryError) as err:
        require_curvature_class(CurvTensor(4, T))
    assert err.value.defect > 0.5
