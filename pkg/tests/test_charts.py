"""Finite-difference geometry on the model charts."""

import numpy as np
import pytest

from bochnerkit.charts import (
    ChartModel,
    ChartSpecError,
    FDConfig,
    MarginError,
    NotNearlyKahlerError,
    bianchi_suite,
    christoffel_at,
    curvature_at,
    j_derivatives_at,
    make_chart,
    nk_identity_suite,
    parse_model_spec,
)
from bochnerkit.curvature import (
    complex_space_form_tensor,
    identity_defects,
    space_form_tensor,
    standard_J,
)
from bochnerkit.multilinear import TOL_ALG, curvature_symmetry_defects, invariant_norm

CFG = FDConfig()


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

def test_parse_descriptors():
    assert parse_model_spec("CE(3)").kind == "CE"
    assert parse_model_spec("s6(2.5)").c == 2.5
    spec = parse_model_spec("PRODUCT(CD(1,-1), S6(1))")
    assert spec.kind == "PRODUCT" and len(spec.factors) == 2
    assert spec.label() == "PRODUCT(CD(1,-1),S6(1))"


def test_parse_rejects_unknown():
    with pytest.raises(ChartSpecError):
        parse_model_spec("TORUS(2)")


@pytest.mark.parametrize(
    "bad", ["CD(1,1)", "CP(3,-4)", "S6(-1)", "S6(0)", "CE(0)", "CP(3)", "PRODUCT(CE(1))"]
)
def test_make_chart_rejects_bad_parameters(bad):
    with pytest.raises(ChartSpecError):
        make_chart(bad)


# ---------------------------------------------------------------------------
# flat chart
# ---------------------------------------------------------------------------

def test_ce_chart_is_flat():
    chart = make_chart("CE(3)")
    x = chart.sample_points(0, 1)[0]
    assert np.max(np.abs(christoffel_at(chart, x, CFG))) == 0.0
    point, R = curvature_at(chart, x, CFG)
    assert R.max_abs() == 0.0
    nJ, n2J = j_derivatives_at(chart, x, CFG)
    assert np.max(np.abs(nJ)) == 0.0 and np.max(np.abs(n2J)) == 0.0


# ---------------------------------------------------------------------------
# round six-sphere chart
# ---------------------------------------------------------------------------

def test_s6_chart_point_validity():
    chart = make_chart("S6(1)")
    for x in chart.sample_points(3, 4):
        point = chart.point_at(x)
        J, g = point.J, point.g_mat
        assert np.max(np.abs(J @ J + np.eye(6))) < TOL_ALG
        assert np.max(np.abs(J.T @ g @ J - g)) < TOL_ALG
        # stereographic metric is conformally flat
        lam2 = g[0, 0]
        assert np.max(np.abs(g - lam2 * np.eye(6))) < 1e-12


def test_s6_christoffel_vanishes_at_origin():
    """The conformal factor has zero gradient at the chart origin."""
    chart = make_chart("S6(1)")
    G = christoffel_at(chart, np.zeros(6), CFG)
    assert np.max(np.abs(G)) < 1e-10


def test_christoffel_symmetric_lower_indices():
    chart = make_chart("S6(1.7)")
    x = chart.sample_points(1, 1)[0]
    G = christoffel_at(chart, x, CFG)
    assert np.array_equal(G, G.transpose(0, 2, 1))


@pytest.mark.parametrize("c", [1.0, 2.0])
def test_s6_curvature_matches_constant_curvature_model(c):
    chart = make_chart(f"S6({c})")
    for x in chart.sample_points(5, 3):
        point, R = curvature_at(chart, x, CFG)
        target = space_form_tensor(point, c)
        rel = invariant_norm(point, R - target) / invariant_norm(point, target)
        assert rel < CFG.tol_fd2
        assert curvature_symmetry_defects(R).max() < CFG.tol_fd2


def test_s6_curvature_is_rk_and_star_related():
    chart = make_chart("S6(1)")
    x = chart.sample_points(7, 1)[0]
    point, R = curvature_at(chart, x, CFG)
    d = identity_defects(point, R, sym_tol=CFG.tol_fd2)
    assert d.rk < CFG.tol_fd2
    assert d.star_relation < CFG.tol_fd2


def test_s6_nearly_kahler_not_kahler():
    chart = make_chart("S6(1)")
    x = chart.sample_points(9, 1)[0]
    point = chart.point_at(x)
    g = point.g_mat
    nJ, _ = j_derivatives_at(chart, x, CFG)
    rng = np.random.default_rng(0)
    worst_xx, worst_xy = 0.0, 0.0
    for _ in range(32):
        X, Y = rng.standard_normal((2, 6))
        X /= np.sqrt(X @ g @ X)
        Y /= np.sqrt(Y @ g @ Y)
        vxx = np.einsum("akj,a,j->k", nJ, X, X)
        vxy = np.einsum("akj,a,j->k", nJ, X, Y)
        worst_xx = max(worst_xx, float(np.sqrt(vxx @ g @ vxx)))
        worst_xy = max(worst_xy, float(np.sqrt(vxy @ g @ vxy)))
    assert worst_xx < CFG.tol_fd1
    assert worst_xy > 0.1  # scale sqrt(c) with c = 1


def test_s6_nabla_j_pairing_antisymmetric():
    """g((nabla_X J)Y, Z) = -g((nabla_X J)Z, Y) on nearly Kahler charts."""
    chart = make_chart("S6(1)")
    x = chart.sample_points(29, 1)[0]
    point = chart.point_at(x)
    nJ, _ = j_derivatives_at(chart, x, CFG)
    pairing = np.einsum("apb,pc->abc", nJ, point.g_mat)
    assert np.max(np.abs(pairing + pairing.transpose(0, 2, 1))) < CFG.tol_fd1


def test_s6_ricci_difference_from_nabla_j():
    """(S - S')(X, X) equals the frame sum of |(nabla_X J) E_i|^2."""
    chart = make_chart("S6(1)")
    x = chart.sample_points(11, 1)[0]
    point, R = curvature_at(chart, x, CFG)
    g, gi = point.g_mat, point.g_inv
    nJ, _ = j_derivatives_at(chart, x, CFG)
    S = np.einsum("bc,abcd->ad", gi, R.components)
    Sp = np.einsum("bc,pc,ql,abpq->al", gi, point.J, point.J, R.components)
    # sum_i g((nabla_X J) E_i, (nabla_Y J) E_i) as a metric contraction
    pairing = np.einsum("apb,pq,cqd,bd->ac", nJ, g, nJ, gi)
    assert np.max(np.abs((S - Sp) - pairing)) < CFG.tol_fd1


# ---------------------------------------------------------------------------
# complex space form charts
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("desc,mu", [("CP(3,4)", 4.0), ("CP(2,1)", 1.0), ("CD(2,-1)", -1.0)])
def test_complex_space_form_charts(desc, mu):
    chart = make_chart(desc)
    for x in chart.sample_points(13, 2):
        point, R = curvature_at(chart, x, CFG)
        target = complex_space_form_tensor(point, mu)
        rel = invariant_norm(point, R - target) / invariant_norm(point, target)
        assert rel < CFG.tol_fd2


@pytest.mark.parametrize("desc", ["CP(2,4)", "CD(1,-2)"])
def test_kahler_charts_have_parallel_j(desc):
    chart = make_chart(desc)
    x = chart.sample_points(15, 1)[0]
    nJ, _ = j_derivatives_at(chart, x, CFG)
    assert np.max(np.abs(nJ)) < CFG.tol_fd1


# ---------------------------------------------------------------------------
# products and margins
# ---------------------------------------------------------------------------

def test_product_chart_mixed_curvature_vanishes():
    chart = make_chart("PRODUCT(CD(1,-1),S6(1))")
    assert chart.n == 8
    x = chart.sample_points(17, 1)[0]
    point, R = curvature_at(chart, x, CFG)
    A = np.array(R.components)
    A[:2, :2, :2, :2] = 0.0
    A[2:, 2:, 2:, 2:] = 0.0
    assert np.max(np.abs(A)) < CFG.tol_fd1


def test_product_sampler_respects_factor_margins():
    chart = make_chart("PRODUCT(CD(1,-0.5),CD(1,-0.5))")
    pts = chart.sample_points(19, 50)
    assert np.all(np.linalg.norm(pts[:, :2], axis=1) <= 0.5 + 1e-12)
    assert np.all(np.linalg.norm(pts[:, 2:], axis=1) <= 0.5 + 1e-12)


def test_margin_error_near_ball_boundary():
    chart = make_chart("CD(1,-1)")
    x = np.array([0.999, 0.0])
    with pytest.raises(MarginError):
        curvature_at(chart, x, CFG)


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------

def test_nk_suite_on_s6():
    chart = make_chart("S6(1)")
    x = chart.sample_points(21, 1)[0]
    rep = nk_identity_suite(chart, x, CFG, seed=0)
    assert rep.nk < CFG.tol_fd1
    for value in (rep.id_1_1, rep.id_1_2, rep.id_1_3, rep.id_1_5, rep.id_3_2, rep.id_3_3):
        assert value < CFG.tol_fd2


def test_nk_suite_on_cp_kahler():
    chart = make_chart("CP(3,4)")
    x = chart.sample_points(23, 1)[0]
    rep = nk_identity_suite(chart, x, CFG, seed=0)
    assert rep.nk < CFG.tol_fd1
    assert rep.id_1_1 < CFG.tol_fd2  # both sides vanish
    assert rep.id_1_2 < CFG.tol_fd2
    assert rep.id_3_2 < CFG.tol_fd2
    # tau = 5 tau' fails on a Kahler model: tau = tau' = mu m (m+1) = 48
    assert rep.id_3_3 == pytest.approx(4 * 48.0, rel=1e-6)


def test_nk_suite_rejects_non_nearly_kahler_chart():
    """A non-constant conformal factor with the constant block J is Hermitian
    but not Kahler, hence not nearly Kahler either."""
    n = 4
    J0 = standard_J(n)
    chart = ChartModel(
        label="conformal",
        n=n,
        scale=0.0,
        metric_at=lambda x: (1.0 + x @ x) * np.eye(n),
        J_at=lambda x: J0.copy(),
    )
    x = np.array([0.3, 0.2, -0.1, 0.4])
    with pytest.raises(NotNearlyKahlerError) as err:
        nk_identity_suite(chart, x, CFG, seed=0)
    assert err.value.defect > 0.1


@pytest.mark.parametrize("desc", ["S6(1)", "CE(3)", "CP(3,4)"])
def test_bianchi_suite(desc):
    chart = make_chart(desc)
    x = chart.sample_points(25, 1)[0]
    rep = bianchi_suite(chart, x, CFG, seed=0)
    assert rep.id_1_4 < CFG.tol_fd2
    assert rep.id_1_6 < CFG.tol_fd2
    assert rep.id_1_7 < CFG.tol_fd2


def test_id_1_1_second_order_convergence():
    """Halving h cuts the residual of the pairing identity by >= 3 with the
    plain second-order scheme."""
    chart = make_chart("S6(1)")
    x = chart.sample_points(27, 1)[0]
    coarse = nk_identity_suite(chart, x, FDConfig(h=2e-3, richardson=False), seed=0)
    fine = nk_identity_suite(chart, x, FDConfig(h=1e-3, richardson=False), seed=0)
    assert coarse.id_1_1 / fine.id_1_1 >= 3.0


def test_fd_config_validation():
    with pytest.raises(ValueError):
        FDConfig(h=-1e-3)
