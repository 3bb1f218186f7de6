"""Theorem-level verification scenarios.

Every scenario assembles model data, runs the relevant constructions, and
returns a machine-readable report.  Checks carry an explicit expectation:

* a *vanish* check passes when its defect is within tolerance;
* a *nonvanish* check asserts that a quantity predicted to be nonzero really
  is: when the prediction holds the status is ``expected-fail`` (the identity
  fails, as it must), which counts as success; only ``fail`` blocks a report.

Scenario-level randomness is fully seeded, so a report is a pure function of
(scenario id, parameters).
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .bochner import (
    antiholo_4frame_defect,
    generalized_bochner,
    nk_flat_form_3_4,
    rk_bochner,
    sample_antiholomorphic_frame,
)
from .charts import (
    ChartModel,
    ChartSpec,
    FDConfig,
    bianchi_suite,
    curvature_at,
    j_derivatives_at,
    make_chart,
    nk_identity_suite,
    parse_model_spec,
)
from .curvature import (
    HermitianPoint,
    ahsc,
    complex_space_form_tensor,
    direct_sum,
    flat_point,
    ricci_family,
    space_form_tensor,
)
from .multilinear import CurvTensor, invariant_norm

__all__ = [
    "SCENARIO_IDS",
    "ToleranceConfig",
    "ScenarioParams",
    "CheckResult",
    "ScenarioReport",
    "ScenarioParamError",
    "UnknownScenarioError",
    "make_model",
    "run_scenario",
    "run_all",
]


class ScenarioParamError(ValueError):
    """Parameter outside the documented range for the requested scenario."""


class UnknownScenarioError(ValueError):
    """No scenario with the requested id."""


@dataclass(frozen=True)
class ToleranceConfig:
    """The three-tier tolerance policy.

    ``tol_alg`` bounds exact-formula algebra in double precision, ``tol_fd1``
    first-derivative-level finite-difference identities, ``tol_fd2``
    second-derivative-level ones.
    """

    tol_alg: float = 1e-12
    tol_fd1: float = 1e-6
    tol_fd2: float = 1e-4


@dataclass(frozen=True)
class ScenarioParams:
    """Scenario inputs; defaults are the smallest faithful instances."""

    m: int = 3
    k: int = 1
    c: float = 1.0
    mu: float = 1.0
    seed: int = 0
    h: float = 1e-3
    richardson: bool = True
    samples: int = 512
    chart_points: int = 2
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)

    def fd_config(self) -> FDConfig:
        return FDConfig(
            h=self.h,
            richardson=self.richardson,
            tol_fd1=self.tolerances.tol_fd1,
            tol_fd2=self.tolerances.tol_fd2,
        )

    def validate(self) -> None:
        if not (2 <= self.m <= 6):
            raise ScenarioParamError(f"m must be in [2, 6], got {self.m}")
        if not (1 <= self.k < self.m):
            raise ScenarioParamError(f"k must satisfy 1 <= k < m, got k={self.k}, m={self.m}")
        if self.c <= 0 or self.mu <= 0:
            raise ScenarioParamError("curvature scales c and mu must be positive")
        if self.samples < 1 or self.chart_points < 1:
            raise ScenarioParamError("samples and chart_points must be >= 1")
        if self.h <= 0:
            raise ScenarioParamError("fd step h must be positive")


@dataclass(frozen=True)
class CheckResult:
    """One named check: the measured defect against its tolerance."""

    name: str
    claim: str
    defect: float | None
    tolerance: float
    status: str  # pass | fail | expected-fail | absent

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "defect": self.defect,
            "tolerance": self.tolerance,
            "status": self.status,
        }


@dataclass
class ScenarioReport:
    scenario: str
    parameters: dict
    checks: list[CheckResult]
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "schema_version": 1,
            "scenario": self.scenario,
            "parameters": self.parameters,
            "checks": [c.to_dict() for c in self.checks],
            "status": "pass" if self.passed else "fail",
        }
        # timing is excluded by default so identical runs serialize to
        # identical bytes
        if include_timing:
            out["wall_time_s"] = self.wall_time_s
        return out


def _vanish(name: str, claim: str, defect: float, tol: float) -> CheckResult:
    status = "pass" if defect <= tol else "fail"
    return CheckResult(name, claim, float(defect), float(tol), status)


def _nonvanish(name: str, claim: str, defect: float, tol: float) -> CheckResult:
    status = "expected-fail" if defect > tol else "fail"
    return CheckResult(name, claim, float(defect), float(tol), status)


def _absent(name: str, claim: str) -> CheckResult:
    return CheckResult(name, claim, None, 0.0, "absent")


# ---------------------------------------------------------------------------
# algebraic model gallery (shared with the CLI)
# ---------------------------------------------------------------------------

def make_model(spec: ChartSpec | str) -> tuple[HermitianPoint, CurvTensor, str]:
    """Algebraic (pointwise) model for a descriptor: flat-coordinate point plus
    the exact curvature tensor of the named space."""
    if isinstance(spec, str):
        spec = parse_model_spec(spec)
    if spec.kind == "PRODUCT":
        point, R, _ = make_model(spec.factors[0])
        for factor in spec.factors[1:]:
            fp, fR, _ = make_model(factor)
            point, R = direct_sum(point, R, fp, fR)
        return point, R, spec.label()
    if spec.kind == "CE":
        point = flat_point(2 * spec.m)
        return point, CurvTensor.zero(point.dim), spec.label()
    if spec.kind == "S6":
        point = flat_point(6)
        return point, space_form_tensor(point, spec.c), spec.label()
    # CP (mu > 0) and CD (mu < 0) share the constant-HSC tensor
    point = flat_point(2 * spec.m)
    return point, complex_space_form_tensor(point, spec.mu), spec.label()


def _csf_product(dims_mus: list[tuple[int, float]]) -> tuple[HermitianPoint, CurvTensor]:
    """Product of constant-HSC factors given as (complex dim, mu) pairs."""
    point = flat_point(2 * dims_mus[0][0])
    R = complex_space_form_tensor(point, dims_mus[0][1])
    for dim_c, mu in dims_mus[1:]:
        fp = flat_point(2 * dim_c)
        point, R = direct_sum(point, R, fp, complex_space_form_tensor(fp, mu))
    return point, R


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

def _thm21_forward(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances.tol_alg
    point, R = _csf_product([(p.k, p.mu), (p.m - p.k, -p.mu)])
    out = generalized_bochner(point, R)
    return [
        _vanish(
            f"bstar_product_{p.k}_{p.m - p.k}",
            "a product of two spaces of opposite constant holomorphic sectional "
            "curvature has vanishing trace-free symmetrized curvature",
            out.norm,
            tol,
        )
    ]


_EPSILONS = (1e-3, 1e-2, 1e-1)


def _thm21_converse(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances.tol_alg
    checks = []
    point, R = _csf_product([(p.k, p.mu), (p.m - p.k, -p.mu)])
    checks.append(
        _vanish(
            "bstar_unperturbed",
            "the unperturbed opposite-curvature product is trace-free",
            generalized_bochner(point, R).norm,
            tol,
        )
    )
    norms = []
    for eps in _EPSILONS:
        point, R = _csf_product([(p.k, p.mu), (p.m - p.k, -p.mu + eps)])
        norm = generalized_bochner(point, R).norm
        norms.append(norm)
        checks.append(
            _nonvanish(
                f"bstar_perturbed_eps_{eps:g}",
                "detuning one factor away from opposite curvature produces a "
                "nonvanishing trace-free part",
                norm,
                tol,
            )
        )
    growth_margin = min(b - a for a, b in zip(norms, norms[1:]))
    checks.append(
        _vanish(
            "bstar_growth_monotone",
            "the trace-free norm grows strictly with the detuning",
            max(0.0, -growth_margin),
            0.0,
        )
    )
    return checks


def _cor22(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances.tol_alg
    zero_pt, zero_R = _csf_product([(1, 0.0), (1, 0.0), (1, 0.0)])
    flat_norm = generalized_bochner(zero_pt, zero_R).norm
    checks = [
        _vanish(
            "bstar_triple_zero_hsc",
            "a triple product with all factors of zero holomorphic sectional "
            "curvature is trace-free",
            flat_norm,
            tol,
        )
    ]
    for mus in ((p.mu, -p.mu, p.mu), (p.mu, -p.mu, 0.0)):
        pt, R = _csf_product([(1, mus[0]), (1, mus[1]), (1, mus[2])])
        checks.append(
            _nonvanish(
                "bstar_triple_hsc_" + "_".join(f"{v:g}" for v in mus),
                "a triple product with any nonzero factor curvature is not trace-free",
                generalized_bochner(pt, R).norm,
                tol,
            )
        )
    return checks


def _s6_chart_checks(p: ScenarioParams, chart: ChartModel) -> list[CheckResult]:
    tol = p.tolerances
    cfg = p.fd_config()
    checks = []
    worst_rel = 0.0
    for x in chart.sample_points(p.seed, p.chart_points):
        point, R = curvature_at(chart, x, cfg)
        target = space_form_tensor(point, chart.scale)
        rel = invariant_norm(point, R - target) / invariant_norm(point, target)
        worst_rel = max(worst_rel, rel)
    checks.append(
        _vanish(
            "chart_curvature_matches_model",
            "finite-difference curvature of the round six-sphere chart matches "
            "the constant-curvature tensor",
            worst_rel,
            tol.tol_fd2,
        )
    )
    x = chart.sample_points(p.seed, 1)[0]
    suite = nk_identity_suite(chart, x, cfg, seed=p.seed)
    checks.append(_vanish("chart_nk", "the chart is nearly Kahler", suite.nk, tol.tol_fd1))
    for name, value, claim in (
        ("chart_id_1_1", suite.id_1_1, "curvature J-rotation defect equals the nabla-J pairing"),
        ("chart_id_1_2", suite.id_1_2, "second derivatives of J are determined by curvature"),
        ("chart_id_1_3", suite.id_1_3, "the derivative of the twisted Ricci difference couples to nabla J"),
        ("chart_id_1_5", suite.id_1_5, "the twisted Ricci contraction vanishes"),
        ("chart_id_3_2", suite.id_3_2, "the Ricci difference is a multiple of the metric"),
        ("chart_id_3_3", suite.id_3_3, "the scalar traces sit in the 5:1 ratio"),
    ):
        checks.append(_vanish(name, claim, value, tol.tol_fd2))
    return checks


def _thm31_s6(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances.tol_alg
    point = flat_point(6)
    R = space_form_tensor(point, p.c)
    fam = ricci_family(point, R)
    out = rk_bochner(point, R)
    flat_form = nk_flat_form_3_4(point, fam.S, fam.tau)
    checks = [
        _vanish("b_vanishes", "the round six-sphere has vanishing corrected curvature",
                out.norm, tol),
        _vanish("tau_value", "scalar trace equals 30c on the six-sphere",
                abs(fam.tau - 30.0 * p.c), tol),
        _vanish("tau_prime_value", "twisted scalar trace equals 6c on the six-sphere",
                abs(fam.tau_prime - 6.0 * p.c), tol),
        _vanish("tau_ratio", "the scalar traces sit in the 5:1 ratio",
                abs(fam.tau - 5.0 * fam.tau_prime), tol),
        _vanish("star_relation", "four times the symmetrized Ricci equals S + 3S'",
                invariant_norm(point, 4.0 * fam.S_star - (fam.S + 3.0 * fam.S_prime)), tol),
        _vanish("twisted_contraction", "the twisted Ricci contraction vanishes",
                abs(np.einsum("ac,bd,ab,cd->", point.g_inv, point.g_inv,
                              (fam.S - fam.S_prime).components,
                              (fam.S - 5.0 * fam.S_prime).components)), tol),
        _vanish("flat_form_reconstruction",
                "the closed 5:1-ratio curvature form reproduces the six-sphere tensor",
                invariant_norm(point, flat_form - R), tol),
    ]
    checks.extend(_s6_chart_checks(p, make_chart(f"S6({p.c!r})")))
    return checks


def _mixed_component_max(R: CurvTensor, n1: int) -> float:
    A = np.array(R.components)
    inside = np.array(A)
    inside[:n1, :n1, :n1, :n1] = 0.0
    inside[n1:, n1:, n1:, n1:] = 0.0
    return float(np.max(np.abs(inside)))


def _thm31_product(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances
    pt_a = flat_point(2)
    pt_b = flat_point(6)
    point, R = direct_sum(
        pt_a, complex_space_form_tensor(pt_a, -p.c), pt_b, space_form_tensor(pt_b, p.c)
    )
    checks = [
        _vanish("b_vanishes",
                "the hyperbolic-line times six-sphere product has vanishing corrected curvature",
                rk_bochner(point, R).norm, tol.tol_alg),
        _vanish("bstar_vanishes",
                "the product pairs opposite constant holomorphic curvatures, so the "
                "trace-free symmetrized tensor vanishes",
                generalized_bochner(point, R).norm, tol.tol_alg),
    ]
    chart = make_chart(f"PRODUCT(CD(1,{-p.c!r}),S6({p.c!r}))")
    cfg = p.fd_config()
    sym_tol = 10.0 * tol.tol_fd1
    worst_b = worst_mixed = 0.0
    for x in chart.sample_points(p.seed, p.chart_points):
        fd_point, fd_R = curvature_at(chart, x, cfg)
        worst_b = max(worst_b, rk_bochner(fd_point, fd_R, sym_tol=sym_tol, rk_tol=sym_tol).norm)
        worst_mixed = max(worst_mixed, _mixed_component_max(fd_R, 2))
    checks.append(
        _vanish("chart_b_vanishes", "the corrected curvature also vanishes for the "
                "finite-difference product chart", worst_b, tol.tol_fd2)
    )
    checks.append(
        _vanish("chart_mixed_components", "product curvature has no mixed components",
                worst_mixed, tol.tol_fd1)
    )
    x = chart.sample_points(p.seed, 1)[0]
    suite = nk_identity_suite(chart, x, cfg, seed=p.seed)
    checks.append(
        _nonvanish("chart_id_3_2",
                   "the Ricci difference of the product is not a multiple of the metric, "
                   "as the two blocks carry different constants",
                   suite.id_3_2, tol.tol_fd2)
    )
    return checks


def _thm31_counterexample(p: ScenarioParams) -> list[CheckResult]:
    threshold = 1e-3
    pt_a = flat_point(4)
    pt_b = flat_point(6)
    point, R = direct_sum(
        pt_a, complex_space_form_tensor(pt_a, -p.c), pt_b, space_form_tensor(pt_b, p.c)
    )
    frame_defect = antiholo_4frame_defect(point, R, samples=p.samples, seed=p.seed)
    return [
        _nonvanish("b_nonvanishing",
                   "the hyperbolic-plane times six-sphere product has nonvanishing "
                   "corrected curvature",
                   rk_bochner(point, R).norm, threshold),
        _vanish("bstar_vanishes",
                "the same product still pairs opposite holomorphic curvatures, so the "
                "trace-free symmetrized tensor is blind to it",
                generalized_bochner(point, R).norm, p.tolerances.tol_alg),
        _nonvanish("antiholo_4frame",
                   "curvature does not vanish on orthonormal antiholomorphic 4-frames, "
                   "which a vanishing corrected tensor would force",
                   frame_defect, threshold),
    ]


def _thm32_models(p: ScenarioParams) -> list[CheckResult]:
    if p.m < 3:
        raise ScenarioParamError("thm32_models needs m >= 3 for the corrected tensor")
    tol = p.tolerances
    cfg = p.fd_config()
    sym_tol = 10.0 * tol.tol_fd1
    descriptors = [
        f"CE({p.m})",
        f"CD({p.m},{-p.c!r})",
        f"CP({p.m},{p.c!r})",
        f"S6({p.c!r})",
        f"PRODUCT(CD(1,{-p.c!r}),S6({p.c!r}))",
        f"PRODUCT(CD(1,{-p.c!r}),CP({p.m - 1},{p.c!r}))",
    ]
    checks = []
    for desc in descriptors:
        point, R, label = make_model(desc)
        checks.append(
            _vanish(f"b_{label}",
                    "constant-scalar-curvature model has vanishing corrected curvature",
                    rk_bochner(point, R).norm, tol.tol_alg)
        )
        chart = make_chart(desc)
        x = chart.sample_points(p.seed, 1)[0]
        fd_point, fd_R = curvature_at(chart, x, cfg)
        checks.append(
            _vanish(f"chart_b_{label}",
                    "the finite-difference chart agrees",
                    rk_bochner(fd_point, fd_R, sym_tol=sym_tol, rk_tol=sym_tol).norm,
                    tol.tol_fd2)
        )
    return checks


def _cor33_spotcheck(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances.tol_alg
    cases = [
        (f"S6({p.c!r})", p.c),
        (f"CP({p.m},{p.mu!r})", p.mu / 4.0),
        (f"CD({p.m},{-p.mu!r})", -p.mu / 4.0),
    ]
    checks = []
    rng = np.random.default_rng(p.seed)
    for desc, expected in cases:
        point, R, label = make_model(desc)
        checks.append(
            _vanish(f"b_{label}",
                    "a space of constant antiholomorphic sectional curvature has "
                    "vanishing corrected curvature",
                    rk_bochner(point, R).norm, tol)
        )
        worst = 0.0
        for _ in range(16):
            X, Y = sample_antiholomorphic_frame(point, rng, 2)
            worst = max(worst, abs(ahsc(point, R, X, Y) - expected))
        checks.append(
            _vanish(f"ahsc_constant_{label}",
                    "sampled antiholomorphic planes all report the model constant",
                    worst, tol)
        )
    return checks


def _identities_s6(p: ScenarioParams) -> list[CheckResult]:
    chart = make_chart(f"S6({p.c!r})")
    return _s6_chart_checks(p, chart)


def _identities_cp(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances
    cfg = p.fd_config()
    chart = make_chart(f"CP({p.m},{p.mu!r})")
    checks = []
    worst_rel = worst_dj = 0.0
    for x in chart.sample_points(p.seed, p.chart_points):
        point, R = curvature_at(chart, x, cfg)
        target = complex_space_form_tensor(point, p.mu)
        worst_rel = max(
            worst_rel, invariant_norm(point, R - target) / invariant_norm(point, target)
        )
        nJ, _ = j_derivatives_at(chart, x, cfg)
        g = point.g_mat
        rng = np.random.default_rng(p.seed)
        for _ in range(8):
            X = rng.standard_normal(point.dim)
            Y = rng.standard_normal(point.dim)
            X /= np.sqrt(X @ g @ X)
            Y /= np.sqrt(Y @ g @ Y)
            w = np.einsum("akj,a,j->k", nJ, X, Y)
            worst_dj = max(worst_dj, float(np.sqrt(w @ g @ w)))
    checks.append(
        _vanish("chart_curvature_matches_model",
                "finite-difference curvature matches the constant holomorphic "
                "curvature tensor", worst_rel, tol.tol_fd2)
    )
    checks.append(
        _vanish("chart_nabla_j", "the chart is Kahler: nabla J vanishes",
                worst_dj, tol.tol_fd1)
    )
    x = chart.sample_points(p.seed, 1)[0]
    point, R = curvature_at(chart, x, cfg)
    fam = ricci_family(point, R, sym_tol=10.0 * tol.tol_fd1)
    suite = nk_identity_suite(chart, x, cfg, seed=p.seed)
    checks.extend([
        _vanish("chart_nk", "Kahler charts are nearly Kahler", suite.nk, tol.tol_fd1),
        _vanish("chart_id_1_1", "both sides of the J-rotation pairing vanish",
                suite.id_1_1, tol.tol_fd2),
        _vanish("chart_id_1_2", "second derivatives of J are determined by curvature",
                suite.id_1_2, tol.tol_fd2),
        _vanish("chart_id_1_3", "the Ricci-difference derivative identity degenerates to 0 = 0",
                suite.id_1_3, tol.tol_fd2),
        _vanish("chart_id_1_5", "the twisted Ricci contraction vanishes",
                suite.id_1_5, tol.tol_fd2),
        _vanish("chart_id_3_2", "the Ricci difference vanishes, hence is a multiple of the metric",
                suite.id_3_2, tol.tol_fd2),
        _vanish("chart_tau_equality", "the two scalar traces agree on a Kahler model",
                abs(fam.tau - fam.tau_prime), tol.tol_fd2),
        _nonvanish("chart_id_3_3", "the 5:1 scalar ratio does not apply to the Kahler model",
                   suite.id_3_3, tol.tol_fd2),
    ])
    return checks


def _bianchi(p: ScenarioParams) -> list[CheckResult]:
    tol = p.tolerances
    cfg = p.fd_config()
    checks = []
    for desc in (f"S6({p.c!r})", f"CE({p.m})", f"CP({p.m},{p.mu!r})"):
        chart = make_chart(desc)
        x = chart.sample_points(p.seed, 1)[0]
        suite = bianchi_suite(chart, x, cfg, seed=p.seed)
        for name, value, claim in (
            ("id_1_4", suite.id_1_4, "the scalar trace difference is locally constant"),
            ("id_1_6", suite.id_1_6, "the contracted differential identity for curvature holds"),
            ("id_1_7", suite.id_1_7, "the contracted differential identity for the Ricci trace holds"),
        ):
            checks.append(_vanish(f"{name}_{chart.label}", claim, value, tol.tol_fd2))
    return checks


_SCENARIOS = {
    "thm21_forward": _thm21_forward,
    "thm21_converse": _thm21_converse,
    "cor22": _cor22,
    "thm31_s6": _thm31_s6,
    "thm31_product": _thm31_product,
    "thm31_counterexample": _thm31_counterexample,
    "thm32_models": _thm32_models,
    "cor33_spotcheck": _cor33_spotcheck,
    "identities_s6": _identities_s6,
    "identities_cp": _identities_cp,
    "bianchi": _bianchi,
}

SCENARIO_IDS = tuple(_SCENARIOS)


def run_scenario(scenario_id: str, params: ScenarioParams | None = None) -> ScenarioReport:
    """Run one scenario and return its report."""
    if scenario_id not in _SCENARIOS:
        raise UnknownScenarioError(
            f"unknown scenario {scenario_id!r}; known: {', '.join(SCENARIO_IDS)}"
        )
    params = params or ScenarioParams()
    params.validate()
    start = time.perf_counter()
    checks = _SCENARIOS[scenario_id](params)
    return ScenarioReport(
        scenario=scenario_id,
        parameters=asdict(params),
        checks=checks,
        wall_time_s=time.perf_counter() - start,
    )


def run_all(params: ScenarioParams | None = None) -> list[ScenarioReport]:
    """Run every scenario in a fixed order."""
    return [run_scenario(sid, params) for sid in SCENARIO_IDS]
