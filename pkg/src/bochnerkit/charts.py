"""Numerical differential geometry on concrete coordinate charts.

Each model space is realized as a single chart with closed-form metric and
almost complex structure fields; connection, curvature, and the covariant
derivatives of J and of the Ricci traces come from central finite differences
(optionally Richardson-extrapolated to fourth order).

Models:

* ``CE(m)``      flat R^{2m}, constant block J.
* ``S6(c)``      the round six-sphere of sectional curvature c in a
                 stereographic chart; J is the cross-product structure of the
                 unit sphere in R^7, pulled back through the embedding
                 differential.
* ``CP(m, mu)``  constant holomorphic sectional curvature mu > 0 in a
                 realified complex affine chart; J constant.
* ``CD(m, mu)``  the hyperbolic analog (mu < 0) on the unit ball.
* ``PRODUCT(a, b)``  block metric and block J with a product domain sampler.

Chart evaluators are pure; sampled points may be processed in parallel and
combined by max, so suite reports are schedule-independent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .curvature import HermitianPoint, standard_J, validate_point, _ricci, _j_twisted_ricci, _trace
from .multilinear import TOL_ALG, CurvTensor, _norm_sq_rank2
from .octonion import cross_operator

__all__ = [
    "FDConfig",
    "ChartModel",
    "ChartSpecError",
    "MarginError",
    "NotNearlyKahlerError",
    "NKIdentityReport",
    "BianchiReport",
    "parse_model_spec",
    "make_chart",
    "christoffel_at",
    "curvature_at",
    "j_derivatives_at",
    "covariant_field_derivative",
    "nk_identity_suite",
    "bianchi_suite",
]


class ChartSpecError(ValueError):
    """Unknown model descriptor or parameter outside its admissible range."""


class MarginError(ValueError):
    """The evaluation point is too close to the chart boundary for the stencil."""


class NotNearlyKahlerError(ValueError):
    """The chart fails (nabla_X J) X = 0, so the dependent identities are skipped."""

    def __init__(self, defect: float, threshold: float):
        super().__init__(
            f"chart is not nearly Kahler (defect {defect:.3e} above {threshold:.1e}); "
            "dependent identity checks aborted"
        )
        self.defect = float(defect)


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference policy.

    ``h`` is the coordinate step; with ``richardson`` every first derivative is
    extrapolated to fourth order.  ``tol_fd1`` bounds first-derivative-level
    identities (e.g. nearly Kahler defects), ``tol_fd2`` second-derivative-level
    ones (curvature comparisons); the defaults sit at the measured
    truncation/rounding crossover for double precision at these dimensions.
    """

    h: float = 1e-3
    richardson: bool = True
    tol_fd1: float = 1e-6
    tol_fd2: float = 1e-4

    def __post_init__(self):
        if self.h <= 0 or self.tol_fd1 <= 0 or self.tol_fd2 <= 0:
            raise ValueError("step and tolerances must be positive")


@dataclass(frozen=True)
class ChartModel:
    """One coordinate chart of a model space.

    ``metric_at`` / ``J_at`` return raw arrays; ``point_at`` validates them
    into a :class:`HermitianPoint`.  ``boundary_radius`` is the coordinate
    radius at which the chart degenerates (infinite for global charts);
    ``sample_radius`` keeps sampled points well-conditioned.
    """

    label: str
    n: int
    scale: float
    metric_at: Callable[[np.ndarray], np.ndarray]
    J_at: Callable[[np.ndarray], np.ndarray]
    boundary_radius: float = np.inf
    sample_radius: float = 0.8
    factors: tuple["ChartModel", ...] = ()

    def point_at(self, x: np.ndarray, tol: float = TOL_ALG) -> HermitianPoint:
        return validate_point(self.metric_at(x), self.J_at(x), tol)

    def sample_points(self, seed: int, count: int) -> np.ndarray:
        """Seeded interior points with guaranteed margin from the boundary."""
        rng = np.random.default_rng(seed)
        return np.array([self._draw(rng) for _ in range(count)])

    def _draw(self, rng: np.random.Generator) -> np.ndarray:
        if self.factors:
            return np.concatenate([f._draw(rng) for f in self.factors])
        direction = rng.standard_normal(self.n)
        direction /= np.linalg.norm(direction)
        radius = self.sample_radius * rng.uniform() ** (1.0 / self.n)
        return radius * direction

    def require_margin(self, x: np.ndarray, needed: float) -> None:
        if self.factors:
            offset = 0
            for f in self.factors:
                f.require_margin(x[offset : offset + f.n], needed)
                offset += f.n
            return
        if np.linalg.norm(x) + needed >= self.boundary_radius:
            raise MarginError(
                f"point at radius {np.linalg.norm(x):.3f} violates margin {needed:.2e} "
                f"of chart '{self.label}' (boundary radius {self.boundary_radius})"
            )


# ---------------------------------------------------------------------------
# model construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartSpec:
    kind: str                       # CE | S6 | CP | CD | PRODUCT
    m: int | None = None
    c: float | None = None
    mu: float | None = None
    factors: tuple["ChartSpec", ...] = ()

    def label(self) -> str:
        if self.kind == "CE":
            return f"CE({self.m})"
        if self.kind == "S6":
            return f"S6({_fmt(self.c)})"
        if self.kind == "CP":
            return f"CP({self.m},{_fmt(self.mu)})"
        if self.kind == "CD":
            return f"CD({self.m},{_fmt(self.mu)})"
        return "PRODUCT(" + ",".join(f.label() for f in self.factors) + ")"


def _fmt(v: float) -> str:
    return f"{v:g}"


_LEAF = re.compile(r"^(CE|S6|CP|CD)\s*\(\s*([^()]*)\s*\)$", re.IGNORECASE)


def parse_model_spec(text: str) -> ChartSpec:
    """Parse descriptors like ``CE(3)``, ``S6(1)``, ``CP(3,4)``, ``CD(1,-1)``,
    ``PRODUCT(CD(1,-1),S6(1))`` (case-insensitive, nesting allowed)."""
    s = text.strip()
    if s.upper().startswith("PRODUCT"):
        inner = s[s.index("(") + 1 : s.rindex(")")] if "(" in s else ""
        parts, depth, start = [], 0, 0
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append(inner[start:i])
                start = i + 1
        parts.append(inner[start:])
        factors = tuple(parse_model_spec(p) for p in parts if p.strip())
        if len(factors) < 2:
            raise ChartSpecError(f"PRODUCT needs at least two factors: {text!r}")
        return ChartSpec(kind="PRODUCT", factors=factors)
    match = _LEAF.match(s)
    if not match:
        raise ChartSpecError(f"unknown model descriptor {text!r}")
    kind = match.group(1).upper()
    args = [a.strip() for a in match.group(2).split(",") if a.strip()]
    try:
        if kind == "CE":
            (m,) = args
            return ChartSpec(kind="CE", m=int(m))
        if kind == "S6":
            (c,) = args
            return ChartSpec(kind="S6", c=float(c))
        m, mu = args
        return ChartSpec(kind=kind, m=int(m), mu=float(mu))
    except ValueError as exc:
        raise ChartSpecError(f"bad arguments in model descriptor {text!r}: {exc}") from exc


def make_chart(spec: ChartSpec | str) -> ChartModel:
    """Build the chart for a model descriptor."""
    if isinstance(spec, str):
        spec = parse_model_spec(spec)
    if spec.kind == "CE":
        return _ce_chart(spec)
    if spec.kind == "S6":
        return _s6_chart(spec)
    if spec.kind == "CP":
        return _cp_chart(spec)
    if spec.kind == "CD":
        return _cd_chart(spec)
    if spec.kind == "PRODUCT":
        return _product_chart(spec)
    raise ChartSpecError(f"unknown model kind {spec.kind!r}")


def _require_m(spec: ChartSpec) -> int:
    if spec.m is None or spec.m < 1:
        raise ChartSpecError(f"{spec.kind} needs a complex dimension m >= 1")
    return spec.m


def _ce_chart(spec: ChartSpec) -> ChartModel:
    m = _require_m(spec)
    n = 2 * m
    g0, J0 = np.eye(n), standard_J(n)
    return ChartModel(
        label=spec.label(), n=n, scale=0.0,
        metric_at=lambda x: g0.copy(), J_at=lambda x: J0.copy(),
    )


def _s6_chart(spec: ChartSpec) -> ChartModel:
    c = spec.c
    if c is None or c <= 0:
        raise ChartSpecError("S6 needs a positive curvature parameter c")
    rho = 1.0 / np.sqrt(c)

    def embed(x: np.ndarray) -> np.ndarray:
        s = rho * rho + x @ x
        return np.concatenate([2 * rho * rho * x / s, [rho * (x @ x - rho * rho) / s]])

    def d_embed(x: np.ndarray) -> np.ndarray:
        s = rho * rho + x @ x
        D = np.empty((7, 6))
        D[:6, :] = 2 * rho * rho * (np.eye(6) * s - 2 * np.outer(x, x)) / s**2
        D[6, :] = 4 * rho**3 * x / s**2
        return D

    def metric_at(x: np.ndarray) -> np.ndarray:
        D = d_embed(x)
        return D.T @ D

    def J_at(x: np.ndarray) -> np.ndarray:
        p = embed(x)
        D = d_embed(x)
        C = cross_operator(p / np.linalg.norm(p))
        # C D v is tangent to the sphere, so solving against D^T D inverts the
        # embedding differential exactly on its range
        return np.linalg.solve(D.T @ D, D.T @ C @ D)

    return ChartModel(label=spec.label(), n=6, scale=c, metric_at=metric_at, J_at=J_at)


def _interleaved_metric(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Real metric of a Hermitian form A + iB in x1,y1,x2,y2,... coordinates."""
    m = A.shape[0]
    g = np.zeros((2 * m, 2 * m))
    g[0::2, 0::2] = A
    g[1::2, 1::2] = A
    g[0::2, 1::2] = B
    g[1::2, 0::2] = -B
    return g


def _cp_chart(spec: ChartSpec) -> ChartModel:
    m = _require_m(spec)
    if spec.mu is None or spec.mu <= 0:
        raise ChartSpecError("CP needs a positive holomorphic curvature mu")
    mu = spec.mu
    c0 = 4.0 / mu
    J0 = standard_J(2 * m)

    def metric_at(xy: np.ndarray) -> np.ndarray:
        x, y = xy[0::2], xy[1::2]
        r2 = xy @ xy
        A = c0 * ((1 + r2) * np.eye(m) - (np.outer(x, x) + np.outer(y, y))) / (1 + r2) ** 2
        B = -c0 * (np.outer(x, y) - np.outer(y, x)) / (1 + r2) ** 2
        return _interleaved_metric(A, B)

    return ChartModel(
        label=spec.label(), n=2 * m, scale=mu,
        metric_at=metric_at, J_at=lambda x: J0.copy(),
    )


def _cd_chart(spec: ChartSpec) -> ChartModel:
    m = _require_m(spec)
    if spec.mu is None or spec.mu >= 0:
        raise ChartSpecError("CD needs a negative holomorphic curvature mu")
    mu = spec.mu
    c0 = -4.0 / mu
    J0 = standard_J(2 * m)

    def metric_at(xy: np.ndarray) -> np.ndarray:
        x, y = xy[0::2], xy[1::2]
        r2 = xy @ xy
        if r2 >= 1.0:
            raise MarginError(f"CD chart is the open unit ball; |x| = {np.sqrt(r2):.3f}")
        A = c0 * ((1 - r2) * np.eye(m) + np.outer(x, x) + np.outer(y, y)) / (1 - r2) ** 2
        B = c0 * (np.outer(x, y) - np.outer(y, x)) / (1 - r2) ** 2
        return _interleaved_metric(A, B)

    return ChartModel(
        label=spec.label(), n=2 * m, scale=mu,
        metric_at=metric_at, J_at=lambda x: J0.copy(),
        boundary_radius=1.0, sample_radius=0.5,
    )


def _product_chart(spec: ChartSpec) -> ChartModel:
    charts = tuple(make_chart(f) for f in spec.factors)
    n = sum(ch.n for ch in charts)
    slices = []
    offset = 0
    for ch in charts:
        slices.append(slice(offset, offset + ch.n))
        offset += ch.n

    def metric_at(x: np.ndarray) -> np.ndarray:
        g = np.zeros((n, n))
        for ch, sl in zip(charts, slices):
            g[sl, sl] = ch.metric_at(x[sl])
        return g

    def J_at(x: np.ndarray) -> np.ndarray:
        J = np.zeros((n, n))
        for ch, sl in zip(charts, slices):
            J[sl, sl] = ch.J_at(x[sl])
        return J

    return ChartModel(
        label="PRODUCT(" + ",".join(ch.label for ch in charts) + ")",
        n=n, scale=0.0, metric_at=metric_at, J_at=J_at, factors=charts,
    )


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def _d1(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, i: int, cfg: FDConfig):
    e = np.zeros_like(x)
    e[i] = 1.0

    def central(h):
        return (f(x + h * e) - f(x - h * e)) / (2.0 * h)

    if cfg.richardson:
        return (4.0 * central(cfg.h / 2) - central(cfg.h)) / 3.0
    return central(cfg.h)


def _grad_field(f, x, cfg):
    """Stack of coordinate derivatives; axis 0 is the derivative index."""
    return np.stack([_d1(f, x, i, cfg) for i in range(len(x))])


def christoffel_at(chart: ChartModel, x: np.ndarray, cfg: FDConfig) -> np.ndarray:
    """Connection coefficients Gamma^k_{ij} (axis order: upper, lower, lower).

    Gamma^k_{ij} = g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}) / 2; symmetric
    in the lower pair exactly by construction.
    """
    chart.require_margin(x, 2 * cfg.h)
    g = chart.metric_at(x)
    g_inv = np.linalg.inv(g)
    dg = _grad_field(chart.metric_at, x, cfg)  # dg[i, j, l] = d_i g_{jl}
    t = dg + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg)
    return 0.5 * np.einsum("kl,ijl->kij", g_inv, t)


def curvature_at(
    chart: ChartModel, x: np.ndarray, cfg: FDConfig
) -> tuple[HermitianPoint, CurvTensor]:
    """Covariant curvature tensor of the chart metric at ``x``.

    The index convention matches the algebraic models: the round sphere chart
    of curvature c yields c * pi1 (pinned by the acceptance suite), so

        R_{ijkl} = g_{ql} (d_i Gamma^q_{jk} - d_j Gamma^q_{ik}
                           + Gamma^p_{jk} Gamma^q_{ip} - Gamma^p_{ik} Gamma^q_{jp}).
    """
    chart.require_margin(x, 4 * cfg.h)
    G = christoffel_at(chart, x, cfg)
    dG = _grad_field(lambda y: christoffel_at(chart, y, cfg), x, cfg)
    R_up = (
        np.einsum("iqjk->ijkq", dG)
        - np.einsum("jqik->ijkq", dG)
        + np.einsum("pjk,qip->ijkq", G, G)
        - np.einsum("pik,qjp->ijkq", G, G)
    )
    g = chart.metric_at(x)
    R = np.einsum("ijkq,ql->ijkl", R_up, g)
    return chart.point_at(x), CurvTensor(chart.n, R)


def covariant_field_derivative(
    chart: ChartModel,
    fieldfn: Callable[[np.ndarray], np.ndarray],
    variance: str,
    x: np.ndarray,
    cfg: FDConfig,
    christoffel: np.ndarray | None = None,
) -> np.ndarray:
    """Covariant derivative of a tensor field; axis 0 of the result is the
    derivative index.

    ``variance`` gives one character per axis of the field value: ``'u'`` for
    an upper index (corrected by +Gamma) and ``'l'`` for a lower one (-Gamma).
    """
    G = christoffel_at(chart, x, cfg) if christoffel is None else christoffel
    T = fieldfn(x)
    if len(variance) != T.ndim:
        raise ValueError(f"variance {variance!r} does not match field rank {T.ndim}")
    out = _grad_field(fieldfn, x, cfg)
    letters = "ijklmn"[: T.ndim]
    for axis, var in enumerate(variance):
        src = list(letters)
        src[axis] = "p"
        if var == "u":
            spec = f"{letters[axis]}ap,{''.join(src)}->a{letters}"
            out = out + np.einsum(spec, G, T)
        elif var == "l":
            spec = f"pa{letters[axis]},{''.join(src)}->a{letters}"
            out = out - np.einsum(spec, G, T)
        else:
            raise ValueError(f"variance characters must be 'u' or 'l', got {var!r}")
    return out


def j_derivatives_at(
    chart: ChartModel, x: np.ndarray, cfg: FDConfig
) -> tuple[np.ndarray, np.ndarray]:
    """First and second covariant derivatives of the J field.

    Returns ``nJ`` with ``nJ[a, k, j] = (nabla_a J)^k_j`` and ``n2J`` with
    ``n2J[a, b, k, j] = (nabla^2_{a,b} J)^k_j`` (the covariant derivative of
    the nabla-J field, all three slots corrected).
    """
    chart.require_margin(x, 4 * cfg.h)

    def nabla_j(y: np.ndarray) -> np.ndarray:
        G = christoffel_at(chart, y, cfg)
        J = chart.J_at(y)
        dJ = _grad_field(chart.J_at, y, cfg)  # dJ[a, k, j]
        return dJ + np.einsum("kap,pj->akj", G, J) - np.einsum("paj,kp->akj", G, J)

    nJ = nabla_j(x)
    n2J = covariant_field_derivative(chart, nabla_j, "lul", x, cfg)
    return nJ, n2J


# ---------------------------------------------------------------------------
# identity suites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NKIdentityReport:
    """Max-abs residuals of the nearly Kahler identity catalog at one point.

    nk       |(nabla_X J) X| over unit vectors (the nearly Kahler condition)
    id_1_1   R(X,Y,Z,U) - R(X,Y,JZ,JU) + g((nabla_X J)Y, (nabla_Z J)U)
    id_1_2   2 g((nabla_X (nabla_Y J)) Z, U) minus the cyclic curvature sum
             R(X,JY,U,Z) + R(X,JU,Z,Y) + R(X,JZ,Y,U)
    id_1_3   2 (nabla_X (S - S'))(Y, Z) - (S-S')((nabla_X J)Y, JZ)
             - (S-S')(JY, (nabla_X J)Z)
    id_1_5   |contraction of (S - S') against (S - 5 S')|
    id_3_2   invariant norm of (S - S') - (tau - tau') g / (2m)
    id_3_3   |tau - 5 tau'|
    """

    nk: float
    id_1_1: float
    id_1_2: float
    id_1_3: float
    id_1_5: float
    id_3_2: float
    id_3_3: float


@dataclass(frozen=True)
class BianchiReport:
    """Residuals of the differential trace identities at one point.

    id_1_4   max coordinate derivative of tau - tau'
    id_1_6   sum_i (nabla_{E_i} R)(X,Y,Z,E_i) - (nabla_X S)(Y,Z) + (nabla_Y S)(X,Z)
    id_1_7   sum_i (nabla_{E_i} S)(X,E_i) - X(tau)/2
    """

    id_1_4: float
    id_1_6: float
    id_1_7: float


def _unit_vectors(point: HermitianPoint, rng: np.random.Generator, count: int) -> np.ndarray:
    g = point.g_mat
    vecs = []
    for _ in range(count):
        v = rng.standard_normal(point.dim)
        vecs.append(v / np.sqrt(float(v @ g @ v)))
    return np.array(vecs)


def _max_multilinear(T: np.ndarray, vector_sets: list[np.ndarray]) -> float:
    """Max |T(v_1, ..., v_r)| over all combinations of rows of the vector sets."""
    out = T
    # after contracting slot t, one sample axis is prepended and the next
    # original tensor axis sits at position t + 1
    for step, vs in enumerate(vector_sets):
        out = np.tensordot(vs, out, axes=(1, step))
    return float(np.max(np.abs(out)))


def _cached(fn):
    memo: dict[bytes, np.ndarray] = {}

    def wrapped(y: np.ndarray) -> np.ndarray:
        key = y.tobytes()
        if key not in memo:
            memo[key] = fn(y)
        return memo[key]

    return wrapped


def nk_identity_suite(
    chart: ChartModel,
    x: np.ndarray,
    cfg: FDConfig,
    seed: int = 0,
    samples: int = 8,
    nk_threshold: float = 1e-3,
) -> NKIdentityReport:
    """Evaluate the nearly Kahler identity catalog at one chart point.

    Residuals are maxima over ``samples`` seeded unit vectors per slot.  If the
    chart itself fails the nearly Kahler condition beyond ``nk_threshold`` the
    dependent checks are aborted with :class:`NotNearlyKahlerError`.
    """
    chart.require_margin(x, 6 * cfg.h)
    point, R = curvature_at(chart, x, cfg)
    g, gi, J = point.g_mat, point.g_inv, point.J
    n, m = chart.n, chart.n // 2
    nJ, n2J = j_derivatives_at(chart, x, cfg)

    rng = np.random.default_rng(seed)
    V = _unit_vectors(point, rng, samples)

    nk = 0.0
    for X in V:
        w = np.einsum("akj,a,j->k", nJ, X, X)
        nk = max(nk, float(np.sqrt(w @ g @ w)))
    if nk > nk_threshold:
        raise NotNearlyKahlerError(nk, nk_threshold)

    A = R.components
    res_1_1 = (
        A
        - np.einsum("ijpq,pk,ql->ijkl", A, J, J)
        + np.einsum("apb,pq,cqd->abcd", nJ, g, nJ)
    )
    id_1_1 = _max_multilinear(res_1_1, [V, V, V, V])

    lhs_1_2 = 2.0 * np.einsum("abpc,pd->abcd", n2J, g)
    rhs_1_2 = (
        np.einsum("aqdc,qb->abcd", A, J)
        + np.einsum("aqcb,qd->abcd", A, J)
        + np.einsum("aqbd,qc->abcd", A, J)
    )
    id_1_2 = _max_multilinear(lhs_1_2 - rhs_1_2, [V, V, V, V])

    curvature_field = _cached(lambda y: curvature_at(chart, y, cfg)[1].components)

    def diff_field(y: np.ndarray) -> np.ndarray:
        gy = chart.metric_at(y)
        gyi = np.linalg.inv(gy)
        Ry = curvature_field(y)
        return _ricci(gyi, Ry) - _j_twisted_ricci(gyi, chart.J_at(y), Ry)

    D = diff_field(x)
    nD = covariant_field_derivative(chart, diff_field, "ll", x, cfg)
    res_1_3 = (
        2.0 * nD
        - np.einsum("pq,apb,qc->abc", D, nJ, J)
        - np.einsum("pq,pb,aqc->abc", D, J, nJ)
    )
    id_1_3 = _max_multilinear(res_1_3, [V, V, V])

    S = _ricci(gi, A)
    Sp = _j_twisted_ricci(gi, J, A)
    tau, tau_p = _trace(gi, S), _trace(gi, Sp)
    id_1_5 = abs(float(np.einsum("ac,bd,ab,cd->", gi, gi, S - Sp, S - 5.0 * Sp)))
    rel_3_2 = (S - Sp) - ((tau - tau_p) / (2.0 * m)) * g
    id_3_2 = float(np.sqrt(max(_norm_sq_rank2(gi, rel_3_2), 0.0)))
    id_3_3 = abs(tau - 5.0 * tau_p)

    return NKIdentityReport(
        nk=nk, id_1_1=id_1_1, id_1_2=id_1_2, id_1_3=id_1_3,
        id_1_5=id_1_5, id_3_2=id_3_2, id_3_3=id_3_3,
    )


def bianchi_suite(
    chart: ChartModel,
    x: np.ndarray,
    cfg: FDConfig,
    seed: int = 0,
    samples: int = 8,
) -> BianchiReport:
    """Evaluate the differential trace identities at one chart point."""
    chart.require_margin(x, 6 * cfg.h)
    point, R = curvature_at(chart, x, cfg)
    gi = point.g_inv
    rng = np.random.default_rng(seed)
    V = _unit_vectors(point, rng, samples)

    curvature_field = _cached(lambda y: curvature_at(chart, y, cfg)[1].components)

    def ricci_field(y: np.ndarray) -> np.ndarray:
        return _ricci(np.linalg.inv(chart.metric_at(y)), curvature_field(y))

    def tau_field(y: np.ndarray) -> np.ndarray:
        gyi = np.linalg.inv(chart.metric_at(y))
        return np.array([_trace(gyi, _ricci(gyi, curvature_field(y)))])

    def tau_diff_field(y: np.ndarray) -> np.ndarray:
        gyi = np.linalg.inv(chart.metric_at(y))
        Ry = curvature_field(y)
        return np.array(
            [_trace(gyi, _ricci(gyi, Ry)) - _trace(gyi, _j_twisted_ricci(gyi, chart.J_at(y), Ry))]
        )

    d_tau_diff = _grad_field(tau_diff_field, x, cfg)[:, 0]
    id_1_4 = float(np.max(np.abs(d_tau_diff)))

    nR = covariant_field_derivative(chart, curvature_field, "llll", x, cfg)
    nS = covariant_field_derivative(chart, ricci_field, "ll", x, cfg)
    lhs_1_6 = np.einsum("ab,aijkb->ijk", gi, nR)
    rhs_1_6 = np.einsum("ijk->ijk", nS) - np.einsum("jik->ijk", nS)
    id_1_6 = _max_multilinear(lhs_1_6 - rhs_1_6, [V, V, V])

    d_tau = _grad_field(tau_field, x, cfg)[:, 0]
    res_1_7 = np.einsum("ab,aib->i", gi, nS) - 0.5 * d_tau
    id_1_7 = _max_multilinear(res_1_7, [V])

    return BianchiReport(id_1_4=id_1_4, id_1_6=id_1_6, id_1_7=id_1_7)
