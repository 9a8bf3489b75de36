"""Scenario library and the named verification experiments: the distance-ratio
gate, the explicit near-optimal two-disk construction, and the disk-plus-point
limit table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .approx import PiecewisePolynomial, approximation_nodes, dn_sequence, rho_from_dn
from .errors import ParameterInfeasibleError
from .fekete import leja_points
from .geometry import (
    CompactSet,
    ConvexPolygon,
    Disk,
    SinglePoint,
    lower_bound,
    offset_curve_family,
)
from .potential import FitParams, fit_greens, rho_critical

__all__ = [
    "Scenario",
    "Prop15Parameters",
    "Prop15Report",
    "GateReport",
    "prop15_scenario",
    "prop16_limit",
    "gate_theorem",
    "scenario_library",
]


@dataclass(frozen=True)
class Scenario:
    name: str
    set: CompactSet
    F: PiecewisePolynomial
    F_alt: PiecewisePolynomial | None = None
    degree_max: int = 40
    greens_params: FitParams = field(default_factory=FitParams)
    curve_margin: float = 0.3
    window: tuple = (15, 35)
    density: float = 24.0
    seed: int = 0


# ---------------------------------------------------------------------------
# Explicit two-disk construction driving the infimum over C_{h0}


@dataclass(frozen=True)
class Prop15Parameters:
    h0: float
    delta0: float
    ell0: float
    r0: float
    N0: int
    eps0: float
    n0: int

    def __post_init__(self):
        checks = parameter_checks(self)
        bad = [name for name, ok, *_ in checks if not ok]
        if bad:
            raise ParameterInfeasibleError(
                "parameter inequalities failed: " + ", ".join(bad)
            )


def parameter_checks(p: Prop15Parameters) -> list:
    """All defining inequalities of the construction, as (name, ok, lhs, rhs)."""
    h0, d0, ell0, r0, N0, eps0, n0 = (
        p.h0, p.delta0, p.ell0, p.r0, p.N0, p.eps0, p.n0,
    )
    target = d0 + 1 / h0
    rows = []

    def chk(name, lhs, op, rhs):
        ok = lhs < rhs if op == "<" else lhs > rhs
        rows.append((name, ok, lhs, rhs))

    chk("delta0_positive", 0.0, "<", d0)
    chk("delta0_upper", d0, "<", 1 - 1 / h0)
    chk("ell0_lower", h0 / (d0 * h0 + 1), "<", ell0)
    chk("ell0_upper", ell0, "<", h0)
    chk("r0_positive", 0.0, "<", r0)
    chk("r0_upper", r0, "<", h0 - ell0)
    chk("N0_pow_gap", N0 * math.log(h0 - r0), ">", math.log(2))
    chk("N0_ratio", N0 * math.log((h0 - r0) / ell0), ">",
        math.log(2 * (h0 - ell0) / r0))
    chk("N0_ell_pow", N0 * math.log(ell0), ">", math.log(2))
    chk("N0_target",
        math.log(8 * h0 / (h0 - ell0)) / N0 - N0 / (N0 + 1) * math.log(ell0),
        "<", math.log(target))
    chk("eps0_tiny", math.log(eps0), "<",
        math.log(0.5) - N0 * math.log(2 * h0))
    chk("eps0_vs_r0", eps0, "<", r0 / 2)
    chk("eps0_vs_h0", eps0, "<", (h0 - 1) / 2)
    chk("n0_min", 2, "<", n0)
    return rows


def _choose_parameters(h0: float, delta0: float,
                       n_cap: int = 10 ** 6) -> Prop15Parameters:
    if not h0 > 1:
        raise ParameterInfeasibleError("h0 must exceed 1")
    if not (0 < delta0 < 1 - 1 / h0):
        raise ParameterInfeasibleError(
            f"delta0 must lie in (0, {1 - 1 / h0}), got {delta0}"
        )
    lo = h0 / (delta0 * h0 + 1)
    ell0 = (lo + h0) / 2
    r0 = (h0 - ell0) / 2
    target = math.log(delta0 + 1 / h0)
    N0 = None
    for N in range(1, n_cap + 1):
        if (
            N * math.log(h0 - r0) > math.log(2)
            and N * math.log((h0 - r0) / ell0) > math.log(2 * (h0 - ell0) / r0)
            and N * math.log(ell0) > math.log(2)
            and math.log(8 * h0 / (h0 - ell0)) / N
                - N / (N + 1) * math.log(ell0) < target
        ):
            N0 = N
            break
    if N0 is None:
        raise ParameterInfeasibleError(
            f"no admissible degree exponent below {n_cap} for "
            f"h0={h0}, delta0={delta0}"
        )
    log_eps_bound = min(
        math.log(0.5) - N0 * math.log(2 * h0),
        math.log(r0 / 2),
        math.log((h0 - 1) / 2),
    )
    eps0 = 0.5 * math.exp(log_eps_bound)
    if eps0 <= 0:
        raise ParameterInfeasibleError("epsilon underflow")
    return Prop15Parameters(h0, delta0, ell0, r0, N0, eps0, 3)


def _log_abs_pow_minus_one(z: np.ndarray, M: int) -> np.ndarray:
    """log |z^M - 1|, overflow-safe for large M * log|z|."""
    z = np.asarray(z, dtype=complex)
    t = M * np.log(np.abs(z))
    out = np.empty(z.shape)
    big = t > 40
    if np.any(big):
        w = np.exp(-M * np.log(z[big]))  # |w| tiny
        out[big] = t[big] + np.log(np.abs(1 - w))
    small = ~big
    if np.any(small):
        zm = np.exp(M * np.log(z[small]))
        with np.errstate(divide="ignore"):
            out[small] = np.log(np.abs(zm - 1))
    return out


@dataclass(frozen=True)
class Prop15Report:
    params: Prop15Parameters
    checks: list               # (name, ok, lhs, rhs)
    log_sup_p: float           # log ||p|| on the two-disk set
    log_min_p_curves: float    # log min |p| on the two test circles
    final_value: float         # (sup/min)^(1/deg)
    target: float              # delta0 + 1/h0
    passed: bool


def prop15_scenario(h0: float, delta0: float,
                    nodes_outer: int = 2048, nodes_inner: int = 512) -> Prop15Report:
    """Build the explicit two-disk set and polynomial witnessing that the
    distance-ratio bound 1/h0 is approached within delta0.

    Parameter policy: midpoints/halves of the admissible intervals and the
    smallest admissible degree exponent by direct search; all values are
    echoed in the report.  Polynomial magnitudes are evaluated in log space.
    """
    p = _choose_parameters(h0, delta0)
    n0, N0, eps0, ell0, r0 = p.n0, p.N0, p.eps0, p.ell0, p.r0
    M = n0 * N0
    center = h0 + eps0
    roots2 = center + eps0 * np.exp(2j * math.pi * np.arange(n0) / n0)

    def log_abs_p(z):
        z = np.asarray(z, dtype=complex)
        lp2 = np.log(np.abs(z[:, None] - roots2)).sum(axis=1)
        return _log_abs_pow_minus_one(z, M) + lp2

    t_out = np.arange(nodes_outer) * (2 * math.pi / nodes_outer)
    k0_nodes = np.exp(1j * t_out)
    t_in = np.arange(nodes_inner) * (2 * math.pi / nodes_inner)
    k1_nodes = center + eps0 * np.exp(1j * t_in)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_sup = float(
            max(np.max(log_abs_p(k0_nodes)), np.max(log_abs_p(k1_nodes)))
        )

    curve1 = ell0 * np.exp(1j * t_out)
    curve2 = center + r0 * np.exp(1j * t_in)
    log_min = float(
        min(np.min(log_abs_p(curve1)), np.min(log_abs_p(curve2)))
    )

    checks = parameter_checks(p)
    # norm chain from the construction, verified numerically in log space
    log_2 = math.log(2)
    lhs21 = log_sup
    rhs21 = log_2 + n0 * math.log(h0 + 2 * eps0 + 1)
    checks.append(("sup_bound", lhs21 <= rhs21 + 1e-12, lhs21, rhs21))
    rhs25 = (M * math.log(ell0) + math.log1p(-ell0 ** -M)
             + n0 * math.log(h0 - ell0))
    checks.append(("curve_min_bound", log_min >= rhs25 - 1e-9, log_min, rhs25))
    lhs26 = log_sup - log_min
    rhs26 = rhs21 - rhs25
    checks.append(("ratio_bound", lhs26 <= rhs26 + 1e-9, lhs26, rhs26))

    degree = M + n0
    final_value = math.exp((log_sup - log_min) / degree)
    target = delta0 + 1 / h0
    checks.append(("final_bound", final_value < target, final_value, target))
    passed = all(ok for _, ok, *_ in checks)
    return Prop15Report(p, checks, log_sup, log_min, final_value, target, passed)


def prop15_compact_set(params: Prop15Parameters) -> CompactSet:
    """The constructed set: unit disk plus the tiny disk at distance h0."""
    return CompactSet((
        Disk(0.0, 1.0),
        Disk(params.h0 + params.eps0, params.eps0),
    ))


# ---------------------------------------------------------------------------
# Disk-plus-point limit


def prop16_limit(h0: float, shrink_steps: int = 8, nodes: int = 512) -> list:
    """Theta values for the unit disk plus the point h0, on shrinking circle
    families, using the analytic potential log|z| (the point is polar).

    Family k: circles |z| = h0 - 2^-k and |z - h0| = 2^-(k+1).  Returns rows
    (k, theta); the table decreases strictly toward 1/h0 and never drops
    below it.
    """
    if not h0 > 1:
        raise ParameterInfeasibleError("h0 must exceed 1")
    t = np.arange(nodes) * (2 * math.pi / nodes)
    unit = np.exp(1j * t)
    rows = []
    for k in range(1, shrink_steps + 1):
        c1 = (h0 - 2.0 ** -k) * unit
        c2 = h0 + 2.0 ** -(k + 1) * unit
        theta = max(
            float(np.max(1 / np.abs(c1))),
            float(np.max(1 / np.abs(c2))),
        )
        rows.append((k, theta))
    return rows


# ---------------------------------------------------------------------------
# The gate: both estimators must respect the distance-ratio lower bound


@dataclass(frozen=True)
class GateReport:
    name: str
    lower_bound: float
    rho_critical: float | None
    rho_minimax: float
    slack: float
    passed: bool


def gate_theorem(s: Scenario, slack: float = 0.02) -> GateReport:
    """Check that both convergence-factor estimators respect the
    distance-ratio lower bound on a scenario."""
    lb = lower_bound(s.set).value
    rc = None
    if len(s.set.components) >= 2:
        model = fit_greens(s.set, s.greens_params)
        rc = rho_critical(model, s.set).rho
    nodes = approximation_nodes(s.set, s.density)
    dns = dn_sequence(s.F, s.set, s.degree_max, nodes=nodes)
    rm = rho_from_dn(dns, s.window).value
    ok = rm >= lb - slack and (rc is None or rc >= lb - slack)
    return GateReport(s.name, lb, rc, rm, slack, ok)


def _const(vals) -> PiecewisePolynomial:
    return PiecewisePolynomial(tuple([v] for v in vals))


def _affine(shifts) -> PiecewisePolynomial:
    return PiecewisePolynomial(tuple([s, 1.0] for s in shifts))


def scenario_library() -> list:
    """Built-in verification scenarios, each with two distinct target choices."""
    omega = np.exp(2j * math.pi / 3)
    square = ConvexPolygon((0.0, 1.0, 1.0 + 1.0j, 1.0j))
    lib = [
        Scenario(
            "disk_point",
            CompactSet((Disk(0.0, 1.0), SinglePoint(2.0))),
            _const([0.0, 1.0]),
            _affine([0.0, 1.0]),
        ),
        Scenario(
            "disk_tinydisk",
            CompactSet((Disk(0.0, 1.0), Disk(2.001, 0.001))),
            _const([0.0, 1.0]),
            _affine([0.0, 1.0]),
        ),
        Scenario(
            "two_equal_disks",
            CompactSet((Disk(0.0, 1.0), Disk(4.0, 1.0))),
            _const([0.0, 1.0]),
            _affine([0.0, 1.0]),
        ),
        Scenario(
            "two_unequal_disks",
            CompactSet((Disk(0.0, 1.0), Disk(5.0, 2.0))),
            _const([0.0, 1.0]),
            _affine([0.0, 1.0]),
            curve_margin=0.5,
        ),
        Scenario(
            "three_disks",
            CompactSet((Disk(3.0, 1.0), Disk(3.0 * omega, 1.0),
                        Disk(3.0 * omega ** 2, 1.0))),
            _const([0.0, 1.0, 2.0]),
            _affine([0.0, 1.0, 2.0]),
            curve_margin=0.5,
        ),
        Scenario(
            "square_disk",
            CompactSet((square, Disk(4.0, 1.0))),
            _const([0.0, 1.0]),
            _affine([0.0, 1.0]),
        ),
    ]
    return lib


def scenario_by_name(name: str) -> Scenario:
    for s in scenario_library():
        if s.name == name:
            return s
    raise KeyError(f"unknown scenario {name!r}")


def default_family(s: Scenario):
    return offset_curve_family(s.set, s.curve_margin)
