"""Piecewise-polynomial targets, discrete minimax approximation and the
convergence-factor estimate from the error sequence.

The sup norm on L is discretized by boundary nodes (the residual of a
polynomial approximant is holomorphic on component interiors, so the maximum
modulus lives on the boundary).  Minimax fits use Lawson's iteratively
reweighted least squares on a Vandermonde-with-Arnoldi orthogonalized basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeExceedsNodesError,
    QuadratureMismatchError,
    WindowUnderflowError,
)
from .fekete import FeketePolynomial, PointConfiguration, leja_points
from .geometry import CompactSet, CurveFamily, dist_point_to_component

__all__ = [
    "PiecewisePolynomial",
    "ApproxNodes",
    "MinimaxResult",
    "RhoEstimate",
    "WalshResult",
    "approximation_nodes",
    "minimax_fit",
    "dn_sequence",
    "rho_from_dn",
    "walsh_interpolant",
]


@dataclass(frozen=True)
class PiecewisePolynomial:
    """One polynomial per component (coefficients ascending in degree)."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(np.asarray(c, dtype=complex) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) < 2:
            raise DegreeExceedsNodesError(
                "piecewise target needs at least two components"
            )
        for i in range(len(coeffs)):
            for j in range(i + 1, len(coeffs)):
                a, b = coeffs[i], coeffs[j]
                m = max(len(a), len(b))
                pa = np.zeros(m, dtype=complex)
                pb = np.zeros(m, dtype=complex)
                pa[: len(a)] = a
                pb[: len(b)] = b
                if np.array_equal(pa, pb):
                    raise DegreeExceedsNodesError(
                        f"component polynomials {i} and {j} coincide"
                    )

    def eval_component(self, j: int, z):
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.coefficients[j])

    def eval_labeled(self, points: np.ndarray, labels: np.ndarray) -> np.ndarray:
        out = np.empty(len(points), dtype=complex)
        for j in range(len(self.coefficients)):
            mask = labels == j
            if np.any(mask):
                out[mask] = self.eval_component(j, points[mask])
        return out


@dataclass(frozen=True)
class ApproxNodes:
    points: np.ndarray
    labels: np.ndarray  # component index per node

    def __len__(self):
        return len(self.points)


def approximation_nodes(L: CompactSet, density: float = 64.0) -> ApproxNodes:
    """Discretization of the sup norm on L: boundary samples of every fat
    component plus all segment nodes and isolated points."""
    from .geometry import sample_boundary

    pts, labels = [], []
    for j, c in enumerate(L.components):
        p = sample_boundary(c, density)
        pts.append(p)
        labels.append(np.full(len(p), j))
    return ApproxNodes(np.concatenate(pts), np.concatenate(labels))


def nearest_component_labels(L: CompactSet, points: np.ndarray) -> np.ndarray:
    d = np.array(
        [[dist_point_to_component(c, z) for c in L.components] for z in points]
    )
    return d.argmin(axis=1)


@dataclass
class ArnoldiBasis:
    """Discrete orthonormal polynomial basis on a node set.

    Built by successive multiplication by the (centered, scaled) variable and
    re-orthogonalization; the Hessenberg transcript makes the basis and any
    approximant reproducible.
    """

    center: complex
    scale: float
    hessenberg: np.ndarray
    Q: np.ndarray  # nodes x (degree+1)

    @classmethod
    def build(cls, nodes: np.ndarray, degree: int) -> "ArnoldiBasis":
        m = len(nodes)
        if degree + 1 > m:
            raise DegreeExceedsNodesError(
                f"degree {degree} exceeds node count {m}"
            )
        center = complex(nodes.mean())
        scale = float(np.abs(nodes - center).max()) or 1.0
        z = (nodes - center) / scale
        Q = np.zeros((m, degree + 1), dtype=complex)
        H = np.zeros((degree + 1, degree), dtype=complex)
        Q[:, 0] = 1.0 / math.sqrt(m)
        for k in range(degree):
            v = z * Q[:, k]
            for j in range(k + 1):
                H[j, k] = np.vdot(Q[:, j], v)
                v = v - H[j, k] * Q[:, j]
            # second orthogonalization pass for float-level orthonormality
            for j in range(k + 1):
                c = np.vdot(Q[:, j], v)
                H[j, k] += c
                v = v - c * Q[:, j]
            H[k + 1, k] = np.linalg.norm(v)
            if H[k + 1, k] == 0:
                raise DegreeExceedsNodesError("node set cannot support the degree")
            Q[:, k + 1] = v / H[k + 1, k]
        return cls(center, scale, H, Q)

    def evaluate(self, zs: np.ndarray, degree: int) -> np.ndarray:
        """Columns of the basis at arbitrary points via the recurrence."""
        zs = np.asarray(zs, dtype=complex)
        z = (zs - self.center) / self.scale
        m = self.Q.shape[0]
        W = np.zeros(zs.shape + (degree + 1,), dtype=complex)
        W[..., 0] = 1.0 / math.sqrt(m)
        for k in range(degree):
            v = z * W[..., k]
            for j in range(k + 1):
                v = v - self.hessenberg[j, k] * W[..., j]
            W[..., k + 1] = v / self.hessenberg[k + 1, k]
        return W


@dataclass(frozen=True)
class MinimaxResult:
    degree: int
    error: float
    coefficients: np.ndarray  # in the Arnoldi basis
    basis: ArnoldiBasis
    iterations: int
    converged: bool
    residual: np.ndarray
    final_weights: np.ndarray

    def evaluate(self, zs) -> np.ndarray:
        W = self.basis.evaluate(np.asarray(zs, dtype=complex), self.degree)
        return W @ self.coefficients


def minimax_fit(F: PiecewisePolynomial, L: CompactSet, n: int,
                nodes: ApproxNodes | None = None,
                basis: ArnoldiBasis | None = None,
                max_iter: int = 500, stall_tol: float = 1e-10,
                stall_window: int = 10,
                w0: np.ndarray | None = None) -> MinimaxResult:
    """Discrete sup-norm fit of degree <= n by Lawson iteration.

    Multiplicative weight update w <- w * |residual| (renormalized) on a
    weighted least-squares solve in the orthonormal basis; the best iterate by
    sup norm is kept, which guards against Lawson stalls.
    """
    if nodes is None:
        nodes = approximation_nodes(L)
    if basis is None:
        basis = ArnoldiBasis.build(nodes.points, n)
    Q = basis.Q[:, : n + 1]
    f = F.eval_labeled(nodes.points, nodes.labels)
    m = len(f)
    w = np.full(m, 1.0 / m) if w0 is None else w0 / w0.sum()

    best_err = math.inf
    best_c = None
    best_r = None
    history = []
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        sw = np.sqrt(w)
        c, *_ = np.linalg.lstsq(Q * sw[:, None], f * sw, rcond=None)
        r = f - Q @ c
        err = float(np.abs(r).max())
        if err < best_err:
            best_err, best_c, best_r = err, c, r
        history.append(best_err)
        if len(history) > stall_window:
            prev = history[-stall_window - 1]
            if prev - best_err < stall_tol * max(best_err, 1e-300):
                converged = True
                break
        w = w * np.abs(r)
        total = w.sum()
        if total <= 0 or not np.isfinite(total):
            converged = True  # residual identically ~0: exact representation
            break
        w = np.maximum(w / total, 1e-300)
    return MinimaxResult(n, best_err, best_c, basis, it, converged, best_r, w)


def dn_sequence(F: PiecewisePolynomial, L: CompactSet, n_max: int,
                nodes: ApproxNodes | None = None,
                max_iter: int = 120) -> list:
    """Minimax errors d_n for n = 0..n_max (running minimum enforced).

    Lawson weights are warm-started from the previous degree; raw values that
    violate monotonicity (Lawson noise) are clipped by the running minimum.
    """
    if n_max > 80:
        raise DegreeExceedsNodesError("degree cap 80")
    if nodes is None:
        nodes = approximation_nodes(L)
    basis = ArnoldiBasis.build(nodes.points, n_max)
    out = []
    w = None
    running = math.inf
    for n in range(n_max + 1):
        res = minimax_fit(F, L, n, nodes=nodes, basis=basis,
                          max_iter=max_iter, w0=w)
        w = res.final_weights
        running = min(running, res.error)
        out.append(running)
    return out


@dataclass(frozen=True)
class RhoEstimate:
    value: float
    method: str
    window: tuple
    diagnostics: list  # rows (n, d_n, d_n^(1/n))
    tail_max_root: float


def rho_from_dn(dns, window: tuple, floor_scale: float | None = None) -> RhoEstimate:
    """Convergence factor from the slope of log d_n over a degree window.

    The limsup of d_n^(1/n) is not finitely computable; the windowed
    least-squares slope is the estimate and the window-tail maximum of
    d_n^(1/n) is reported alongside.
    """
    n_lo, n_hi = window
    dns = list(dns)
    if n_lo < 0 or n_hi >= len(dns) or n_lo >= n_hi:
        raise WindowUnderflowError(f"window {window} outside computed range")
    if floor_scale is None:
        floor_scale = max(dns)
    floor = 10 * np.finfo(float).eps * floor_scale
    ns = np.arange(n_lo, n_hi + 1)
    ds = np.array([dns[n] for n in ns])
    if np.any(ds <= floor):
        raise WindowUnderflowError(
            "minimax errors hit the numerical floor inside the window"
        )
    slope = np.polyfit(ns, np.log(ds), 1)[0]
    value = float(np.exp(slope))
    diagnostics = [(int(n), float(dns[n]), float(dns[n] ** (1 / n)))
                   for n in range(1, len(dns)) if dns[n] > 0]
    tail = [d ** (1 / n) for n, d in zip(ns, ds) if n >= (n_lo + n_hi) // 2]
    return RhoEstimate(value, "minimax_slope", (n_lo, n_hi), diagnostics,
                       float(max(tail)))


@dataclass(frozen=True)
class WalshResult:
    degree_bound: int  # interpolant degree <= m - 1
    newton_coefficients: np.ndarray
    interpolation_points: np.ndarray
    bound_A: float
    bound_rhs: float       # A * ||q_m||_L / inf_Delta |q_m|
    measured_error: float

    def evaluate(self, zs) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        out = np.full(zs.shape, self.newton_coefficients[-1], dtype=complex)
        for k in range(len(self.newton_coefficients) - 2, -1, -1):
            out = out * (zs - self.interpolation_points[k]) + self.newton_coefficients[k]
        return out


def _divided_differences(points: np.ndarray, values: np.ndarray) -> np.ndarray:
    coef = values.astype(complex).copy()
    n = len(points)
    for j in range(1, n):
        coef[j:] = (coef[j:] - coef[j - 1 : -1]) / (points[j:] - points[: n - j])
    return coef


def walsh_interpolant(F: PiecewisePolynomial, L: CompactSet, family: CurveFamily,
                      m: int, config: PointConfiguration | None = None,
                      nodes: ApproxNodes | None = None,
                      check_contour: bool = True,
                      contour_tol: float = 1e-6) -> WalshResult:
    """Interpolatory approximant of F at an m-point extremal configuration.

    Computed by Newton divided differences (the stable form); the equivalent
    contour-integral formula over the curve family is evaluated by trapezoid
    quadrature as a consistency check.  The error bound constant is
    A = lambda_0 * sup|Phi| / (2 pi dist(Delta, L)) with lambda_0 the total
    curve length and sup|Phi| taken over both L and the curves.
    """
    if m < 2:
        raise DegreeExceedsNodesError("interpolation needs m >= 2")
    if config is None:
        config = leja_points(L, m)
    if nodes is None:
        nodes = approximation_nodes(L)
    pts = config.points
    labels = nearest_component_labels(L, pts)
    values = F.eval_labeled(pts, labels)
    coef = _divided_differences(pts, values)
    result_eval = WalshResult(m - 1, coef, pts, 0.0, 0.0, 0.0)

    f_nodes = F.eval_labeled(nodes.points, nodes.labels)
    r_nodes = result_eval.evaluate(nodes.points)
    measured = float(np.abs(f_nodes - r_nodes).max())

    q = FeketePolynomial(pts)
    lam0 = family.total_length()
    dist_DL = min(
        min(dist_point_to_component(c, z) for c in L.components)
        for curve in family.curves
        for z in curve.nodes[:: max(1, len(curve.nodes) // 256)]
    )
    phi_sup = float(np.abs(f_nodes).max())
    for j, curve in enumerate(family.curves):
        phi_sup = max(phi_sup, float(np.abs(F.eval_component(j, curve.nodes)).max()))
    bound_A = lam0 * phi_sup / (2 * math.pi * dist_DL)
    log_qL = float(q.log_abs(nodes.points).max())
    log_qD = min(float(q.log_abs(curve.nodes).min()) for curve in family.curves)
    bound_rhs = bound_A * math.exp(log_qL - log_qD)

    if check_contour:
        probes = nodes.points[:: max(1, len(nodes.points) // 7)][:7]
        quad = _contour_interpolant(F, family, q, probes)
        direct = result_eval.evaluate(probes)
        denom = max(1.0, float(np.abs(f_nodes).max()), float(np.abs(direct).max()))
        mismatch = float(np.abs(quad - direct).max()) / denom
        if mismatch > contour_tol:
            raise QuadratureMismatchError(
                f"contour and divided-difference interpolants differ by "
                f"{mismatch:.3e} (relative)"
            )
    return WalshResult(m - 1, coef, pts, bound_A, bound_rhs, measured)


def _contour_interpolant(F: PiecewisePolynomial, family: CurveFamily,
                         q: FeketePolynomial, ws: np.ndarray) -> np.ndarray:
    """Quadrature evaluation of the contour formula for the interpolant:
    r(w) = sum_j (2 pi i)^-1 oint Phi(z)/ (w - z) * (q(w)/q(z) - 1) dz.

    The curves are closed polylines, over which the formula is exact, so each
    straight edge is integrated by Gauss-Legendre quadrature (the integrand is
    analytic along an edge)."""
    ws = np.asarray(ws, dtype=complex)
    out = np.zeros(len(ws), dtype=complex)
    log_q_w = q.log_eval(ws)
    gl_t, gl_w = np.polynomial.legendre.leggauss(4)
    gl_t = (gl_t + 1) / 2  # map to (0, 1)
    gl_w = gl_w / 2
    for j, curve in enumerate(family.curves):
        nodes = curve.nodes
        edge_vec = np.roll(nodes, -1) - nodes
        z = (nodes[:, None] + gl_t[None, :] * edge_vec[:, None]).ravel()
        dz = (edge_vec[:, None] * gl_w[None, :]).ravel()
        phi = F.eval_component(j, z)
        log_q_z = q.log_eval(z)
        ratio = np.exp(log_q_w[:, None] - log_q_z[None, :])
        integrand = phi[None, :] / (ws[:, None] - z[None, :]) * (ratio - 1.0)
        out += (integrand * dz[None, :]).sum(axis=1) / (2j * math.pi)
    return out
