"""Green's function with pole at infinity, capacity, theta values and the
critical potential.

The Green's function of the complement of a compact set is represented by
charge simulation: point charges on a scaled-inward copy of each boundary,
weights summing to 1, plus the Robin constant.  Capacity is exp(-Robin).
Segments and isolated points are polar (capacity zero) and are excluded from
collocation; they are still tracked so level-curve families and critical
values account for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from skimage import measure

from .errors import (
    CurveFamilyInvalidError,
    InsideSetError,
    MergedLevelSetError,
    NoFatComponentError,
    NoSaddleError,
    RankDeficiencyError,
)
from .geometry import (
    CompactSet,
    ConvexPolygon,
    CurveFamily,
    Disk,
    DiscretizedCurve,
    Segment,
    SinglePoint,
    component_distance,
    dist_point_to_component,
    dist_point_to_set,
    sample_boundary,
    validate_curve_family,
    winding_number,
    _resample_ring,
)

__all__ = [
    "GreensModel",
    "SaddlePoint",
    "FitParams",
    "fit_greens",
    "eval_greens",
    "capacity",
    "theta_for_family",
    "level_curve_family",
    "find_saddles",
    "rho_critical",
    "theta_descent",
    "segment_greens_oracle",
]


@dataclass(frozen=True)
class FitParams:
    charges_per_component: int = 48
    collocation_factor: int = 4
    inset_disk: float = 0.5
    inset_polygon: float = 0.3


@dataclass(frozen=True)
class GreensModel:
    charge_points: np.ndarray
    charge_weights: np.ndarray
    robin_constant: float
    collocation_residual: float
    source_set: CompactSet

    def __post_init__(self):
        total = self.charge_weights.sum()
        if not np.isfinite(total) or abs(total - 1.0) > 1e-6:
            raise RankDeficiencyError("charge weights do not sum to 1")
        if total != 1.0:
            object.__setattr__(self, "charge_weights",
                               self.charge_weights / total)


@dataclass(frozen=True)
class SaddlePoint:
    location: complex
    g_value: float
    kind: str = "saddle"  # "saddle" (+,-) Hessian signature, or "polar"


def _fat_components(L: CompactSet):
    return [(i, c) for i, c in enumerate(L.components) if c.has_interior]


def _polar_components(L: CompactSet):
    return [(i, c) for i, c in enumerate(L.components) if not c.has_interior]


def _charge_ring(c, params: FitParams) -> np.ndarray:
    n = params.charges_per_component
    if isinstance(c, Disk):
        r = params.inset_disk * c.radius
        t = np.arange(n) * (2 * math.pi / n)
        return c.center + r * np.exp(1j * t)
    if isinstance(c, ConvexPolygon):
        verts = np.array(c.vertices)
        centroid = verts.mean()
        shrunk = centroid + (1 - params.inset_polygon) * (verts - centroid)
        ring = np.append(shrunk, shrunk[0])
        return _resample_ring(ring, n)
    raise NoFatComponentError(f"component {c!r} carries no charges")


def _g_raw(charges: np.ndarray, weights: np.ndarray, robin: float,
           z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return (
        np.log(np.abs(z[..., None] - charges)) @ weights + robin
    )


def fit_greens(L: CompactSet, params: FitParams = FitParams()) -> GreensModel:
    """Least-squares charge-simulation fit of the Green's function of C\\L.

    g(z) = sum w_k log|z - q_k| + robin, with sum w_k = 1 so that
    g(z) - log|z| -> robin at infinity, and g ~ 0 on the fat boundaries.
    Deterministic for fixed params.
    """
    fat = _fat_components(L)
    if not fat:
        raise NoFatComponentError("Green's fit needs a component with interior")

    charges = np.concatenate([_charge_ring(c, params) for _, c in fat])
    colloc = []
    for _, c in fat:
        n_col = params.charges_per_component * params.collocation_factor
        if isinstance(c, Disk):
            t = np.arange(n_col) * (2 * math.pi / n_col)
            colloc.append(c.center + c.radius * np.exp(1j * t))
        else:
            verts = np.array(c.vertices)
            ring = np.append(verts, verts[0])
            colloc.append(_resample_ring(ring, n_col))
    colloc = np.concatenate(colloc)

    m, n = len(colloc), len(charges)
    A = np.empty((m + 1, n + 1))
    A[:m, :n] = np.log(np.abs(colloc[:, None] - charges))
    A[:m, n] = 1.0  # robin constant column
    rhs = np.zeros(m + 1)
    constraint_weight = 1e4 * math.sqrt(m)
    A[m, :n] = constraint_weight
    A[m, n] = 0.0
    rhs[m] = constraint_weight

    sol, _, rank, _ = scipy.linalg.lstsq(A, rhs, lapack_driver="gelsd")
    w, robin = sol[:n], float(sol[n])
    total = w.sum()
    if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
        raise RankDeficiencyError(
            f"degenerate charge placement (weight sum {total})"
        )
    w = w / total
    residual = float(np.abs(_g_raw(charges, w, robin, colloc)).max())
    if not math.isfinite(residual):
        raise RankDeficiencyError("non-finite collocation residual")
    return GreensModel(charges, w, robin, residual, L)


def eval_greens(model: GreensModel, z) -> tuple:
    """Green's function value (clamped at 0) and gradient at an exterior point.

    The gradient is returned as a complex number (d/dx, d/dy) = (Re, Im).
    """
    z = complex(z)
    if dist_point_to_set(model.source_set, z) <= 0:
        raise InsideSetError(f"{z} lies in the compact set")
    g = float(_g_raw(model.charge_points, model.charge_weights,
                     model.robin_constant, np.array([z]))[0])
    fprime = np.sum(model.charge_weights / (z - model.charge_points))
    return max(0.0, g), np.conj(fprime)


def greens_values(model: GreensModel, zs: np.ndarray, clamp: bool = True) -> np.ndarray:
    """Vectorized Green's function values; no inside-the-set check."""
    g = _g_raw(model.charge_points, model.charge_weights,
               model.robin_constant, np.asarray(zs, dtype=complex))
    return np.maximum(g, 0.0) if clamp else g


def capacity(model: GreensModel) -> float:
    """Logarithmic capacity exp(-Robin constant)."""
    return math.exp(-model.robin_constant)


def theta_for_family(model: GreensModel, family: CurveFamily,
                     validate: bool = True) -> float:
    """Maximum of exp(-g) over the family's nodes, with midpoint refinement
    around the hottest node."""
    if validate:
        report = validate_curve_family(model.source_set, family)
        if not report.passed:
            raise CurveFamilyInvalidError("; ".join(report.failures))
    best = 0.0
    for curve in family.curves:
        nodes = curve.nodes
        g = greens_values(model, nodes)
        k = int(np.argmin(g))
        gmin = g[k]
        # refine on the two segments adjacent to the hottest node
        lo, hi = nodes[(k - 1) % len(nodes)], nodes[(k + 1) % len(nodes)]
        for _ in range(20):
            cand = np.array([(lo + nodes[k]) / 2, (hi + nodes[k]) / 2])
            gc = greens_values(model, cand)
            j = int(np.argmin(gc))
            if gc[j] < gmin:
                gmin = gc[j]
                if j == 0:
                    hi = nodes[k]
                    nodes = np.array([lo, cand[0], hi])
                else:
                    lo = nodes[k]
                    nodes = np.array([lo, cand[1], hi])
                k = 1
                lo, hi = nodes[0], nodes[2]
            else:
                break
        best = max(best, math.exp(-gmin))
    return best


def _polar_enclosure(model: GreensModel, L: CompactSet, idx: int,
                     level: float, n_nodes: int = 64) -> DiscretizedCurve:
    """Small circle (or offset stadium for a segment) around a polar component,
    sized so its theta contribution stays at or below exp(-level)."""
    comp = L.components[idx]
    samples = sample_boundary(comp, 32)
    g_here = float(greens_values(model, samples).min())
    if level >= g_here:
        raise MergedLevelSetError(
            f"level {level} reaches the polar component {idx} (g = {g_here})"
        )
    anchor = samples[0]
    _, grad = eval_greens(model, anchor + 1e-9)  # nudge off a potential node
    gradn = max(abs(grad), 1e-12)
    clearance = dist_point_to_set(L, complex(anchor), exclude=idx)
    radius = min(0.5 * (g_here - level) / gradn, 0.25 * clearance)
    radius = max(radius, 1e-9 * max(1.0, L.diameter()))
    if isinstance(comp, SinglePoint):
        t = np.arange(n_nodes) * (2 * math.pi / n_nodes)
        return DiscretizedCurve(comp.p + radius * np.exp(1j * t))
    # segment: stadium via circle sweep of the two endpoints and sides
    import shapely.geometry as sgeom

    line = sgeom.LineString([(comp.a.real, comp.a.imag), (comp.b.real, comp.b.imag)])
    ring = np.array(line.buffer(radius, quad_segs=32).exterior.coords)
    z = _resample_ring(ring[:, 0] + 1j * ring[:, 1], max(n_nodes, 64))
    curve = DiscretizedCurve(z)
    return curve if curve.signed_area() > 0 else curve.reversed()


def level_curve_family(model: GreensModel, L: CompactSet, level: float,
                       grid_n: int = 400, min_nodes: int = 64) -> CurveFamily:
    """Contour extraction of {g = level}, one Jordan curve per component.

    Fat components get marching-squares contours of the charge-simulation
    potential; polar components get small enclosing circles whose g values
    exceed the level.  Raises MergedLevelSetError when a contour encloses
    more than one component (level at or above the separating saddle).
    """
    if level <= 0:
        raise MergedLevelSetError("level must be positive")
    fat = _fat_components(L)
    if not fat:
        raise NoFatComponentError("level curves need a fat component")

    # the level curve lies within |z - center| ~ exp(level - robin) far out
    far = 1.3 * math.exp(level + abs(model.robin_constant)) + L.diameter()
    xmin, xmax, ymin, ymax = L.bounding_box(pad=0.1 * max(1.0, L.diameter()))
    cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2
    half = max(xmax - xmin, ymax - ymin) / 2 + 1.0
    half = min(max(half, 1.0) * 4, far)  # generous box, still bounded
    xs = np.linspace(cx - half, cx + half, grid_n)
    ys = np.linspace(cy - half, cy + half, grid_n)
    X, Y = np.meshgrid(xs, ys)
    G = greens_values(model, X + 1j * Y, clamp=False)

    contours = measure.find_contours(G, level)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    curves = []
    for cont in contours:
        if len(cont) < 8 or not np.allclose(cont[0], cont[-1]):
            continue  # open contour: clipped by the box, ignore
        z = (xs[0] + cont[:, 1] * dx) + 1j * (ys[0] + cont[:, 0] * dy)
        n = max(min_nodes, min(len(z), 2048))
        z = _resample_ring(z[:-1], n)
        curve = DiscretizedCurve(z)
        if curve.signed_area() < 0:
            curve = curve.reversed()
        curves.append(curve)

    anchors = {i: _component_anchor(c) for i, c in fat}
    assignment = {}
    for curve in curves:
        enclosed = [i for i, a in anchors.items() if winding_number(curve, a) == 1]
        if len(enclosed) > 1:
            raise MergedLevelSetError(
                f"level {level} merges components {enclosed}"
            )
        if len(enclosed) == 1:
            i = enclosed[0]
            # keep the innermost curve if several contours surround a component
            if i not in assignment or curve.length() < assignment[i].length():
                assignment[i] = curve
    # a small component can carry a level curve below global grid resolution;
    # retry those on a local fine grid before giving up
    for i, comp in fat:
        if i in assignment:
            continue
        local = _local_level_curve(model, L, i, comp, level, grid_n, min_nodes)
        if local is not None:
            assignment[i] = local
    missing = [i for i, _ in fat if i not in assignment]
    if missing:
        raise MergedLevelSetError(
            f"no closed level curve found around components {missing}; "
            "refine the grid or lower the level"
        )
    family = []
    for i, comp in enumerate(L.components):
        if comp.has_interior:
            family.append(assignment[i])
        else:
            family.append(_polar_enclosure(model, L, i, level))
    return CurveFamily(tuple(family))


def _local_level_curve(model: GreensModel, L: CompactSet, index: int, comp,
                       level: float, grid_n: int, min_nodes: int):
    anchor = _component_anchor(comp)
    comp_radius = max(
        (abs(complex(z) - anchor) for z in _component_extremes(comp)),
        default=0.0,
    )
    clearance = min(
        component_distance(comp, other)
        for j, other in enumerate(L.components) if j != index
    )
    half = comp_radius + 0.5 * clearance
    xs = np.linspace(anchor.real - half, anchor.real + half, grid_n)
    ys = np.linspace(anchor.imag - half, anchor.imag + half, grid_n)
    X, Y = np.meshgrid(xs, ys)
    G = greens_values(model, X + 1j * Y, clamp=False)
    dx, dy = xs[1] - xs[0], ys[1] - ys[0]
    best = None
    for cont in measure.find_contours(G, level):
        if len(cont) < 8 or not np.allclose(cont[0], cont[-1]):
            continue
        z = (xs[0] + cont[:, 1] * dx) + 1j * (ys[0] + cont[:, 0] * dy)
        z = _resample_ring(z[:-1], max(min_nodes, min(len(z), 2048)))
        curve = DiscretizedCurve(z)
        if curve.signed_area() < 0:
            curve = curve.reversed()
        if winding_number(curve, anchor) != 1:
            continue
        if best is None or curve.length() < best.length():
            best = curve
    return best


def _component_extremes(c):
    if isinstance(c, Disk):
        return (c.center - c.radius, c.center + c.radius,
                c.center - 1j * c.radius, c.center + 1j * c.radius)
    if isinstance(c, ConvexPolygon):
        return c.vertices
    if isinstance(c, Segment):
        return (c.a, c.b)
    return (c.p,)


def _component_anchor(c) -> complex:
    if isinstance(c, Disk):
        return c.center
    if isinstance(c, ConvexPolygon):
        return complex(np.array(c.vertices).mean())
    if isinstance(c, Segment):
        return (c.a + c.b) / 2
    return c.p


def find_saddles(model: GreensModel, L: CompactSet,
                 grid_n: int = 24, tol: float = 1e-12) -> list:
    """Newton search for critical points of g (gradient zero) off the set.

    Seeds on the segments joining component anchors and on a coarse grid.
    Returned saddles have gradient norm below 1e-10 and are deduplicated.
    """
    charges = model.charge_points
    weights = model.charge_weights

    def h(z):
        return np.sum(weights / (z - charges))

    def hp(z):
        return -np.sum(weights / (z - charges) ** 2)

    anchors = [_component_anchor(c) for c in L.components]
    seeds = []
    for i in range(len(anchors)):
        for j in range(i + 1, len(anchors)):
            for t in np.linspace(0.15, 0.85, 9):
                seeds.append((1 - t) * anchors[i] + t * anchors[j])
    xmin, xmax, ymin, ymax = L.bounding_box(pad=0.5 * max(1.0, L.diameter()))
    for x in np.linspace(xmin, xmax, grid_n):
        for y in np.linspace(ymin, ymax, grid_n):
            seeds.append(complex(x, y))

    diam = max(1.0, L.diameter())
    found = []
    for z in seeds:
        z = complex(z)
        ok = False
        for _ in range(60):
            hz = h(z)
            if abs(hz) < tol:
                ok = True
                break
            hpz = hp(z)
            if hpz == 0:
                break
            step = hz / hpz
            if abs(step) > diam:
                break
            z = z - step
        if not ok or abs(h(z)) >= 1e-10:
            continue
        if dist_point_to_set(L, z) <= 1e-9 * diam:
            continue
        if abs(z) > 100 * diam + 100:
            continue
        if any(abs(z - s.location) < 1e-8 for s in found):
            continue
        g = float(greens_values(model, np.array([z]))[0])
        if g <= 0:
            continue
        found.append(SaddlePoint(z, g, "saddle"))
    found.sort(key=lambda s: s.g_value)
    return found


@dataclass(frozen=True)
class CriticalResult:
    rho: float
    g_c: float
    saddle: SaddlePoint


def rho_critical(model: GreensModel, L: CompactSet,
                 check_fraction: float = 0.05) -> CriticalResult:
    """Convergence factor exp(-g_c) from the critical potential.

    Candidate critical values are the saddle values of g plus, for polar
    components, the value of g on the component (the level curve through a
    polar point is the degenerate separator).  g_c is the smallest candidate
    whose slightly-lowered sub-level set still separates all components.
    """
    if len(L.components) < 2:
        raise NoSaddleError("critical potential needs at least two components")
    candidates = list(find_saddles(model, L))
    for i, _ in _polar_components(L):
        samples = sample_boundary(L.components[i], 32)
        g = float(greens_values(model, samples).min())
        candidates.append(SaddlePoint(_component_anchor(L.components[i]), g, "polar"))
    if not candidates:
        raise NoSaddleError("no critical-value candidate found")
    candidates.sort(key=lambda s: s.g_value)
    last_err = None
    for cand in candidates:
        probe = cand.g_value * (1 - check_fraction)
        try:
            level_curve_family(model, L, probe)
        except MergedLevelSetError as err:
            last_err = err
            continue
        return CriticalResult(math.exp(-cand.g_value), cand.g_value, cand)
    raise MergedLevelSetError(
        f"no candidate level separates the components ({last_err})"
    )


def theta_descent(model: GreensModel, L: CompactSet, steps: int = 8,
                  levels=None, max_fraction: float = 0.99) -> list:
    """Theta values on level-curve families at levels increasing toward g_c.

    Returns a non-increasing list converging toward rho_critical from above.
    """
    crit = rho_critical(model, L)
    if levels is None:
        levels = [
            crit.g_c * min(max_fraction, 1 - 0.5 ** k)
            for k in range(1, steps + 1)
        ]
    out = []
    for level in levels:
        fam = level_curve_family(model, L, level)
        out.append(theta_for_family(model, fam, validate=False))
    for a, b in zip(out, out[1:]):
        if b > a + 1e-9:
            raise MergedLevelSetError("theta descent failed to decrease")
    return out


def segment_greens_oracle(a: complex, b: complex):
    """Analytic Green's function of the exterior of a segment (test oracle).

    Joukowski map: capacity |b-a|/4, g(z) = log|u + sqrt(u^2-1)| with
    u = (2z - a - b)/(b - a).
    """
    a, b = complex(a), complex(b)

    def g(z):
        u = (2 * np.asarray(z, dtype=complex) - a - b) / (b - a)
        w = u + np.sqrt(u - 1) * np.sqrt(u + 1)  # branch with |w| >= 1
        mod = np.abs(w)
        mod = np.maximum(mod, 1 / mod)
        return np.log(mod)

    cap = abs(b - a) / 4
    return g, cap
