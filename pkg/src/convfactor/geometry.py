"""Plane geometry of compact sets with finitely many components.

Points are represented as Python/numpy complex numbers.  A compact set is an
ordered, pairwise-disjoint union of simple components (disks, convex polygons,
segments, isolated points) for which all distance computations are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import shapely.geometry as sgeom
from scipy.optimize import minimize

from .errors import (
    CurveFamilyInvalidError,
    GeometryError,
    MarginTooLargeError,
    NoFatComponentError,
    PointOnCurveError,
    UndefinedRatioError,
)

__all__ = [
    "Disk",
    "ConvexPolygon",
    "Segment",
    "SinglePoint",
    "Component",
    "CompactSet",
    "DiscretizedCurve",
    "CurveFamily",
    "CurveReport",
    "FamilyReport",
    "LowerBoundResult",
    "dist_point_to_component",
    "dist_to_component_complement",
    "dist_point_to_set",
    "local_ratio",
    "lower_bound",
    "sample_boundary",
    "offset_curve_family",
    "winding_number",
    "winding_numbers",
    "validate_curve_family",
]


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not _finite(self.center) or not math.isfinite(self.radius):
            raise GeometryError("disk requires finite center and radius")
        if self.radius <= 0:
            raise GeometryError(f"disk radius must be positive, got {self.radius}")

    @property
    def has_interior(self) -> bool:
        return True


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices in counterclockwise order."""

    vertices: tuple

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 3:
            raise GeometryError("polygon needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise GeometryError("polygon has repeated vertices")
        n = len(verts)
        for i in range(n):
            a, b, c = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
            cross = ((b - a).real * (c - b).imag) - ((b - a).imag * (c - b).real)
            if cross <= 0:
                raise GeometryError(
                    "polygon must be strictly convex and counterclockwise"
                )

    @property
    def has_interior(self) -> bool:
        return True


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def __post_init__(self):
        if self.a == self.b:
            raise GeometryError("segment endpoints must be distinct")

    @property
    def has_interior(self) -> bool:
        return False


@dataclass(frozen=True)
class SinglePoint:
    p: complex

    @property
    def has_interior(self) -> bool:
        return False


Component = Union[Disk, ConvexPolygon, Segment, SinglePoint]


def _polygon_edges(poly: ConvexPolygon):
    v = poly.vertices
    return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


def _dist_point_segment(z: complex, a: complex, b: complex) -> float:
    d = b - a
    t = ((z - a).real * d.real + (z - a).imag * d.imag) / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


def _in_convex_polygon(poly: ConvexPolygon, z: complex) -> bool:
    for a, b in _polygon_edges(poly):
        cross = (b - a).real * (z - a).imag - (b - a).imag * (z - a).real
        if cross < 0:
            return False
    return True


def dist_point_to_component(c: Component, z: complex) -> float:
    """Euclidean distance from z to the point set of the component (0 iff z is in it)."""
    if isinstance(c, Disk):
        return max(0.0, abs(z - c.center) - c.radius)
    if isinstance(c, ConvexPolygon):
        if _in_convex_polygon(c, z):
            return 0.0
        return min(_dist_point_segment(z, a, b) for a, b in _polygon_edges(c))
    if isinstance(c, Segment):
        return _dist_point_segment(z, c.a, c.b)
    if isinstance(c, SinglePoint):
        return abs(z - c.p)
    raise GeometryError(f"unknown component {c!r}")


def dist_to_component_complement(c: Component, z: complex) -> float:
    """Distance from z to the complement of the component.

    Zero whenever z lies outside the interior; components with empty interior
    (segments, points) return 0 identically.
    """
    if isinstance(c, Disk):
        return max(0.0, c.radius - abs(z - c.center))
    if isinstance(c, ConvexPolygon):
        if not _in_convex_polygon(c, z):
            return 0.0
        return min(_dist_point_segment(z, a, b) for a, b in _polygon_edges(c))
    return 0.0


@dataclass(frozen=True)
class CompactSet:
    """Ordered union of pairwise-disjoint components."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise GeometryError("compact set needs at least one component")
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if component_distance(comps[i], comps[j]) <= 0:
                    raise GeometryError(
                        f"components {i} and {j} are not at positive distance"
                    )

    def fat_indices(self):
        return [i for i, c in enumerate(self.components) if c.has_interior]

    def min_pairwise_distance(self) -> float:
        comps = self.components
        if len(comps) < 2:
            return math.inf
        return min(
            component_distance(comps[i], comps[j])
            for i in range(len(comps))
            for j in range(i + 1, len(comps))
        )

    def bounding_box(self, pad: float = 0.0):
        pts = np.concatenate(
            [sample_boundary(c, density=8) for c in self.components]
        )
        return (
            pts.real.min() - pad,
            pts.real.max() + pad,
            pts.imag.min() - pad,
            pts.imag.max() + pad,
        )

    def diameter(self) -> float:
        pts = np.concatenate(
            [sample_boundary(c, density=16) for c in self.components]
        )
        if len(pts) > 2500:
            pts = pts[:: len(pts) // 2500 + 1]
        return float(np.abs(pts[:, None] - pts[None, :]).max())

    def farthest_pair(self) -> tuple:
        pts = np.concatenate(
            [sample_boundary(c, density=16) for c in self.components]
        )
        if len(pts) > 2500:
            pts = pts[:: len(pts) // 2500 + 1]
        d = np.abs(pts[:, None] - pts[None, :])
        i, j = np.unravel_index(int(np.argmax(d)), d.shape)
        return complex(pts[i]), complex(pts[j])


def component_distance(c1: Component, c2: Component, density: float = 32.0) -> float:
    """Set distance between two components via dense boundary cross-sampling."""
    p1 = sample_boundary(c1, density)
    p2 = sample_boundary(c2, density)
    d = np.abs(p1[:, None] - p2[None, :]).min()
    # disks admit an exact correction; boundary sampling alone overestimates
    if isinstance(c1, Disk):
        d2 = min(dist_point_to_component(c1, z) for z in p2)
        d = min(d, d2)
    if isinstance(c2, Disk):
        d1 = min(dist_point_to_component(c2, z) for z in p1)
        d = min(d, d1)
    # overlap check: sample points of one inside the other
    for a, b in ((c1, p2), (c2, p1)):
        if a.has_interior and any(
            dist_point_to_component(a, z) == 0.0 for z in b[:: max(1, len(b) // 64)]
        ):
            return 0.0
    return float(d)


def dist_point_to_set(L: CompactSet, z: complex, exclude: int | None = None) -> float:
    """Distance from z to L, optionally leaving one component out."""
    ds = [
        dist_point_to_component(c, z)
        for i, c in enumerate(L.components)
        if i != exclude
    ]
    if not ds:
        raise UndefinedRatioError("distance over an empty union of components")
    return min(ds)


def local_ratio(L: CompactSet, j: int, z: complex) -> float:
    """Ratio dist(z, K_j^c) / dist(z, L without K_j); in [0, 1) where defined."""
    if len(L.components) < 2:
        raise UndefinedRatioError(
            "ratio needs at least two components (empty denominator set)"
        )
    num = dist_to_component_complement(L.components[j], z)
    den = dist_point_to_set(L, z, exclude=j)
    return num / den


@dataclass(frozen=True)
class LowerBoundResult:
    value: float
    component: int
    argmax: complex


def _component_grid(c: Component, n: int) -> np.ndarray:
    if isinstance(c, Disk):
        x = np.linspace(c.center.real - c.radius, c.center.real + c.radius, n)
        y = np.linspace(c.center.imag - c.radius, c.center.imag + c.radius, n)
    elif isinstance(c, ConvexPolygon):
        vs = np.array(c.vertices)
        x = np.linspace(vs.real.min(), vs.real.max(), n)
        y = np.linspace(vs.imag.min(), vs.imag.max(), n)
    else:
        return np.array([], dtype=complex)
    X, Y = np.meshgrid(x, y)
    return (X + 1j * Y).ravel()


def lower_bound(L: CompactSet, grid: int = 64, refine_tol: float = 1e-10) -> LowerBoundResult:
    """Distance-ratio lower bound: max over components of sup of local_ratio.

    Grid seeding over each fat component's bounding box followed by
    Nelder-Mead refinement.  Components without interior contribute 0.
    """
    if len(L.components) < 2:
        raise UndefinedRatioError("lower bound needs at least two components")
    fat = L.fat_indices()
    if not fat:
        raise NoFatComponentError("no component has nonempty interior")

    best = LowerBoundResult(0.0, fat[0], complex(np.nan))
    for j in fat:
        c = L.components[j]
        pts = _component_grid(c, grid)
        inside = np.array([dist_to_component_complement(c, z) > 0 for z in pts])
        pts = pts[inside]
        if len(pts) == 0:
            continue
        vals = np.array([local_ratio(L, j, z) for z in pts])
        z0 = pts[int(np.argmax(vals))]

        def neg(p, j=j):
            return -local_ratio(L, j, complex(p[0], p[1]))

        res = minimize(
            neg,
            [z0.real, z0.imag],
            method="Nelder-Mead",
            options=dict(xatol=refine_tol * 1e-2, fatol=refine_tol * 1e-3,
                         maxiter=4000, maxfev=8000),
        )
        val = -res.fun
        if val > best.value:
            best = LowerBoundResult(float(val), j, complex(res.x[0], res.x[1]))
    return best


def sample_boundary(c: Component, density: float = 8.0) -> np.ndarray:
    """Quasi-uniform boundary nodes at roughly `density` points per unit length.

    Segments get Chebyshev-Lobatto nodes (always an odd count, so the midpoint
    is included); a single point yields itself.
    """
    if isinstance(c, Disk):
        n = max(16, math.ceil(density * 2 * math.pi * c.radius) + 1)
        t = np.arange(n) * (2 * math.pi / n)
        return c.center + c.radius * np.exp(1j * t)
    if isinstance(c, ConvexPolygon):
        out = []
        for a, b in _polygon_edges(c):
            ne = max(2, math.ceil(density * abs(b - a)))
            t = np.arange(ne) / ne
            out.append(a + t * (b - a))
        return np.concatenate(out)
    if isinstance(c, Segment):
        n = max(9, math.ceil(density * abs(c.b - c.a)))
        if n % 2 == 0:
            n += 1
        t = np.cos(np.arange(n) * math.pi / (n - 1))  # Lobatto, includes endpoints
        mid = (c.a + c.b) / 2
        return mid + t * (c.b - c.a) / 2
    if isinstance(c, SinglePoint):
        return np.array([c.p])
    raise GeometryError(f"unknown component {c!r}")


@dataclass(frozen=True)
class DiscretizedCurve:
    """Closed polyline (last node connects to the first), simple, >= 16 nodes."""

    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        if len(nodes) >= 2 and nodes[0] == nodes[-1]:
            nodes = nodes[:-1]
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 16:
            raise GeometryError(f"curve needs >= 16 nodes, got {len(nodes)}")
        ring = sgeom.LineString(
            [(z.real, z.imag) for z in np.append(nodes, nodes[0])]
        )
        if not ring.is_simple:
            raise GeometryError("curve is self-intersecting")

    def length(self) -> float:
        closed = np.append(self.nodes, self.nodes[0])
        return float(np.abs(np.diff(closed)).sum())

    def signed_area(self) -> float:
        z = np.append(self.nodes, self.nodes[0])
        return float(0.5 * np.sum(z[:-1].real * z[1:].imag - z[1:].real * z[:-1].imag))

    def reversed(self) -> "DiscretizedCurve":
        return DiscretizedCurve(self.nodes[::-1].copy())


@dataclass(frozen=True)
class CurveFamily:
    """One Jordan curve per component of an associated compact set."""

    curves: tuple

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))

    def total_length(self) -> float:
        return sum(c.length() for c in self.curves)

    def all_nodes(self) -> np.ndarray:
        return np.concatenate([c.nodes for c in self.curves])


def winding_numbers(curve: DiscretizedCurve, ws: np.ndarray,
                    tol: float | None = None) -> np.ndarray:
    """Winding numbers of the closed polyline around each point of ws.

    Accumulated argument increments over the segments; exactly integer-valued
    up to rounding.  Raises if any point is within `tol` of the polyline.
    """
    ws = np.asarray(ws, dtype=complex)
    nodes = curve.nodes
    closed = np.append(nodes, nodes[0])
    if tol is None:
        scale = np.abs(nodes - nodes.mean()).max()
        tol = 1e-9 * max(scale, 1e-12)
    # distance of each w to each segment, vectorized
    a = closed[:-1][None, :]
    b = closed[1:][None, :]
    w = ws[:, None]
    d = b - a
    denom = np.abs(d) ** 2
    t = ((w - a).real * d.real + (w - a).imag * d.imag) / denom
    t = np.clip(t, 0.0, 1.0)
    dist = np.abs(w - (a + t * d)).min(axis=1)
    if np.any(dist < tol):
        raise PointOnCurveError("point lies on (or too close to) the curve")
    ang = np.angle((b - w) / (a - w)).sum(axis=1) / (2 * math.pi)
    return np.rint(ang).astype(int)


def winding_number(curve: DiscretizedCurve, w: complex, tol: float | None = None) -> int:
    return int(winding_numbers(curve, np.array([w]), tol=tol)[0])


def _component_shapely(c: Component):
    if isinstance(c, Disk):
        return sgeom.Point(c.center.real, c.center.imag).buffer(c.radius, quad_segs=96)
    if isinstance(c, ConvexPolygon):
        return sgeom.Polygon([(v.real, v.imag) for v in c.vertices])
    if isinstance(c, Segment):
        return sgeom.LineString([(c.a.real, c.a.imag), (c.b.real, c.b.imag)])
    if isinstance(c, SinglePoint):
        return sgeom.Point(c.p.real, c.p.imag)
    raise GeometryError(f"unknown component {c!r}")


def _resample_ring(coords: np.ndarray, n: int) -> np.ndarray:
    """Resample a closed coordinate loop to n nodes, uniform in arclength."""
    z = coords
    if z[0] != z[-1]:
        z = np.append(z, z[0])
    seg = np.abs(np.diff(z))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    target = np.arange(n) * (total / n)
    re = np.interp(target, s, z.real)
    im = np.interp(target, s, z.imag)
    return re + 1j * im


def offset_curve_family(L: CompactSet, margin: float,
                        nodes_per_curve: int = 256) -> CurveFamily:
    """Outward offset of each component boundary at the given margin.

    Disks become concentric circles, polygons rounded offset polygons,
    segments stadium curves, points small circles.  Node count scales with
    curve length so long curves stay densely sampled.
    """
    if margin <= 0:
        raise MarginTooLargeError("margin must be positive")
    min_sep = L.min_pairwise_distance()
    if 2 * margin >= min_sep:
        raise MarginTooLargeError(
            f"2*margin = {2 * margin} must be below the minimum component "
            f"separation {min_sep}"
        )
    curves = []
    for c in L.components:
        buffered = _component_shapely(c).buffer(margin, quad_segs=96)
        coords = np.array(buffered.exterior.coords)
        z = coords[:, 0] + 1j * coords[:, 1]
        length = float(buffered.exterior.length)
        n = max(nodes_per_curve, math.ceil(32 * length))
        z = _resample_ring(z, n)
        curve = DiscretizedCurve(z)
        if curve.signed_area() < 0:
            curve = curve.reversed()
        curves.append(curve)
    fam = CurveFamily(tuple(curves))
    # offsets must clear the other components and each other
    for i, curve in enumerate(fam.curves):
        for j, c in enumerate(L.components):
            if i == j:
                continue
            if min(dist_point_to_component(c, z) for z in curve.nodes[::4]) <= margin * 1e-9:
                raise MarginTooLargeError(
                    f"offset of component {i} touches component {j}"
                )
    report = validate_curve_family(L, fam)
    if not report.passed:
        raise MarginTooLargeError(
            "offset curves violate family invariants: " + "; ".join(report.failures)
        )
    return fam


@dataclass(frozen=True)
class CurveReport:
    index: int
    own_windings_ok: bool
    other_windings_ok: bool
    min_distance_to_set: float


@dataclass(frozen=True)
class FamilyReport:
    entries: tuple
    failures: tuple
    passed: bool


def validate_curve_family(L: CompactSet, family: CurveFamily,
                          density: float = 16.0) -> FamilyReport:
    """Check the admissibility invariants of a curve family against L.

    Per curve: winding 1 around every boundary sample of its own component,
    winding 0 around every node of every other curve, positive distance to L.
    Failures are collected in the report, never raised.
    """
    entries = []
    failures = []
    if len(family.curves) != len(L.components):
        return FamilyReport(
            (), (f"{len(family.curves)} curves for {len(L.components)} components",),
            False,
        )
    for i, curve in enumerate(family.curves):
        own = sample_boundary(L.components[i], density)
        try:
            w_own = winding_numbers(curve, own)
            own_ok = bool(np.all(w_own == 1))
        except PointOnCurveError:
            own_ok = False
        other_ok = True
        for j, other in enumerate(family.curves):
            if i == j:
                continue
            try:
                w_other = winding_numbers(curve, other.nodes[::2])
                if np.any(w_other != 0):
                    other_ok = False
            except PointOnCurveError:
                other_ok = False
        min_dist = min(
            min(dist_point_to_component(c, z) for c in L.components)
            for z in curve.nodes[:: max(1, len(curve.nodes) // 256)]
        )
        entries.append(CurveReport(i, own_ok, other_ok, float(min_dist)))
        if not own_ok:
            failures.append(f"curve {i}: winding around own component != 1")
        if not other_ok:
            failures.append(f"curve {i}: winding around another curve != 0")
        if min_dist <= 0:
            failures.append(f"curve {i}: touches the compact set")
    return FamilyReport(tuple(entries), tuple(failures), not failures)


def transform_set(L: CompactSet, scale: complex = 1.0, shift: complex = 0.0) -> CompactSet:
    """Apply z -> scale*z + shift to every component (rigid motion / dilation)."""

    def tf(c: Component) -> Component:
        if isinstance(c, Disk):
            return Disk(scale * c.center + shift, abs(scale) * c.radius)
        if isinstance(c, ConvexPolygon):
            verts = tuple(scale * v + shift for v in c.vertices)
            # an orientation-reversing scale would flip the winding; keep CCW
            try:
                return ConvexPolygon(verts)
            except GeometryError:
                return ConvexPolygon(verts[::-1])
        if isinstance(c, Segment):
            return Segment(scale * c.a + shift, scale * c.b + shift)
        return SinglePoint(scale * c.p + shift)

    return CompactSet(tuple(tf(c) for c in L.components))
