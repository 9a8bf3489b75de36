"""Leja and Fekete point configurations, n-th diameters and the Fekete
polynomial decay diagnostic.

All polynomial magnitudes are handled in log space: the products involved
overflow doubles well before degree 60 otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientCandidatesError
from .geometry import CompactSet, sample_boundary

__all__ = [
    "PointConfiguration",
    "FeketePolynomial",
    "boundary_candidates",
    "leja_points",
    "fekete_points_small",
    "nth_diameter",
    "capacity_from_diameters",
    "fekete_polynomial",
    "decay_check",
    "DecayReport",
]


@dataclass(frozen=True)
class PointConfiguration:
    points: np.ndarray
    generator: str  # "leja" | "exact" | "custom"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise InsufficientCandidatesError("configuration needs >= 2 points")
        if len(np.unique(pts)) != len(pts):
            raise InsufficientCandidatesError("configuration points must be distinct")

    @property
    def n(self) -> int:
        return len(self.points)


def boundary_candidates(L: CompactSet, density: float = 64.0,
                        min_per_component: int = 33) -> np.ndarray:
    """Candidate nodes for greedy extremal-point searches: boundary samples of
    every component, with a floor per component so tiny pieces stay visible."""
    out = []
    for c in L.components:
        pts = sample_boundary(c, density)
        d = density
        while len(pts) < min_per_component and not _is_point(c):
            d *= 2
            pts = sample_boundary(c, d)
        out.append(pts)
    return np.unique(np.concatenate(out))


def _is_point(c) -> bool:
    from .geometry import SinglePoint

    return isinstance(c, SinglePoint)


def leja_points(L: CompactSet, n: int, anchor: complex | None = None,
                density: float = 64.0,
                refine_sweeps: int = 0) -> PointConfiguration:
    """Greedy Leja sequence over boundary candidates.

    Each step adds the candidate maximizing the product of distances to the
    points chosen so far (evaluated as a running sum of logs).  The anchor
    defaults to one endpoint of the farthest pair.  With ``refine_sweeps > 0``
    the greedy configuration is polished by coordinate-ascent sweeps that
    re-place each point at the candidate maximizing the pairwise product,
    which smooths out the discreteness of greedy selection.
    """
    cand = boundary_candidates(L, density)
    if n > len(cand):
        raise InsufficientCandidatesError(
            f"need {n} points but only {len(cand)} candidates"
        )
    if anchor is None:
        anchor, _ = L.farthest_pair()
    # snap the anchor to the nearest candidate
    k0 = int(np.argmin(np.abs(cand - anchor)))
    chosen = [cand[k0]]
    with np.errstate(divide="ignore"):
        logprod = np.log(np.abs(cand - cand[k0]))
    logprod[k0] = -np.inf
    while len(chosen) < n:
        k = int(np.argmax(logprod))
        if not np.isfinite(logprod[k]):
            raise InsufficientCandidatesError("candidate pool exhausted")
        chosen.append(cand[k])
        with np.errstate(divide="ignore"):
            logprod += np.log(np.abs(cand - cand[k]))
        logprod[k] = -np.inf
    pts = np.array(chosen)
    for _ in range(refine_sweeps):
        for i in range(len(pts)):
            others = np.delete(pts, i)
            with np.errstate(divide="ignore"):
                score = np.log(np.abs(cand[:, None] - others[None, :])).sum(axis=1)
            pts[i] = cand[np.argmax(score)]
    generator = "leja" if refine_sweeps == 0 else "leja_refined"
    return PointConfiguration(pts, generator)


def _log_pair_product(points: np.ndarray) -> float:
    d = np.abs(points[:, None] - points[None, :])
    iu = np.triu_indices(len(points), k=1)
    vals = d[iu]
    if np.any(vals == 0):
        return -math.inf
    return float(np.log(vals).sum())


def fekete_points_small(L: CompactSet, n: int, restarts: int = 8,
                        density: float = 64.0, seed: int = 0) -> PointConfiguration:
    """Near-exact Fekete n-tuple for n <= 6 by multistart discrete ascent.

    Coordinate ascent over the candidate pool: each point in turn is moved to
    the candidate maximizing the pairwise-distance product, until stable.
    """
    if n > 6:
        raise InsufficientCandidatesError("exact Fekete search limited to n <= 6")
    cand = boundary_candidates(L, density)
    if n > len(cand):
        raise InsufficientCandidatesError("not enough candidates")
    rng = np.random.default_rng(seed)

    def ascend(points):
        points = points.copy()
        improved = True
        while improved:
            improved = False
            for i in range(n):
                others = np.delete(points, i)
                if len(others) == 0:
                    continue
                scores = np.log(
                    np.maximum(np.abs(cand[:, None] - others[None, :]), 1e-300)
                ).sum(axis=1)
                # forbid coincident points
                for z in others:
                    scores[cand == z] = -np.inf
                k = int(np.argmax(scores))
                if cand[k] != points[i] and scores[k] > np.log(
                    np.maximum(np.abs(points[i] - others), 1e-300)
                ).sum() + 1e-13:
                    points[i] = cand[k]
                    improved = True
        return points

    starts = [leja_points(L, n, density=density).points]
    for _ in range(restarts - 1):
        starts.append(rng.choice(cand, size=n, replace=False))
    best, best_val = None, -math.inf
    for s in starts:
        p = ascend(np.asarray(s, dtype=complex))
        v = _log_pair_product(p)
        if v > best_val:
            best, best_val = p, v
    return PointConfiguration(best, "exact")


def nth_diameter(cfg) -> float:
    """(prod of pairwise distances)^(2/(n(n-1))) of a configuration or a raw
    point array."""
    points = cfg.points if isinstance(cfg, PointConfiguration) else np.asarray(cfg)
    n = len(points)
    return math.exp(2 * _log_pair_product(points) / (n * (n - 1)))


@dataclass(frozen=True)
class CapacitySequence:
    ns: list
    diameters: list
    extrapolated: float
    uncertainty: float


def capacity_from_diameters(L: CompactSet, n_max: int,
                            density: float = 64.0) -> CapacitySequence:
    """Diameters delta_n on Leja prefixes with an extrapolated capacity.

    delta_n -> c(L) like exp(a log n / n); the extrapolation fits that model
    through (n_max/2, n_max), which is exact for circles.  The gap
    delta_{n_max/2} - delta_{n_max} is reported as the uncertainty.
    """
    if n_max < 8:
        raise InsufficientCandidatesError("n_max must be at least 8")
    cfg = leja_points(L, n_max, density=density)
    pts = cfg.points
    logd = np.log(np.abs(pts[:, None] - pts[None, :]) + np.eye(n_max))
    ns, deltas = [], []
    cum = 0.0
    for n in range(2, n_max + 1):
        cum += float(logd[n - 1, : n - 1].sum())
        ns.append(n)
        deltas.append(math.exp(2 * cum / (n * (n - 1))))
    n1, n2 = n_max // 2, n_max
    d1, d2 = deltas[n1 - 2], deltas[n2 - 2]
    x1, x2 = math.log(n1) / (n1 - 1), math.log(n2) / (n2 - 1)
    slope = (math.log(d1) - math.log(d2)) / (x1 - x2)
    extrapolated = math.exp(math.log(d2) - slope * x2)
    return CapacitySequence(ns, deltas, extrapolated, abs(d1 - d2))


@dataclass(frozen=True)
class FeketePolynomial:
    """Monic polynomial stored by its roots; evaluation in log space."""

    roots: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "roots", np.asarray(self.roots, dtype=complex))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def log_abs(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(z[..., None] - self.roots)).sum(axis=-1)

    def log_eval(self, z) -> np.ndarray:
        """Complex logarithm of q(z) (branch-incoherent across points, but
        exp(log_eval) reproduces q exactly)."""
        z = np.asarray(z, dtype=complex)
        return np.log(z[..., None] - self.roots).sum(axis=-1)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones_like(z)
        for r in self.roots:
            out = out * (z - r)
        return out


def fekete_polynomial(cfg: PointConfiguration) -> FeketePolynomial:
    return FeketePolynomial(cfg.points)


@dataclass(frozen=True)
class DecayReport:
    ns: list
    log_ratios: list        # log of ||q_n||_L / inf_Delta |q_n|
    ratio_roots: list       # (ratio_n)^(1/n)
    c: float
    theta_estimate: float | None
    precondition_ok: bool
    first_n: int | None     # first n from which ratio_n < c^n holds through n_hi
    rows: list              # (n, log_ratio, ratio_root, n*log(c), holds)


def decay_check(L: CompactSet, family, c: float, n_range: tuple,
                theta_estimate: float | None = None,
                density: float = 64.0) -> DecayReport:
    """Fekete-polynomial decay diagnostic: ratio_n = ||q_n||_L / inf_Delta |q_n|
    against c^n over a degree range, using refined Leja surrogates q_n.

    The precondition c > theta_{L,Delta} is flagged in the report, not raised.
    """
    n_lo, n_hi = n_range
    if n_hi > 80:
        raise InsufficientCandidatesError("degree cap 80 (conditioning guard)")
    precondition_ok = theta_estimate is None or c > theta_estimate
    set_nodes = boundary_candidates(L, density)
    curve_nodes = family.all_nodes()
    ns, log_ratios, ratio_roots, rows = [], [], [], []
    for n in range(max(2, n_lo), n_hi + 1):
        cfg = leja_points(L, n, density=density, refine_sweeps=2)
        q = FeketePolynomial(cfg.points)
        log_ratio = float(np.max(q.log_abs(set_nodes))
                          - np.min(q.log_abs(curve_nodes)))
        ns.append(n)
        log_ratios.append(log_ratio)
        ratio_roots.append(math.exp(log_ratio / n))
        rows.append((n, log_ratio, ratio_roots[-1], n * math.log(c),
                     log_ratio < n * math.log(c)))
    first_n = None
    for i in range(len(rows)):
        if all(r[4] for r in rows[i:]):
            first_n = rows[i][0]
            break
    return DecayReport(ns, log_ratios, ratio_roots, c, theta_estimate,
                       precondition_ok, first_n, rows)
