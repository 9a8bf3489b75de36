"""End-to-end acceptance checks, one per release criterion.

Each test prints a single PASS line on success (visible with -s or in the
captured output); tolerances are pinned and must not be loosened.
"""

import cmath
import math

import numpy as np
import pytest

from convfactor.approx import (
    PiecewisePolynomial,
    approximation_nodes,
    dn_sequence,
    rho_from_dn,
    walsh_interpolant,
)
from convfactor.cli import main as cli_main
from convfactor.experiments import (
    gate_theorem,
    prop15_scenario,
    prop16_limit,
    scenario_by_name,
    scenario_library,
)
from convfactor.fekete import decay_check, leja_points, nth_diameter
from convfactor.geometry import (
    CompactSet,
    Disk,
    lower_bound,
    offset_curve_family,
    transform_set,
)
from convfactor.potential import (
    FitParams,
    capacity,
    fit_greens,
    greens_values,
    rho_critical,
    theta_for_family,
)


def report(line):
    print(f"ACCEPTANCE {line}: PASS")


def test_criterion_01_greens_oracle():
    model = fit_greens(CompactSet((Disk(0.0, 1.0),)), FitParams())
    zs = 2.0 * np.exp(1j * np.arange(400) * 2 * np.pi / 400)
    err = float(np.abs(greens_values(model, zs) - np.log(np.abs(zs))).max())
    assert err <= 1e-6
    for r in (0.5, 1.0, 3.0):
        m = fit_greens(CompactSet((Disk(0.0, r),)), FitParams())
        assert abs(capacity(m) - r) <= 1e-6
    report("1 greens-oracle")


def test_criterion_02_disk_point_limit():
    rows = prop16_limit(2.0, shrink_steps=8)
    thetas = [t for _, t in rows]
    assert all(b < a for a, b in zip(thetas, thetas[1:]))  # strictly decreasing
    assert all(t >= 0.5 for t in thetas)                   # never below the limit
    assert thetas[-1] - 0.5 <= 0.01                        # within 0.01 by k = 8
    report("2 disk-point-limit")


def test_criterion_03_gate_all_scenarios():
    library = scenario_library()
    assert len(library) >= 6
    for s in library:
        g = gate_theorem(s, slack=0.02)
        assert g.passed, f"{s.name} failed the gate"
        assert g.rho_minimax >= g.lower_bound - 0.02
        if g.rho_critical is not None:
            assert g.rho_critical >= g.lower_bound - 0.02
    g = gate_theorem(scenario_by_name("disk_point"))
    assert abs(g.rho_critical - 0.5) <= 0.05   # equality case
    assert abs(g.rho_minimax - 0.5) <= 0.05
    report("3 lower-bound-gate")


def test_criterion_04_two_disk_cross_validation():
    s = scenario_by_name("two_equal_disks")
    model = fit_greens(s.set, s.greens_params)
    rc = rho_critical(model, s.set).rho
    nodes = approximation_nodes(s.set, s.density)
    rm = rho_from_dn(dn_sequence(s.F, s.set, s.degree_max, nodes=nodes),
                     (15, 35)).value
    assert abs(rc - rm) / rc <= 0.1
    # grid oracle for the lower bound: best ratio over interior samples
    grid_best = 0.0
    for x in np.linspace(-0.99, 0.99, 99):
        for y in np.linspace(-0.99, 0.99, 99):
            z = complex(x, y)
            if abs(z) < 1:
                grid_best = max(grid_best, (1 - abs(z)) / (abs(z - 4.0) - 1.0))
    lb = lower_bound(s.set).value
    assert lb >= grid_best - 1e-9
    assert abs(lb - 1.0 / 3.0) <= 1e-6
    assert rc >= 1.0 / 3.0 and rm >= 1.0 / 3.0
    report("4 two-disk-cross-validation")


def test_criterion_05_explicit_construction():
    rep = prop15_scenario(2.0, 0.3)
    assert all(ok for _, ok, *_ in rep.checks)
    assert rep.final_value < 0.8
    assert rep.target == pytest.approx(0.8)
    report("5 explicit-construction")


def test_criterion_06_fekete_decay():
    s = scenario_by_name("disk_tinydisk")
    fam = offset_curve_family(s.set, 0.3)
    model = fit_greens(s.set, s.greens_params)
    theta = theta_for_family(model, fam)
    rep = decay_check(s.set, fam, theta + 0.1, (20, 60), theta_estimate=theta)
    assert rep.precondition_ok
    assert all(row[-1] for row in rep.rows)  # ratio_n < c^n throughout
    report("6 fekete-decay")


def test_criterion_07_walsh_interpolant_bound():
    for name in ("two_equal_disks", "two_unequal_disks"):
        s = scenario_by_name(name)
        fam = offset_curve_family(s.set, s.curve_margin)
        last = None
        for m in range(2, 41):
            res = walsh_interpolant(s.F, s.set, fam, m,
                                    check_contour=(m % 10 == 0))
            assert res.measured_error <= res.bound_rhs, f"{name} m={m}"
            last = res
        # exact reproduction of a global polynomial of degree < m
        coeffs = [0.3, -1.0, 0.25]
        nudged = [0.3 + 1e-13, -1.0, 0.25]
        F_poly = PiecewisePolynomial((coeffs, nudged))
        rep = walsh_interpolant(F_poly, s.set, fam, 8)
        assert rep.measured_error <= 1e-10
        # decay rate against the minimax estimate
        rate = last.measured_error ** (1.0 / 40.0)
        nodes = approximation_nodes(s.set, s.density)
        rho = rho_from_dn(dn_sequence(s.F, s.set, s.degree_max, nodes=nodes),
                          s.window).value
        assert abs(rate - rho) / rho <= 0.15
    report("7 walsh-bound")


def test_criterion_08_target_independence():
    for s in scenario_library():
        nodes = approximation_nodes(s.set, s.density)
        r1 = rho_from_dn(dn_sequence(s.F, s.set, s.degree_max, nodes=nodes),
                         s.window).value
        r2 = rho_from_dn(dn_sequence(s.F_alt, s.set, s.degree_max, nodes=nodes),
                         s.window).value
        assert abs(r1 - r2) <= 0.02, s.name
    report("8 target-independence")


def test_criterion_09_invariance_suite():
    L = CompactSet((Disk(0.0, 1.0), Disk(4.0, 1.0)))
    base = lower_bound(L).value
    for scale, shift in [(1.0, 2.0 - 1.0j),
                         (3.0, 0.0),
                         (0.5 * cmath.exp(0.9j), -1.0 + 2.0j)]:
        moved = lower_bound(transform_set(L, scale, shift)).value
        assert abs(moved - base) <= 1e-9
    pts = leja_points(L, 9).points
    assert abs(nth_diameter(2.5 * pts) - 2.5 * nth_diameter(pts)) <= 1e-12 * 2.5
    F = PiecewisePolynomial(([0.0], [1.0]))
    dns = dn_sequence(F, L, 30)
    assert all(b <= a + 1e-12 for a, b in zip(dns, dns[1:]))
    model = fit_greens(L, FitParams())
    from convfactor.potential import eval_greens

    z = 2.0 + 1.5j
    _, grad = eval_greens(model, z)
    h = 1e-6
    gx = (greens_values(model, z + h) - greens_values(model, z - h)) / (2 * h)
    gy = (greens_values(model, z + 1j * h)
          - greens_values(model, z - 1j * h)) / (2 * h)
    fd = complex(gx, gy)
    assert abs(grad - fd) / abs(fd) <= 1e-5
    report("9 invariance-suite")


def test_criterion_10_deterministic_gate(tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        code = cli_main(["gate", "--out", str(out)])
        assert code == 0
        outs.append((out / "gate.csv").read_bytes())
    assert outs[0] == outs[1]
    report("10 deterministic-gate")
