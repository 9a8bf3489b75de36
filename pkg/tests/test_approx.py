import numpy as np
import pytest

from convfactor.approx import (
    ApproxNodes,
    ArnoldiBasis,
    PiecewisePolynomial,
    approximation_nodes,
    dn_sequence,
    minimax_fit,
    nearest_component_labels,
    rho_from_dn,
    walsh_interpolant,
)
from convfactor.errors import (
    DegreeExceedsNodesError,
    QuadratureMismatchError,
    WindowUnderflowError,
)
from convfactor.fekete import leja_points
from convfactor.geometry import CompactSet, Disk, SinglePoint, offset_curve_family

TWO_DISKS = CompactSet((Disk(0.0, 1.0), Disk(4.0, 1.0)))
F_CONST = PiecewisePolynomial(([0.0], [1.0]))
F_AFFINE = PiecewisePolynomial(([0.0, 1.0], [1.0, 1.0]))


class TestPiecewisePolynomial:
    def test_eval_per_component(self):
        zs = np.array([0.5, 4.5])
        labels = np.array([0, 1])
        np.testing.assert_allclose(F_CONST.eval_labeled(zs, labels), [0.0, 1.0])

    def test_identical_pieces_rejected(self):
        with pytest.raises(DegreeExceedsNodesError):
            PiecewisePolynomial(([1.0, 2.0], [1.0, 2.0]))

    def test_single_piece_rejected(self):
        with pytest.raises(DegreeExceedsNodesError):
            PiecewisePolynomial(([1.0],))

    def test_padding_comparison_catches_equal_pieces(self):
        with pytest.raises(DegreeExceedsNodesError):
            PiecewisePolynomial(([1.0], [1.0, 0.0]))


class TestNodes:
    def test_labels_match_components(self):
        nodes = approximation_nodes(TWO_DISKS, density=8.0)
        for z, j in zip(nodes.points, nodes.labels):
            center = 0.0 if j == 0 else 4.0
            assert abs(abs(z - center) - 1.0) < 1e-9

    def test_nearest_component_labels(self):
        labels = nearest_component_labels(TWO_DISKS, np.array([0.5, 3.9]))
        np.testing.assert_array_equal(labels, [0, 1])


class TestArnoldiBasis:
    def test_columns_orthonormal(self):
        nodes = approximation_nodes(TWO_DISKS, density=16.0)
        basis = ArnoldiBasis.build(nodes.points, 20)
        gram = basis.Q.conj().T @ basis.Q
        np.testing.assert_allclose(gram, np.eye(21), atol=1e-12)

    def test_evaluate_reproduces_columns_on_nodes(self):
        nodes = approximation_nodes(TWO_DISKS, density=16.0)
        basis = ArnoldiBasis.build(nodes.points, 10)
        W = basis.evaluate(nodes.points, 10)
        np.testing.assert_allclose(W, basis.Q[:, :11], atol=1e-10)

    def test_degree_beyond_nodes_rejected(self):
        with pytest.raises(DegreeExceedsNodesError):
            ArnoldiBasis.build(np.array([0.0, 1.0, 2.0], dtype=complex), 5)


class TestMinimax:
    def test_degree_zero_two_constants(self):
        # best constant for values {0, 1} is 1/2 with error 1/2
        res = minimax_fit(F_CONST, TWO_DISKS, 0)
        assert res.error == pytest.approx(0.5, abs=1e-6)

    def test_exact_when_target_is_polynomial(self):
        # a global affine target is matched exactly at degree 1
        F = PiecewisePolynomial(([0.0, 1.0], [1e-30, 1.0]))
        res = minimax_fit(F, TWO_DISKS, 1)
        assert res.error < 1e-12

    def test_errors_decrease_with_degree(self):
        dns = dn_sequence(F_CONST, TWO_DISKS, 25)
        assert len(dns) == 26
        assert all(b <= a + 1e-12 for a, b in zip(dns, dns[1:]))

    def test_geometric_decay_visible(self):
        dns = dn_sequence(F_CONST, TWO_DISKS, 30)
        assert dns[30] < dns[5] * 0.1


class TestRhoFromDn:
    def test_recovers_exact_geometric_sequence(self):
        dns = [0.8 ** n for n in range(41)]
        est = rho_from_dn(dns, (10, 35))
        assert est.value == pytest.approx(0.8, rel=1e-9)

    def test_window_underflow_raises(self):
        # the tail flatlines at rounding level relative to the leading errors
        dns = [max(0.2 ** n, 1e-17) for n in range(41)]
        with pytest.raises(WindowUnderflowError):
            rho_from_dn(dns, (10, 35))

    def test_two_disks_estimate_in_range(self):
        dns = dn_sequence(F_CONST, TWO_DISKS, 40)
        est = rho_from_dn(dns, (15, 35))
        assert 0.85 < est.value < 0.95


@pytest.fixture(scope="module")
def family():
    return offset_curve_family(TWO_DISKS, 0.3)


class TestWalsh:
    def test_interpolates_at_nodes(self, family):
        res = walsh_interpolant(F_CONST, TWO_DISKS, family, 8)
        values = res.evaluate(res.interpolation_points)
        labels = nearest_component_labels(TWO_DISKS, res.interpolation_points)
        target = F_CONST.eval_labeled(res.interpolation_points, labels)
        np.testing.assert_allclose(values, target, atol=1e-10)

    def test_error_bounded(self, family):
        res = walsh_interpolant(F_CONST, TWO_DISKS, family, 12)
        assert res.measured_error <= res.bound_rhs

    @pytest.mark.parametrize("m", [3, 9, 17])
    def test_reproduces_global_polynomials(self, family, m):
        # a degree-(m-1) global polynomial is reproduced exactly
        coeffs = [0.3, -1.0, 0.25][: max(2, min(3, m))]
        nudged = list(coeffs)
        nudged[0] += 1e-13  # distinct pieces, far below the 1e-10 assertion
        F = PiecewisePolynomial((coeffs, nudged))
        res = walsh_interpolant(F, TWO_DISKS, family, m)
        assert res.measured_error < 1e-10

    def test_contour_formula_agrees(self, family):
        # the quadrature cross-check is on by default and raises on mismatch
        walsh_interpolant(F_AFFINE, TWO_DISKS, family, 10, contour_tol=1e-8)

    def test_mismatch_detected_with_wrong_family(self, family):
        # a family around only one component breaks the contour identity
        from convfactor.geometry import CurveFamily

        broken = CurveFamily((family.curves[0], family.curves[0]))
        with pytest.raises(QuadratureMismatchError):
            walsh_interpolant(F_CONST, TWO_DISKS, broken, 10)

    def test_small_m_rejected(self, family):
        with pytest.raises(DegreeExceedsNodesError):
            walsh_interpolant(F_CONST, TWO_DISKS, family, 1)

    def test_explicit_configuration_accepted(self, family):
        cfg = leja_points(TWO_DISKS, 6)
        res = walsh_interpolant(F_CONST, TWO_DISKS, family, 6, config=cfg)
        assert res.degree_bound == 5
