import pytest
import sympy
from ants_geometry import quartic_metric as qm


@pytest.fixture(scope="module")
def standard():
    return [(0, 0), (1, 0), (0, 1)]


class TestSteinerEllipse():

    def test_standard_triangle(self, standard):
        e = qm.steiner_circumellipse(standard)
        R = sympy.Rational
        assert e.center == sympy.Matrix([R(1, 3), R(1, 3)])
        assert e.gram == sympy.Matrix([[3, R(3, 2)], [R(3, 2), 3]])
        assert all(e.contains(p) for p in standard)
        assert e.conic() == (1, 1, 1, -1, -1, 0)

    def test_tangents(self, standard):
        e = qm.steiner_circumellipse(standard)
        assert all(r == 0 for r in qm.tangent_residuals(e, standard))
        assert qm.conic_through(standard) == e.conic()

    def test_rational_triangle(self):
        triangle = [("1/2", 3), (-2, "7/3"), (4, -1)]
        e = qm.steiner_circumellipse(triangle)
        assert all(e.value(p) == 1 for p in [(sympy.Rational(1, 2), 3), (-2, sympy.Rational(7, 3)), (4, -1)])
        assert e.conic() == qm.conic_through(triangle)

    def test_affine_image(self, standard):
        A = sympy.Matrix([[2, 1], [0, 3]])
        b = [1, -1]
        image = [tuple(A * sympy.Matrix(p) + sympy.Matrix(b)) for p in standard]
        assert qm.steiner_circumellipse(image) == qm.affine_image(qm.steiner_circumellipse(standard), A, b)

    def test_reference_triangle(self):
        assert qm.steiner_circumellipse(qm.REFERENCE_TRIANGLE) == qm.UNIT_CIRCLE

    def test_scatter_form(self):
        triangle = [(sympy.Rational(1, 2), 3), (-2, sympy.Rational(7, 3)), (4, -1)]
        z = [sympy.Matrix(p) for p in triangle]
        g = (z[0] + z[1] + z[2]) / 3
        S = sum(((zi - g) * (zi - g).T for zi in z), sympy.zeros(2, 2))
        assert qm.steiner_circumellipse(triangle).gram == sympy.Rational(3, 2) * S.inv()

    def test_degenerate(self):
        with pytest.raises(qm.DegenerateTriangleError):
            qm.steiner_circumellipse([(0, 0), (1, 1), (2, 2)])

    def test_norm(self, standard):
        e = qm.steiner_circumellipse(standard)
        assert qm.ellipse_norm(e, (1, 0)) == sympy.sqrt(3)
        assert qm.ellipse_norm(e, (1.0, 0.0)) == pytest.approx(3 ** 0.5)


class TestSpeed():

    def test_speed_is_proportional(self, standard):
        assert qm.subriemannian_speed(standard, (1, -1, 0)) == 6
        assert qm.subriemannian_speed([(0, 0), (5, 1), (2, 7)], (1, -1, 0)) == 6

    def test_speed_constant(self):
        k, spread, ratios = qm.speed_constant(samples=5)
        assert k == 3
        assert spread == 0
        assert len(ratios) == 5

    def test_controls_must_sum_to_zero(self, standard):
        with pytest.raises(qm.ConstraintViolationError):
            qm.subriemannian_speed(standard, (1, 1, 1))


class TestQuartics():

    def test_cartan_coefficients(self):
        assert qm.cartan_quartic(1).coefficients == (4, 8, 12, 8, 4)

    def test_cartan_no_real_roots(self):
        for c in (1, -1, "7/3", "-7/3"):
            root_type = qm.classify_quartic(qm.cartan_quartic(c))
            assert root_type.tag == 'no_real'
            assert root_type.complex_count == 4

    def test_cartan_constant(self):
        with pytest.raises(ValueError):
            qm.cartan_quartic(0)

    def test_root_types(self):
        cases = {
            (1, 0, 0, 0, -1): 'two_real_two_complex',
            (1, 0, -5, 0, 4): 'four_distinct_real',
            (0, 0, 1, 0, 0): 'double_real_double_real',
            (0, 0, 0, 0, 1): 'quadruple_real',
        }
        for coefficients, tag in cases.items():
            assert qm.classify_quartic(qm.BinaryQuartic(coefficients)).tag == tag

    def test_root_at_infinity(self):
        # u1 u2^3: t = 0 and u2 = 0 with multiplicity 3
        root_type = qm.classify_quartic(qm.BinaryQuartic((0, 0, 0, 1, 0)))
        assert root_type.real_multiplicities == (3, 1)
        assert root_type.tag == 'triple_real_single_real'

    def test_zero_quartic(self):
        with pytest.raises(qm.ZeroQuarticError):
            qm.classify_quartic(qm.BinaryQuartic((0, 0, 0, 0, 0)))

    def test_from_expr(self):
        assert qm.BinaryQuartic.from_expr(qm.U1 ** 4 - qm.U2 ** 4) == qm.BinaryQuartic((1, 0, 0, 0, -1))
        with pytest.raises(ValueError):
            qm.BinaryQuartic.from_expr(qm.U1 ** 3)

    def test_sturm_count(self):
        assert qm.count_real_roots(sympy.Poly(qm.T ** 3 - qm.T, qm.T)) == 3
        assert qm.count_real_roots(sympy.Poly(qm.T ** 2 + 1, qm.T)) == 0


class TestSignatures():

    def test_metric_signature(self):
        assert qm.metric_signature(sympy.diag(1, -1, 1), None) == (2, 1)
        assert qm.conformal_signature((3, 2)) == (2, 3)

    def test_degenerate_metric(self):
        with pytest.raises(qm.DegenerateMetricError):
            qm.metric_signature(sympy.diag(1, 0), None)
