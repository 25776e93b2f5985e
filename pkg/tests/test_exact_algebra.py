import pytest
import sympy
from ants_geometry import exact_algebra as ea
from ants_geometry import utils


@pytest.fixture(scope="module")
def chart():
    return ea.Chart("x y z")


@pytest.fixture(scope="module")
def plane():
    return ea.Chart("x y")


@pytest.fixture(scope="module")
def random_fields(chart):
    generator = utils.rng(11)
    return [utils.random_field(chart, generator) for _ in range(3)]


class TestPolynomials():

    def test_chart_rejects_duplicates(self):
        with pytest.raises(ValueError):
            ea.Chart("x x")

    def test_square(self, plane):
        x, y = plane.vars()
        assert (x + y) ** 2 == x * x + 2 * x * y + y * y
        assert ((x + y) ** 2).serialize() == "x^2 + 2*x*y + y^2"

    def test_evaluate_exact(self, plane):
        x, y = plane.vars()
        value = ((x + y) ** 2).evaluate({'x': 1, 'y': "1/2"})
        assert value == sympy.Rational(9, 4)
        assert isinstance(value, sympy.Rational)

    def test_evaluate_float(self, plane):
        x, y = plane.vars()
        assert ((x + y) ** 2).evaluate([0.5, 0.25]) == pytest.approx(0.5625)

    def test_evaluate_arity(self, plane):
        x, y = plane.vars()
        with pytest.raises(ea.ArityError):
            x.evaluate([1, 2, 3])

    def test_refuses_floats(self):
        with pytest.raises(TypeError):
            ea.to_rational(0.5)
        assert ea.to_rational("3/2") == sympy.Rational(3, 2)

    def test_chart_mismatch(self, plane, chart):
        with pytest.raises(ea.ChartMismatchError):
            plane.var('x') + chart.var('x')


class TestRationalFunctions():

    def test_cancellation(self, plane):
        x, y = plane.vars()
        f = (x * x - y * y) / (x - y)
        assert f.is_polynomial
        assert f == x + y

    def test_normal_form(self, plane):
        x, y = plane.vars()
        assert (2 * x) / (2 * y) == x / y
        assert ((2 * x) / (4 * y)).den == y

    def test_singular_point(self, plane):
        x, y = plane.vars()
        with pytest.raises(ea.SingularPointError):
            (1 / x).evaluate({'x': 0, 'y': 1})

    def test_substitute(self, plane):
        x, y = plane.vars()
        assert (x * y).substitute({'x': y}) == y * y

    def test_singular_substitution(self, plane):
        x, y = plane.vars()
        with pytest.raises(ea.SingularSubstitutionError):
            (1 / x).substitute({'x': 0})


class TestFieldsAndForms():

    def test_bracket_of_coordinate_fields(self, plane):
        x, y = plane.vars()
        bracket = ea.lie_bracket(plane.partial('x'), ea.VectorField(plane, {'y': x}))
        assert bracket == plane.partial('y')

    def test_bracket_antisymmetry(self, random_fields):
        a, b, _ = random_fields
        assert (ea.lie_bracket(a, b) + ea.lie_bracket(b, a)).is_zero

    def test_jacobi(self, random_fields):
        a, b, c = random_fields
        br = ea.lie_bracket
        assert (br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)).is_zero

    def test_d_squared(self, chart):
        f = utils.random_poly(chart, utils.rng(5), degree=3)
        assert ea.exterior_derivative(ea.exterior_derivative(f)).is_zero

    def test_invariant_exterior_derivative(self, chart, random_fields):
        ''' dω(v, w) = v(ω(w)) - w(ω(v)) - ω([v, w]) '''
        v, w, _ = random_fields
        generator = utils.rng(7)
        omega = ea.DifferentialForm.one_form(chart, [utils.random_poly(chart, generator) for _ in chart])
        lhs = omega.d()(v, w)
        rhs = v(omega(w)) - w(omega(v)) - omega(ea.lie_bracket(v, w))
        assert (lhs - rhs).is_zero

    def test_wedge_signs(self, plane):
        dx, dy = plane.d('x'), plane.d('y')
        assert dx.wedge(dy) == -(dy ^ dx)
        assert (dx ^ dx).is_zero
        assert (dx ^ dy)(plane.partial('x'), plane.partial('y')) == 1

    def test_form_arity(self, plane):
        with pytest.raises(ea.ArityError):
            plane.d('x')(plane.partial('x'), plane.partial('y'))

    def test_pullback(self, plane):
        x, y = plane.vars()
        pulled = plane.d('x').substitute({'x': y * y})
        assert pulled == plane.d('y') * (2 * y)

    def test_top_wedge(self, plane):
        x, y = plane.vars()
        assert ea.top_wedge_determinant([plane.partial('x'), plane.partial('y')]) == 1
        radial = ea.VectorField(plane, [x, y])
        rotation = ea.VectorField(plane, [-y, x])
        assert ea.top_wedge_determinant([radial, rotation]) == x * x + y * y

    def test_top_wedge_needs_full_frame(self, chart):
        with pytest.raises(ea.ArityError):
            ea.top_wedge_determinant([chart.partial('x')])

    def test_serialize(self, plane):
        x, y = plane.vars()
        assert ea.VectorField(plane, {'y': x}).serialize() == "(x)*d/dy"
        assert ea.serialize(plane.d('x') ^ plane.d('y')) == "(1) dx∧dy"
