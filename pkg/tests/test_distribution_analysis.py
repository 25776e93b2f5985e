import pytest
import sympy
from ants_geometry import distribution_analysis as da
from ants_geometry.exact_algebra import Chart, VectorField
from ants_geometry import utils


@pytest.fixture(scope="module")
def chart():
    return Chart("x y z")


@pytest.fixture(scope="module")
def heisenberg(chart):
    x, y, z = chart.vars()
    return da.Distribution([chart.partial('x'), VectorField(chart, {'y': 1, 'z': x})], name="heisenberg")


@pytest.fixture(scope="module")
def planes(chart):
    return da.Distribution([chart.partial('x'), chart.partial('y')], name="planes")


@pytest.fixture(scope="module")
def line():
    ''' Projective vector fields on the line: a copy of sl(2). '''
    line = Chart("x")
    x = line.var('x')
    return [line.partial('x'), VectorField(line, [x]), VectorField(line, [x * x])]


class TestDerivedFlag():

    def test_heisenberg_growth(self, heisenberg):
        flag = da.derived_flag(heisenberg, seed=3)
        assert flag.ranks == (2, 3)
        assert flag.growth == "(2,3)"
        assert flag.bracket_generating
        assert len(flag.witness_points) == 3

    def test_integrable_flag_stabilizes(self, planes):
        flag = da.derived_flag(planes)
        assert flag.ranks == (2, 2)
        assert flag.stabilized
        assert flag.growth == "(2)"
        assert not flag.bracket_generating

    def test_growth_vector_at_point(self, heisenberg):
        origin = {'x': 0, 'y': 0, 'z': 0}
        assert da.growth_vector(heisenberg, origin) == (2, 3)

    def test_integrability(self, heisenberg, planes):
        assert da.is_integrable(planes)
        assert not da.is_integrable(heisenberg)

    def test_first_integral(self, planes, chart):
        assert da.check_first_integral(planes, chart.var('z'))
        assert not da.check_first_integral(planes, chart.var('x'))


class TestSpans():

    def test_rational_span_basis(self, chart):
        dx, dy = chart.partial('x'), chart.partial('y')
        assert da.rational_span_basis([dx, dx * 2, dy, VectorField.zero(chart)]) == [dx, dy]

    def test_function_field_rank(self, chart):
        dx = chart.partial('x')
        fields = [dx, dx * chart.var('y')]
        assert len(da.rational_span_basis(fields)) == 2
        assert da.function_field_rank(fields) == 1

    def test_rational_coordinates(self, chart):
        dx, dy = chart.partial('x'), chart.partial('y')
        assert da.rational_coordinates([dx, dy], dx * 2 - dy * 3) == [2, -3]
        assert da.rational_coordinates([dx, dy], chart.partial('z')) is None
        assert da.in_rational_span([dx, dy], dx + dy)

    def test_pointwise_rank(self, heisenberg):
        assert da.pointwise_rank(heisenberg.generators, {'x': 1, 'y': 2, 'z': 3}) == 2

    def test_annihilator(self, heisenberg):
        forms = da.annihilator(heisenberg.generators)
        assert len(forms) == 1
        for g in heisenberg.generators:
            assert forms[0](g).is_zero


class TestLeaves():

    def test_leaf_tangency_required(self, chart):
        with pytest.raises(ValueError):
            da.Distribution([chart.partial('x')], leaf_constraint=(chart.var('x'), 1))

    def test_sample_points_on_leaf(self, chart):
        d = da.Distribution([chart.partial('y'), chart.partial('z')], leaf_constraint=(chart.var('x'), 2))
        assert d.dimension == 2
        points = d.sample_points(4, utils.rng(1))
        assert len(points) == 4
        assert all(p['x'] == 2 for p in points)
        assert all(d.on_leaf(p) for p in points)


class TestSymmetries():

    def test_solve_symmetries_of_a_line_field(self):
        ''' X = a ∂x + b ∂y preserves span(∂x) iff b does not depend on x. '''
        plane = Chart("x y")
        d = da.Distribution([plane.partial('x')])
        solutions = da.solve_symmetries(d, 1)
        assert len(solutions) == 5
        assert all(da.is_symmetry(x, d) for x in solutions)

    def test_is_symmetry(self):
        plane = Chart("x y")
        d = da.Distribution([plane.partial('x')])
        assert da.is_symmetry(plane.partial('y'), d)
        certificate = da.is_symmetry(VectorField(plane, {'y': plane.var('x')}), d)
        assert not certificate
        assert certificate.to_dict()

    def test_ansatz_limits(self, heisenberg):
        with pytest.raises(da.AnsatzTooLargeError):
            da.solve_symmetries(heisenberg, 4)


class TestLieAlgebras():

    def test_sl2_structure_constants(self, line):
        table = da.structure_constants(line)
        assert table.structure_constants[0][1] == [1, 0, 0]
        assert table.structure_constants[0][2] == [0, 2, 0]
        assert table.structure_constants[1][2] == [0, 0, 1]
        assert table.jacobi_residual() == 0
        assert table.killing == sympy.Matrix([[0, 0, -4], [0, 2, 0], [-4, 0, 0]])
        assert table.killing_signature == (2, 1, 0)

    def test_ideals(self, line):
        table = da.structure_constants(line)
        assert table.is_ideal([0, 1, 2])
        assert not table.is_ideal([0])
        assert table.is_abelian([1])

    def test_closure_error(self, line):
        with pytest.raises(da.ClosureError):
            da.structure_constants([line[0], line[2]])

    def test_dependent_fields(self, line):
        with pytest.raises(da.LinearDependenceError):
            da.structure_constants([line[0], line[0] * 2])

    def test_signature(self):
        assert da.signature(sympy.diag(1, -1, 0)) == (1, 1, 1)
