import os
import pytest
import sympy
from ants_geometry import utils
from ants_geometry.exact_algebra import Chart


@pytest.fixture(scope="module")
def chart():
    return Chart("x y z")


class TestRandom():

    def test_seeded(self):
        first = [utils.random_rational(utils.rng(11)) for _ in range(3)]
        second = [utils.random_rational(utils.rng(11)) for _ in range(3)]
        assert first == second

    def test_rational_bounds(self):
        generator = utils.rng(3)
        for _ in range(200):
            value = utils.random_rational(generator, bound=2, max_den=5)
            assert isinstance(value, sympy.Rational)
            assert -2 <= value <= 2
            assert value.q <= 5

    def test_point(self, chart):
        point = utils.random_point(chart, utils.rng(5))
        assert sorted(point) == ['x', 'y', 'z']

    def test_poly_degree(self, chart):
        generator = utils.rng(7)
        for _ in range(20):
            p = utils.random_poly(chart, generator, degree=3)
            assert p.poly.is_zero or p.poly.total_degree() <= 3

    def test_field(self, chart):
        field = utils.random_field(chart, utils.rng(9))
        assert len(field.components) == 3


class TestSerialization():

    def test_exact_str(self):
        assert utils.exact_str(sympy.Rational(-3, 4)) == "-3/4"
        assert utils.exact_str(5) == "5"
        assert utils.exact_str(0.5) == "0.5"

    def test_text_only(self):
        text = utils.write_json({'b': 1, 'a': [1, 2]}, None)
        assert text.index('"a"') < text.index('"b"')
        assert utils.write_json({'a': 1}, '-') == utils.dumps({'a': 1})

    def test_write_read(self, tmpdir):
        path = os.path.join(str(tmpdir), "nested", "report.json")
        utils.write_json({'tag': 'no_real', 'count': 0}, path)
        assert utils.read_json(path) == {'tag': 'no_real', 'count': 0}
