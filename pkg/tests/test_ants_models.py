import json
import pytest
import sympy
from ants_geometry import ants_models as am
from ants_geometry import distribution_analysis as da
from ants_geometry.exact_algebra import DifferentialForm


@pytest.fixture(scope="module")
def rule_a():
    return am.build_rule_a()


@pytest.fixture(scope="module")
def rule_b():
    return am.build_rule_b()


@pytest.fixture(scope="module")
def affine():
    return am.build_affine_model(1)


@pytest.fixture(scope="module")
def standard_triangle():
    return dict(zip(am.ANT_CHART.variables, [0, 0, 1, 0, 0, 1]))


class TestAntRules():

    def test_area_function(self, standard_triangle):
        assert am.area32().evaluate(standard_triangle) == -1

    def test_rule_b_preserves_area(self, rule_a, rule_b):
        assert da.check_first_integral(rule_b.distribution(), rule_b.area32)
        assert not da.check_first_integral(rule_a.distribution(), rule_a.area32)

    def test_rule_b_relation(self, rule_a, rule_b):
        assert rule_b.relation().is_zero
        assert not rule_a.relation().is_zero

    def test_rule_b_area_differential(self, rule_b):
        lhs = DifferentialForm.function(rule_b.chart, -rule_b.area32).d()
        assert lhs == rule_b.forms[0] + rule_b.forms[1] + rule_b.forms[2]

    def test_forms_annihilate_fields(self, rule_a, rule_b):
        for model in (rule_a, rule_b):
            for omega in model.forms:
                for z in model.fields:
                    assert omega(z).is_zero

    def test_rule_b_derived_integrable(self, rule_b):
        assert da.is_integrable(rule_b.first_derived())

    def test_growth(self, rule_a, rule_b):
        assert da.derived_flag(rule_a.distribution()).growth == "(3,6)"
        assert da.derived_flag(rule_b.distribution()).growth == "(3,5)"

    def test_collinear_triangle(self, rule_a):
        for q in [(0, 0, 1, 0, 2, 0), (0, 0, 1, 0, 3, 0)]:
            point = dict(zip(am.ANT_CHART.variables, q))
            assert da.growth_vector(rule_a.distribution(), point) == (3, 3)

    def test_sl3_symmetries(self, rule_a):
        d = rule_a.distribution()
        for x in am.sl3_symmetries():
            assert da.is_symmetry(x, d)

    def test_to_dict(self, rule_b):
        payload = rule_b.to_dict()
        assert payload['rule'] == 'B'
        assert set(payload['brackets']) == {'12', '23', '31'}

    def test_unknown_rule(self):
        with pytest.raises(am.UnsupportedModelError):
            am.build_rule('C')
        assert am.build_rule('b').rule == 'B'


class TestSquareRoot():

    def test_growth(self, rule_b):
        d = am.square_root_distribution(rule_b, 1)
        assert d.dimension == 5
        assert da.derived_flag(d).growth == "(2,3,5)"

    def test_only_rule_b(self, rule_a):
        with pytest.raises(am.UnsupportedModelError):
            am.square_root_distribution(rule_a)

    def test_area_preserving_symmetries(self, rule_b):
        d = am.square_root_distribution(rule_b, 2)
        for x in am.area_preserving_symmetries():
            assert da.is_symmetry(x, d)


class TestAffineModel():

    def test_level_must_be_nonzero(self):
        with pytest.raises(ValueError):
            am.build_affine_model(0)

    def test_moves(self, affine):
        for v in affine.V:
            assert v(affine.det).is_zero
            assert all(r.is_zero for r in am.move_residuals(v))

    def test_maurer_cartan(self, affine):
        lhs, rhs = affine.maurer_cartan_matrix(), affine.tau_combination()
        for i in range(3):
            for j in range(3):
                assert lhs[i][j] == rhs[i][j]

    def test_tau6_vanishes_on_leaf(self, affine):
        assert affine.leaf(affine.tau[5]).is_zero

    def test_structure_equations(self, affine):
        report = am.verify_structure_equations(affine)
        assert report.passed
        assert report.routes_agree
        assert report.offending() == {}

    def test_structure_equations_mutation(self, affine):
        report = am.verify_structure_equations(affine, ('structure-constant',))
        assert not report.passed
        assert 'dtheta3' in report.offending()

    def test_theta_annihilates_square_root(self, affine):
        v1, v2, v3 = affine.V
        for theta in affine.theta[:3]:
            assert theta(v1 - v3).is_zero
            assert theta(v2 - v1).is_zero

    def test_growth(self):
        d = am.build_distribution('affine')
        assert da.derived_flag(d).growth == "(2,3,5)"


class TestMetric():

    def test_coframe_matrix(self):
        G = am.coframe_metric_matrix()
        assert G == G.T
        assert G[0, 4] == sympy.Rational(45, 2)
        assert G[1, 3] == sympy.Rational(-45, 2)

    def test_metric_at_identity(self, affine):
        metric = am.conformal_metric(affine)
        gram = metric.evaluate(dict(a=1, b=0, p=0, q=1, x=0, y=0))
        assert gram == gram.T
        assert gram.rank() == 5


class TestReferenceModels():

    def test_flat36(self):
        assert da.derived_flag(am.build_flat36()).growth == "(3,6)"

    def test_flat_forms_annihilate(self):
        for omega in am.flat_forms():
            for q in am.flat_generators():
                assert omega(q).is_zero

    def test_quadric235(self):
        d = am.build_quadric235()
        assert d.dimension == 5
        assert da.derived_flag(d).growth == "(2,3,5)"

    def test_build_distribution(self):
        for name in am.MODEL_NAMES:
            assert am.build_distribution(name).generators
        with pytest.raises(am.UnsupportedModelError):
            am.build_distribution('rule-c')

    def test_dump_models(self, tmpdir):
        path = str(tmpdir.join("models.json"))
        text = am.dump_models(path)
        with open(path) as f:
            assert json.load(f) == json.loads(text)
        assert set(json.loads(text)) == {'rule_a', 'rule_b', 'affine'}
