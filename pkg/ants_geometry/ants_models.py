'''
Concrete models: the two ant rules on the vertex chart, the affine-group
parametrization with its Maurer-Cartan coframe, and the flat (3,6) and
quadric (2,3,5) reference distributions.
'''
import logging

import sympy

from .exact_algebra import (Chart, MultiPoly, RationalFn, VectorField, DifferentialForm,
                            lie_bracket, to_rational)
from .distribution_analysis import Distribution
from . import utils

ANT_CHART = Chart("x1 y1 x2 y2 x3 y3")
AFFINE_CHART = Chart("a b p q x y")
FLAT_CHART = Chart("q1 q2 q3 p1 p2 p3")

RULES = ('A', 'B')


class UnsupportedModelError(Exception):
    pass


class StructureEquationError(Exception):
    pass


def _vertex(chart, i):
    ''' (x_i, y_i) with the index taken modulo 3, counting from 1. '''
    i = (i - 1) % 3 + 1
    return chart.var("x{}".format(i)), chart.var("y{}".format(i))


def area32(chart=ANT_CHART):
    ''' Σ (y_i x_{i+1} - x_i y_{i+1}), the area function named 32A. '''
    total = chart.const(0)
    for i in (1, 2, 3):
        xi, yi = _vertex(chart, i)
        xn, yn = _vertex(chart, i + 1)
        total = total + yi * xn - xi * yn
    return total


class AntModel(object):
    '''
    Velocity distribution of three ants on the (x1,y1,x2,y2,x3,y3) chart.

    Rule A: ant i heads towards ant i+1. Rule B: ant i moves parallel to
    the line through the other two.
    '''

    def __init__(self, rule, fields, forms):
        self.rule = rule
        self.chart = ANT_CHART
        self.fields = tuple(fields)
        self.forms = tuple(forms)
        self.area32 = area32(self.chart)
        self._brackets = None

    def __repr__(self):
        return "AntModel(rule {})".format(self.rule)

    @property
    def brackets(self):
        ''' {'12': [Z1,Z2], '23': [Z2,Z3], '31': [Z3,Z1]} '''
        if self._brackets is None:
            z1, z2, z3 = self.fields
            self._brackets = {'12': lie_bracket(z1, z2), '23': lie_bracket(z2, z3),
                              '31': lie_bracket(z3, z1)}
        return self._brackets

    def bracket_fields(self):
        ''' Z1, Z2, Z3, Z12, Z31, Z23 in that order. '''
        b = self.brackets
        return list(self.fields) + [b['12'], b['31'], b['23']]

    def distribution(self):
        return Distribution(self.fields, singular_locus=self.area32, name="rule-{}".format(self.rule.lower()))

    def first_derived(self):
        b = self.brackets
        return Distribution(list(self.fields) + [b['12'], b['23']], singular_locus=self.area32,
                            name="rule-{}-derived".format(self.rule.lower()))

    def relation(self):
        ''' Σ (Z_i - Z_{i,i+1}); identically zero for rule B. '''
        b = self.brackets
        z1, z2, z3 = self.fields
        return (z1 - b['12']) + (z2 - b['23']) + (z3 - b['31'])

    def to_dict(self):
        return dict(rule=self.rule, chart=list(self.chart.variables),
                    fields=[z.serialize() for z in self.fields],
                    forms=[w.serialize() for w in self.forms],
                    brackets={k: v.serialize() for k, v in sorted(self.brackets.items())},
                    area32=self.area32.serialize())


def _build_rule(rule):
    chart = ANT_CHART
    fields, forms = [], []
    for i in (1, 2, 3):
        xi, yi = _vertex(chart, i)
        if rule == 'A':
            (ax, ay), (bx, by) = _vertex(chart, i + 1), (xi, yi)
        else:
            (ax, ay), (bx, by) = _vertex(chart, i + 1), _vertex(chart, i + 2)
        dx, dy = ax - bx, ay - by
        fields.append(VectorField(chart, {"x{}".format(i): dx, "y{}".format(i): dy}))
        forms.append(DifferentialForm.one_form(chart, {"x{}".format(i): dy, "y{}".format(i): -dx}))
    return AntModel(rule, fields, forms)


def build_rule_a():
    return _build_rule('A')


def build_rule_b():
    return _build_rule('B')


def build_rule(rule):
    rule = rule.upper()
    if rule not in RULES:
        raise UnsupportedModelError("Unknown rule {}".format(rule))
    return _build_rule(rule)


def square_root_distribution(model, level=1):
    '''
    span(Z1 - Z2, Z3 - Z1) on the leaf 32A = level.
    '''
    if model.rule != 'B':
        raise UnsupportedModelError("The square root distribution is only defined for rule B")
    z1, z2, z3 = model.fields
    return Distribution([z1 - z2, z3 - z1], leaf_constraint=(model.area32, level),
                        singular_locus=model.area32, name="sqrt-b")


def sl3_symmetries(chart=ANT_CHART):
    '''
    X1..X8: translations, the linear fields and the two projective fields
    acting on all three vertices at once.
    '''
    def diagonal(fx, fy):
        comps = {}
        for i in (1, 2, 3):
            x, y = _vertex(chart, i)
            comps["x{}".format(i)] = fx(x, y)
            comps["y{}".format(i)] = fy(x, y)
        return VectorField(chart, comps)

    return [
        diagonal(lambda x, y: 1, lambda x, y: 0),
        diagonal(lambda x, y: 0, lambda x, y: 1),
        diagonal(lambda x, y: y, lambda x, y: 0),
        diagonal(lambda x, y: 0, lambda x, y: x),
        diagonal(lambda x, y: x, lambda x, y: 0),
        diagonal(lambda x, y: 0, lambda x, y: y),
        diagonal(lambda x, y: x * y, lambda x, y: y * y),
        diagonal(lambda x, y: x * x, lambda x, y: x * y),
    ]


def area_preserving_symmetries(chart=ANT_CHART):
    ''' X1, X2, X3, X4, X5 - X6. '''
    x = sl3_symmetries(chart)
    return [x[0], x[1], x[2], x[3], x[4] - x[5]]


# Affine-group parametrization h = [[a, b, x], [p, q, y], [0, 0, 1]].

def _unit(i, j):
    m = sympy.zeros(3, 3)
    m[i, j] = 1
    return m


MC_BASIS = (
    _unit(0, 1),
    _unit(1, 0),
    sympy.diag(1, -1, 0),
    _unit(0, 2),
    _unit(1, 2),
    sympy.diag(1, 1, 0),
)


def h_matrix(chart=AFFINE_CHART):
    a, b, p, q, x, y = chart.vars()
    one, zero = chart.const(1), chart.const(0)
    return [[a, b, x], [p, q, y], [zero, zero, one]]


def triangle_vertices(chart=AFFINE_CHART):
    ''' Images of the standard triangle (0,0), (1,0), (0,1) under h. '''
    a, b, p, q, x, y = chart.vars()
    return [(x, y), (a + x, p + y), (b + x, q + y)]


def vertex_bindings(chart=AFFINE_CHART):
    ''' Vertex coordinates x1..y3 as polynomials on the affine chart. '''
    bindings = {}
    for i, (vx, vy) in enumerate(triangle_vertices(chart), 1):
        bindings["x{}".format(i)] = vx
        bindings["y{}".format(i)] = vy
    return bindings


def determinant(chart=AFFINE_CHART):
    a, b, p, q, x, y = chart.vars()
    return a * q - b * p


def move_residuals(v):
    '''
    Cross products of each vertex velocity under ``v`` with the direction the
    rule prescribes for it; all three vanish for moves obeying rule B.
    '''
    chart = v.chart
    a, b, p, q, x, y = chart.vars()
    vx, vy = v(x), v(y)
    velocities = [(vx, vy), (v(a) + vx, v(p) + vy), (v(b) + vx, v(q) + vy)]
    directions = [(a - b, p - q), (b, q), (-a, -p)]
    return [u1 * d2 - u2 * d1 for (u1, u2), (d1, d2) in zip(velocities, directions)]


def _theta_rhs(theta, mutations=()):
    t1, t2, t3, t4, t5 = theta
    three = 2 if 'structure-constant' in mutations else 3
    return [
        t1.wedge(t3 + t4 + t5) + t2.wedge(t4) + t3.wedge(t4),
        -t1.wedge(t3 * 2 + t5) - t2.wedge(t3 + t4 + t5) + t3.wedge(t5),
        -t3.wedge(t4 * 4 + t5 * 2) + t4.wedge(t5) * three,
        -t3.wedge(t4) * 2 + t4.wedge(t5) * 2,
        t3.wedge(t4 * 4 + t5 * 2) - t4.wedge(t5) * 4,
    ]


class AffineModel(object):
    '''
    Rule B written on GL(2) ⋉ R², with the Maurer-Cartan forms τ¹..τ⁶ and the
    θ-coframe of the square root distribution on the leaf Det(h) = s.
    '''

    def __init__(self, s=1):
        s = to_rational(s)
        if s == 0:
            raise ValueError("The leaf level s must be nonzero")
        self.s = s
        chart = self.chart = AFFINE_CHART
        a, b, p, q, x, y = chart.vars()
        d = chart.d
        self.det = determinant(chart)
        self.E = MC_BASIS

        self.V = (
            VectorField(chart, {'x': a - b, 'a': b - a, 'b': b - a, 'y': p - q, 'p': q - p, 'q': q - p}),
            VectorField(chart, {'a': b, 'p': q}),
            VectorField(chart, {'b': -a, 'q': -p}),
        )

        D = RationalFn(self.det)
        self.tau = (
            (d('b') * q - d('q') * b) / D,
            (d('p') * a - d('a') * p) / D,
            (d('a') * q - d('q') * a + d('b') * p - d('p') * b) / (D * 2),
            (d('x') * q - d('y') * b) / D,
            (d('y') * a - d('x') * p) / D,
            (d('a') * q + d('q') * a - d('b') * p - d('p') * b) / (D * 2),
        )

        # s-cleared polynomial representatives: sθ¹, sθ², 2sθ³, sθ⁴, sθ⁵.
        half = sympy.Rational(1, 2)
        self.cleared_theta = (
            d('x') * p - d('y') * a + (d('a') * q + d('b') * p - d('p') * b - d('q') * a) * half,
            d('x') * (q - p) + d('y') * (a - b),
            d('a') * (2 * p - q) + d('b') * (2 * q - p) - d('p') * (2 * a - b) - d('q') * (2 * b - a),
            d('a') * p - d('p') * a,
            -d('a') * p - d('b') * q + d('p') * a + d('q') * b,
        )
        clearing = (s, s, 2 * s, s, s)
        self.theta = tuple(form / c for form, c in zip(self.cleared_theta, clearing))

        t = self.tau
        self.mc_theta = (t[2] - t[4], t[3] + t[4], t[0] - t[1] - t[2], -t[1], t[1] - t[0])

    def __repr__(self):
        return "AffineModel(s={})".format(self.s)

    @property
    def leaf_bindings(self):
        ''' q = (s + b p)/a on the open set a ≠ 0. '''
        a, b, p, q, x, y = self.chart.vars()
        return {'q': (b * p + self.s) / a}

    def leaf(self, form):
        return form.substitute(self.leaf_bindings)

    def square_root(self):
        v1, v2, v3 = self.V
        return Distribution([v1 - v3, v2 - v1], leaf_constraint=(self.det, self.s),
                            singular_locus=self.chart.var('a'), name="affine")

    def distribution(self):
        return Distribution(self.V, singular_locus=self.det, name="affine-rank3")

    def maurer_cartan_matrix(self):
        ''' h⁻¹ dh as a 3x3 nested list of 1-forms. '''
        chart = self.chart
        h = h_matrix(chart)
        inverse = sympy.Matrix([[entry.as_expr() for entry in row] for row in h]).inv()
        dh = [[DifferentialForm.function(chart, entry).d() for entry in row]
              for row in h]
        result = []
        for i in range(3):
            row = []
            for j in range(3):
                total = DifferentialForm.zero(chart, 1)
                for k in range(3):
                    coeff = RationalFn.from_expr(chart, inverse[i, k])
                    if not coeff.is_zero:
                        total = total + dh[k][j] * coeff
                row.append(total)
            result.append(row)
        return result

    def tau_combination(self):
        ''' Σ τ^i E_i as a 3x3 nested list of 1-forms. '''
        result = []
        for i in range(3):
            row = []
            for j in range(3):
                total = DifferentialForm.zero(self.chart, 1)
                for form, e in zip(self.tau, self.E):
                    if e[i, j] != 0:
                        total = total + form * e[i, j]
                row.append(total)
            result.append(row)
        return result

    def to_dict(self):
        return dict(s=str(self.s), chart=list(self.chart.variables),
                    V=[v.serialize() for v in self.V],
                    tau=[t.serialize() for t in self.tau],
                    theta=[t.serialize() for t in self.theta])


def build_affine_model(s=1):
    return AffineModel(s)


class CoframeReport(object):
    '''
    Residuals dθ^i - RHS_i for the five structure equations, with the
    outcome of both certification routes.

    ambient:
        residual on the full chart, θ built from τ.
    wedge_tau6:
        ambient residual ∧ τ⁶; zero means the residual lies in the ideal of τ⁶.
    leaf:
        residual of the polynomial representatives pulled back to the leaf.
    '''

    def __init__(self, ambient, wedge_tau6, leaf):
        self.ambient = ambient
        self.wedge_tau6 = wedge_tau6
        self.leaf = leaf

    @property
    def ideal_membership(self):
        return [w.is_zero for w in self.wedge_tau6]

    @property
    def leaf_vanishing(self):
        return [r.is_zero for r in self.leaf]

    @property
    def routes_agree(self):
        return self.ideal_membership == self.leaf_vanishing

    @property
    def passed(self):
        return all(self.ideal_membership) and all(self.leaf_vanishing)

    def offending(self):
        return {"dtheta{}".format(i + 1): self.leaf[i].serialize()
                for i in range(5) if not (self.ideal_membership[i] and self.leaf_vanishing[i])}

    def to_dict(self):
        return dict(ideal_membership=self.ideal_membership, leaf_vanishing=self.leaf_vanishing,
                    offending=self.offending())


def verify_structure_equations(model, mutations=()):
    '''
    Check dθ^i against the constant-coefficient structure equations by
    wedging the ambient residual with τ⁶ and by pulling the residual back to
    the leaf Det(h) = s.
    '''
    tau6 = model.tau[5]
    ambient = [t.d() - rhs for t, rhs in zip(model.mc_theta, _theta_rhs(model.mc_theta, mutations))]
    wedged = [r.wedge(tau6) for r in ambient]
    pulled = [model.leaf(t) for t in model.theta]
    leaf = [t.d() - rhs for t, rhs in zip(pulled, _theta_rhs(pulled, mutations))]
    report = CoframeReport(ambient, wedged, leaf)
    if not report.passed:
        logging.warning("Structure equations fail for {}: {}".format(model, report.offending()))
    return report


class ConformalMetric(object):
    '''
    g = Σ G_ij θ^i θ^j with constant G, and its expression in the leaf
    coordinates (a, b, p, x, y).
    '''

    LEAF_VARIABLES = ('a', 'b', 'p', 'x', 'y')

    def __init__(self, model):
        self.model = model
        self.coframe_matrix = coframe_metric_matrix()
        pulled = [model.leaf(t) for t in model.theta]
        self.coframe = [[t[(name,)] for name in self.LEAF_VARIABLES] for t in pulled]
        n = len(self.LEAF_VARIABLES)
        G = self.coframe_matrix
        self.coordinate_form = [[sum((self.coframe[i][r] * self.coframe[j][c] * G[i, j]
                                      for i in range(5) for j in range(5) if G[i, j] != 0),
                                     RationalFn.lift(model.chart, 0))
                                 for c in range(n)] for r in range(n)]

    def coframe_at(self, point):
        return sympy.Matrix([[entry.evaluate(point) for entry in row] for row in self.coframe])

    def evaluate(self, point):
        ''' The 5x5 Gram matrix in leaf coordinates at ``point``. '''
        return sympy.Matrix([[entry.evaluate(point) for entry in row] for row in self.coordinate_form])

    def leaf_points(self, count, seed, bound=10):
        return self.model.square_root().sample_points(count, utils.rng(seed), bound)


def coframe_metric_matrix():
    '''
    Symmetric matrix of θ¹(45θ⁵+60θ³+27θ²+27θ¹) - θ²(45θ⁴-30θ³-27θ²) + 10(θ³)²,
    products symmetrized.
    '''
    R = sympy.Rational
    G = sympy.zeros(5, 5)
    entries = {(0, 0): 27, (0, 1): R(27, 2), (0, 2): 30, (0, 4): R(45, 2),
               (1, 1): 27, (1, 2): 15, (1, 3): R(-45, 2), (2, 2): 10}
    for (i, j), value in entries.items():
        G[i, j] = value
        G[j, i] = value
    return G


def conformal_metric(model):
    return ConformalMetric(model)


# Reference models on the (q1, q2, q3, p1, p2, p3) chart.

def _levi_civita(i, j, k):
    return sympy.LeviCivita(i, j, k)


def flat_forms(chart=FLAT_CHART):
    ''' λ_i = dp_i + ε_ijk q^j dq^k. '''
    forms = []
    for i in range(3):
        coeffs = {"p{}".format(i + 1): 1}
        for j in range(3):
            for k in range(3):
                eps = _levi_civita(i, j, k)
                if eps != 0:
                    name = "q{}".format(k + 1)
                    coeffs[name] = coeffs.get(name, 0) + chart.var("q{}".format(j + 1)) * int(eps)
        forms.append(DifferentialForm.one_form(chart, coeffs))
    return forms


def flat_generators(chart=FLAT_CHART):
    ''' Q_k = ∂q^k - Σ_i ε_ijk q^j ∂p_i, the annihilator of the λ_i. '''
    fields = []
    for k in range(3):
        comps = {"q{}".format(k + 1): 1}
        for i in range(3):
            total = chart.const(0)
            for j in range(3):
                eps = _levi_civita(i, j, k)
                if eps != 0:
                    total = total - chart.var("q{}".format(j + 1)) * int(eps)
            comps["p{}".format(i + 1)] = total
        fields.append(VectorField(chart, comps))
    return fields


def build_flat36():
    return Distribution(flat_generators(), name="flat36")


def quadric_function(chart=FLAT_CHART):
    return sum((chart.var("p{}".format(i)) * chart.var("q{}".format(i)) for i in (1, 2, 3)), chart.const(0))


def build_quadric235():
    '''
    The λ-annihilator on p_i q^i = 1: W_m = Σ_k (p × e_m)_k Q_k, which spans
    the rank 2 intersection with the tangent space of the quadric.
    '''
    chart = FLAT_CHART
    q_fields = flat_generators(chart)
    p = [chart.var("p{}".format(i)) for i in (1, 2, 3)]
    generators = []
    for m in range(3):
        e = [0, 0, 0]
        e[m] = 1
        cross = [p[1] * e[2] - p[2] * e[1], p[2] * e[0] - p[0] * e[2], p[0] * e[1] - p[1] * e[0]]
        total = VectorField.zero(chart)
        for k in range(3):
            total = total + q_fields[k] * cross[k]
        generators.append(total)
    return Distribution(generators, leaf_constraint=(quadric_function(chart), 1),
                        singular_locus=chart.var("p1"), name="quadric235")


MODEL_NAMES = ('rule-a', 'rule-b', 'sqrt-b', 'affine', 'flat36', 'quadric235')


def build_distribution(name, level=1):
    '''
    :param name: one of MODEL_NAMES.
    :return: the Distribution analysed under that name.
    '''
    if name == 'rule-a':
        return build_rule_a().distribution()
    if name == 'rule-b':
        return build_rule_b().distribution()
    if name == 'sqrt-b':
        return square_root_distribution(build_rule_b(), level)
    if name == 'affine':
        return build_affine_model(level).square_root()
    if name == 'flat36':
        return build_flat36()
    if name == 'quadric235':
        return build_quadric235()
    raise UnsupportedModelError("Unknown model {}; choose from {}".format(name, ", ".join(MODEL_NAMES)))


def dump_models(path=None):
    ''' JSON dump of both rules and the affine model with canonical strings. '''
    payload = dict(rule_a=build_rule_a().to_dict(), rule_b=build_rule_b().to_dict(),
                   affine=build_affine_model(1).to_dict())
    return utils.write_json(payload, path)
