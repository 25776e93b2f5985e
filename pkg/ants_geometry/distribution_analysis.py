'''
Derived flags, growth vectors, integrability, first integrals and
symmetries of distributions spanned by explicit vector fields.
'''
import logging
import itertools

import numpy as np
import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .exact_algebra import (VectorField, DifferentialForm, MultiPoly, RationalFn,
                            SingularPointError, lie_bracket, component_matrix, to_rational)
from . import utils

# Largest number of unknown coefficients solve_symmetries will set up.
MAX_ANSATZ = 600


class SamplingError(Exception):
    pass


class RankCertificationError(Exception):
    pass


class AnsatzTooLargeError(Exception):
    pass


class LinearDependenceError(Exception):
    pass


class ClosureError(Exception):

    def __init__(self, pair, bracket):
        self.pair = pair
        self.bracket = bracket
        super(ClosureError, self).__init__(
            "Bracket of basis elements {} leaves the span: {}".format(pair, bracket.serialize()))


class Distribution(object):
    '''
    The span of ``generators`` over the functions of a chart, optionally
    restricted to the level set ``function = level``.

    singular_locus:
        Optional polynomial; sample points are drawn where it does not vanish.
    '''

    def __init__(self, generators, leaf_constraint=None, singular_locus=None, name=None):
        generators = list(generators)
        if not generators:
            raise ValueError("A distribution needs at least one generator")
        self.chart = generators[0].chart
        for g in generators:
            if g.chart != self.chart:
                raise ValueError("Generators live on different charts")
        self.generators = generators
        self.name = name
        self.singular_locus = singular_locus
        if leaf_constraint is not None:
            function, level = leaf_constraint
            function = RationalFn.lift(self.chart, function)
            level = to_rational(level)
            for i, g in enumerate(generators):
                if not g(function).is_zero:
                    raise ValueError("Generator {} is not tangent to {} = {}".format(
                        i, function.serialize(), level))
            leaf_constraint = (function, level)
        self.leaf_constraint = leaf_constraint

    def __repr__(self):
        leaf = ""
        if self.leaf_constraint is not None:
            leaf = ", leaf {} = {}".format(self.leaf_constraint[0].serialize(), self.leaf_constraint[1])
        return "Distribution({}, {} generators{})".format(self.name or "unnamed", len(self.generators), leaf)

    @property
    def dimension(self):
        ''' Dimension of the manifold the distribution lives on. '''
        return len(self.chart) - (1 if self.leaf_constraint is not None else 0)

    def on_leaf(self, point):
        if self.leaf_constraint is None:
            return True
        function, level = self.leaf_constraint
        return function.evaluate(point) == level

    def _project_to_leaf(self, point):
        function, level = self.leaf_constraint
        num = function.as_poly() if function.is_polynomial else None
        if num is None:
            raise SamplingError("Leaf sampling needs a polynomial constraint")
        for name, symbol in zip(self.chart.variables, self.chart.symbols):
            if num.poly.degree(symbol) != 1:
                continue
            slope = num.diff(name).evaluate(point)
            if slope == 0:
                continue
            at_zero = dict(point)
            at_zero[name] = sympy.Integer(0)
            offset = num.evaluate(at_zero)
            projected = dict(point)
            projected[name] = (level - offset) / slope
            return projected
        return None

    def _usable(self, point):
        if self.singular_locus is not None and self.singular_locus.evaluate(point) == 0:
            return False
        try:
            for g in self.generators:
                g.evaluate(point)
        except SingularPointError:
            return False
        return True

    def sample_points(self, count, generator, bound=10, attempts=50):
        '''
        Draw ``count`` rational points off the singular locus (and on the leaf,
        when there is one).
        '''
        points = []
        for _ in range(attempts * count):
            point = utils.random_point(self.chart, generator, bound)
            if self.leaf_constraint is not None:
                point = self._project_to_leaf(point)
                if point is None:
                    continue
            if self._usable(point):
                points.append(point)
                if len(points) == count:
                    return points
            else:
                logging.debug("Resampling: point {} is singular".format(point))
        raise SamplingError("Only {} of {} nonsingular points found for {!r} after {} attempts".format(
            len(points), count, self, attempts * count))


class DerivedFlag(object):

    def __init__(self, ranks, layers, witness_points, dimension):
        self.ranks = tuple(ranks)
        self.layers = layers
        self.witness_points = witness_points
        self.dimension = dimension

    @property
    def stabilized(self):
        return len(self.ranks) > 1 and self.ranks[-1] == self.ranks[-2]

    @property
    def bracket_generating(self):
        return self.ranks[-1] == self.dimension

    @property
    def growth(self):
        ''' Ranks as "(3,5)", without the repeated rank of a stabilized flag. '''
        ranks = self.ranks[:-1] if self.stabilized else self.ranks
        return "({})".format(",".join(str(r) for r in ranks))

    def __repr__(self):
        return "DerivedFlag({}, stabilized={})".format(self.growth, self.stabilized)

    def to_dict(self):
        return dict(ranks=list(self.ranks), stabilized=self.stabilized,
                    witness_points=[{k: str(v) for k, v in p.items()} for p in self.witness_points])


def _common_multiplier(fields):
    dens = [c.den.poly for v in fields for c in v.components if not c.is_polynomial]
    if not dens:
        return None
    lcm = dens[0]
    for d in dens[1:]:
        lcm = lcm.lcm(d)
    return lcm


def _flatten(fields):
    '''
    Coefficient vectors of the fields over the rationals, after clearing a
    common denominator; two fields are rationally dependent iff their vectors are.
    '''
    multiplier = _common_multiplier(fields)
    vectors = []
    for v in fields:
        vec = {}
        for k, c in enumerate(v.components):
            if c.is_zero:
                continue
            poly = c.num.poly
            if multiplier is not None:
                poly = poly * multiplier.exquo(c.den.poly)
            for monom, coeff in poly.terms():
                vec[(k, monom)] = coeff
        vectors.append(vec)
    return vectors


def _qq_matrix(columns):
    ''' Sparse QQ matrix whose columns are the given coefficient dicts. '''
    keys = sorted(set(k for col in columns for k in col))
    row_of = {k: i for i, k in enumerate(keys)}
    dok = {}
    for j, col in enumerate(columns):
        for k, value in col.items():
            dok[(row_of[k], j)] = QQ.from_sympy(value)
    return DomainMatrix.from_dok(dok, (max(len(keys), 1), len(columns)), QQ)


def rational_span_basis(fields):
    '''
    The fields that are not rational linear combinations of earlier ones,
    dropping zero fields. Pointwise ranks of the span are unchanged.
    '''
    fields = [v for v in fields if not v.is_zero]
    if not fields:
        return []
    _, pivots = _qq_matrix(_flatten(fields)).rref()
    return [fields[j] for j in pivots]


def function_field_rank(fields):
    fields = [v for v in fields if not v.is_zero]
    if not fields:
        return 0
    return component_matrix(fields).to_DM().rank()


def function_field_basis(fields):
    '''
    A maximal subset of ``fields``, in order, that is linearly independent
    over the rational functions of the chart.
    '''
    basis = []
    for v in fields:
        if v.is_zero:
            continue
        if function_field_rank(basis + [v]) > len(basis):
            basis.append(v)
            if len(basis) == len(v.chart):
                break
    return basis


def pointwise_rank(fields, point):
    if not fields:
        return 0
    rows = [v.evaluate(point) for v in fields]
    if all(isinstance(x, sympy.Rational) for row in rows for x in row):
        return sympy.Matrix(rows).rank()
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float)))


def next_layer(layer):
    ''' D^{I+1} = [D^I, D^I] + D^I, pruned of rational dependencies. '''
    brackets = [lie_bracket(a, b) for a, b in itertools.combinations(layer, 2)]
    return rational_span_basis(list(layer) + brackets)


def derived_flag(d, max_depth=4, points=3, seed=2718, bound=10):
    '''
    Generic ranks of D ⊂ D¹ ⊂ ... computed over the function field and
    certified at ``points`` seeded random rational points.

    The flag stops when it reaches the manifold dimension, stabilizes, or
    ``max_depth`` brackets have been taken.
    '''
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    layer = rational_span_basis(d.generators)
    layers = [layer]
    ranks = [len(function_field_basis(layer))]
    while len(ranks) <= max_depth and ranks[-1] < d.dimension:
        layer = next_layer(layer)
        layers.append(layer)
        ranks.append(len(function_field_basis(layer)))
        logging.debug("Derived flag of {!r}: layer {} has {} fields, rank {}".format(
            d, len(ranks) - 1, len(layer), ranks[-1]))
        if ranks[-1] == ranks[-2]:
            break

    generator = utils.rng(seed)
    witnesses = []
    discarded = 0
    while len(witnesses) < points:
        point = d.sample_points(1, generator, bound)[0]
        pointwise = [pointwise_rank(lay, point) for lay in layers]
        if pointwise == ranks:
            witnesses.append(point)
            continue
        discarded += 1
        logging.debug("Rank drop {} vs generic {} at {}".format(pointwise, ranks, point))
        if discarded > 5:
            raise RankCertificationError("Pointwise ranks {} disagree with generic ranks {} for {!r}".format(
                pointwise, ranks, d))
    return DerivedFlag(ranks, layers, witnesses, d.dimension)


def growth_vector(d, point, max_depth=4):
    '''
    Ranks of the bracket flag evaluated at ``point``; stops once the rank
    reaches the manifold dimension or stops growing.
    '''
    if not d.on_leaf(point):
        raise ValueError("Point {} is not on the leaf of {!r}".format(point, d))
    layer = rational_span_basis(d.generators)
    ranks = [pointwise_rank(layer, point)]
    while len(ranks) <= max_depth and ranks[-1] < d.dimension:
        layer = next_layer(layer)
        ranks.append(pointwise_rank(layer, point))
        if ranks[-1] == ranks[-2]:
            break
    return tuple(ranks)


def annihilator(fields):
    '''
    Polynomial 1-forms spanning the forms that vanish on ``fields`` over the
    function field.
    '''
    basis = function_field_basis(fields)
    chart = fields[0].chart
    if len(basis) == len(chart):
        return []
    null = component_matrix(basis).to_DM().nullspace().to_Matrix()
    forms = []
    for i in range(null.rows):
        coeffs = [RationalFn.from_expr(chart, null[i, k]) for k in range(null.cols)]
        forms.append(DifferentialForm.one_form(chart, coeffs))
    return forms


class SpanCertificate(object):
    '''
    Outcome of an exact membership test; truthy when every residual vanishes.
    '''

    def __init__(self, residuals):
        self.residuals = residuals

    def __bool__(self):
        return not self.residuals

    def __repr__(self):
        return "SpanCertificate({}, {} residuals)".format(bool(self), len(self.residuals))

    def to_dict(self):
        return {key: value.serialize() for key, value in self.residuals.items()}


def span_contains(forms, v):
    ''' Residuals ω(v) for the annihilator ``forms``; empty iff v lies in the span. '''
    residuals = {}
    for i, omega in enumerate(forms):
        value = omega(v)
        if not value.is_zero:
            residuals["omega{}".format(i)] = value
    return residuals


def is_symmetry(x, d):
    '''
    Whether [x, g] stays in the span of ``d`` for every generator g, and x
    is tangent to the leaf when ``d`` has one. The returned certificate lists
    the nonzero residuals.
    '''
    forms = annihilator(d.generators)
    residuals = {}
    for i, g in enumerate(d.generators):
        for key, value in span_contains(forms, lie_bracket(x, g)).items():
            residuals["[x,g{}].{}".format(i, key)] = value
    if d.leaf_constraint is not None:
        tangency = x(d.leaf_constraint[0])
        if not tangency.is_zero:
            residuals["x(leaf)"] = tangency
    return SpanCertificate(residuals)


def _monomials(n, degree):
    monoms = []
    for total in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(n), total):
            exps = [0] * n
            for i in combo:
                exps[i] += 1
            monoms.append(tuple(exps))
    return monoms


def _clear_denominators(values):
    ''' Scale a list of RationalFns by a common polynomial so all become polynomials. '''
    dens = [v.den.poly for v in values if not v.is_polynomial]
    if not dens:
        return [v.num.poly for v in values]
    lcm = dens[0]
    for den in dens[1:]:
        lcm = lcm.lcm(den)
    return [v.num.poly * lcm.exquo(v.den.poly) for v in values]


def solve_symmetries(d, degree):
    '''
    Basis of the polynomial vector fields with coefficients of degree at
    most ``degree`` that preserve ``d``.

    The ansatz X = Σ c_{k,m} m ∂_k is linear in the unknowns c, so the
    conditions ω([X, g]) = 0 for annihilator forms ω and generators g, plus
    tangency X(f) = 0 to a leaf f = level, become a linear system over the
    rationals whose nullspace is returned.
    '''
    if degree < 0 or degree > 3:
        raise AnsatzTooLargeError("Coefficient degree must be between 0 and 3, got {}".format(degree))
    chart = d.chart
    n = len(chart)
    unknowns = [(k, m) for m in _monomials(n, degree) for k in range(n)]
    if len(unknowns) > MAX_ANSATZ:
        raise AnsatzTooLargeError("Ansatz with {} unknowns exceeds {}".format(len(unknowns), MAX_ANSATZ))
    logging.debug("Symmetry ansatz for {!r}: {} unknowns".format(d, len(unknowns)))

    trial = []
    for k, m in unknowns:
        comps = [0] * n
        comps[k] = MultiPoly.from_terms(chart, {m: 1})
        trial.append(VectorField(chart, comps))

    basis = function_field_basis(d.generators)
    forms = annihilator(d.generators)
    equations = []
    for g in basis:
        brackets = [lie_bracket(e, g) for e in trial]
        for omega in forms:
            equations.append(_clear_denominators([omega(b) for b in brackets]))
    if d.leaf_constraint is not None:
        equations.append(_clear_denominators([e(d.leaf_constraint[0]) for e in trial]))

    rows = {}
    for eq_index, polys in enumerate(equations):
        for j, poly in enumerate(polys):
            if poly.is_zero:
                continue
            for monom, coeff in poly.terms():
                rows.setdefault((eq_index, monom), {})[j] = coeff
    dok = {}
    for i, key in enumerate(sorted(rows)):
        for j, coeff in rows[key].items():
            dok[(i, j)] = QQ.from_sympy(coeff)
    system = DomainMatrix.from_dok(dok, (max(len(rows), 1), len(unknowns)), QQ)
    null = system.nullspace().to_Matrix()
    logging.debug("Symmetry system {}x{} has nullity {}".format(len(rows), len(unknowns), null.rows))

    solutions = []
    for i in range(null.rows):
        comps = [{} for _ in range(n)]
        for j, (k, m) in enumerate(unknowns):
            if null[i, j] != 0:
                comps[k][m] = null[i, j]
        solutions.append(VectorField(chart, [MultiPoly.from_terms(chart, c) for c in comps]))
    return solutions


def rational_coordinates(fields, v):
    '''
    Rational coefficients of ``v`` in the linearly independent ``fields``,
    or None when v is outside their rational span.
    '''
    fields = list(fields)
    n = len(fields)
    reduced, pivots = _qq_matrix(_flatten(fields + [v])).rref()
    if n in pivots:
        return None
    dense = reduced.to_Matrix()
    coords = [sympy.Integer(0)] * n
    for row, col in enumerate(pivots):
        coords[col] = dense[row, n]
    return coords


def in_rational_span(fields, v):
    ''' Whether v is a rational (constant coefficient) combination of ``fields``. '''
    base = len(rational_span_basis(fields))
    return len(rational_span_basis(list(fields) + [v])) == base


def check_first_integral(d, f):
    f = RationalFn.lift(d.chart, f)
    return all(g(f).is_zero for g in d.generators)


def is_integrable(d):
    forms = annihilator(d.generators)
    for a, b in itertools.combinations(d.generators, 2):
        if span_contains(forms, lie_bracket(a, b)):
            return False
    return True


class LieAlgebraTable(object):
    '''
    Structure constants of a finite-dimensional Lie algebra of vector fields:
    [basis[i], basis[j]] = Σ_k c[i][j][k] basis[k].
    '''

    def __init__(self, basis, constants):
        self.basis = basis
        self.structure_constants = constants
        self.killing = self._killing_form()
        self.killing_signature = signature(self.killing)

    @property
    def dimension(self):
        return len(self.basis)

    def ad(self, a):
        n = self.dimension
        c = self.structure_constants
        return sympy.Matrix(n, n, lambda k, j: c[a][j][k])

    def _killing_form(self):
        ads = [self.ad(a) for a in range(self.dimension)]
        n = self.dimension
        return sympy.Matrix(n, n, lambda a, b: (ads[a] * ads[b]).trace())

    def jacobi_residual(self):
        ''' Largest |coefficient| of the Jacobi identity over all triples; exact. '''
        c = self.structure_constants
        n = self.dimension
        worst = sympy.Integer(0)
        for i, j, k in itertools.combinations(range(n), 3):
            for m in range(n):
                total = sum(c[i][j][l] * c[l][k][m] + c[j][k][l] * c[l][i][m] + c[k][i][l] * c[l][j][m]
                            for l in range(n))
                worst = max(worst, abs(total))
        return worst

    def is_ideal(self, indices):
        indices = set(indices)
        c = self.structure_constants
        for i in indices:
            for j in range(self.dimension):
                if any(c[i][j][k] != 0 for k in range(self.dimension) if k not in indices):
                    return False
        return True

    def is_abelian(self, indices):
        c = self.structure_constants
        return all(c[i][j][k] == 0 for i in indices for j in indices for k in range(self.dimension))

    def to_dict(self):
        n = self.dimension
        return dict(dimension=n, killing_signature=list(self.killing_signature),
                    structure_constants=[[[str(self.structure_constants[i][j][k]) for k in range(n)]
                                          for j in range(n)] for i in range(n)])


def signature(matrix):
    '''
    (positives, negatives, zeros) of a symmetric rational matrix: zeros from
    the exact rank, signs from numpy eigenvalues.
    '''
    matrix = sympy.Matrix(matrix)
    n = matrix.rows
    zeros = n - matrix.rank()
    values = np.linalg.eigvalsh(np.array(matrix.tolist(), dtype=float))
    nonzero = sorted(values, key=abs)[zeros:]
    positives = sum(1 for v in nonzero if v > 0)
    return (positives, n - zeros - positives, zeros)


def structure_constants(fields):
    '''
    Expand every bracket of ``fields`` in the same basis with rational
    coefficients and return the resulting LieAlgebraTable.
    '''
    fields = list(fields)
    n = len(fields)
    if len(rational_span_basis(fields)) != n:
        raise LinearDependenceError("Fields are not linearly independent over the rationals")

    zero = sympy.Integer(0)
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        bracket = lie_bracket(fields[i], fields[j])
        coords = rational_coordinates(fields, bracket)
        if coords is None:
            raise ClosureError((i, j), bracket)
        for k, value in enumerate(coords):
            c[i][j][k] = value
            c[j][i][k] = -value
    return LieAlgebraTable(fields, c)
