'''
Affine-invariant geometry of the triangle: the Steiner circumellipse, the
norm it induces, the sub-Riemannian speed of rule-B moves, and exact real
root classification of binary quartics.
'''
import logging

import numpy as np
import sympy

from .exact_algebra import to_rational, is_exact
from .distribution_analysis import signature
from . import utils


class DegenerateTriangleError(Exception):
    pass


class ZeroQuarticError(Exception):
    pass


class DegenerateMetricError(Exception):
    pass


class ConstraintViolationError(Exception):
    pass


def _exact_value(c):
    try:
        return to_rational(c)
    except TypeError:
        value = sympy.sympify(c)
        if value.free_symbols or not value.is_real:
            raise
        return value


def _exact_points(triangle):
    points = [tuple(_exact_value(c) for c in p) for p in triangle]
    if len(points) != 3 or any(len(p) != 2 for p in points):
        raise ValueError("A triangle is three planar points, got {}".format(triangle))
    return points


def triangle_area(triangle):
    (x1, y1), (x2, y2), (x3, y3) = triangle
    return ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) / 2


class Ellipse(object):
    '''
    {r : (r - center)ᵀ gram (r - center) = 1} with exact entries.
    '''

    def __init__(self, center, gram):
        gram = sympy.Matrix(gram)
        if gram.shape != (2, 2) or gram != gram.T:
            raise ValueError("Gram matrix must be symmetric 2x2, got {}".format(gram.tolist()))
        if not (gram[0, 0] > 0 and gram.det() > 0):
            raise ValueError("Gram matrix {} is not positive definite".format(gram.tolist()))
        self.center = sympy.Matrix(center)
        self.gram = gram

    def __repr__(self):
        return "Ellipse(center={}, gram={})".format(list(self.center), self.gram.tolist())

    def __eq__(self, other):
        return isinstance(other, Ellipse) and self.center == other.center and self.gram == other.gram

    def __ne__(self, other):
        return not self == other

    def value(self, point):
        r = sympy.Matrix(point) - self.center
        return (r.T * self.gram * r)[0, 0]

    def contains(self, point):
        return self.value(point) == 1

    def gradient(self, point):
        return 2 * self.gram * (sympy.Matrix(point) - self.center)

    def conic(self):
        '''
        (A, B, C, D, E, F) of A x² + B xy + C y² + D x + E y + F = 0, scaled
        so the first nonzero coefficient is 1.
        '''
        M, c = self.gram, self.center
        coeffs = [M[0, 0], 2 * M[0, 1], M[1, 1],
                  -2 * (M[0, 0] * c[0] + M[0, 1] * c[1]),
                  -2 * (M[0, 1] * c[0] + M[1, 1] * c[1]),
                  (c.T * M * c)[0, 0] - 1]
        return normalize_conic(coeffs)

    def to_dict(self):
        return dict(center=[str(v) for v in self.center], gram=[[str(v) for v in row] for row in self.gram.tolist()],
                    conic=[str(v) for v in self.conic()])


def normalize_conic(coeffs):
    lead = next(c for c in coeffs if c != 0)
    return tuple(sympy.simplify(sympy.sympify(c) / lead) for c in coeffs)


UNIT_CIRCLE = Ellipse((0, 0), sympy.eye(2))

# equilateral, inscribed in UNIT_CIRCLE
REFERENCE_TRIANGLE = ((1, 0),
                      (-sympy.Rational(1, 2), sympy.sqrt(3) / 2),
                      (-sympy.Rational(1, 2), -sympy.sqrt(3) / 2))


def _edge_matrix(z):
    return sympy.Matrix.hstack(z[1] - z[0], z[2] - z[0])


def steiner_circumellipse(triangle):
    '''
    The ellipse through the vertices, centred at the centroid, tangent at each
    vertex to the parallel of the opposite side.

    It is the image of UNIT_CIRCLE under the affine map r ↦ A r + g sending
    REFERENCE_TRIANGLE onto ``triangle``, with A = Z W⁻¹ for the edge
    matrices W and Z. The image has gram A⁻ᵀ A⁻¹ = Z⁻ᵀ (Wᵀ W) Z⁻¹, and Wᵀ W
    is rational, so rational triangles give rational ellipses.
    '''
    points = _exact_points(triangle)
    if sympy.simplify(triangle_area(points)) == 0:
        raise DegenerateTriangleError("Triangle {} is degenerate".format([[str(c) for c in p] for p in points]))
    z = [sympy.Matrix(p) for p in points]
    g = (z[0] + z[1] + z[2]) / 3
    W = _edge_matrix([sympy.Matrix(p) for p in REFERENCE_TRIANGLE])
    Z_inv = _edge_matrix(z).inv()
    gram = Z_inv.T * (W.T * UNIT_CIRCLE.gram * W) * Z_inv
    return Ellipse(g.applyfunc(sympy.simplify), gram.applyfunc(sympy.simplify))


def conic_constraints(triangle):
    '''
    Six linear conditions on (A, B, C, D, E, F): each vertex lies on the conic
    and the gradient there is orthogonal to the opposite side.
    '''
    points = _exact_points(triangle)
    rows = []
    for x, y in points:
        rows.append([x * x, x * y, y * y, x, y, 1])
    for i, (x, y) in enumerate(points):
        (ax, ay), (bx, by) = points[(i + 1) % 3], points[(i + 2) % 3]
        dx, dy = bx - ax, by - ay
        # gradient (2Ax + By + D, Bx + 2Cy + E) · (dx, dy)
        rows.append([2 * x * dx, y * dx + x * dy, 2 * y * dy, dx, dy, 0])
    return sympy.Matrix(rows)


def conic_through(triangle):
    ''' The normalized conic cut out by conic_constraints, found as a nullspace. '''
    null = conic_constraints(triangle).nullspace()
    if len(null) != 1:
        raise DegenerateTriangleError("Conic constraints have a {}-dimensional solution space".format(len(null)))
    return normalize_conic(list(null[0]))


def tangent_residuals(ellipse, triangle):
    ''' Gradient · opposite side at each vertex; zero for the Steiner ellipse. '''
    points = _exact_points(triangle)
    residuals = []
    for i, p in enumerate(points):
        a, b = sympy.Matrix(points[(i + 1) % 3]), sympy.Matrix(points[(i + 2) % 3])
        residuals.append((ellipse.gradient(p).T * (b - a))[0, 0])
    return residuals


def affine_image(ellipse, A, b):
    ''' Image of ``ellipse`` under r ↦ A r + b. '''
    A = sympy.Matrix(A)
    if A.det() == 0:
        raise ValueError("Affine map is not invertible")
    inverse = A.inv()
    return Ellipse(A * ellipse.center + sympy.Matrix(b), inverse.T * ellipse.gram * inverse)


def ellipse_norm(ellipse, v):
    ''' √(vᵀ gram v); exact for exact v. '''
    if all(is_exact(c) for c in v):
        v = sympy.Matrix([to_rational(c) for c in v])
        return sympy.sqrt((v.T * ellipse.gram * v)[0, 0])
    v = np.asarray(v, dtype=float)
    gram = np.array(ellipse.gram.tolist(), dtype=float)
    return float(np.sqrt(v.dot(gram).dot(v)))


def subriemannian_speed(triangle, u):
    '''
    Σ_i ‖u_i (z_{i+1} - z_{i+2})‖² in the norm of the Steiner ellipse.
    '''
    exact = all(is_exact(x) for x in u)
    total = sum(to_rational(x) for x in u) if exact else sum(float(x) for x in u)
    if (exact and total != 0) or (not exact and abs(total) > 1e-12):
        raise ConstraintViolationError("Controls must sum to zero, got {}".format(total))
    ellipse = steiner_circumellipse(triangle)
    points = [sympy.Matrix(p) for p in _exact_points(triangle)]
    if exact:
        u = [to_rational(x) for x in u]
        speed = sympy.Integer(0)
        for i in range(3):
            v = u[i] * (points[(i + 1) % 3] - points[(i + 2) % 3])
            speed += (v.T * ellipse.gram * v)[0, 0]
        return speed
    gram = np.array(ellipse.gram.tolist(), dtype=float)
    z = [np.array(p.tolist(), dtype=float).ravel() for p in points]
    speed = 0.0
    for i in range(3):
        v = float(u[i]) * (z[(i + 1) % 3] - z[(i + 2) % 3])
        speed += v.dot(gram).dot(v)
    return speed


def speed_constant(samples=20, seed=2718, bound=10):
    '''
    Ratio speed / Σ u_i² over random rational triangles and controls.

    :return: (k, relative spread, ratios)
    '''
    generator = utils.rng(seed)
    ratios = []
    while len(ratios) < samples:
        triangle = [(utils.random_rational(generator, bound), utils.random_rational(generator, bound))
                    for _ in range(3)]
        if triangle_area(triangle) == 0:
            continue
        u1, u2 = utils.random_rational(generator, bound), utils.random_rational(generator, bound)
        u = (u1, u2, -u1 - u2)
        norm = sum(x * x for x in u)
        if norm == 0:
            continue
        ratios.append(subriemannian_speed(triangle, u) / norm)
    k = ratios[0]
    spread = max(abs(r - k) for r in ratios) / abs(k)
    if k != 1:
        logging.debug("Speed is {} times Σu²".format(k))
    return k, spread, ratios


U1, U2, T = sympy.symbols('u1 u2 t')


class BinaryQuartic(object):
    '''
    c0 u1⁴ + c1 u1³u2 + c2 u1²u2² + c3 u1u2³ + c4 u2⁴ with exact coefficients.
    '''

    def __init__(self, coefficients):
        coefficients = tuple(to_rational(c) for c in coefficients)
        if len(coefficients) != 5:
            raise ValueError("A binary quartic has five coefficients, got {}".format(len(coefficients)))
        self.coefficients = coefficients

    def __repr__(self):
        return "BinaryQuartic({})".format(", ".join(str(c) for c in self.coefficients))

    def __eq__(self, other):
        return isinstance(other, BinaryQuartic) and self.coefficients == other.coefficients

    def __ne__(self, other):
        return not self == other

    @classmethod
    def from_expr(cls, expr):
        poly = sympy.Poly(sympy.expand(expr), U1, U2, domain=sympy.QQ)
        if not poly.is_zero and not (poly.is_homogeneous and poly.total_degree() == 4):
            raise ValueError("{} is not a binary quartic form".format(expr))
        return cls([poly.coeff_monomial(U1 ** (4 - k) * U2 ** k) for k in range(5)])

    @property
    def is_zero(self):
        return all(c == 0 for c in self.coefficients)

    def as_expr(self):
        return sum(c * U1 ** (4 - k) * U2 ** k for k, c in enumerate(self.coefficients))

    def dehomogenized(self):
        ''' f(t) = F(t, 1). '''
        return sympy.Poly(sum(c * T ** (4 - k) for k, c in enumerate(self.coefficients)), T, domain=sympy.QQ)


def cartan_quartic(c):
    ''' c (u1² + u2² + u3²)² on the line u3 = -u1 - u2. '''
    c = to_rational(c)
    if c == 0:
        raise ValueError("The quartic constant must be nonzero")
    U3 = -U1 - U2
    return BinaryQuartic.from_expr(c * (U1 ** 2 + U2 ** 2 + U3 ** 2) ** 2)


MULTIPLICITY_NAMES = {1: 'single', 2: 'double', 3: 'triple', 4: 'quadruple'}


class RootType(object):
    '''
    Real root structure of a binary quartic on the projective line.

    real_multiplicities:
        multiplicity of each distinct real root, largest first, including the
        root at infinity u2 = 0.
    '''

    def __init__(self, tag, real_multiplicities, complex_count, factors, sturm_count):
        self.tag = tag
        self.real_multiplicities = real_multiplicities
        self.complex_count = complex_count
        self.factors = factors
        self.sturm_count = sturm_count
        assert sum(real_multiplicities) + complex_count == 4

    def __repr__(self):
        return "RootType({}, real {})".format(self.tag, self.real_multiplicities)

    @property
    def real_count(self):
        return sum(self.real_multiplicities)

    def to_dict(self):
        return dict(tag=self.tag, real_multiplicities=list(self.real_multiplicities),
                    complex_count=self.complex_count, sturm_count=self.sturm_count,
                    factors=self.factors)


def _sign_changes(values):
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(poly):
    ''' Distinct real roots of a univariate Poly by a Sturm sequence. '''
    if poly.degree() <= 0:
        return 0
    chain = sympy.sturm(poly)
    at_plus = [p.LC() for p in chain]
    at_minus = [p.LC() * (-1) ** p.degree() for p in chain]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def classify_quartic(quartic):
    '''
    Exact real root count with multiplicities via the square-free
    decomposition of F(t, 1) and Sturm counting of each factor; the root at
    infinity has multiplicity 4 - deg F(t, 1).
    '''
    if quartic.is_zero:
        raise ZeroQuarticError("The zero quartic has no root structure")
    f = quartic.dehomogenized()
    _, factors = f.sqf_list()
    multiplicities = []
    sturm_count = 0
    for factor, m in factors:
        real = count_real_roots(factor)
        sturm_count += real
        multiplicities += [m] * real
    at_infinity = 4 - f.degree()
    if at_infinity:
        multiplicities.append(at_infinity)
    multiplicities.sort(reverse=True)
    complex_count = 4 - sum(multiplicities)
    assert complex_count % 2 == 0

    if all(m == 1 for m in multiplicities):
        tag = {4: 'four_distinct_real', 2: 'two_real_two_complex', 0: 'no_real'}[len(multiplicities)]
    else:
        tag = "_".join("{}_real".format(MULTIPLICITY_NAMES[m]) for m in multiplicities)
        if complex_count:
            tag += "_two_complex"
    serialized = [dict(factor=str(factor.as_expr()), multiplicity=m) for factor, m in factors]
    logging.debug("Quartic {} classified as {}".format(quartic, tag))
    return RootType(tag, tuple(multiplicities), complex_count, serialized, sturm_count)


def metric_signature(g, point):
    '''
    (positives, negatives) of the Gram matrix of ``g`` at ``point``. ``g`` is
    a ConformalMetric or anything sympy.Matrix accepts.
    '''
    matrix = g.evaluate(point) if hasattr(g, 'evaluate') else sympy.Matrix(g)
    positives, negatives, zeros = signature(matrix)
    if zeros:
        raise DegenerateMetricError("Metric has rank {} of {} at {}".format(
            matrix.rows - zeros, matrix.rows, point))
    return positives, negatives


def conformal_signature(sig):
    ''' A signature up to an overall sign, smaller count first. '''
    return tuple(sorted(sig[:2]))
