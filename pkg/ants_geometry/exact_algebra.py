'''
Exact calculus on named coordinate charts.

Polynomials and rational functions have coefficients in the rationals and are
backed by sympy's ``Poly`` over ``QQ``; vector fields and differential forms
carry one rational function per component. Every object here is immutable and
every operation returns a new object.
'''
from __future__ import unicode_literals

import logging
import functools
from fractions import Fraction

import numpy as np
import sympy
from sympy import Poly, QQ


class ChartMismatchError(Exception):
    pass


class ArityError(Exception):
    pass


class SingularSubstitutionError(Exception):
    pass


class SingularPointError(Exception):

    def __init__(self, denominator, point=None):
        self.denominator = denominator
        self.point = point
        msg = "Denominator {} vanishes".format(denominator)
        if point is not None:
            msg += " at {}".format(point)
        super(SingularPointError, self).__init__(msg)


def to_rational(value):
    '''
    Convert an exact number (int, Fraction, sympy Rational or a string such
    as "3/2") to a sympy Rational. Floats are refused.
    '''
    if isinstance(value, sympy.Rational):
        return value
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, (int, np.integer)):
        return sympy.Integer(int(value))
    if isinstance(value, str):
        return sympy.Rational(value)
    if isinstance(value, (float, np.floating)):
        raise TypeError("Refusing to convert float {} to an exact rational".format(value))
    converted = sympy.sympify(value)
    if converted.is_Rational:
        return converted
    raise TypeError("Not an exact rational: {!r}".format(value))


def is_exact(value):
    return isinstance(value, (int, np.integer, Fraction, sympy.Rational)) or \
        (isinstance(value, str) and "." not in value)


class Chart(object):
    '''
    An ordered tuple of distinct coordinate names. Charts compare by their
    names, and objects living on different charts never mix.
    '''

    def __init__(self, variables):
        if isinstance(variables, str):
            variables = variables.split()
        names = tuple(str(v) for v in variables)
        if len(names) == 0:
            raise ValueError("A chart needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError("Chart variables must be distinct: {}".format(names))
        self.variables = names
        self.symbols = tuple(sympy.Symbol(name) for name in names)

    def __len__(self):
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.variables == other.variables

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(('Chart', self.variables))

    def __repr__(self):
        return "Chart({})".format(", ".join(self.variables))

    def index(self, name):
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError("{} is not a variable of {!r}".format(name, self))

    def extend(self, names):
        return Chart(self.variables + tuple(names))

    def var(self, name):
        return MultiPoly.from_expr(self, self.symbols[self.index(name)])

    def vars(self):
        return tuple(self.var(name) for name in self.variables)

    def const(self, value):
        return MultiPoly.from_expr(self, to_rational(value))

    def partial(self, name):
        return VectorField.coordinate(self, name)

    def d(self, name):
        return DifferentialForm.differential(self, name)


def _check_chart(a, b):
    if a != b:
        raise ChartMismatchError("Cannot combine objects on {!r} and {!r}".format(a, b))


def _point_values(chart, point):
    if isinstance(point, dict):
        missing = [name for name in chart.variables if name not in point]
        if missing:
            raise ArityError("Point does not assign {}".format(", ".join(missing)))
        return [point[name] for name in chart.variables]
    values = list(point)
    if len(values) != len(chart):
        raise ArityError("Point has {} values, chart {!r} has {}".format(
            len(values), chart, len(chart)))
    return values


def _format_monomial(chart, monom):
    factors = []
    for name, exp in zip(chart.variables, monom):
        if exp == 1:
            factors.append(name)
        elif exp > 1:
            factors.append("{}^{}".format(name, exp))
    return "*".join(factors)


def _format_terms(chart, terms):
    if not terms:
        return "0"
    out = []
    for i, (monom, coeff) in enumerate(terms):
        mono = _format_monomial(chart, monom)
        magnitude = abs(coeff)
        if mono == "":
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = "{}*{}".format(magnitude, mono)
        if i == 0:
            out.append(body if coeff > 0 else "-" + body)
        else:
            out.append(" {} {}".format("+" if coeff > 0 else "-", body))
    return "".join(out)


class MultiPoly(object):
    '''
    A polynomial with rational coefficients on a chart. ``poly`` is a sympy
    ``Poly`` whose generators are the chart symbols, in chart order.
    '''

    def __init__(self, chart, poly):
        assert tuple(poly.gens) == chart.symbols
        self.chart = chart
        self.poly = poly

    @classmethod
    def from_expr(cls, chart, expr):
        return cls(chart, Poly(expr, *chart.symbols, domain=QQ))

    @classmethod
    def from_terms(cls, chart, terms):
        ''' Build from a mapping of exponent tuples to exact coefficients. '''
        rep = {tuple(monom): to_rational(c) for monom, c in terms.items() if c != 0}
        if not rep:
            return cls.from_expr(chart, 0)
        return cls(chart, Poly.from_dict(rep, *chart.symbols, domain=QQ))

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            _check_chart(self.chart, other.chart)
            return other
        if isinstance(other, (RationalFn, VectorField, DifferentialForm)):
            return NotImplemented
        try:
            return self.chart.const(other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.chart, self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.chart, self.poly - other.poly)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return MultiPoly(self.chart, self.poly * other.poly)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly(self.chart, -self.poly)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return RationalFn(self) ** n
        return MultiPoly(self.chart, self.poly ** n)

    def __truediv__(self, other):
        return RationalFn(self) / other

    def __rtruediv__(self, other):
        return other / RationalFn(self)

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return other == self
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.poly == other.poly

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.chart, tuple(self.poly.terms())))

    def __repr__(self):
        return "MultiPoly({})".format(self.serialize())

    def __str__(self):
        return self.serialize()

    @property
    def is_zero(self):
        return self.poly.is_zero

    @property
    def is_ground(self):
        return self.poly.is_ground

    def terms(self):
        ''' Nonzero terms in descending graded-lexicographic order. '''
        if self.poly.is_zero:
            return []
        return self.poly.terms(order='grlex')

    def total_degree(self):
        return self.poly.total_degree()

    def leading_coefficient(self):
        return self.poly.LC(order='grlex')

    def diff(self, name):
        return MultiPoly(self.chart, self.poly.diff(self.chart.symbols[self.chart.index(name)]))

    def as_expr(self):
        return self.poly.as_expr()

    def serialize(self):
        return _format_terms(self.chart, self.terms())

    @functools.cached_property
    def _numeric(self):
        return sympy.lambdify(self.chart.symbols, self.as_expr(), 'numpy')

    def evaluate(self, point):
        values = _point_values(self.chart, point)
        if all(is_exact(v) for v in values):
            return self.poly.eval(tuple(to_rational(v) for v in values))
        return float(self._numeric(*[float(v) for v in values]))

    def substitute(self, bindings):
        return RationalFn(self).substitute(bindings)


def _normalize(num, den):
    if num.is_zero:
        return num, den.one
    if not den.is_ground:
        g = num.gcd(den)
        if not g.is_ground:
            num = num.exquo(g)
            den = den.exquo(g)
    lc = den.LC(order='grlex')
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


class RationalFn(object):
    '''
    A quotient of polynomials, kept reduced with a denominator whose
    graded-lex leading coefficient is 1. The reduced form is unique, so
    equality is structural.
    '''

    def __init__(self, num, den=None, normalized=False):
        if not isinstance(num, MultiPoly):
            raise TypeError("RationalFn numerator must be a MultiPoly, got {!r}".format(num))
        chart = num.chart
        if den is None:
            den = chart.const(1)
        elif not isinstance(den, MultiPoly):
            den = chart.const(den)
        _check_chart(chart, den.chart)
        if den.is_zero:
            raise ZeroDivisionError("RationalFn with zero denominator")
        if normalized:
            n, d = num.poly, den.poly
        else:
            n, d = _normalize(num.poly, den.poly)
        self.chart = chart
        self.num = MultiPoly(chart, n)
        self.den = MultiPoly(chart, d)

    @classmethod
    def from_expr(cls, chart, expr):
        num, den = sympy.fraction(sympy.cancel(sympy.together(sympy.sympify(expr))))
        return cls(MultiPoly.from_expr(chart, num), MultiPoly.from_expr(chart, den))

    @classmethod
    def lift(cls, chart, value):
        ''' Coerce a MultiPoly, RationalFn or exact number onto ``chart``. '''
        if isinstance(value, RationalFn):
            _check_chart(chart, value.chart)
            return value
        if isinstance(value, MultiPoly):
            _check_chart(chart, value.chart)
            return cls(value, normalized=True)
        return cls(chart.const(value), normalized=True)

    def _coerce(self, other):
        if isinstance(other, (VectorField, DifferentialForm)):
            return NotImplemented
        try:
            return RationalFn.lift(self.chart, other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den.poly == other.den.poly:
            return RationalFn(MultiPoly(self.chart, self.num.poly + other.num.poly), self.den)
        return RationalFn(
            MultiPoly(self.chart, self.num.poly * other.den.poly + other.num.poly * self.den.poly),
            MultiPoly(self.chart, self.den.poly * other.den.poly))

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFn(
            MultiPoly(self.chart, self.num.poly * other.num.poly),
            MultiPoly(self.chart, self.den.poly * other.den.poly))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("Division by the zero rational function")
        return RationalFn(
            MultiPoly(self.chart, self.num.poly * other.den.poly),
            MultiPoly(self.chart, self.den.poly * other.num.poly))

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("Only integer powers of rational functions are exact")
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("Negative power of the zero rational function")
            return RationalFn(self.den, self.num) ** (-n)
        return RationalFn(self.num ** n, self.den ** n, normalized=True)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.num.poly == other.num.poly and self.den.poly == other.den.poly

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        if self.den.poly.is_one:
            return hash(self.num)
        return hash((self.num, self.den))

    def __repr__(self):
        return "RationalFn({})".format(self.serialize())

    def __str__(self):
        return self.serialize()

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.is_ground

    def as_poly(self):
        if not self.is_polynomial:
            raise ValueError("{} is not a polynomial".format(self.serialize()))
        return self.num

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def diff(self, name):
        n, d = self.num, self.den
        if d.is_ground:
            return RationalFn(n.diff(name), d, normalized=True)
        return RationalFn(n.diff(name) * d - n * d.diff(name), d * d)

    def serialize(self):
        if self.den.poly.is_one:
            return self.num.serialize()
        return "({})/({})".format(self.num.serialize(), self.den.serialize())

    def evaluate(self, point):
        den = self.den.evaluate(point)
        if den == 0:
            raise SingularPointError(self.den.serialize(), point)
        return self.num.evaluate(point) / den

    def substitute(self, bindings):
        '''
        Compose with ``bindings`` (variable name -> RationalFn, MultiPoly or
        number). Unbound variables are left alone.
        '''
        mapping = _binding_exprs(self.chart, bindings)
        if not mapping:
            return self
        num = RationalFn.from_expr(self.chart, self.num.as_expr().xreplace(mapping))
        den = RationalFn.from_expr(self.chart, self.den.as_expr().xreplace(mapping))
        if den.is_zero:
            raise SingularSubstitutionError("Denominator {} vanishes under {}".format(
                self.den.serialize(), {k: str(v) for k, v in bindings.items()}))
        return num / den


def _binding_exprs(chart, bindings):
    mapping = {}
    for name, value in bindings.items():
        value = RationalFn.lift(chart, value)
        mapping[chart.symbols[chart.index(name)]] = value.as_expr()
    return mapping


def _lift_all(chart, values):
    return tuple(RationalFn.lift(chart, v) for v in values)


class VectorField(object):
    '''
    A vector field with one rational-function component per chart variable.
    '''

    def __init__(self, chart, components):
        if isinstance(components, dict):
            unknown = set(components) - set(chart.variables)
            if unknown:
                raise KeyError("Unknown variables {} for {!r}".format(sorted(unknown), chart))
            components = [components.get(name, 0) for name in chart.variables]
        components = list(components)
        if len(components) != len(chart):
            raise ArityError("Vector field needs {} components, got {}".format(len(chart), len(components)))
        self.chart = chart
        self.components = _lift_all(chart, components)

    @classmethod
    def coordinate(cls, chart, name):
        return cls(chart, {name: 1})

    @classmethod
    def zero(cls, chart):
        return cls(chart, [0] * len(chart))

    def __getitem__(self, name):
        return self.components[self.chart.index(name)]

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_chart(self.chart, other.chart)
        return VectorField(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return VectorField(self.chart, [-a for a in self.components])

    def __mul__(self, scalar):
        if isinstance(scalar, (VectorField, DifferentialForm)):
            return NotImplemented
        scalar = RationalFn.lift(self.chart, scalar)
        return VectorField(self.chart, [scalar * a for a in self.components])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.chart == other.chart and \
            self.components == other.components

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.chart, self.components))

    def __repr__(self):
        return "VectorField({})".format(self.serialize())

    def __call__(self, f):
        ''' Directional derivative of a function along the field. '''
        f = RationalFn.lift(self.chart, f)
        total = RationalFn.lift(self.chart, 0)
        for name, comp in zip(self.chart.variables, self.components):
            if not comp.is_zero:
                total = total + comp * f.diff(name)
        return total

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.components)

    @property
    def is_polynomial(self):
        return all(c.is_polynomial for c in self.components)

    def serialize(self):
        parts = ["({})*d/d{}".format(c.serialize(), name)
                 for name, c in zip(self.chart.variables, self.components) if not c.is_zero]
        return " + ".join(parts) if parts else "0"

    def evaluate(self, point):
        values = [c.evaluate(point) for c in self.components]
        if all(isinstance(v, sympy.Rational) for v in values):
            return values
        return np.array([float(v) for v in values])

    def substitute(self, bindings):
        return VectorField(self.chart, [c.substitute(bindings) for c in self.components])


def _sort_with_sign(indices):
    '''
    Sort a tuple of indices; return (sign, sorted) or (0, None) when an index
    repeats.
    '''
    if len(set(indices)) != len(indices):
        return 0, None
    inversions = sum(1 for i in range(len(indices)) for j in range(i + 1, len(indices))
                     if indices[i] > indices[j])
    return (-1 if inversions % 2 else 1), tuple(sorted(indices))


class DifferentialForm(object):
    '''
    A k-form stored as a map from strictly increasing index tuples to
    rational-function coefficients. Zero coefficients are never stored.
    '''

    def __init__(self, chart, degree, terms=None):
        self.chart = chart
        self.degree = degree
        clean = {}
        for key, coeff in (terms or {}).items():
            key = tuple(chart.index(k) if isinstance(k, str) else int(k) for k in key)
            if len(key) != degree:
                raise ArityError("Term {} does not have degree {}".format(key, degree))
            if any(k < 0 or k >= len(chart) for k in key):
                raise ArityError("Index out of range in {}".format(key))
            sign, key = _sort_with_sign(key)
            if sign == 0:
                continue
            coeff = RationalFn.lift(chart, coeff)
            if sign < 0:
                coeff = -coeff
            clean[key] = clean[key] + coeff if key in clean else coeff
        self.terms = {k: v for k, v in clean.items() if not v.is_zero}

    @classmethod
    def function(cls, chart, f):
        return cls(chart, 0, {(): f})

    @classmethod
    def differential(cls, chart, name):
        return cls(chart, 1, {(chart.index(name),): 1})

    @classmethod
    def one_form(cls, chart, coefficients):
        ''' Σ c_k dx_k from a sequence or a name -> coefficient mapping. '''
        if isinstance(coefficients, dict):
            return cls(chart, 1, {(name,): c for name, c in coefficients.items()})
        return cls(chart, 1, {(k,): c for k, c in enumerate(coefficients)})

    @classmethod
    def zero(cls, chart, degree):
        return cls(chart, degree, {})

    def __getitem__(self, key):
        key = tuple(self.chart.index(k) if isinstance(k, str) else k for k in key)
        sign, key = _sort_with_sign(key)
        if sign == 0 or key not in self.terms:
            return RationalFn.lift(self.chart, 0)
        return self.terms[key] if sign > 0 else -self.terms[key]

    def _combine(self, other, sign):
        if not isinstance(other, DifferentialForm):
            if other == 0:
                return self
            return NotImplemented
        _check_chart(self.chart, other.chart)
        if self.degree != other.degree:
            if self.is_zero:
                return other if sign > 0 else -other
            if other.is_zero:
                return self
            raise ArityError("Cannot add forms of degree {} and {}".format(self.degree, other.degree))
        terms = dict(self.terms)
        for key, coeff in other.terms.items():
            coeff = coeff if sign > 0 else -coeff
            terms[key] = terms[key] + coeff if key in terms else coeff
        return DifferentialForm(self.chart, self.degree, terms)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return DifferentialForm(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, (VectorField, DifferentialForm)):
            return NotImplemented
        scalar = RationalFn.lift(self.chart, scalar)
        return DifferentialForm(self.chart, self.degree, {k: scalar * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = RationalFn.lift(self.chart, scalar)
        return self * (RationalFn.lift(self.chart, 1) / scalar)

    def __xor__(self, other):
        return self.wedge(other)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return other == 0 and self.is_zero
        if self.chart != other.chart:
            return False
        if self.is_zero and other.is_zero:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.chart, self.degree, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return "DifferentialForm({})".format(self.serialize())

    def __call__(self, *fields):
        ''' Evaluate the k-form on k vector fields. '''
        if len(fields) != self.degree:
            raise ArityError("A {}-form takes {} vector fields".format(self.degree, self.degree))
        form = self
        for v in fields:
            form = form.contract(v)
        return form[()]

    @property
    def is_zero(self):
        return not self.terms

    def wedge(self, other):
        _check_chart(self.chart, other.chart)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                sign, key = _sort_with_sign(k1 + k2)
                if sign == 0:
                    continue
                coeff = c1 * c2
                if sign < 0:
                    coeff = -coeff
                terms[key] = terms[key] + coeff if key in terms else coeff
        return DifferentialForm(self.chart, self.degree + other.degree, terms)

    def d(self):
        terms = {}
        for key, coeff in self.terms.items():
            for j, name in enumerate(self.chart.variables):
                if j in key:
                    continue
                partial = coeff.diff(name)
                if partial.is_zero:
                    continue
                sign, new_key = _sort_with_sign((j,) + key)
                if sign < 0:
                    partial = -partial
                terms[new_key] = terms[new_key] + partial if new_key in terms else partial
        return DifferentialForm(self.chart, self.degree + 1, terms)

    def contract(self, v):
        ''' Interior product: the (k-1)-form ω(v, ·, ..., ·). '''
        _check_chart(self.chart, v.chart)
        if self.degree == 0:
            return DifferentialForm.zero(self.chart, 0)
        terms = {}
        for key, coeff in self.terms.items():
            for m, idx in enumerate(key):
                comp = v.components[idx]
                if comp.is_zero:
                    continue
                term = coeff * comp
                if m % 2:
                    term = -term
                rest = key[:m] + key[m + 1:]
                terms[rest] = terms[rest] + term if rest in terms else term
        return DifferentialForm(self.chart, self.degree - 1, terms)

    def evaluate(self, point):
        return {key: coeff.evaluate(point) for key, coeff in sorted(self.terms.items())}

    def substitute(self, bindings):
        '''
        Pullback along ``bindings``: coefficients are composed and every bound
        differential dx is replaced by d(binding).
        '''
        if not bindings:
            return self
        replaced = {}
        for name, value in bindings.items():
            replaced[self.chart.index(name)] = DifferentialForm.function(
                self.chart, RationalFn.lift(self.chart, value)).d()
        total = DifferentialForm.zero(self.chart, self.degree)
        for key, coeff in self.terms.items():
            piece = DifferentialForm.function(self.chart, coeff.substitute(bindings))
            for idx in key:
                factor = replaced.get(idx)
                if factor is None:
                    factor = DifferentialForm(self.chart, 1, {(idx,): 1})
                piece = piece.wedge(factor)
            total = total + piece
        return total

    def serialize(self):
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            coeff = self.terms[key].serialize()
            if key:
                basis = "∧".join("d" + self.chart.variables[i] for i in key)
                parts.append("({}) {}".format(coeff, basis))
            else:
                parts.append("({})".format(coeff))
        return " + ".join(parts)


def lie_bracket(v, w):
    '''
    [v, w] with components v(w^k) - w(v^k).
    '''
    _check_chart(v.chart, w.chart)
    comps = []
    for vk, wk in zip(v.components, w.components):
        comps.append(v(wk) - w(vk))
    return VectorField(v.chart, comps)


def exterior_derivative(form):
    if isinstance(form, (MultiPoly, RationalFn)):
        form = DifferentialForm.function(form.chart, form)
    return form.d()


def wedge(alpha, beta, *more):
    result = alpha.wedge(beta)
    for gamma in more:
        result = result.wedge(gamma)
    return result


def contract(v, form):
    return form.contract(v)


def component_matrix(fields):
    return sympy.Matrix([[c.as_expr() for c in v.components] for v in fields])


def top_wedge_determinant(fields):
    '''
    Coefficient of v_1 ∧ ... ∧ v_n against ∂_1 ∧ ... ∧ ∂_n, i.e. the
    determinant of the component matrix whose rows are the fields, with
    columns in chart order.
    '''
    fields = list(fields)
    if not fields:
        raise ArityError("No fields given")
    chart = fields[0].chart
    for v in fields:
        _check_chart(chart, v.chart)
    if len(fields) != len(chart):
        raise ArityError("Need {} fields on {!r}, got {}".format(len(chart), chart, len(fields)))
    det = component_matrix(fields).det(method='berkowitz')
    result = RationalFn.from_expr(chart, det)
    logging.debug("Top wedge of {} fields: {}".format(len(fields), result.serialize()))
    if result.is_polynomial:
        return result.as_poly()
    return result


def evaluate(obj, point):
    return obj.evaluate(point)


def substitute(obj, bindings):
    return obj.substitute(bindings)


def serialize(obj):
    return obj.serialize()
