import logging
import os
from fractions import Fraction

import numpy as np
import sympy

try:
    import rapidjson as json
except ImportError:
    import json

from .exact_algebra import MultiPoly, VectorField


def rng(seed):
    ''' A seeded numpy generator; every random choice in the package goes through one. '''
    return np.random.default_rng(seed)


def random_rational(generator, bound=10, max_den=7):
    '''
    :param generator: numpy Generator.
    :return: a sympy Rational in [-bound, bound] with denominator at most max_den.
    '''
    den = int(generator.integers(1, max_den + 1))
    num = int(generator.integers(-bound * den, bound * den + 1))
    return sympy.Rational(num, den)


def random_point(chart, generator, bound=10):
    return {name: random_rational(generator, bound) for name in chart.variables}


def random_poly(chart, generator, degree=2, terms=4, bound=5):
    '''
    A random polynomial of total degree at most ``degree`` with small integer
    coefficients, used for fuzzing the calculus.
    '''
    rep = {}
    for _ in range(terms):
        exps = [0] * len(chart)
        for _ in range(int(generator.integers(0, degree + 1))):
            exps[int(generator.integers(0, len(chart)))] += 1
        rep[tuple(exps)] = rep.get(tuple(exps), 0) + int(generator.integers(-bound, bound + 1))
    return MultiPoly.from_terms(chart, rep)


def random_field(chart, generator, degree=2):
    return VectorField(chart, [random_poly(chart, generator, degree) for _ in chart.variables])


def exact_str(value):
    ''' Stable text for exact or float values in reports. '''
    if isinstance(value, (sympy.Rational, Fraction, int)):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True)


def write_json(obj, path):
    '''
    Write ``obj`` as sorted, indented JSON. A path of None or '-' returns
    the text instead of writing it.
    '''
    text = dumps(obj)
    if path is None or path == '-':
        return text
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, mode='w') as f:
        f.write(text + "\n")
    logging.debug("Wrote {}".format(path))
    return text


def read_json(path):
    with open(path) as f:
        return json.loads(f.read())
