'''
Registry of the checks run by ``ants-geometry verify``.

Every check is a function of (RunConfig, Context) returning
``(passed, value)``; ``value`` is reported as text. Checks register under a
stable id and a group, and reports are ordered by id so that equal seeds give
byte-identical output.
'''
import logging
import itertools
import functools
import time

import numpy as np
import pandas as pd
import sympy

from .exact_algebra import (VectorField, DifferentialForm, lie_bracket, top_wedge_determinant,
                            component_matrix)
from . import distribution_analysis as da
from . import ants_models as am
from . import extremals as ex
from . import quartic_metric as qm
from . import utils

GROUPS = ('exact_algebra', 'distribution_analysis', 'ants_models', 'extremals', 'quartic_metric')

_registry = {}


class Check(object):

    def __init__(self, check_id, group, anchor, tolerance, fn):
        self.check_id = check_id
        self.group = group
        self.anchor = anchor
        self.tolerance = tolerance
        self.fn = fn

    def __repr__(self):
        return "Check({})".format(self.check_id)


def check(check_id, group, anchor, tolerance=None):
    '''
    Register a check. ``tolerance`` names a configured tolerance; None means
    the check is an exact identity.
    '''
    assert group in GROUPS
    def decorator(fn):
        if check_id in _registry:
            raise ValueError("Duplicate check id {}".format(check_id))
        _registry[check_id] = Check(check_id, group, anchor, tolerance, fn)
        return fn
    return decorator


def registered(only=None):
    checks = [_registry[k] for k in sorted(_registry)]
    if only:
        only = set(only)
        unknown = only - set(GROUPS) - set(_registry)
        if unknown:
            raise ValueError("Unknown check group or id: {}".format(", ".join(sorted(unknown))))
        checks = [c for c in checks if c.group in only or c.check_id in only]
    return checks


class Context(object):
    ''' Models and trajectories shared between checks, built on first use. '''

    standard_q0 = (0, 0, 1, 0, 0, 1)

    def __init__(self, run):
        self.run = run

    @functools.cached_property
    def rule_a(self):
        return am.build_rule_a()

    @functools.cached_property
    def rule_b(self):
        return am.build_rule_b()

    @functools.cached_property
    def affine(self):
        return am.build_affine_model(self.run.leaf_level)

    @functools.cached_property
    def rule_b_extremal(self):
        lift = ex.hamiltonian_lift(self.rule_b.fields, 'B')
        lam0 = ex.initial_covector(self.rule_b, self.standard_q0, (1, 1, -2))
        return ex.integrate_extremal(lift, self.standard_q0, lam0, self.run.duration, self.run.step,
                                     self.run.tolerances)

    @functools.cached_property
    def reduced_equal(self):
        return ex.integrate_reduced(ex.ReducedState(1, 1, 1, 1j), 0.2, self.run.step, self.run.tolerances)

    @functools.cached_property
    def reduced_split(self):
        return ex.integrate_reduced(ex.ReducedState(2, 1, 1, 1j), 0.1, self.run.step, self.run.tolerances)


def _exact(ok, residual=None):
    if ok:
        return True, "0"
    return False, residual.serialize() if hasattr(residual, 'serialize') else str(residual)


def _growth(d, run):
    flag = da.derived_flag(d, points=run.sample_points, seed=run.seed, bound=run.coordinate_range)
    return flag.growth


def _trivector_minors(fields):
    M = component_matrix(fields)
    return [sympy.expand(M[:, list(cols)].det()) for cols in itertools.combinations(range(M.cols), 3)]


# exact_algebra

@check("rule-a-bracket-formula", 'exact_algebra', "rule A: [Z_i, Z_i+1] = (x_i+1 - x_i+2) d/dx_i + (y_i+1 - y_i+2) d/dy_i")
def _rule_a_brackets(run, ctx):
    chart = am.ANT_CHART
    expected = {}
    for i, key in ((1, '12'), (2, '23'), (3, '31')):
        n, m = (i % 3) + 1, ((i + 1) % 3) + 1
        expected[key] = VectorField(chart, {
            "x{}".format(i): chart.var("x{}".format(n)) - chart.var("x{}".format(m)),
            "y{}".format(i): chart.var("y{}".format(n)) - chart.var("y{}".format(m))})
    bad = [key for key in expected if ctx.rule_a.brackets[key] != expected[key]]
    return _exact(not bad, bad)


@check("rule-a-top-wedge", 'exact_algebra', "rule A: Z1^Z2^Z3^Z12^Z31^Z23 = (32A)^3")
def _rule_a_top_wedge(run, ctx):
    det = top_wedge_determinant(ctx.rule_a.bracket_fields())
    residual = det - ctx.rule_a.area32 ** 3
    return _exact(residual.is_zero, residual)


@check("rule-b-top-wedge", 'exact_algebra', "rule B: the six bracket fields are dependent")
def _rule_b_top_wedge(run, ctx):
    det = top_wedge_determinant(ctx.rule_b.bracket_fields())
    return _exact(det.is_zero, det)


@check("rule-b-relation", 'exact_algebra', "rule B: sum of Z_i - Z_i,i+1 vanishes")
def _rule_b_relation(run, ctx):
    relation = ctx.rule_b.relation()
    return _exact(relation.is_zero, relation)


@check("rule-b-area-differential", 'exact_algebra', "rule B: d(-32A) = w1 + w2 + w3")
def _rule_b_area(run, ctx):
    chart = am.ANT_CHART
    lhs = DifferentialForm.function(chart, -ctx.rule_b.area32).d()
    residual = lhs - sum(ctx.rule_b.forms[1:], ctx.rule_b.forms[0])
    return _exact(residual.is_zero, residual)


@check("sqrt-b-bracket", 'exact_algebra', "rule B: [Z1 - Z2, Z3 - Z1] = -(Z1 + Z2 + Z3), wedge 3 Z3^Z2^Z1")
def _sqrt_bracket(run, ctx):
    z1, z2, z3 = ctx.rule_b.fields
    total = z1 + z2 + z3
    residual = lie_bracket(z1 - z2, z3 - z1) + total
    if not residual.is_zero:
        return False, residual.serialize()
    lhs = _trivector_minors([z1 - z2, z3 - z1, total])
    rhs = [3 * m for m in _trivector_minors([z3, z2, z1])]
    bad = [str(sympy.expand(a - b)) for a, b in zip(lhs, rhs) if sympy.expand(a - b) != 0]
    return _exact(not bad, bad)


# distribution_analysis

def _growth_check(name, model_name, expected, anchor):
    @check(name, 'distribution_analysis', anchor)
    def _fn(run, ctx):
        growth = _growth(am.build_distribution(model_name, run.leaf_level), run)
        return growth == expected, growth
    return _fn


_growth_check("growth-rule-a", 'rule-a', "(3,6)", "rule A is bracket generating with growth (3,6)")
_growth_check("growth-rule-b", 'rule-b', "(3,5)", "rule B has growth (3,5)")
_growth_check("growth-sqrt-b", 'sqrt-b', "(2,3,5)", "square root distribution has growth (2,3,5)")
_growth_check("growth-affine", 'affine', "(2,3,5)", "affine leaf distribution has growth (2,3,5)")
_growth_check("growth-flat36", 'flat36', "(3,6)", "flat model has growth (3,6)")
_growth_check("growth-quadric235", 'quadric235', "(2,3,5)", "quadric model has growth (2,3,5)")


@check("growth-rule-a-collinear", 'distribution_analysis', "rule A at a collinear triangle")
def _collinear(run, ctx):
    found = []
    for q in [(0, 0, 1, 0, 2, 0), (0, 0, 1, 0, 3, 0)]:
        point = dict(zip(am.ANT_CHART.variables, [sympy.Integer(v) for v in q]))
        found.append(da.growth_vector(ctx.rule_a.distribution(), point))
    ok = all(ranks == (3, 3) for ranks in found)
    return ok, " ".join("({})".format(",".join(str(r) for r in ranks)) for ranks in found)


@check("rule-b-derived-integrable", 'distribution_analysis', "rule B: the derived distribution is integrable")
def _derived_integrable(run, ctx):
    ok = da.is_integrable(ctx.rule_b.first_derived())
    return ok, "integrable" if ok else "not integrable"


@check("rule-b-first-integral", 'distribution_analysis', "rule B: first integral 32A")
def _first_integral(run, ctx):
    ok = da.check_first_integral(ctx.rule_b.distribution(), ctx.rule_b.area32)
    return ok, "32A" if ok else "none"


@check("rule-a-symmetries", 'distribution_analysis', "rule A: X1..X8 are symmetries")
def _rule_a_symmetries(run, ctx):
    d = ctx.rule_a.distribution()
    bad = [i + 1 for i, x in enumerate(am.sl3_symmetries()) if not da.is_symmetry(x, d)]
    return _exact(not bad, bad)


@check("rule-a-symmetry-space", 'distribution_analysis', "rule A: polynomial symmetries span sl(3)")
def _rule_a_symmetry_space(run, ctx):
    solutions = da.solve_symmetries(ctx.rule_a.distribution(), run.symmetry_degree)
    known = am.sl3_symmetries()
    combined = len(da.rational_span_basis(solutions + known))
    ok = len(solutions) == 8 and combined == 8
    return ok, "dimension {}".format(len(solutions))


@check("sl3-killing-signature", 'distribution_analysis', "symmetry algebra sl(3): Killing signature (5,3)")
def _killing(run, ctx):
    table = da.structure_constants(am.sl3_symmetries())
    sig = table.killing_signature
    ok = sig == (5, 3, 0) and table.jacobi_residual() == 0
    return ok, "({},{})".format(sig[0], sig[1])


@check("sqrt-b-s-symmetries", 'distribution_analysis', "rule B: S-generators preserve the square root and the area")
def _s_symmetries(run, ctx):
    d = am.square_root_distribution(ctx.rule_b, run.leaf_level)
    bad = [i + 1 for i, x in enumerate(am.area_preserving_symmetries()) if not da.is_symmetry(x, d)]
    return _exact(not bad, bad)


# ants_models

@check("affine-det-invariance", 'ants_models', "moves preserve Det(h)")
def _det_invariance(run, ctx):
    bad = [i + 1 for i, v in enumerate(ctx.affine.V) if not v(ctx.affine.det).is_zero]
    return _exact(not bad, bad)


@check("affine-moves", 'ants_models', "moves satisfy the parallelism constraints")
def _moves(run, ctx):
    bad = [i + 1 for i, v in enumerate(ctx.affine.V) if any(not r.is_zero for r in am.move_residuals(v))]
    return _exact(not bad, bad)


@check("maurer-cartan-decomposition", 'ants_models', "h^-1 dh = sum tau^i E_i")
def _mc(run, ctx):
    lhs, rhs = ctx.affine.maurer_cartan_matrix(), ctx.affine.tau_combination()
    bad = ["{}{}".format(i, j) for i in range(3) for j in range(3) if lhs[i][j] != rhs[i][j]]
    return _exact(not bad, bad)


@check("tau6-leaf-pullback", 'ants_models', "tau^6 vanishes on the leaves Det(h) = s")
def _tau6(run, ctx):
    pulled = ctx.affine.leaf(ctx.affine.tau[5])
    return _exact(pulled.is_zero, pulled)


@check("structure-equations", 'ants_models', "d theta^i: constant coefficient structure equations")
def _structure(run, ctx):
    report = am.verify_structure_equations(ctx.affine, run.mutations)
    if report.passed and report.routes_agree:
        return True, "0"
    return False, utils.dumps(report.offending())


@check("theta-annihilation", 'ants_models', "theta^1..theta^3 vanish on V1 - V3 and V2 - V1")
def _annihilation(run, ctx):
    v1, v2, v3 = ctx.affine.V
    bad = ["theta{}({})".format(i + 1, name) for i in range(3)
           for name, v in (("V1-V3", v1 - v3), ("V2-V1", v2 - v1)) if not ctx.affine.theta[i](v).is_zero]
    return _exact(not bad, bad)


@check("metric-signature", 'ants_models', "conformal metric has signature (2,3)")
def _metric(run, ctx):
    metric = am.conformal_metric(ctx.affine)
    s = ctx.affine.s
    identity = dict(a=1, b=0, p=0, q=s, x=0, y=0)
    points = [identity] + metric.leaf_points(99, run.seed, run.coordinate_range)
    signatures = set(qm.conformal_signature(qm.metric_signature(metric, p)) for p in points)
    return signatures == {(2, 3)}, ";".join("({},{})".format(*sig) for sig in sorted(signatures))


# extremals

@check("lift-brackets", 'extremals', "h_ij = <lambda, [Z_i, Z_j]>")
def _lift(run, ctx):
    bad = []
    for rule, model in (('A', ctx.rule_a), ('B', ctx.rule_b)):
        lift = ex.hamiltonian_lift(model.fields, rule)
        bad += ["{}{}".format(rule, k) for k, v in lift.bracket_residuals().items() if not v.is_zero]
    return _exact(not bad, bad)


def _monitor_check(name, monitor, tolerance, anchor):
    @check(name, 'extremals', anchor, tolerance)
    def _fn(run, ctx):
        value = ctx.rule_b_extremal.monitors[monitor]
        return value <= run.tol(tolerance), utils.exact_str(value)
    return _fn


_monitor_check("extremal-h-drift", 'h_drift', 'drift', "h_i stays zero along extremals")
_monitor_check("extremal-sum", 'inv_sum', 'sum', "rule B: u1 + u2 + u3 = 0 along extremals")
_monitor_check("extremal-product", 'inv_prod', 'drift', "rule B: u1 u2 u3 is a first integral")


@check("extremal-control-law", 'extremals', "controls of an extremal follow the bracket control law", 'control')
def _control_law(run, ctx):
    frame = ctx.rule_b_extremal.frame
    law = ex.bracket_control_system(ctx.rule_b)
    control = ex.integrate_control(law, (1, 1, -2), run.duration, run.step, run.tolerances).frame
    value = float(np.max(np.abs(frame[['u1', 'u2', 'u3']].values - control[['u1', 'u2', 'u3']].values)))
    return value <= run.tol('control'), utils.exact_str(value)


@check("extremal-step-halving", 'extremals', "fourth order: halving the step cuts drift at least 8x")
def _halving(run, ctx):
    lift = ex.hamiltonian_lift(ctx.rule_b.fields, 'B')
    lam0 = ex.initial_covector(ctx.rule_b, ctx.standard_q0, (1, 1, -2))
    coarse = ex.integrate_extremal(lift, ctx.standard_q0, lam0, 0.1, 0.01, run.tolerances)
    fine = ex.integrate_extremal(lift, ctx.standard_q0, lam0, 0.1, 0.005, run.tolerances)
    ratio = coarse.monitors['inv_prod'] / fine.monitors['inv_prod']
    return ratio >= 8, utils.exact_str(ratio)


@check("control-cyclic", 'extremals', "system (B) commutes with cyclic relabelling", 'sum')
def _cyclic(run, ctx):
    a = ex.integrate_control('B', (0.5, 0.25, -0.75), run.duration, run.step).frame
    b = ex.integrate_control('B', (0.25, -0.75, 0.5), run.duration, run.step).frame
    value = float(np.max(np.abs(a[['u2', 'u3', 'u1']].values - b[['u1', 'u2', 'u3']].values)))
    return value <= run.tol('sum'), utils.exact_str(value)


@check("control-sign-pattern", 'extremals', "rule B: controls do not change sign")
def _signs(run, ctx):
    monitors = ex.integrate_control('B', (1, 1, -2), run.duration, run.step).monitors
    return monitors['sign_changes'] == 0, utils.exact_str(monitors['sign_changes'])


@check("vertex-barycenter", 'extremals', "barycenter moves along a straight line", 'drift')
def _barycenter(run, ctx):
    trajectory = ex.integrate_vertices(((0, 0), (1, 0), (0, 1)), (1, 1, -2), run.duration, run.step,
                                       run.tolerances)
    value = trajectory.monitors['bary_second_difference']
    return not trajectory.flagged, utils.exact_str(value)


@check("reduced-invariants", 'extremals', "c = u1 u2 (u1 + u2) and e = u1 z2 - u2 z1 are conserved", 'drift')
def _reduced(run, ctx):
    monitors = ctx.reduced_equal.monitors
    return not ctx.reduced_equal.flagged, utils.exact_str(max(monitors['c'], monitors['e']))


@check("zeta-closed-form", 'extremals', "closed form of zeta by quadrature", 'closed_form')
def _closed_form(run, ctx):
    frame = ctx.reduced_equal.frame
    t = frame['t'].values[-1]
    z1, z2 = ex.zeta_closed_form(ctx.reduced_equal, t)
    end = frame.iloc[-1]
    value = max(abs(z1 - complex(end['zeta1_re'], end['zeta1_im'])),
                abs(z2 - complex(end['zeta2_re'], end['zeta2_im'])))
    return value <= run.tol('closed_form'), utils.exact_str(float(value))


@check("elliptic-time", 'extremals', "time as an elliptic integral on both branches", 'elliptic')
def _elliptic(run, ctx):
    end = ctx.reduced_equal.frame.iloc[-1]
    t, c = end['t'], 2.0
    value = max(abs(ex.elliptic_time(end['u1'], 1, c) - t), abs(-ex.elliptic_time(end['u2'], 1, c) - t))
    return value <= run.tol('elliptic'), utils.exact_str(float(value))


@check("elliptic-residual", 'extremals', "u1' squared = u1 (u1^3 + 4c)", 'elliptic')
def _elliptic_residual(run, ctx):
    value = ex.elliptic_residual(ctx.reduced_equal)
    return value <= run.tol('elliptic'), utils.exact_str(value)


@check("symmetric-exponential", 'extremals', "nu1 = c1 e^s, nu2 = c2 e^-s in the time s", 'exponential')
def _exponential(run, ctx):
    _, residuals = ex.s_substitution(ctx.reduced_split)
    value = max(residuals.values())
    return value <= run.tol('exponential'), utils.exact_str(value)


@check("fuchsian-traceless", 'extremals', "residue matrices are traceless")
def _traceless(run, ctx):
    traces = [m.trace() for _, m in ex.FUCHSIAN_RESIDUES]
    return _exact(all(t == 0 for t in traces), traces)


@check("fuchsian-chain", 'extremals', "Fuchsian system reproduces zeta after both time changes", 'fuchsian')
def _chain(run, ctx):
    value = ex.fuchsian_chain(ctx.reduced_split, run.step)
    return value <= run.tol('fuchsian'), utils.exact_str(value)


@check("fixed-vertex", 'extremals', "one vertex at rest: opposite side parallel, area constant, median fixed")
def _fixed_vertex(run, ctx):
    report = ex.fixed_vertex_trajectory(step=run.step, tolerances=run.tolerances)
    return report.passed, utils.dumps(report.to_dict()['residuals'])


# quartic_metric

@check("cartan-quartic-no-real", 'quartic_metric', "Cartan quartic has no real roots")
def _quartic(run, ctx):
    tags = {str(c): qm.classify_quartic(qm.cartan_quartic(c)).tag
            for c in (1, -1, sympy.Rational(7, 3), sympy.Rational(-7, 3))}
    return all(tag == 'no_real' for tag in tags.values()), utils.dumps(tags)


@check("cartan-quartic-cyclic", 'quartic_metric', "Cartan quartic is invariant under cyclic permutation")
def _quartic_cyclic(run, ctx):
    u1, u2 = qm.U1, qm.U2
    shifted = qm.BinaryQuartic.from_expr(((u1 ** 2 + u2 ** 2 + (u1 + u2) ** 2) ** 2).subs(
        {u1: u2, u2: -u1 - u2}, simultaneous=True))
    ok = shifted == qm.cartan_quartic(1)
    return ok, ",".join(str(c) for c in shifted.coefficients)


def _random_triangles(run, count=10):
    generator = utils.rng(run.seed)
    triangles = []
    while len(triangles) < count:
        t = [(utils.random_rational(generator, run.coordinate_range),
              utils.random_rational(generator, run.coordinate_range)) for _ in range(3)]
        if qm.triangle_area(t) != 0:
            triangles.append(t)
    return triangles


@check("steiner-ellipse", 'quartic_metric', "circumellipse through the vertices with tangents parallel to the sides")
def _steiner(run, ctx):
    bad = 0
    for t in _random_triangles(run):
        e = qm.steiner_circumellipse(t)
        ok = all(e.contains(p) for p in t) and all(r == 0 for r in qm.tangent_residuals(e, t)) and \
            e.conic() == qm.conic_through(t)
        bad += not ok
    return bad == 0, "{} failures".format(bad)


@check("steiner-affine", 'quartic_metric', "circumellipse commutes with affine maps")
def _steiner_affine(run, ctx):
    generator = utils.rng(run.seed + 1)
    bad = 0
    for t in _random_triangles(run):
        a = utils.random_rational(generator, 5)
        if a == 0:
            a = sympy.Integer(1)
        b, c = utils.random_rational(generator, 5), utils.random_rational(generator, 5)
        A = sympy.Matrix([[a, b], [c, (1 + b * c) / a]])
        shift = [utils.random_rational(generator, 5), utils.random_rational(generator, 5)]
        image = [tuple(A * sympy.Matrix(p) + sympy.Matrix(shift)) for p in t]
        bad += qm.steiner_circumellipse(image) != qm.affine_image(qm.steiner_circumellipse(t), A, shift)
    return bad == 0, "{} failures".format(bad)


@check("speed-constant", 'quartic_metric', "speed is a constant multiple of the sum of u_i^2", 'speed_spread')
def _speed(run, ctx):
    k, spread, _ = qm.speed_constant(seed=run.seed, bound=run.coordinate_range)
    if k != 1:
        logging.warning("Speed constant is {}, not 1".format(k))
    return spread <= run.tol('speed_spread'), "k={}".format(k)


class CheckResult(object):

    def __init__(self, check, status, value, tolerance, runtime_ms=None):
        self.check = check
        self.status = status
        self.value = value
        self.tolerance = tolerance
        self.runtime_ms = runtime_ms

    def to_dict(self):
        return dict(check_id=self.check.check_id, anchor=self.check.anchor, group=self.check.group,
                    status=self.status, residual_or_value=self.value, tolerance=self.tolerance,
                    runtime_ms=self.runtime_ms)


def run_checks(run, only=None, timings=False):
    '''
    :return: list of CheckResult, ordered by check id.
    '''
    ctx = Context(run)
    results = []
    for c in registered(only):
        tolerance = "0" if c.tolerance is None else utils.exact_str(run.tol(c.tolerance))
        started = time.perf_counter()
        try:
            passed, value = c.fn(run, ctx)
            status = 'pass' if passed else 'fail'
        except Exception as e:
            logging.error("Check {} raised {}: {}".format(c.check_id, type(e).__name__, e))
            status, value = 'error', "{}: {}".format(type(e).__name__, e)
        elapsed = round((time.perf_counter() - started) * 1000, 3) if timings else None
        logging.debug("{} {} ({})".format(c.check_id, status, value))
        results.append(CheckResult(c, status, str(value), tolerance, elapsed))
    return results


def report(run, results):
    ''' The verify report: manifest, summary counts and one row per check. '''
    frame = pd.DataFrame([r.to_dict() for r in results])
    summary = frame['status'].value_counts().to_dict() if len(frame) else {}
    return dict(manifest=run.manifest(),
                summary={k: int(v) for k, v in sorted(summary.items())},
                passed=all(r.status == 'pass' for r in results),
                checks=[r.to_dict() for r in results])
