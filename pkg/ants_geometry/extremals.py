'''
Singular extremals of the ant distributions and their reductions.

The Hamiltonian lift lives on a doubled chart (configuration plus fiber
coordinates l1..l6). Trajectories are integrated with the classical
fourth-order Runge-Kutta scheme on a fixed grid, and every integrator records
drift monitors for its conserved quantities; a breach flags the trajectory.
'''
import logging
import functools

import numpy as np
import pandas as pd
import sympy
from scipy import integrate

from .exact_algebra import MultiPoly, lie_bracket, to_rational, is_exact
from .distribution_analysis import rational_coordinates, ClosureError
from .config import config
from . import utils

# u_1 = h_23, u_2 = h_31, u_3 = h_12
CONTROL_PAIRS = (('23', 1, 2), ('31', 2, 0), ('12', 0, 1))

VERTEX_COLUMNS = ['x1', 'y1', 'x2', 'y2', 'x3', 'y3']
CSV_COLUMNS = (['t'] + VERTEX_COLUMNS + ['l{}'.format(k) for k in range(1, 7)] +
               ['u1', 'u2', 'u3', 'inv_sum', 'inv_prod', 'bary_x', 'bary_y'])


class CovectorError(Exception):
    pass


class PoleCrossingError(Exception):
    pass


class SingularQuadratureError(Exception):
    pass


class SingularTrajectoryError(Exception):
    pass


def _tolerances(tolerances):
    merged = dict(config().get('tolerances', {}))
    merged.update(tolerances or {})
    return {k: float(v) for k, v in merged.items()}


def _grid(duration, step):
    if not step > 0:
        raise ValueError("step must be positive, got {}".format(step))
    steps = max(1, int(round(abs(duration) / step)))
    return steps, duration / steps


def rk4(rhs, y0, t0, duration, step):
    '''
    Classical fourth-order Runge-Kutta on a fixed grid that lands exactly on
    t0 + duration. ``rhs(t, y)`` returns an array shaped like y.

    :return: (times, states) arrays.
    '''
    steps, h = _grid(duration, step)
    y = np.array(y0)
    states = np.empty((steps + 1,) + y.shape, dtype=y.dtype)
    states[0] = y
    times = t0 + h * np.arange(steps + 1)
    for n in range(steps):
        t = times[n]
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise SingularTrajectoryError("Trajectory left every bounded region near t = {:.6g}".format(t + h))
        states[n + 1] = y
    logging.debug("RK4: {} steps of {:.3g}".format(steps, h))
    return times, states


class Trajectory(object):
    '''
    A sampled trajectory with its monitors.

    frame:
        pandas DataFrame, one row per grid time.
    monitors:
        name -> largest observed drift or residual.
    flags:
        monitors that exceeded their tolerance.
    '''

    def __init__(self, kind, frame, monitors=None, flags=None, settings=None):
        self.kind = kind
        self.frame = frame
        self.monitors = monitors or {}
        self.flags = flags or []
        self.settings = settings or {}

    def __repr__(self):
        return "Trajectory({}, {} rows{})".format(self.kind, len(self.frame),
                                                  ", flagged" if self.flagged else "")

    @property
    def flagged(self):
        return bool(self.flags)

    def to_csv(self, path=None):
        return self.frame.to_csv(path, index=False, float_format="%.17g")

    def manifest(self):
        return dict(kind=self.kind, rows=len(self.frame), settings=self.settings,
                    monitors={k: float(v) for k, v in sorted(self.monitors.items())},
                    flags=list(self.flags))


def _check(monitors, tolerances, pairs):
    flags = []
    for monitor, tol_name in pairs:
        if monitors[monitor] > tolerances[tol_name]:
            flags.append(monitor)
            logging.warning("Monitor {} = {:.3g} exceeds tolerance {} = {:.3g}".format(
                monitor, monitors[monitor], tol_name, tolerances[tol_name]))
    return flags


def _second_difference(values):
    if len(values) < 3:
        return 0.0
    return float(np.max(np.abs(np.diff(values, n=2, axis=0))))


class HamiltonianLift(object):
    '''
    h_i(q, λ) = ⟨λ, Z_i(q)⟩ on the doubled chart, with the Poisson brackets
    h_23, h_31, h_12 computed symbolically.
    '''

    def __init__(self, fields, rule=None):
        fields = list(fields)
        if len(fields) != 3:
            raise ValueError("A lift needs three fields, got {}".format(len(fields)))
        self.fields = fields
        self.rule = rule
        self.base = fields[0].chart
        self.fiber = tuple("l{}".format(k + 1) for k in range(len(self.base)))
        self.chart = self.base.extend(self.fiber)
        self.h = tuple(self.pairing(v) for v in fields)
        self.brackets = {key: self.poisson(self.h[i], self.h[j]) for key, i, j in CONTROL_PAIRS}

    def __repr__(self):
        return "HamiltonianLift(rule {})".format(self.rule)

    def _lift(self, value):
        if not value.is_polynomial:
            raise ValueError("Only polynomial fields can be lifted, got {}".format(value.serialize()))
        return MultiPoly.from_expr(self.chart, value.num.as_expr() / value.den.as_expr())

    def pairing(self, v):
        ''' ⟨λ, v(q)⟩ as a polynomial on the doubled chart. '''
        total = self.chart.const(0)
        for name, comp in zip(self.fiber, v.components):
            if not comp.is_zero:
                total = total + self.chart.var(name) * self._lift(comp)
        return total

    def poisson(self, f, g):
        total = self.chart.const(0)
        for q, l in zip(self.base.variables, self.fiber):
            total = total + f.diff(l) * g.diff(q) - f.diff(q) * g.diff(l)
        return total

    @property
    def controls(self):
        ''' (h_23, h_31, h_12) '''
        return tuple(self.brackets[key] for key, _, _ in CONTROL_PAIRS)

    def bracket_residuals(self):
        ''' h_ij - ⟨λ, [Z_i, Z_j]⟩ for each pair; all zero. '''
        return {key: self.brackets[key] - self.pairing(lie_bracket(self.fields[i], self.fields[j]))
                for key, i, j in CONTROL_PAIRS}

    @functools.cached_property
    def field(self):
        '''
        Components of h_23 h⃗_1 + h_31 h⃗_2 + h_12 h⃗_3, configuration first.
        '''
        u = self.controls
        dq = [sum((ui * hi.diff(l) for ui, hi in zip(u, self.h)), self.chart.const(0)) for l in self.fiber]
        dl = [-sum((ui * hi.diff(q) for ui, hi in zip(u, self.h)), self.chart.const(0))
              for q in self.base.variables]
        return dq + dl

    def derivative(self, f):
        ''' Derivative of ``f`` along the extremal field. '''
        total = self.chart.const(0)
        for name, comp in zip(self.chart.variables, self.field):
            total = total + comp * f.diff(name)
        return total

    @functools.cached_property
    def _numeric(self):
        exprs = [p.as_expr() for p in self.field]
        return sympy.lambdify(self.chart.symbols, exprs, 'numpy')

    @functools.cached_property
    def _numeric_monitors(self):
        exprs = [p.as_expr() for p in self.h + self.controls]
        return sympy.lambdify(self.chart.symbols, exprs, 'numpy')

    def rhs(self, state):
        return np.array([float(v) for v in self._numeric(*state)])

    def monitor_values(self, states):
        ''' h_1, h_2, h_3, u_1, u_2, u_3 evaluated row by row. '''
        columns = self._numeric_monitors(*states.T)
        return np.column_stack([np.broadcast_to(np.asarray(c, dtype=float), (len(states),))
                                for c in columns])


def hamiltonian_lift(fields, rule=None):
    return HamiltonianLift(fields, rule)


class ExtremalState(object):

    def __init__(self, t, q, lam):
        self.t = t
        self.q = np.asarray(q, dtype=float)
        self.lam = np.asarray(lam, dtype=float)

    def __repr__(self):
        return "ExtremalState(t={}, q={}, lambda={})".format(self.t, list(self.q), list(self.lam))

    @property
    def vector(self):
        return np.concatenate([self.q, self.lam])


def extremal_rhs(lift, state):
    '''
    (q̇, λ̇) of the extremal field at ``state``.
    '''
    derivative = lift.rhs(state.vector)
    n = len(lift.base)
    return derivative[:n], derivative[n:]


def initial_covector(model, q0, u_target):
    '''
    An exact covector λ0 = Σ c_i ω_i(q0) in the annihilator at q0 whose
    controls (h_23, h_31, h_12) equal ``u_target``.
    '''
    point = {name: to_rational(v) for name, v in zip(model.chart.variables, q0)}
    targets = [model.brackets[key] for key, _, _ in CONTROL_PAIRS]
    M = sympy.Matrix(3, 3, lambda a, i: model.forms[i](targets[a]).evaluate(point))
    u = sympy.Matrix([to_rational(x) for x in u_target])
    try:
        solution, params = M.gauss_jordan_solve(u)
    except ValueError:
        raise CovectorError("No covector at {} reaches controls {}".format(
            [str(v) for v in q0], [str(x) for x in u_target]))
    if params.rows:
        zero = solution.subs({p: 0 for p in params})
        solution = solution.subs({p: 1 for p in params}) if zero.is_zero_matrix else zero
    lam = []
    for name in model.chart.variables:
        lam.append(sum((c * omega[(name,)].evaluate(point) for c, omega in zip(solution, model.forms)),
                       sympy.Integer(0)))
    if all(v == 0 for v in lam):
        raise CovectorError("Controls {} need the zero covector at {}".format(
            [str(x) for x in u_target], [str(v) for v in q0]))
    return lam


def integrate_extremal(lift, q0, lam0, duration=None, step=None, tolerances=None):
    '''
    Integrate the extremal field from (q0, λ0) with λ0 in the annihilator.

    :return: Trajectory with the CSV columns; monitors h_drift, inv_sum,
        inv_prod and bary_second_difference.
    '''
    cfg = config()
    duration = float(cfg.get('duration', 0.1) if duration is None else duration)
    step = float(cfg.get('step', 1e-4) if step is None else step)
    tol = _tolerances(tolerances)

    start = list(q0) + list(lam0)
    if all(v == 0 for v in lam0):
        raise CovectorError("The initial covector must be nonzero")
    if all(is_exact(v) for v in start):
        point = dict(zip(lift.chart.variables, [to_rational(v) for v in start]))
        values = [h.evaluate(point) for h in lift.h]
        if any(v != 0 for v in values):
            raise CovectorError("Initial covector is not in the annihilator: h = {}".format(
                [str(v) for v in values]))
    else:
        point = [float(v) for v in start]
        values = [h.evaluate(point) for h in lift.h]
        if max(abs(v) for v in values) > tol['drift']:
            raise CovectorError("Initial covector is not in the annihilator: h = {}".format(values))

    y0 = np.array([float(v) for v in start])
    times, states = rk4(lambda t, y: lift.rhs(y), y0, 0.0, duration, step)
    monitors_raw = lift.monitor_values(states)
    h, u = monitors_raw[:, :3], monitors_raw[:, 3:]

    n = len(lift.base)
    frame = pd.DataFrame(states, columns=list(lift.base.variables) + list(lift.fiber))
    frame.insert(0, 't', times)
    frame['u1'], frame['u2'], frame['u3'] = u[:, 0], u[:, 1], u[:, 2]
    frame['inv_sum'] = u.sum(axis=1)
    frame['inv_prod'] = u.prod(axis=1)
    frame['bary_x'] = states[:, 0:n:2].mean(axis=1)
    frame['bary_y'] = states[:, 1:n:2].mean(axis=1)

    monitors = dict(h_drift=float(np.max(np.abs(h))),
                    inv_sum=float(np.max(np.abs(frame['inv_sum']))),
                    inv_prod=float(np.max(np.abs(frame['inv_prod'] - frame['inv_prod'].iloc[0]))),
                    bary_second_difference=_second_difference(frame[['bary_x', 'bary_y']].values))
    checked = [('h_drift', 'drift')]
    if lift.rule == 'B':
        checked += [('inv_sum', 'sum'), ('inv_prod', 'drift')]
    flags = _check(monitors, tol, checked)
    settings = dict(rule=lift.rule, duration=duration, step=step,
                    q0=[utils.exact_str(v) for v in q0], lambda0=[utils.exact_str(v) for v in lam0])
    return Trajectory('extremal', frame, monitors, flags, settings)


def control_rhs(rule, u):
    '''
    System (A): u̇_i = -u_i(u_i + u_{i+1}); system (B): u̇_i = u_i(u_{i+1} - u_{i+2}).
    '''
    u1, u2, u3 = u
    if rule == 'A':
        return np.array([-u1 * (u1 + u2), -u2 * (u2 + u3), -u3 * (u3 + u1)])
    if rule == 'B':
        return np.array([u1 * (u2 - u3), u2 * (u3 - u1), u3 * (u1 - u2)])
    raise ValueError("Unknown rule {}".format(rule))


class ControlLaw(object):
    '''
    u̇_a = Σ C[a][i][b] u_i u_b, with rational C read off the structure
    constants of the bracket fields.
    '''

    def __init__(self, rule, coefficients):
        self.rule = rule
        self.coefficients = coefficients
        self._array = np.array([[[float(c) for c in row] for row in plane] for plane in coefficients])

    def __repr__(self):
        return "ControlLaw({}: {})".format(self.rule, self.as_strings())

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        return np.einsum('aib,i,b->a', self._array, u, u)

    def exact(self, u):
        u = [to_rational(x) for x in u]
        return [sum((self.coefficients[a][i][b] * u[i] * u[b] for i in range(3) for b in range(3)),
                    sympy.Integer(0)) for a in range(3)]

    def as_strings(self):
        symbols = sympy.symbols('u1 u2 u3')
        return [str(sympy.expand(sum(self.coefficients[a][i][b] * symbols[i] * symbols[b]
                                     for i in range(3) for b in range(3))))
                for a in range(3)]


def bracket_control_system(model):
    '''
    The control law followed by extremals of ``model``: on the annihilator
    d/dt h_jk = Σ_i u_i ⟨λ, [Z_i, Z_jk]⟩, expanded in the bracket fields.
    '''
    fields = list(model.fields)
    b = model.brackets
    if model.rule == 'B':
        basis = fields + [b['12'], b['23']]
        control_index = [None, None, None, 2, 0]
    else:
        basis = fields + [b['23'], b['31'], b['12']]
        control_index = [None, None, None, 0, 1, 2]

    zero = sympy.Integer(0)
    C = [[[zero] * 3 for _ in range(3)] for _ in range(3)]
    for a, (key, _, _) in enumerate(CONTROL_PAIRS):
        for i, z in enumerate(fields):
            bracket = lie_bracket(z, b[key])
            coords = rational_coordinates(basis, bracket)
            if coords is None:
                raise ClosureError((i, key), bracket)
            for idx, value in enumerate(coords):
                if control_index[idx] is not None:
                    C[a][i][control_index[idx]] += value
    return ControlLaw(model.rule, C)


def integrate_control(law, u0, duration=None, step=None, tolerances=None):
    '''
    Integrate a control system alone. ``law`` is 'A', 'B' (the displayed
    systems) or any callable u -> u̇, such as a ControlLaw.
    '''
    cfg = config()
    duration = float(cfg.get('duration', 0.1) if duration is None else duration)
    step = float(cfg.get('step', 1e-4) if step is None else step)
    tol = _tolerances(tolerances)
    rule = law if isinstance(law, str) else getattr(law, 'rule', None)
    rhs = (lambda t, u: control_rhs(law, u)) if isinstance(law, str) else (lambda t, u: law(u))

    times, states = rk4(rhs, np.array([float(x) for x in u0]), 0.0, duration, step)
    frame = pd.DataFrame(states, columns=['u1', 'u2', 'u3'])
    frame.insert(0, 't', times)
    frame['inv_sum'] = states.sum(axis=1)
    frame['inv_prod'] = states.prod(axis=1)

    signs = np.sign(states)
    monitors = dict(inv_sum=float(np.max(np.abs(frame['inv_sum'] - frame['inv_sum'].iloc[0]))),
                    inv_prod=float(np.max(np.abs(frame['inv_prod'] - frame['inv_prod'].iloc[0]))),
                    sign_changes=float(np.sum(np.any(signs != signs[0], axis=0))))
    flags = []
    if rule == 'B':
        flags = _check(monitors, tol, [('inv_sum', 'sum'), ('inv_prod', 'drift')])
        if monitors['sign_changes']:
            flags.append('sign_changes')
    settings = dict(rule=rule, duration=duration, step=step, u0=[utils.exact_str(x) for x in u0])
    return Trajectory('control', frame, monitors, flags, settings)


def _area(z):
    (x1, y1), (x2, y2), (x3, y3) = z[..., 0:2].T, z[..., 2:4].T, z[..., 4:6].T
    return ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1)) / 2


def _vertex_rhs(t, y):
    z = y[:6].reshape(3, 2)
    u = y[6:]
    dz = np.array([u[i] * (z[(i + 1) % 3] - z[(i + 2) % 3]) for i in range(3)])
    return np.concatenate([dz.ravel(), control_rhs('B', u)])


def integrate_vertices(z0, u0, duration=None, step=None, tolerances=None):
    '''
    The triangle driven by system (B): ż_i = u_i (z_{i+1} - z_{i+2}).
    Monitors the barycenter second difference, the area and u1 u2 u3.
    '''
    cfg = config()
    duration = float(cfg.get('duration', 0.1) if duration is None else duration)
    step = float(cfg.get('step', 1e-4) if step is None else step)
    tol = _tolerances(tolerances)

    y0 = np.array([float(c) for point in z0 for c in point] + [float(x) for x in u0])
    times, states = rk4(_vertex_rhs, y0, 0.0, duration, step)
    frame = pd.DataFrame(states, columns=VERTEX_COLUMNS + ['u1', 'u2', 'u3'])
    frame.insert(0, 't', times)
    frame['inv_sum'] = states[:, 6:].sum(axis=1)
    frame['inv_prod'] = states[:, 6:].prod(axis=1)
    frame['bary_x'] = states[:, 0:6:2].mean(axis=1)
    frame['bary_y'] = states[:, 1:6:2].mean(axis=1)
    frame['area'] = _area(states[:, :6])

    monitors = dict(bary_second_difference=_second_difference(frame[['bary_x', 'bary_y']].values),
                    area=float(np.max(np.abs(frame['area'] - frame['area'].iloc[0]))),
                    inv_prod=float(np.max(np.abs(frame['inv_prod'] - frame['inv_prod'].iloc[0]))))
    flags = _check(monitors, tol, [('bary_second_difference', 'drift'), ('area', 'area'),
                                   ('inv_prod', 'drift')])
    settings = dict(duration=duration, step=step, z0=[[utils.exact_str(c) for c in p] for p in z0],
                    u0=[utils.exact_str(x) for x in u0])
    return Trajectory('vertices', frame, monitors, flags, settings)


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


class FixedVertexReport(object):
    '''
    Residuals of the one-vertex-at-rest case: the fixed vertex, the direction
    of the opposite side, the area and the median through the fixed vertex.
    '''

    LIMITS = (('stationary', 'stationary'), ('parallel', 'parallel'), ('area', 'area'),
              ('bisectrix', 'bisectrix'))

    def __init__(self, trajectory, residuals, tolerances):
        self.trajectory = trajectory
        self.residuals = residuals
        self.tolerances = tolerances
        self.failures = [name for name, tol in self.LIMITS if residuals[name] > tolerances[tol]]

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return dict(residuals={k: float(v) for k, v in sorted(self.residuals.items())},
                    failures=self.failures)


def fixed_vertex_trajectory(z0=((0, 0), (1, 0), (0, 1)), u1=0.5, duration=1.0, step=None, tolerances=None):
    '''
    Rule-B extremal with u_2 ≡ 0 and u_3 = -u_1, so u̇_1 = u_1² and z_2 rests.
    '''
    tol = _tolerances(tolerances)
    trajectory = integrate_vertices(z0, (u1, 0, -u1), duration, step, tolerances)
    z = trajectory.frame[VERTEX_COLUMNS].values.reshape(-1, 3, 2)
    z1, z2, z3 = z[:, 0], z[:, 1], z[:, 2]
    side = _unit(z1 - z3)
    median = _unit((z1 + z3) / 2 - z2)
    area = trajectory.frame['area'].values
    residuals = dict(
        stationary=float(np.max(np.abs(z2 - z2[0]))),
        parallel=float(np.max(np.abs(_cross(side, side[0])))),
        area=float(np.max(np.abs(area - area[0]))),
        bisectrix=float(np.max(np.abs(_cross(median, median[0])))),
    )
    report = FixedVertexReport(trajectory, residuals, tol)
    if not report.passed:
        logging.warning("Fixed-vertex checks failed: {}".format(report.failures))
    return report


# Reduced system in (u1, u2, ζ1, ζ2).

class ReducedState(object):

    def __init__(self, u1, u2, zeta1, zeta2, t=0.0):
        if u1 < 0 or u2 < 0:
            raise ValueError("The reduced system is studied for u1, u2 >= 0, got ({}, {})".format(u1, u2))
        self.t = t
        self.u1, self.u2 = float(u1), float(u2)
        self.zeta1, self.zeta2 = complex(zeta1), complex(zeta2)

    def __repr__(self):
        return "ReducedState(t={}, u=({}, {}), zeta=({}, {}))".format(
            self.t, self.u1, self.u2, self.zeta1, self.zeta2)

    @property
    def c(self):
        return self.u1 * self.u2 * (self.u1 + self.u2)

    @property
    def e(self):
        return self.u1 * self.zeta2 - self.u2 * self.zeta1


def reduced_rhs(t, y):
    u1, u2, z1, z2 = y
    return np.array([u1 * (u1 + 2 * u2), -u2 * (2 * u1 + u2),
                     (u1 + u2) * z1 + u1 * z2, -u2 * z1 - (u1 + u2) * z2])


def integrate_reduced(state0, duration=None, step=None, tolerances=None):
    '''
    :return: Trajectory with columns t, u1, u2, zeta1_re, zeta1_im,
        zeta2_re, zeta2_im; monitors for c = u1 u2 (u1 + u2) and e = u1 ζ2 - u2 ζ1.
    '''
    cfg = config()
    duration = float(cfg.get('duration', 0.1) if duration is None else duration)
    step = float(cfg.get('step', 1e-4) if step is None else step)
    tol = _tolerances(tolerances)

    y0 = np.array([state0.u1, state0.u2, state0.zeta1, state0.zeta2], dtype=complex)
    times, states = rk4(reduced_rhs, y0, state0.t, duration, step)
    u1, u2 = states[:, 0].real, states[:, 1].real
    z1, z2 = states[:, 2], states[:, 3]
    frame = pd.DataFrame(dict(t=times, u1=u1, u2=u2, zeta1_re=z1.real, zeta1_im=z1.imag,
                              zeta2_re=z2.real, zeta2_im=z2.imag))
    c = u1 * u2 * (u1 + u2)
    e = u1 * z2 - u2 * z1
    monitors = dict(c=float(np.max(np.abs(c - c[0]))), e=float(np.max(np.abs(e - e[0]))))
    flags = _check(monitors, tol, [('c', 'drift'), ('e', 'drift')])
    settings = dict(duration=duration, step=step, u0=[state0.u1, state0.u2],
                    zeta0=[[state0.zeta1.real, state0.zeta1.imag], [state0.zeta2.real, state0.zeta2.imag]])
    return Trajectory('reduced', frame, monitors, flags, settings)


def _zeta(frame, column):
    return frame[column + '_re'].values + 1j * frame[column + '_im'].values


def _row_at(frame, t):
    times = frame['t'].values
    idx = int(np.argmin(np.abs(times - t)))
    if not np.isclose(times[idx], t, rtol=0, atol=1e-12):
        raise ValueError("t = {} is not a grid time of the trajectory".format(t))
    return idx


def zeta_closed_form(trajectory, t):
    '''
    ζ_k(t) = (u_k(t)/u_k(0)) ζ_k(0) + u_k(t) e ∫_0^t dτ/u_k(τ), with the
    integral taken by Simpson's rule over the stored grid.
    '''
    frame = trajectory.frame
    idx = _row_at(frame, t)
    times = frame['t'].values[:idx + 1]
    zeta0 = (_zeta(frame, 'zeta1')[0], _zeta(frame, 'zeta2')[0])
    u0 = (frame['u1'].values[0], frame['u2'].values[0])
    e = u0[0] * zeta0[1] - u0[1] * zeta0[0]
    result = []
    for k, column in enumerate(('u1', 'u2')):
        u = frame[column].values[:idx + 1]
        if np.any(u == 0):
            raise SingularTrajectoryError("{} vanishes on [0, {}]; use fixed_vertex_trajectory".format(column, t))
        integral = integrate.simpson(1.0 / u, x=times) if idx > 0 else 0.0
        result.append(u[-1] / u[0] * zeta0[k] + u[-1] * integral * e)
    return tuple(result)


def elliptic_time(u_target, r, c, tolerance=None):
    '''
    Signed time ∫_r^u dv / √(v (v³ + 4c)) for u to travel from r to u_target.
    '''
    tolerance = float(config().get('tolerances', {}).get('quadrature', 1e-10) if tolerance is None else tolerance)
    u_target, r, c = float(u_target), float(r), float(c)
    if u_target == r:
        return 0.0
    lo, hi = min(r, u_target), max(r, u_target)
    for root in (0.0, float(np.cbrt(-4 * c))):
        if lo <= root <= hi:
            raise SingularQuadratureError("Integrand is singular at the root v = {} inside [{}, {}]".format(
                root, lo, hi))
    if lo * (lo ** 3 + 4 * c) <= 0:
        raise SingularQuadratureError("v (v³ + 4c) is not positive on [{}, {}]".format(lo, hi))
    value, error = integrate.quad(lambda v: 1.0 / np.sqrt(v * (v ** 3 + 4 * c)), r, u_target,
                                  epsabs=tolerance, epsrel=tolerance)
    logging.debug("elliptic_time({}, {}, {}) = {} (error {:.2g})".format(u_target, r, c, value, error))
    return value


def elliptic_residual(trajectory):
    ''' Largest |u̇1² - u1 (u1³ + 4c)| along a reduced trajectory. '''
    frame = trajectory.frame
    u1, u2 = frame['u1'].values, frame['u2'].values
    c = u1[0] * u2[0] * (u1[0] + u2[0])
    u1_dot = u1 * (u1 + 2 * u2)
    return float(np.max(np.abs(u1_dot ** 2 - u1 * (u1 ** 3 + 4 * c))))


def symmetric_reduction_rhs(nu1, nu2, delta):
    ''' (ν̇1, ν̇2, δ̇) for ν1 = u1 + u2, ν2 = u1 u2, δ = u1 - u2. '''
    return delta * nu1, -delta * nu2, nu1 ** 2 + 2 * nu2


def symmetric_functions(trajectory):
    frame = trajectory.frame
    u1, u2 = frame['u1'].values, frame['u2'].values
    nu1, nu2, delta = u1 + u2, u1 * u2, u1 - u2
    return pd.DataFrame(dict(t=frame['t'].values, nu1=nu1, nu2=nu2, delta=delta,
                             constraint=delta ** 2 - nu1 ** 2 + 4 * nu2))


def s_substitution(trajectory):
    '''
    New time s = ∫ δ dt, in which ν1 = c1 eˢ and ν2 = c2 e⁻ˢ with c1 = ν1(0),
    c2 = ν2(0), and τ = ν1/δ = (1 - c e^{-3s})^{-1/2} with c = 4 c2 / c1².

    :return: (DataFrame with t, s, nu1, nu2, delta, tau, tau_closed;
        dict of the largest residuals).
    '''
    table = symmetric_functions(trajectory)
    t = table['t'].values
    s = integrate.cumulative_simpson(table['delta'].values, x=t, initial=0)
    c1, c2 = table['nu1'].values[0], table['nu2'].values[0]
    table.insert(1, 's', s)
    with np.errstate(divide='ignore', invalid='ignore'):
        table['tau'] = table['nu1'] / table['delta']
        table['tau_closed'] = (1 - 4 * c2 / c1 ** 2 * np.exp(-3 * s)) ** -0.5
    residuals = dict(nu1=float(np.max(np.abs(table['nu1'] - c1 * np.exp(s)))),
                     nu2=float(np.max(np.abs(table['nu2'] - c2 * np.exp(-s)))),
                     tau=float(np.max(np.abs(table['tau'] - table['tau_closed']))))
    return table, residuals


# Fuchsian form 3 dΨ/dτ = [M1/(τ-1) + M0/τ + M2/(1+τ)] Ψ.

FUCHSIAN_RESIDUES = (
    (1, sympy.Matrix([[-1, -1], [0, 1]])),
    (0, sympy.Matrix([[0, 1], [1, 0]])),
    (-1, sympy.Matrix([[1, 0], [-1, -1]])),
)


class FuchsianState(object):

    def __init__(self, tau, psi):
        self.tau = tau
        self.psi = np.asarray(psi, dtype=complex)
        _check_poles(tau, tau)

    def __repr__(self):
        return "FuchsianState(tau={}, psi={})".format(self.tau, list(self.psi))


def _check_poles(start, end):
    lo, hi = min(start, end), max(start, end)
    for pole, _ in FUCHSIAN_RESIDUES:
        if lo <= pole <= hi:
            raise PoleCrossingError("Interval [{}, {}] meets the pole τ = {}".format(lo, hi, pole))


def fuchsian_matrix(tau):
    '''
    A(τ) with dΨ/dτ = A(τ) Ψ; exact for exact τ.
    '''
    if is_exact(tau):
        tau = to_rational(tau)
        total = sympy.zeros(2, 2)
        for pole, residue in FUCHSIAN_RESIDUES:
            if tau == pole:
                raise PoleCrossingError("τ = {} is a pole".format(tau))
            total += residue / (3 * (tau - pole))
        return total
    total = np.zeros((2, 2))
    for pole, residue in FUCHSIAN_RESIDUES:
        total += np.array(residue.tolist(), dtype=float) / (3 * (tau - pole))
    return total


def fuchsian_rhs(tau, psi):
    A = fuchsian_matrix(tau)
    if isinstance(A, sympy.Matrix):
        return A * sympy.Matrix(psi)
    return A.dot(np.asarray(psi, dtype=complex))


def integrate_fuchsian(state0, tau_end, step=None):
    '''
    :return: Trajectory with columns tau, psi1_re, psi1_im, psi2_re, psi2_im.
    '''
    step = float(config().get('step', 1e-4) if step is None else step)
    _check_poles(state0.tau, tau_end)
    times, states = rk4(lambda tau, psi: fuchsian_rhs(tau, psi), state0.psi, float(state0.tau),
                        float(tau_end) - float(state0.tau), step)
    frame = pd.DataFrame(dict(tau=times, psi1_re=states[:, 0].real, psi1_im=states[:, 0].imag,
                              psi2_re=states[:, 1].real, psi2_im=states[:, 1].imag))
    return Trajectory('fuchsian', frame, settings=dict(tau0=float(state0.tau), tau_end=float(tau_end), step=step))


def fuchsian_chain(trajectory, step=None):
    '''
    Carry ζ(0) of a reduced trajectory through the τ time change and the
    Fuchsian system, and compare with the reduced ζ at the final time.

    :return: largest |Ψ(τ_end) - ζ(t_end)| over both components.
    '''
    table, _ = s_substitution(trajectory)
    tau0, tau_end = table['tau'].values[0], table['tau'].values[-1]
    if not (np.isfinite(tau0) and np.isfinite(tau_end)):
        raise PoleCrossingError("τ = ν1/δ is undefined where u1 = u2")
    frame = trajectory.frame
    psi0 = [_zeta(frame, 'zeta1')[0], _zeta(frame, 'zeta2')[0]]
    result = integrate_fuchsian(FuchsianState(tau0, psi0), tau_end, step)
    end = result.frame.iloc[-1]
    psi = np.array([end['psi1_re'] + 1j * end['psi1_im'], end['psi2_re'] + 1j * end['psi2_im']])
    zeta = np.array([_zeta(frame, 'zeta1')[-1], _zeta(frame, 'zeta2')[-1]])
    return float(np.max(np.abs(psi - zeta)))
