import pytest
import numpy as np
import sympy
from ants_geometry import extremals as ex
from ants_geometry import ants_models as am


@pytest.fixture(scope="module")
def rule_b():
    return am.build_rule_b()


@pytest.fixture(scope="module")
def lift(rule_b):
    return ex.hamiltonian_lift(rule_b.fields, 'B')


@pytest.fixture(scope="module")
def q0():
    return (0, 0, 1, 0, 0, 1)


@pytest.fixture(scope="module")
def lam0(rule_b, q0):
    return ex.initial_covector(rule_b, q0, (1, 1, -2))


@pytest.fixture(scope="module")
def reduced():
    return ex.integrate_reduced(ex.ReducedState(1, 1, 1, 1j), duration=0.2, step=1e-3)


@pytest.fixture(scope="module")
def reduced_split():
    return ex.integrate_reduced(ex.ReducedState(2, 1, 1, 1j), duration=0.1, step=1e-4)


class TestIntegrator():

    def test_rk4_exponential(self):
        times, states = ex.rk4(lambda t, y: y, np.array([1.0]), 0.0, 1.0, 0.01)
        assert times[-1] == pytest.approx(1.0)
        assert states[-1, 0] == pytest.approx(np.e, abs=1e-8)

    def test_rk4_lands_on_end(self):
        times, _ = ex.rk4(lambda t, y: -y, np.array([1.0]), 0.0, 0.3, 0.1)
        assert len(times) == 4
        assert times[-1] == pytest.approx(0.3)

    def test_rk4_step(self):
        with pytest.raises(ValueError):
            ex.rk4(lambda t, y: y, np.array([1.0]), 0.0, 1.0, 0.0)


class TestLift():

    def test_bracket_residuals(self, lift):
        assert all(r.is_zero for r in lift.bracket_residuals().values())

    def test_initial_covector(self, lift, q0, lam0):
        point = dict(zip(lift.chart.variables, list(q0) + list(lam0)))
        assert [h.evaluate(point) for h in lift.h] == [0, 0, 0]
        assert [u.evaluate(point) for u in lift.controls] == [1, 1, -2]

    def test_controls_sum_to_zero(self, rule_b, q0):
        with pytest.raises(ex.CovectorError):
            ex.initial_covector(rule_b, q0, (1, 1, 1))

    def test_extremal_rhs(self, lift, q0, lam0):
        dq, dl = ex.extremal_rhs(lift, ex.ExtremalState(0.0, q0, [float(v) for v in lam0]))
        assert dq.shape == (6,) and dl.shape == (6,)


class TestExtremals():

    def test_invariants(self, lift, q0, lam0):
        trajectory = ex.integrate_extremal(lift, q0, lam0, 0.1, 1e-3)
        assert set(ex.CSV_COLUMNS) <= set(trajectory.frame.columns)
        assert trajectory.monitors['h_drift'] < 1e-8
        assert trajectory.monitors['inv_sum'] < 1e-10
        assert trajectory.monitors['inv_prod'] < 1e-8
        assert trajectory.frame['u1'].iloc[0] == pytest.approx(1.0)

    def test_step_halving(self, lift, q0, lam0):
        coarse = ex.integrate_extremal(lift, q0, lam0, 0.1, 0.01)
        fine = ex.integrate_extremal(lift, q0, lam0, 0.1, 0.005)
        assert coarse.monitors['inv_prod'] >= 8 * fine.monitors['inv_prod']

    def test_equilibrium(self, rule_b, lift, q0):
        lam = ex.initial_covector(rule_b, q0, (0, 0, 0))
        assert any(v != 0 for v in lam)
        trajectory = ex.integrate_extremal(lift, q0, lam, 0.1, 1e-2)
        states = trajectory.frame[ex.VERTEX_COLUMNS + list(lift.fiber)].values
        assert np.allclose(states, states[0], rtol=0, atol=1e-12)
        assert np.max(np.abs(trajectory.frame[['u1', 'u2', 'u3']].values)) < 1e-12

    def test_covector_outside_annihilator(self, lift, q0):
        with pytest.raises(ex.CovectorError):
            ex.integrate_extremal(lift, q0, [1, 0, 0, 0, 0, 0], 0.1, 1e-3)
        with pytest.raises(ex.CovectorError):
            ex.integrate_extremal(lift, q0, [0] * 6, 0.1, 1e-3)

    def test_control_law(self, rule_b):
        law = ex.bracket_control_system(rule_b)
        u = (1.0, 2.0, -3.0)
        assert np.allclose(law(u), -ex.control_rhs('B', u))
        assert law.exact((1, 2, -3)) == [-5, 8, -3]

    def test_csv(self, lift, q0, lam0, tmpdir):
        trajectory = ex.integrate_extremal(lift, q0, lam0, 0.01, 1e-3)
        path = str(tmpdir.join("extremal.csv"))
        trajectory.to_csv(path)
        with open(path) as f:
            header = f.readline().strip().split(",")
        assert header[:7] == ['t', 'x1', 'y1', 'x2', 'y2', 'x3', 'y3']
        assert trajectory.manifest()['rows'] == 11


class TestControlSystems():

    def test_rule_b_invariants(self):
        trajectory = ex.integrate_control('B', (1, 1, -2), 0.1, 1e-3)
        assert not trajectory.flagged
        assert trajectory.monitors['inv_sum'] < 1e-12
        assert trajectory.monitors['sign_changes'] == 0

    def test_cyclic_relabelling(self):
        a = ex.integrate_control('B', (0.5, 0.25, -0.75), 0.1, 1e-3).frame
        b = ex.integrate_control('B', (0.25, -0.75, 0.5), 0.1, 1e-3).frame
        assert np.allclose(a[['u2', 'u3', 'u1']].values, b[['u1', 'u2', 'u3']].values, rtol=0, atol=1e-12)

    def test_equilibrium(self):
        assert list(ex.control_rhs('B', (0, 0, 0))) == [0, 0, 0]
        trajectory = ex.integrate_control('B', (0, 0, 0), 0.1, 1e-2)
        assert not trajectory.frame[['u1', 'u2', 'u3']].values.any()

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            ex.control_rhs('C', (1, 2, 3))

    def test_vertices(self):
        trajectory = ex.integrate_vertices(((0, 0), (1, 0), (0, 1)), (1, 1, -2), 0.1, 1e-3)
        assert trajectory.monitors['area'] < 1e-8
        assert trajectory.frame['area'].iloc[0] == pytest.approx(0.5)

    def test_fixed_vertex(self):
        report = ex.fixed_vertex_trajectory(step=1e-3)
        assert report.passed
        assert report.residuals['stationary'] == 0
        u1 = report.trajectory.frame['u1'].values
        assert u1[-1] == pytest.approx(1.0, abs=1e-8)


class TestReducedSystem():

    def test_negative_controls(self):
        with pytest.raises(ValueError):
            ex.ReducedState(-1, 1, 0, 0)

    def test_invariants(self, reduced):
        assert reduced.monitors['c'] < 1e-6
        assert reduced.monitors['e'] < 1e-6

    def test_closed_form(self, reduced):
        end = reduced.frame.iloc[-1]
        z1, z2 = ex.zeta_closed_form(reduced, end['t'])
        assert abs(z1 - complex(end['zeta1_re'], end['zeta1_im'])) < 1e-6
        assert abs(z2 - complex(end['zeta2_re'], end['zeta2_im'])) < 1e-6

    def test_invariant_axis(self):
        trajectory = ex.integrate_reduced(ex.ReducedState(1, 0, 1, 0), duration=0.2, step=1e-3)
        frame = trajectory.frame
        assert not frame['u2'].values.any()
        assert np.allclose(frame['u1'].values, 1 / (1 - frame['t'].values), rtol=0, atol=1e-9)

    def test_closed_form_start(self, reduced):
        assert ex.zeta_closed_form(reduced, 0.0) == (1, 1j)

    def test_closed_form_without_drift(self):
        trajectory = ex.integrate_reduced(ex.ReducedState(1, 1, 1, 1), duration=0.2, step=1e-3)
        end = trajectory.frame.iloc[-1]
        z1, z2 = ex.zeta_closed_form(trajectory, end['t'])
        assert z1 == end['u1'] and z2 == end['u2']
        assert abs(z1 - complex(end['zeta1_re'], end['zeta1_im'])) < 1e-6

    def test_closed_form_grid(self, reduced):
        with pytest.raises(ValueError):
            ex.zeta_closed_form(reduced, 0.0123)

    def test_elliptic_time(self, reduced):
        end = reduced.frame.iloc[-1]
        assert ex.elliptic_time(end['u1'], 1, 2) == pytest.approx(end['t'], abs=1e-6)
        assert ex.elliptic_time(1, 1, 2) == 0
        assert ex.elliptic_residual(reduced) < 1e-6

    def test_elliptic_time_singular(self):
        with pytest.raises(ex.SingularQuadratureError):
            ex.elliptic_time(1, -1, 2)

    def test_s_substitution(self, reduced_split):
        table, residuals = ex.s_substitution(reduced_split)
        assert max(residuals.values()) < 1e-6
        assert table['tau'].iloc[0] == pytest.approx(3.0)

    def test_symmetric_reduction(self, reduced_split):
        table = ex.symmetric_functions(reduced_split)
        assert np.max(np.abs(table['constraint'])) < 1e-12


class TestFuchsian():

    def test_residues_traceless(self):
        assert all(m.trace() == 0 for _, m in ex.FUCHSIAN_RESIDUES)
        assert ex.fuchsian_matrix(2).trace() == 0
        assert isinstance(ex.fuchsian_matrix(sympy.Rational(1, 2)), sympy.Matrix)

    def test_rhs_example(self):
        assert list(ex.fuchsian_rhs(2, (1, 0))) == [sympy.Rational(-2, 9), sympy.Rational(1, 18)]

    def test_poles(self):
        with pytest.raises(ex.PoleCrossingError):
            ex.fuchsian_matrix(1)
        with pytest.raises(ex.PoleCrossingError):
            ex.integrate_fuchsian(ex.FuchsianState(0.5, [1, 0]), 2.0, 1e-3)

    def test_chain(self, reduced_split):
        assert ex.fuchsian_chain(reduced_split, 1e-4) < 1e-6
