'''
Command line access through ``ants-geometry``.

    ants-geometry verify [--only GROUP ...]
    ants-geometry analyze MODEL
    ants-geometry simulate [--preset extremal|control|vertices|fixed-vertex|reduced|fuchsian]
    ants-geometry quartic C0 C1 C2 C3 C4 | --cartan C
    ants-geometry ellipse --triangle x1,y1,x2,y2,x3,y3
'''
import sys
import logging

from .config import config, load_configuration, RunConfig, ConfigurationError
from .exact_algebra import to_rational
from . import ants_models as am
from . import distribution_analysis as da
from . import extremals as ex
from . import quartic_metric as qm
from . import verification
from . import utils

PRESETS = ('extremal', 'control', 'vertices', 'fixed-vertex', 'reduced', 'fuchsian')
DEFAULT_U0 = {'extremal': '1,1,-2', 'control': '1,1,-2', 'vertices': '1,1,-2',
              'fixed-vertex': '1/2,0,-1/2', 'reduced': '2,1', 'fuchsian': '2,1'}
USER_ERRORS = (ConfigurationError, ValueError, ex.CovectorError, ex.PoleCrossingError,
               ex.SingularTrajectoryError, ex.SingularQuadratureError, am.UnsupportedModelError,
               qm.DegenerateTriangleError, qm.ZeroQuarticError)


def main():
    ''' Entry point installed as 'ants-geometry'. '''
    parser = _argparser()
    sys.exit(_parse_args(parser, sys.argv[1:]))


def _number(text):
    text = text.strip()
    try:
        return to_rational(text)
    except (TypeError, ValueError):
        return float(text)


def _numbers(text, count=None, name="value"):
    values = [_number(v) for v in text.split(",") if v.strip()]
    if count is not None and len(values) != count:
        raise ValueError("--{} needs {} comma-separated numbers, got {}".format(name, count, len(values)))
    return values


def _common_arguments():
    import argparse
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, help="Seed for every random choice (default from config).")
    common.add_argument('--step', type=float, help="Integration step.")
    common.add_argument('--duration', type=float, help="Integration time.")
    common.add_argument('--format', choices=['json', 'csv'], default='json',
                        help="Output format; csv applies to trajectories.")
    common.add_argument('--out', '-o', help="File to write to. By default it writes to standard out.")
    common.add_argument('--config', help="Extra yml configuration file.")
    common.add_argument('--verbose', '-v', action='store_true', help="Debug logging.")
    for name in sorted(config().get('tolerances', {})):
        common.add_argument('--tol-{}'.format(name.replace('_', '-')), dest='tol_{}'.format(name),
                            type=float, help="Tolerance '{}'.".format(name))
    return common


def _argparser():
    '''
    Return arg parser. Separated from main for easier testing.
    '''
    import argparse
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog='ants-geometry',
                                     description='Exact and numerical checks on the geometry of '
                                     'three ants moving under rule A or rule B.')
    sub = parser.add_subparsers(dest='command')

    verify = sub.add_parser('verify', parents=[common], help="Run every check and report.")
    verify.add_argument('--only', nargs='+', help="Restrict to these groups or check ids.")
    verify.add_argument('--timings', action='store_true', help="Record runtime_ms per check.")
    verify.add_argument('--mutate', action='append', default=[], help=argparse.SUPPRESS)

    analyze = sub.add_parser('analyze', parents=[common], help="Growth, integrals and symmetries of a model.")
    analyze.add_argument('model', choices=am.MODEL_NAMES)
    analyze.add_argument('--level', help="Leaf level for leaf models.")
    analyze.add_argument('--symmetry-degree', type=int, help="Coefficient degree of the symmetry ansatz.")

    simulate = sub.add_parser('simulate', parents=[common], help="Integrate a trajectory.")
    simulate.add_argument('--preset', choices=PRESETS, default='extremal')
    simulate.add_argument('--rule', choices=['A', 'B'], default='B')
    simulate.add_argument('--u0', help="Initial controls, comma separated.")
    simulate.add_argument('--triangle', default='0,0,1,0,0,1', help="Initial vertices x1,y1,x2,y2,x3,y3.")
    simulate.add_argument('--lambda-target', help="Initial covector l1,...,l6 instead of --u0.")
    simulate.add_argument('--zeta', default='1,0,0,1', help="Initial zeta1, zeta2 as re,im,re,im.")

    quartic = sub.add_parser('quartic', parents=[common], help="Classify the real roots of a binary quartic.")
    quartic.add_argument('coefficients', nargs='*', help="c0 .. c4 of c0 u1^4 + ... + c4 u2^4.")
    quartic.add_argument('--cartan', help="Use the Cartan quartic with this constant.")

    ellipse = sub.add_parser('ellipse', parents=[common], help="Steiner circumellipse of a triangle.")
    ellipse.add_argument('--triangle', default='0,0,1,0,0,1', help="Vertices x1,y1,x2,y2,x3,y3.")
    return parser


def _run_config(args):
    base = load_configuration(args.config) if args.config else None
    tolerances = {k[4:]: v for k, v in vars(args).items() if k.startswith('tol_') and v is not None}
    return RunConfig(args.command, seed=args.seed, step=args.step, duration=args.duration,
                     tolerances=tolerances, output_path=args.out, format=args.format,
                     mutations=getattr(args, 'mutate', None), base=base)


def _emit(text, path):
    if path is None or path == '-':
        sys.stdout.write(text + "\n")
    else:
        with open(path, mode='w') as f:
            f.write(text + "\n")


def _parse_args(parser, in_args):
    '''
    Run the command in ``in_args``.

    :return: exit status; 0 on success, 1 when a check fails, 2 on usage errors.
    '''
    args = parser.parse_args(in_args)
    if not args.command:
        sys.stderr.write("ERROR: Need a command. Run with --help for details. \n-----\n")
        parser.print_help()
        return 2
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG)
    try:
        run = _run_config(args)
        return COMMANDS[args.command](run, args)
    except USER_ERRORS as e:
        sys.stderr.write("ERROR: {}\n".format(e))
        return 2


def cmd_verify(run, args):
    results = verification.run_checks(run, only=args.only, timings=args.timings)
    report = verification.report(run, results)
    _emit(utils.dumps(report), run.output_path)
    for r in results:
        if r.status != 'pass':
            sys.stderr.write("FAILED: {} ({})\n".format(r.check.check_id, r.value))
    return 0 if report['passed'] else 1


def _candidates(chart):
    if chart == am.ANT_CHART:
        return {'32A': am.area32(chart)}
    if chart == am.AFFINE_CHART:
        return {'Det(h)': am.determinant(chart)}
    return {'p.q': am.quadric_function(chart)}


def cmd_analyze(run, args):
    level = to_rational(args.level) if args.level else to_rational(run.leaf_level)
    d = am.build_distribution(args.model, level)
    flag = da.derived_flag(d, points=run.sample_points, seed=run.seed, bound=run.coordinate_range)
    integrals = [name for name, f in sorted(_candidates(d.chart).items()) if da.check_first_integral(d, f)]
    degree = args.symmetry_degree if args.symmetry_degree is not None else run.symmetry_degree
    try:
        symmetry_dimension = len(da.solve_symmetries(d, degree))
    except da.AnsatzTooLargeError as e:
        logging.warning(str(e))
        symmetry_dimension = None
    result = dict(model=args.model, dimension=d.dimension, generators=len(d.generators),
                  growth=flag.growth, derived_flag=flag.to_dict(), bracket_generating=flag.bracket_generating,
                  first_integrals=integrals, symmetry_degree=degree, symmetry_dimension=symmetry_dimension)
    _emit(utils.dumps(result), run.output_path)
    return 0


def _simulate(run, args):
    preset = args.preset
    u0 = _numbers(args.u0 or DEFAULT_U0[preset], name='u0')
    corners = _numbers(args.triangle, 6, 'triangle')
    triangle = [corners[0:2], corners[2:4], corners[4:6]]
    if preset == 'extremal':
        model = am.build_rule(args.rule)
        lift = ex.hamiltonian_lift(model.fields, model.rule)
        if args.lambda_target:
            lam0 = _numbers(args.lambda_target, 6, 'lambda-target')
        else:
            lam0 = ex.initial_covector(model, corners, _numbers(args.u0 or DEFAULT_U0[preset], 3, 'u0'))
        return ex.integrate_extremal(lift, corners, lam0, run.duration, run.step, run.tolerances), {}
    if preset == 'control':
        return ex.integrate_control(args.rule, u0, run.duration, run.step, run.tolerances), {}
    if preset == 'vertices':
        return ex.integrate_vertices(triangle, u0, run.duration, run.step, run.tolerances), {}
    if preset == 'fixed-vertex':
        if len(u0) != 3 or u0[1] != 0 or u0[0] + u0[2] != 0:
            raise ValueError("The fixed-vertex preset needs --u0 u,0,-u")
        report = ex.fixed_vertex_trajectory(triangle, u0[0], run.duration, run.step, run.tolerances)
        return report.trajectory, dict(fixed_vertex=report.to_dict())
    zeta = _numbers(args.zeta, 4, 'zeta')
    state = ex.ReducedState(u0[0], u0[1], complex(zeta[0], zeta[1]), complex(zeta[2], zeta[3]))
    reduced = ex.integrate_reduced(state, run.duration, run.step, run.tolerances)
    if preset == 'reduced':
        return reduced, dict(closed_form=ex.elliptic_residual(reduced))
    chain = ex.fuchsian_chain(reduced, run.step)
    table, residuals = ex.s_substitution(reduced)
    fuchsian = ex.integrate_fuchsian(ex.FuchsianState(table['tau'].values[0], [state.zeta1, state.zeta2]),
                                     table['tau'].values[-1], run.step)
    return fuchsian, dict(exponential=residuals, chain=chain)


def cmd_simulate(run, args):
    trajectory, extra = _simulate(run, args)
    manifest = dict(run=run.manifest(), trajectory=trajectory.manifest(), preset=args.preset)
    manifest.update(extra)
    if run.format == 'csv':
        _emit(trajectory.to_csv().rstrip("\n"), run.output_path)
        if run.output_path not in (None, '-'):
            utils.write_json(manifest, run.output_path + ".manifest.json")
    else:
        _emit(utils.dumps(manifest), run.output_path)
    return 1 if trajectory.flagged else 0


def cmd_quartic(run, args):
    if args.cartan:
        quartic = qm.cartan_quartic(args.cartan)
    elif len(args.coefficients) == 5:
        quartic = qm.BinaryQuartic(args.coefficients)
    else:
        raise ValueError("Need five coefficients or --cartan")
    root_type = qm.classify_quartic(quartic)
    result = dict(coefficients=[str(c) for c in quartic.coefficients])
    result.update(root_type.to_dict())
    _emit(utils.dumps(result), run.output_path)
    return 0


def cmd_ellipse(run, args):
    corners = _numbers(args.triangle, 6, 'triangle')
    triangle = [corners[0:2], corners[2:4], corners[4:6]]
    ellipse = qm.steiner_circumellipse(triangle)
    result = ellipse.to_dict()
    result['vertices_on_ellipse'] = all(ellipse.contains(p) for p in triangle)
    result['tangent_residuals'] = [str(r) for r in qm.tangent_residuals(ellipse, triangle)]
    result['conic_check'] = ellipse.conic() == qm.conic_through(triangle)
    _emit(utils.dumps(result), run.output_path)
    return 0


COMMANDS = dict(verify=cmd_verify, analyze=cmd_analyze, simulate=cmd_simulate,
                quartic=cmd_quartic, ellipse=cmd_ellipse)


if __name__ == '__main__':
    main()
