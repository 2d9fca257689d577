"""
Command-line front door: grade, flag, rate, sweep and verify.

    gradedev grade --m 1 --r 2
    gradedev flag kolmogorov
    gradedev rate my_rate.json --csv path.csv
    gradedev sweep kolmogorov_b2 --out results/kolmogorov_b2
    gradedev verify --suite rates
"""

import argparse
from . import *

COMMON_KEYS = {'command', 'description'}

SWEEP_REQUIRED = {'system', 'event', 'eps_grid'}
SWEEP_OPTIONAL = {'candidates', 'estimator', 'seed', 'trials', 'N_steps', 'num_proc', 'sampler'}
SAMPLERS = ['gaussian', 'paths']

RATE_KINDS = {
    'kolmogorov': ({'x1', 'x2', 'eps'}, set()),
    'solvable': ({'a', 'eps'}, set()),
    'rkhs': ({'constraints'}, {'m'}),
    'graded': ({'algebra', 'k', 'event'}, {'include_drift', 'shear'}),
    'generic': ({'system', 'event'}, {'eps', 'knots', 'restarts', 'seed', 'num_proc'}),
}


@dataclass
class ExperimentConfig:
    command: str
    params: Dict[str, Any]
    path: Optional[str] = None

    def get(self, key, default=None):
        return self.params.get(key, default)

    def __getitem__(self, key):
        return self.params[key]

    @property
    def name(self):
        return os.path.splitext(os.path.basename(self.path))[0] if self.path else self.command


def _check_keys(d, required, optional, what):
    missing = required - set(d)
    if missing:
        raise SchemaError(f'{what} config is missing {sorted(missing)}')
    unknown = set(d) - required - optional - COMMON_KEYS
    if unknown:
        allowed = ', '.join(sorted(required | optional | COMMON_KEYS))
        raise SchemaError(f'Unknown {what} config keys: {sorted(unknown)}. Options: {allowed}.')


def load_experiment(path_or_dict, command: Optional[str] = None) -> ExperimentConfig:
    """Read and validate an experiment config; unknown keys are rejected."""
    path = None
    if isinstance(path_or_dict, dict):
        d = dict(path_or_dict)
    else:
        path = resolve_data_path(path_or_dict)
        d = read_json(path)
    if not isinstance(d, dict):
        raise SchemaError('An experiment config is a JSON object')
    command = command or d.get('command')
    if command is None:
        raise SchemaError('Config does not say which command it is for')
    if d.get('command', command) != command:
        raise SchemaError(f'Config is for {d["command"]!r}, not {command!r}')

    if command == 'sweep':
        _check_keys(d, SWEEP_REQUIRED, SWEEP_OPTIONAL, 'sweep')
        check_option('estimator', d.get('estimator', DEFAULT_ESTIMATOR), ESTIMATORS)
        check_option('sampler', d.get('sampler', 'gaussian'), SAMPLERS)
        if not isinstance(d['eps_grid'], list) or not all(isinstance(e, (int, float)) for e in d['eps_grid']):
            raise SchemaError('eps_grid must be a list of numbers')
        event_from_dict(d['event'])
    elif command == 'rate':
        kind = check_option('kind', d.get('kind'), list(RATE_KINDS))
        required, optional = RATE_KINDS[kind]
        _check_keys(d, required, optional | {'kind'}, f'{kind} rate')
    else:
        raise SchemaError(f'Invalid command: {command}. Options: sweep, rate.')
    return ExperimentConfig(command=command, params=d, path=path)


def resolve_source(system: str, frame: str = 'state', sampler: str = 'gaussian'):
    """What to sample endpoints from: an exact Gaussian model, a controlled system or an algebra."""
    if system == 'kolmogorov' and sampler == 'gaussian':
        return kolmogorov_model(frame)
    if system in SYSTEM_BUILDERS and frame == 'state':
        return get_system(system)
    return load_algebra(system)


def sweep_from_config(cfg: ExperimentConfig, num_proc: Optional[int] = None, progress: bool = False) -> SweepResult:
    config = Config()
    event = event_from_dict(cfg['event'])
    source = resolve_source(cfg['system'], event.frame, cfg.get('sampler', 'gaussian'))
    return sweep_and_fit(
        source,
        event,
        cfg['eps_grid'],
        candidates=[parse_fraction(a) for a in cfg.get('candidates', [])],
        estimator=cfg.get('estimator', config.estimator),
        trials=int(cfg.get('trials', 100_000)),
        seed=int(cfg.get('seed', 0)),
        N_steps=int(cfg.get('N_steps', 64)),
        num_proc=num_proc or int(cfg.get('num_proc', config.num_proc)),
        progress=progress or config.progress,
    )


def rate_from_config(cfg: ExperimentConfig):
    """RateResult (or GradedRate for kind 'graded') for a rate config."""
    kind = cfg['kind']
    if kind == 'kolmogorov':
        return kolmogorov_rate(float(cfg['x1']), float(cfg['x2']), float(cfg['eps']))
    if kind == 'solvable':
        return solvable_rate(float(cfg['a']), float(cfg['eps']))
    if kind == 'rkhs':
        return rkhs_minimize(rate_problem_from_dict({'m': cfg.get('m', 1), 'constraints': cfg['constraints']}))
    if kind == 'graded':
        F = build_flag(load_algebra(cfg['algebra']))
        return graded_rate(
            F,
            int(cfg['k']),
            event_from_dict(cfg['event']),
            include_drift=bool(cfg.get('include_drift', False)),
            shear=cfg.get('shear'),
        )
    return generic_min_energy(
        get_system(cfg['system']),
        event_from_dict(cfg['event']),
        eps=float(cfg.get('eps', 1.0)),
        knots=int(cfg.get('knots', 16)),
        restarts=int(cfg.get('restarts', 4)),
        seed=int(cfg.get('seed', 0)),
        num_proc=int(cfg.get('num_proc', 1)),
    )


## commands


@log.debug
def run_grade(m: int, r: int, out=None, timestamp=True):
    return write_json(build_grading(m, r).to_dict(), out, timestamp=timestamp)


@log.debug
def run_flag(algebra_file: str, out=None, shear: Optional[int] = None, timestamp=True):
    F = build_flag(load_algebra(algebra_file))
    return write_json(flag_report(F, shear=shear), out, timestamp=timestamp)


@log.debug
def run_rate(config, out=None, csv=None, timestamp=True):
    cfg = config if isinstance(config, ExperimentConfig) else load_experiment(config, command='rate')
    res = rate_from_config(cfg)
    d = {'kind': cfg['kind'], **res.to_dict()}
    result = res.cl_result if isinstance(res, GradedRate) else res
    frame = rate_result_to_frame(result) if result is not None else None
    if csv and frame is not None:
        write_csv(frame, csv)
    write_json(d, out, timestamp=timestamp)
    return res


@log.debug
def run_sweep(config, out=None, timestamp=True, num_proc=None, progress=False):
    """Writes <out>.csv (one row per eps) and <out>.json (the fit); returns both paths."""
    cfg = config if isinstance(config, ExperimentConfig) else load_experiment(config, command='sweep')
    res = sweep_from_config(cfg, num_proc=num_proc, progress=progress)
    prefix = out or os.path.join(Config().output_dir, cfg.name)
    csv_path = write_csv(res.to_frame(), f'{prefix}.csv')
    fit = {'system': cfg['system'], 'event': cfg['event'], 'eps_grid': cfg['eps_grid'], **res.fit_dict()}
    if 'ratio' in res.extra:
        fit['ratio'] = res.extra['ratio']
    json_path = write_json(fit, f'{prefix}.json', timestamp=timestamp)
    return csv_path, json_path


@log.debug
def run_verify(suite: SUITE_TYPES = 'all', out=None, progress=False):
    from .verify import verify_suite, format_report

    df = verify_suite(suite, progress=progress)
    print(format_report(df))
    if out:
        write_csv(df, out)
    return df


## argument parsing


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog='gradedev', description='Graded large deviations for nilpotent diffusions.')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log at DEBUG level')
    sub = parser.add_subparsers(dest='command', required=True)

    def with_output(p, help='Output path (default: stdout)'):
        p.add_argument('--out', default=None, help=help)
        p.add_argument('--no-timestamp', action='store_true', help=f'Omit the "{TIMESTAMP_KEY}" key from JSON output')
        return p

    p = with_output(sub.add_parser('grade', help='Grading table of all words up to length r over m channels'))
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--r', type=int, required=True)

    p = with_output(sub.add_parser('flag', help='Flag and block structures of a Lie algebra file'))
    p.add_argument('algebra', help='Algebra JSON file or bundled name')
    p.add_argument('--shear', type=int, default=None, help='Seed for an alternative adapted block structure')

    p = with_output(sub.add_parser('rate', help='Solve one rate problem from a JSON config'))
    p.add_argument('config')
    p.add_argument('--csv', default=None, help='Also write the optimal path table here')

    p = with_output(sub.add_parser('sweep', help='Probability sweep over eps and grade fit'), help='Output prefix')
    p.add_argument('config')
    p.add_argument('--num-proc', type=int, default=None)
    p.add_argument('--progress', action='store_true')

    p = sub.add_parser('verify', help='Run acceptance checks')
    p.add_argument('--suite', default='all', choices=SUITES)
    p.add_argument('--out', default=None, help='Also write the report as CSV')
    p.add_argument('--progress', action='store_true')
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv)
    if args.verbose:
        logger.setLevel(logging.DEBUG)
    timestamp = not getattr(args, 'no_timestamp', False)
    try:
        if args.command == 'grade':
            run_grade(args.m, args.r, args.out, timestamp=timestamp)
        elif args.command == 'flag':
            run_flag(args.algebra, args.out, shear=args.shear, timestamp=timestamp)
        elif args.command == 'rate':
            run_rate(args.config, args.out, csv=args.csv, timestamp=timestamp)
        elif args.command == 'sweep':
            run_sweep(args.config, args.out, timestamp=timestamp, num_proc=args.num_proc, progress=args.progress)
        else:
            df = run_verify(args.suite, args.out, progress=args.progress)
            return EXIT_OK if bool(df.passed.all()) else EXIT_NUMERIC
    except GradedevError as e:
        log.error(f'{type(e).__name__}: {e}')
        return e.exit_code
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
