from . import *


def time_function(func, *args, **kwargs):
    start_time = time.perf_counter()
    result = func(*args, **kwargs)
    end_time = time.perf_counter()
    return result, end_time - start_time


def _run_check(suite, name, func):
    start_time = time.perf_counter()
    try:
        (value, expected, passed), seconds = time_function(func)
    except Exception as e:
        log.error(f'{suite}/{name} raised {type(e).__name__}: {e}')
        value, expected, passed = f'{type(e).__name__}: {e}', '', False
        seconds = time.perf_counter() - start_time
    return {
        'suite': suite,
        'check': name,
        'value': str(value),
        'expected': str(expected),
        'passed': bool(passed),
        'seconds': round(seconds, 3),
    }


def suite_names(suite: SUITE_TYPES = 'all'):
    check_option('suite', suite, SUITES)
    return [s for s in CHECKS if suite in ('all', s)]


@log.debug
def verify_suite(suite: SUITE_TYPES = 'all', progress: bool = False):
    """Run the acceptance checks of one suite (or all) into a pass/fail table."""
    import pandas as pd

    todo = [(s, name, func) for s in suite_names(suite) for name, func in CHECKS[s]]
    rows = []
    for s, name, func in progress_bar(todo, progress=progress, desc=f'Verifying {suite}'):
        row = _run_check(s, name, func)
        log.info(f'{s}/{name}: {"pass" if row["passed"] else "FAIL"} ({row["seconds"]}s)')
        rows.append(row)
    return pd.DataFrame(rows, columns=['suite', 'check', 'value', 'expected', 'passed', 'seconds'])


def format_report(df) -> str:
    passed = int(df.passed.sum())
    return f'{df.to_string(index=False)}\n\n{passed}/{len(df)} checks passed'
