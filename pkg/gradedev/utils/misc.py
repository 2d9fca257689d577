from . import *


def is_dir(path):
    fn, ext = os.path.splitext(path)
    return not bool(ext)


def ensure_dir(path):
    if not is_dir(path):
        path = os.path.dirname(path)
    if path:
        os.makedirs(path, exist_ok=True)
    return path


def fraction_str(x):
    """Exact "p/q" form of a grade; integers print bare, infinity as "inf"."""
    if x == math.inf:
        return 'inf'
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f'{x.numerator}/{x.denominator}'


def parse_fraction(s):
    if isinstance(s, str) and s.strip() in {'inf', '+inf'}:
        return math.inf
    return Fraction(s)


class DummyProgressBar:
    def __init__(self, iterable=None, total=None):
        self.iterable = iterable
        self.total = total
        self.n = 0

    def __iter__(self):
        return iter(self.iterable) if self.iterable is not None else iter(range(self.total))

    def update(self, n=1):
        self.n += n

    def set_description(self, desc):
        pass

    def close(self):
        pass


def progress_bar(iterr=None, total=None, progress=True, leave=False, desc=None, **kwargs):
    if not progress:
        return DummyProgressBar(iterr, total)
    try:
        from tqdm import tqdm
    except ImportError:
        return DummyProgressBar(iterr, total)

    desc = f'\033[32m{log_prefix_str(desc or "", reset=False)}\033[0m'
    if iterr is not None:
        return tqdm(iterr, total=total, leave=leave, desc=desc, **kwargs)
    return tqdm(total=total, leave=leave, desc=desc, **kwargs)
