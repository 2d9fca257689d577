from . import *


class ColoredFormatter(logging.Formatter):
    """Message-only formatter, colored by level."""

    COLORS = {
        'DEBUG': '\033[94m',
        'INFO': '\033[92m',
        'WARNING': '\033[93m',
        'ERROR': '\033[91m',
        'CRITICAL': '\033[95m',
        'RESET': '\033[0m',
    }

    def format(self, record):
        color = self.COLORS.get(record.levelname, '')
        reset = self.COLORS['RESET'] if color else ''
        return logging.Formatter(f'{color}%(message)s{reset}').format(record)


def setup_logger(name, level=DEFAULT_LOG_LEVEL):
    logger = logging.getLogger(name)
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(ColoredFormatter())
        logger.addHandler(handler)
    logger.propagate = False
    return logger


logger = setup_logger('gradedev')


@contextmanager
def temporary_log_level(temp_level):
    original_level = logger.level
    logger.setLevel(temp_level)
    try:
        yield
    finally:
        logger.setLevel(original_level)


def _short_repr(x, maxlen=60):
    try:
        out = repr(x)
    except Exception:
        out = f'<{type(x).__name__}>'
    out = ' '.join(out.split())
    return out if len(out) <= maxlen else out[: maxlen - 3] + '...'


def get_call_str(func, *args, **kwargs):
    args = list(args)
    names = getattr(getattr(func, '__code__', None), 'co_varnames', ())
    if args and names and names[0] in {'self', 'cls'}:
        args = args[1:]
    params = [_short_repr(a) for a in args] + [f'{k}={_short_repr(v)}' for k, v in kwargs.items()]
    return f'{func.__module__}.{func.__qualname__}', ', '.join(params)


current_depth = 0
indenter = '    '
last_log_time = None


def log_time_taken_str(reset=True):
    global last_log_time
    now = time.time()
    taken = now - (last_log_time if last_log_time else now)
    if reset:
        last_log_time = now
    return f'[{taken:.2f}s] '


def log_prefix_str(message='', reset=True):
    return f'{log_time_taken_str(reset=reset)}{indenter * current_depth}{message}'


def log_func(*messages, level=logging.DEBUG, maxlen=None, incl_frame=True):
    if logger.level > level:
        return
    message = ' '.join(str(x) for x in messages)
    if incl_frame:
        frame = inspect.currentframe()
        while frame and frame.f_code.co_filename == __file__:
            frame = frame.f_back
        if frame:
            owner = frame.f_locals.get('self')
            klass = f'{type(owner).__name__}.' if owner is not None else ''
            message = f"{frame.f_globals.get('__name__', '?')}.{klass}{frame.f_code.co_name}(): {message}"
    logger.log(level, log_prefix_str(message)[:maxlen])


def log_wrapper(_func=None, level=logging.INFO):
    """Decorator logging entry, result and failure of a call, indented by call depth."""

    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            global current_depth, last_log_time
            active = level >= logger.level
            if active:
                funcname, params = get_call_str(func, *args, **kwargs)
                log_func(f'{funcname}(){"  <<<  " + params if params else ""}', level=level, incl_frame=False)
                current_depth += 1
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                log.error(f'Error in {func.__name__}: {e}')
                current_depth = 0
                raise
            if active:
                current_depth = max(current_depth - 1, 0)
                if result is not None:
                    log_func(f'{funcname}()  >>>  {_short_repr(result, 120)}', level=level, incl_frame=False)
                if not current_depth:
                    last_log_time = None
            return result

        return wrapper

    if _func is None:
        return decorator
    return decorator(_func)


class log:
    @staticmethod
    def log(_func=None, *args, level=logging.DEBUG, **kwargs):
        """Log a message, or decorate a function with call logging."""
        if callable(_func):
            return log_wrapper(_func, level=level)
        log_func(_func, *args, level=level, **kwargs)

    @classmethod
    def debug(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.DEBUG, **kwargs)

    @classmethod
    def trace(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.DEBUG - 1, **kwargs)

    @classmethod
    def info(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.INFO, **kwargs)

    @classmethod
    def warning(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.WARNING, **kwargs)

    warn = warning

    @classmethod
    def error(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.ERROR, **kwargs)

    @classmethod
    def critical(cls, _func=None, *args, **kwargs):
        return cls.log(_func, *args, level=logging.CRITICAL, **kwargs)
