from . import *
from concurrent.futures import ProcessPoolExecutor
import atexit
import threading

executors = {}
executor_lock = threading.Lock()


def get_global_executor(num_proc):
    pid = os.getpid()
    with executor_lock:
        key = (pid, num_proc)
        if key not in executors:
            executors[key] = ProcessPoolExecutor(max_workers=num_proc)
        return executors[key]


def shutdown_global_executors():
    with executor_lock:
        for executor in executors.values():
            executor.shutdown()
        executors.clear()


atexit.register(shutdown_global_executors)


def process_input(objects=None, options=None):
    if not objects and not options:
        raise ValueError("At least one of objects or options must be non-empty")
    objects = list(objects) if objects is not None else []
    options = list(options) if options is not None else []
    if objects and options and len(objects) != len(options):
        raise ValueError("objects and options must have the same length")
    total = len(objects) or len(options)
    objects = objects or [()] * total
    options = options or [{}] * total
    objects = [tuple(x) if isinstance(x, (tuple, list)) else (x,) for x in objects]
    return objects, options


def _pmap_item(item):
    func, args, kwargs = item
    return func(*args, **kwargs)


def pmap(func, objects=None, options=None, num_proc=1, desc=None, progress=False, **common_kwargs):
    """
    Map func over objects (positional args) and options (keyword args), yielding
    results in input order. num_proc > 1 runs on a shared process pool; the
    ordering makes reductions independent of scheduling.
    """
    objects, options = process_input(objects, options)
    items = [(func, obj, {**common_kwargs, **opt}) for obj, opt in zip(objects, options)]
    num_proc = min(get_num_proc(num_proc), len(items))
    desc = desc if desc is not None else f'Mapping {func.__name__} across {len(items)} objects'
    if num_proc > 1:
        desc += f' [{num_proc}x]'
    pbar = progress_bar(total=len(items), desc=desc, progress=progress)
    try:
        if num_proc <= 1:
            for item in items:
                yield _pmap_item(item)
                pbar.update()
        else:
            executor = get_global_executor(num_proc)
            for res in executor.map(_pmap_item, items):
                yield res
                pbar.update()
    finally:
        pbar.close()


def pmap_l(*args, **kwargs):
    return list(pmap(*args, **kwargs))
