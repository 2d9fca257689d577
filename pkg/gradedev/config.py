from . import *
from .errors import check_option


class Config:
    def __init__(
        self,
        num_proc: int = DEFAULT_NUM_PROC,
        progress: bool = False,
        word_cap: int = DEFAULT_WORD_CAP,
        estimator: ESTIMATOR_TYPES = DEFAULT_ESTIMATOR,
        serializer: SERIALIZER_TYPES = None,
        output_dir: str = '.',
        **kwargs,
    ):
        self.num_proc = get_num_proc(num_proc)
        self.progress = progress
        self.word_cap = word_cap
        self.estimator = check_option('estimator', estimator, ESTIMATORS)
        self.serializer = get_serializer_type(serializer)
        self.output_dir = output_dir

    def to_dict(self):
        return {
            "num_proc": self.num_proc,
            "progress": self.progress,
            "word_cap": self.word_cap,
            "estimator": self.estimator,
            "serializer": self.serializer,
            "output_dir": self.output_dir,
        }

    def __repr__(self):
        return f"gradedev.Config({self.to_dict()})"

    def set_estimator(self, estimator: ESTIMATOR_TYPES):
        self.estimator = check_option('estimator', estimator, ESTIMATORS)

    def set_num_proc(self, num_proc: int):
        self.num_proc = get_num_proc(num_proc)

    def set_word_cap(self, word_cap: int):
        if word_cap < 1:
            raise SchemaError(f"word_cap must be positive, got {word_cap}")
        self.word_cap = word_cap

    def set_output_dir(self, output_dir: str):
        from .utils.misc import ensure_dir

        self.output_dir = ensure_dir(output_dir)

    def enable_progress(self):
        self.progress = True

    def disable_progress(self):
        self.progress = False


def get_num_proc(n=None, num_spare=2):
    num_avail = mp.cpu_count()
    if n and 1 <= n <= num_avail:
        return n
    return (num_avail - num_spare) if (num_avail - num_spare) > 0 else 1


@fcache
def get_working_serializers():
    working_serializers = ['json']
    try:
        import orjson

        working_serializers.append('orjson')
    except ImportError:
        pass
    return working_serializers


def get_serializer_type(serializer=None):
    if serializer is None:
        serializer = OPTIMAL_SERIALIZER
    check_option('serializer', serializer, SERIALIZERS)
    return serializer if serializer in get_working_serializers() else DEFAULT_SERIALIZER
