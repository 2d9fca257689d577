import warnings
warnings.filterwarnings('ignore', category=RuntimeWarning)
import sys
import os
import logging
import math
import time
import json
import itertools
import inspect
from typing import *
from typing import Literal
from fractions import Fraction
from dataclasses import dataclass, field
from contextlib import contextmanager
from functools import lru_cache, wraps, partial, cached_property
import multiprocessing as mp

PATH_HERE = os.path.dirname(os.path.abspath(__file__))
PATH_DATA = os.path.join(PATH_HERE, 'data')

DEFAULT_LOG_LEVEL = logging.INFO

# Enumeration caps
DEFAULT_WORD_CAP = 1_000_000
CHEN_MAX_LENGTH = 6
ACTIVE_SET_MAX = 20

# Tolerances
RANK_RTOL = 1e-9
JACOBI_TOL = 1e-10
SPAN_TOL = 1e-10
GRAM_RTOL = 1e-10
FLOW_TOL = 1e-10
FLOW_MAX_DOUBLINGS = 14
FLOW_INITIAL_STEPS = 8
FEASIBILITY_TOL = 1e-9
BETA_RTOL = 1e-13

INF = math.inf

# Event algebra
RELATION_TYPES = Literal['>=', '>', '=']
RELATIONS = list(RELATION_TYPES.__args__)
EVENT_MODE_TYPES = Literal['all', 'any']
EVENT_MODES = list(EVENT_MODE_TYPES.__args__)
EVENT_FRAME_TYPES = Literal['state', 'exp', 'block']
EVENT_FRAMES = list(EVENT_FRAME_TYPES.__args__)

# Flows
FLOW_METHOD_TYPES = Literal['flow', 'ivp']
FLOW_METHODS = list(FLOW_METHOD_TYPES.__args__)

# Rare events
ESTIMATOR_TYPES = Literal['exact', 'mc', 'is', 'sandwich']
ESTIMATORS = list(ESTIMATOR_TYPES.__args__)
DEFAULT_ESTIMATOR = 'exact'
WILSON_Z = 1.959963984540054
DEFAULT_SHARD_SIZE = 250_000

# Solvable sandwich lower construction (Hoelder exponent, radius, ball scale)
SANDWICH_HOLDER = 0.25
SANDWICH_DELTA = 1.0
SANDWICH_ETA = 0.5

# CLI
SUITE_TYPES = Literal['algebra', 'paths', 'rates', 'sweeps', 'all']
SUITES = list(SUITE_TYPES.__args__)
EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_NUMERIC = 3
EXIT_INFEASIBLE = 4
TIMESTAMP_KEY = 'created'

DEFAULT_NUM_PROC = 1

SERIALIZER_TYPES = Literal['orjson', 'json']
SERIALIZERS = list(SERIALIZER_TYPES.__args__)
DEFAULT_SERIALIZER = 'json'
OPTIMAL_SERIALIZER = 'orjson'

## objects
fcache = lru_cache(maxsize=None)
