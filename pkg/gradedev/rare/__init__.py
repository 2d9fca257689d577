from .. import *
from .estimators import *
from .sandwich import *
from .badset import *
from .witness import *
from .sweep import *
