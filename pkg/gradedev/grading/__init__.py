from .. import *
from .words import *
from .table import *
from .events import *
