from .. import *
from .logs import *
from .misc import *
from .pmap import *
