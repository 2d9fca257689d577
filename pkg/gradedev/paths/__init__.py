from .. import *
from .sampling import *
from .integrals import *
from .chen import *
from .flows import *
from .scaling import *
