__version__ = '0.1.0'
from .constants import *
from .errors import *
from .config import *
from .utils import *
from .serializers import *
from .grading import *
from .algebra import *
from .paths import *
from .rates import *
from .rare import *
