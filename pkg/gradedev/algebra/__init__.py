from .. import *
from .linalg import *
from .fields import *
from .lie import *
from .flags import *
from .blocks import *
