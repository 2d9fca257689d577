from .. import *
from .checks import *
from .runner import *
