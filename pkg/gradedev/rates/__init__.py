from .. import *
from .functionals import *
from .rkhs import *
from .closed_forms import *
from .systems import *
from .graded import *
from .generic import *
