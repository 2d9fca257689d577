from .. import *
from .jsons import *
from .tables import *
