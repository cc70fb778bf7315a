from .strictbase import *
from .validators import ValidationError
from .errors import PolyaError
from .urn import PolyaUrn, ReplacementMeasure, make_urn
from . import api
