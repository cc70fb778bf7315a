from .strictrecord import *
