"""
numpy and pandas data storage for Runs in HDF5.

"""

from .core import DataFile
from . import npdata, pddata

__all__ = ['DataFile', 'npdata', 'pddata']
