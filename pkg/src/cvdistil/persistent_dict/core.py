"""
Dispatch of stored objects to the pandas or numpy file backend.

"""

import os

import numpy as np
import pandas as pd

from . import npdata
from . import pddata

BACKENDS = {pddata.pddatafile: pddata.pdDataFile,
            npdata.npdatafile: npdata.npDataFile}


class DataFile(object):
    """Interface to the data file of one dataset directory.

    Parameters
    ----------
    datadir : str
        Path to the dataset directory.
    datafiletype : str, optional
        ``pddata.pddatafile`` or ``npdata.npdatafile`` if already known;
        required for reading.
    """

    def __init__(self, datadir, datafiletype=None):
        self.datadir = datadir
        self.datafiletype = datafiletype

    def _backend(self, datafiletype=None):
        datafiletype = datafiletype or self.datafiletype
        try:
            cls = BACKENDS[datafiletype]
        except KeyError:
            raise TypeError('Cannot access data without knowing datatype.')
        return cls(os.path.join(self.datadir, datafiletype))

    @staticmethod
    def datafiletype_for(data):
        if isinstance(data, np.ndarray):
            return npdata.npdatafile
        elif isinstance(data, (pd.Series, pd.DataFrame)):
            return pddata.pddatafile
        raise TypeError("Can only store numpy arrays and pandas objects, "
                        "not '{}'".format(type(data).__name__))

    def add_data(self, key, data):
        """Store a numpy array or pandas object under `key`, replacing any
        existing data."""
        self.datafiletype = self.datafiletype_for(data)
        self._backend().add_data(key, data)

    def append_data(self, key, data):
        """Append the rows of a pandas object to the one stored under
        `key`."""
        if self.datafiletype_for(data) != pddata.pddatafile:
            raise TypeError('Cannot append numpy arrays.')
        self._backend(pddata.pddatafile).append_data(key, data)

    def get_data(self, key, **kwargs):
        """Retrieve the object stored under `key`; pandas objects accept the
        selection keywords of :meth:`pandas.HDFStore.select`."""
        return self._backend().get_data(key, **kwargs)

    def del_data(self, key, **kwargs):
        return self._backend().del_data(key, **kwargs)
