"""
File backend for pandas objects, such as sweep tables.

"""

import pandas as pd

from datreant.state import BaseFile as File

pddatafile = 'pdData.h5'


class pdDataFile(File):
    """Interface to pandas object data files.

    Series and DataFrames are stored in HDF5 table format through
    :class:`pandas.HDFStore`, with every column indexed so that sweeps can be
    queried without loading them whole.

    """

    def _open_file_r(self):
        return pd.HDFStore(self.filename, 'r')

    def _open_file_w(self):
        return pd.HDFStore(self.filename, 'a')

    def add_data(self, key, data):
        """Add a Series or DataFrame, replacing anything stored under `key`.

        """
        with self.write():
            self.handle.put(key, data, format='table', data_columns=True,
                            complevel=5, complib='blosc')

    def append_data(self, key, data):
        """Append rows to the object stored under `key`.

        Column names of `data` must match those already stored; columns
        cannot be added to an HDF5 table.

        """
        with self.write():
            self.handle.append(key, data, data_columns=True, complevel=5,
                               complib='blosc')

    def get_data(self, key, **kwargs):
        """Retrieve the object stored under `key`.

        Keyword arguments (`where`, `start`, `stop`, `columns`) select a
        subset; see :meth:`pandas.HDFStore.select`.

        """
        with self.read():
            return self.handle.select(key, **kwargs)

    def del_data(self, key, **kwargs):
        """Delete the object stored under `key`, or the rows selected by
        `where`, `start` and `stop`.

        """
        with self.write():
            self.handle.remove(key, **kwargs)
