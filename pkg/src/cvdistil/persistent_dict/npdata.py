"""
File backend for numpy arrays, such as the branch weights, means and
covariance matrices of a stored mixture.

"""

import h5py

from datreant.state import BaseFile as File

npdatafile = 'npData.h5'


class npDataFile(File):
    """Interface to numpy array data files.

    Arrays are stored in the HDF5 format through h5py.

    """

    def _open_file_r(self):
        return h5py.File(self.filename, 'r')

    def _open_file_w(self):
        return h5py.File(self.filename, 'a')

    def add_data(self, key, data):
        """Add a numpy array to the data file, replacing any array already
        stored under `key`.

        """
        with self.write():
            if key in self.handle:
                del self.handle[key]
            self.handle.create_dataset(key, data=data)

    def get_data(self, key, **kwargs):
        """Read the array stored under `key`."""
        with self.read():
            return self.handle[key][()]

    def del_data(self, key, **kwargs):
        with self.write():
            del self.handle[key]
