"""
Interface to datasets stored inside a Run: sweep tables as pandas objects
and output mixtures as numpy arrays.

"""
import os
from functools import wraps

import numpy as np
from datreant.util import makedirs

from .persistent_dict import npdata, pddata
from .persistent_dict.core import DataFile
from .mixture import GaussianMixture
from .symplectic import GaussianState

DATAFILES = (pddata.pddatafile, npdata.npdatafile)


class Data(object):
    """Interface to stored data.

    Each dataset lives in its own directory below the Run, named by its
    handle; handles may contain ``/`` to nest datasets.

    """

    def __init__(self, treant):
        self.treant = treant

    def __repr__(self):
        return "<Data({})>".format(self.keys())

    def __iter__(self):
        return self.keys().__iter__()

    def __contains__(self, handle):
        return handle in self.keys()

    def _get_datafile(self, handle):
        """Path, proxy path and type of the datafile for `handle`.

        Raises :exc:`KeyError` if there is no data for `handle`.

        """
        for dfiletype in DATAFILES:
            dfile = os.path.join(self.treant.abspath, handle, dfiletype)
            if os.path.exists(dfile):
                proxyfile = os.path.join(self.treant.abspath, handle,
                                         ".{}.proxy".format(dfiletype))
                return dfile, proxyfile, dfiletype

        raise KeyError("No data for '{}'".format(handle))

    def _read_datafile(func):
        """Decorator mounting a DataFile for reading at ``self._datafile``
        for the duration of the call.

        Methods wrapped with this decorator take *handle* as their first
        argument.

        """

        @wraps(func)
        def inner(self, handle, *args, **kwargs):
            _, _, filetype = self._get_datafile(handle)
            self._datafile = DataFile(
                os.path.join(self.treant.abspath, handle),
                datafiletype=filetype)
            try:
                return func(self, handle, *args, **kwargs)
            finally:
                del self._datafile

        return inner

    def _write_datafile(func):
        """Decorator mounting a DataFile for writing at ``self._datafile``
        for the duration of the call, creating the dataset directory if
        needed.

        """

        @wraps(func)
        def inner(self, handle, *args, **kwargs):
            dirname = os.path.join(self.treant.abspath, handle)
            makedirs(dirname, exist_ok=True)
            self._datafile = DataFile(dirname)
            try:
                return func(self, handle, *args, **kwargs)
            finally:
                del self._datafile

        return inner

    def __getitem__(self, handle):
        """Stored data for `handle`, or a list of data for a list of
        handles; missing data raises :exc:`KeyError`.

        """
        if isinstance(handle, list):
            return [self.retrieve(item) for item in handle]
        return self.retrieve(handle)

    def __setitem__(self, handle, data):
        self.add(handle, data)

    def __delitem__(self, handle):
        self.remove(handle)

    @_write_datafile
    def add(self, handle, data):
        """Store a pandas object or numpy array under `handle`, replacing any
        existing dataset.

        """
        for dfiletype in DATAFILES:
            if dfiletype != DataFile.datafiletype_for(data):
                self._remove_file(handle, dfiletype)
        self._datafile.add_data('main', data)

    def _remove_file(self, handle, dfiletype):
        dirname = os.path.join(self.treant.abspath, handle)
        for name in (dfiletype, ".{}.proxy".format(dfiletype)):
            path = os.path.join(dirname, name)
            if os.path.exists(path):
                os.remove(path)

    def remove(self, handle, **kwargs):
        """Remove a dataset, or with `where`, `start` or `stop` some rows of
        a pandas dataset.

        Emptied dataset directories are removed up to the Run's own
        directory.

        """
        datafile, proxy, datafiletype = self._get_datafile(handle)

        if kwargs and datafiletype == pddata.pddatafile:
            DataFile(os.path.dirname(datafile),
                     datafiletype=datafiletype).del_data('main', **kwargs)
            return

        os.remove(datafile)
        if os.path.exists(proxy):
            os.remove(proxy)
        top = self.treant.abspath
        directory = os.path.dirname(datafile)
        while directory != top:
            try:
                os.rmdir(directory)
                directory = os.path.dirname(directory)
            except OSError:
                break

    @_read_datafile
    def retrieve(self, handle, **kwargs):
        """Read the dataset stored under `handle`.

        For pandas datasets, `where`, `start`, `stop` and `columns` select a
        subset without loading the whole table, e.g.::

            run.data.retrieve('sweep', where='N = 3')

        See :meth:`pandas.HDFStore.select`.

        """
        return self._datafile.get_data('main', **kwargs)

    @_write_datafile
    def append(self, handle, data):
        """Append rows to a stored pandas dataset; columns must match."""
        self._datafile.append_data('main', data)

    def keys(self):
        """Sorted handles of all stored datasets."""
        datasets = list()
        top = self.treant.abspath
        for root, dirs, files in os.walk(top):
            if any(dfile in files for dfile in DATAFILES):
                datasets.append(os.path.relpath(root, start=top))
        datasets.sort()
        return datasets

    def add_mixture(self, handle, m):
        """Store a Gaussian mixture as three arrays below `handle`."""
        self.add(handle + '/weights', np.asarray(m.weights))
        self.add(handle + '/means', np.array([s.mean for s in m.states]))
        self.add(handle + '/covs', np.array([s.cov for s in m.states]))

    def retrieve_mixture(self, handle):
        """Read a mixture stored with :meth:`add_mixture`."""
        weights, means, covs = self[[handle + '/weights', handle + '/means',
                                     handle + '/covs']]
        branches = [(w, GaussianState(mean, cov, check=False))
                    for w, mean, cov in zip(weights, means, covs)]
        total = float(np.sum(weights))
        return GaussianMixture(branches, normalized=abs(total - 1) <= 1e-9)
