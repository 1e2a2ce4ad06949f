"""
Run: the Treant that persists one experiment sweep.

"""
import os

from datreant import Treant
from datreant.names import TREANTDIR_NAME
from datreant.util import makedirs

from .names import RUNDIR_NAME
from . import metadata
from .data import Data

SWEEP_HANDLE = 'sweep'
MIXTURE_PREFIX = 'mixtures'


class Run(Treant):
    """The Run object is an interface to the stored results of one sweep.

    `run` should be a base directory of a new or existing Run. An existing
    Run will be regenerated if a state file is found. If no state file is
    found, a new Run will be created.

    Parameters
    ----------
    run : str or Tree
        Base directory of a new or existing Run; may also be a Tree object
    categories : dict
        dictionary with user-defined keys and values; the sweep parameters
        are added here by :meth:`record`
    tags : list
        list with user-defined values
    """
    _treanttype = 'Run'

    def __init__(self, run, categories=None, tags=None):
        super(Run, self).__init__(run,
                                  categories=categories,
                                  tags=tags)

        self._make_rundir()
        self._runconfig = metadata.RunConfig(self)
        self._data = Data(self)

    def __repr__(self):
        return "<{}: '{}'>".format(self._treanttype, self.name)

    def _make_rundir(self):
        rundir = os.path.join(self.abspath, TREANTDIR_NAME, RUNDIR_NAME)

        if not os.path.exists(rundir):
            # stop if we hit a permissions error
            try:
                makedirs(rundir, exist_ok=True)
            except OSError as e:
                if e.errno == 13:
                    raise OSError(13, "Permission denied; " +
                                  "cannot create '{}'".format(rundir))
                else:
                    raise

    @property
    def _rundir(self):
        return os.path.join(self.abspath, TREANTDIR_NAME, RUNDIR_NAME)

    @property
    def runconfig(self):
        """Stored configuration and result summary of this Run."""
        return self._runconfig

    @property
    def config(self):
        """The :class:`~cvdistil.config.ExperimentConfig` of this Run, or
        ``None``."""
        return self._runconfig.config

    @property
    def data(self):
        return self._data

    @property
    def sweep(self):
        """The stored sweep table, or ``None`` if not yet recorded."""
        if SWEEP_HANDLE not in self._data:
            return None
        return self._data[SWEEP_HANDLE]

    def record(self, config, table, results=None):
        """Store a finished sweep.

        Parameters
        ----------
        config : ExperimentConfig
            Configuration the sweep ran with.
        table : pandas.DataFrame
            Sweep rows as returned by :func:`cvdistil.protocols.sweep`.
        results : list of ProtocolResult, optional
            Per-point results whose output mixtures are stored under
            ``mixtures/<row>``.
        """
        self._runconfig.config = config
        self.categories.add({'protocol': config.protocol,
                             'r': config.r,
                             'p': config.p,
                             'grid_points': config.grid_points,
                             'prune_tol': config.prune_tol})
        self._data[SWEEP_HANDLE] = table
        for i, result in enumerate(results or []):
            self._data.add_mixture('{}/{:06d}'.format(MIXTURE_PREFIX, i),
                                   result.mixture)
        self._runconfig.summary = {
            'points': len(table),
            'min_fidelity': float(table['fidelity'].min()),
            'max_fidelity': float(table['fidelity'].max()),
            'min_success_prob': float(table['success_prob'].min())}

    def mixture(self, row):
        """Output mixture stored for sweep row `row`."""
        return self._data.retrieve_mixture(
            '{}/{:06d}'.format(MIXTURE_PREFIX, row))
