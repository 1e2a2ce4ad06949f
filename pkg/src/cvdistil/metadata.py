"""
Metadata components of a :class:`~cvdistil.treants.Run`: the configuration
it was produced from and a summary of its results, both kept as JSON state
inside the run's directory.

"""
import os

from datreant.metadata import Metadata

from .names import RUNDIR_NAME
from .config import ExperimentConfig


def _check_json_scalar(key, value):
    if not (isinstance(value, (str, bool, int, float)) or value is None):
        raise ValueError("Cannot store '{}'; value must be a string, bool, "
                         "int, float, or ``None``, not "
                         "'{}'".format(key, type(value)))


class RunConfig(Metadata):
    """The experiment configuration and result summary of a Run.

    """
    _statefilename = os.path.join(RUNDIR_NAME, 'runconfig.json')

    @staticmethod
    def _init_state(jsonfile):
        """Used solely for initializing JSONFile state for storing the
        configuration.

        """
        jsonfile._state = {
            'config': dict(),
            'summary': dict()
        }

    def __repr__(self):
        return "<RunConfig({})>".format(self.protocol)

    @property
    def protocol(self):
        with self._read:
            return self._statefile._state['config'].get('protocol')

    @property
    def config(self):
        """The stored configuration as an
        :class:`~cvdistil.config.ExperimentConfig`, or ``None`` if none has
        been stored.

        Setting this to an :class:`~cvdistil.config.ExperimentConfig`
        replaces the stored configuration; ``None`` clears it.

        """
        with self._read:
            state = dict(self._statefile._state['config'])
        if not state:
            return None
        return ExperimentConfig.from_dict(state)

    @config.setter
    def config(self, config):
        if config is None:
            state = dict()
        elif isinstance(config, ExperimentConfig):
            state = config.to_dict()
        else:
            raise TypeError("Must be an ExperimentConfig or ``None``")

        with self._write:
            self._statefile._state['config'] = state

    @property
    def summary(self):
        """Scalar results of the run, e.g. the number of sweep points.

        Keys must be strings and values must be strings, ints, floats,
        bools, or ``None``.

        """
        with self._read:
            return dict(self._statefile._state['summary'])

    @summary.setter
    def summary(self, summary):
        if summary is None:
            summary = dict()
        elif not isinstance(summary, dict):
            raise TypeError("Must be a dictionary or ``None``")
        for key, value in summary.items():
            _check_json_scalar(key, value)

        with self._write:
            self._statefile._state['summary'] = dict(summary)
