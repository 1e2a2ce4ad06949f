"""User-level functions for finding stored Runs.

"""
import os

from datreant import discover as _discover
from datreant import Bundle
from datreant.names import TREANTDIR_NAME

from .treants import Run
from .names import RUNDIR_NAME


def _is_run(treant):
    return os.path.exists(os.path.join(treant.abspath,
                                       TREANTDIR_NAME,
                                       RUNDIR_NAME))


def discover(dirpath='.', depth=None, treantdepth=None):
    """Bundle of every Run found below `dirpath`; other Treants are
    skipped."""
    treants = _discover(dirpath=dirpath,
                        depth=depth,
                        treantdepth=treantdepth)

    return Bundle([Run(treant) for treant in treants if _is_run(treant)])
