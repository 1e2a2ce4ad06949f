"""
Running configured sweeps, writing their tables and evaluating monotones on
files.

"""
import logging
import sys

import pandas as pd

from . import names
from . import formats
from . import protocols
from .mixture import GaussianMixture
from .monotones import MEASURES
from .symplectic import GaussianState
from .treants import Run

logger = logging.getLogger(__name__)

COVARIANCE_MEASURES = ('kappa_squeeze', 'kappa_ent')


def write_table(table, path=None):
    """Write a sweep table as CSV to `path`, or to standard output.

    Floats carry 9 significant digits so that the file is byte-stable.
    """
    if path is None:
        table.to_csv(sys.stdout, index=False,
                     float_format=names.CSV_FLOAT_FORMAT)
    else:
        table.to_csv(path, index=False, float_format=names.CSV_FLOAT_FORMAT)


def read_table(path):
    """Read a sweep table written by :func:`write_table`."""
    table = pd.read_csv(path)
    missing = [c for c in names.CSV_COLUMNS if c not in table.columns]
    if missing:
        raise ValueError("'{}' is not a sweep table; missing columns "
                         "{}".format(path, ', '.join(missing)))
    return table


def summarize(table):
    """Short human-readable description of a sweep table."""
    lines = []
    for protocol, group in table.groupby('protocol', sort=False):
        lines.append("{}: {} points, fidelity {:.6g}..{:.6g}, x variance "
                     "{:.6g}..{:.6g}, success {:.6g}..{:.6g}".format(
                         protocol, len(group),
                         group['fidelity'].min(), group['fidelity'].max(),
                         group['x_variance'].min(), group['x_variance'].max(),
                         group['success_prob'].min(),
                         group['success_prob'].max()))
    return '\n'.join(lines)


def run(config, output=None, store=None, workers=1):
    """Run the sweep of `config` and write its CSV.

    Parameters
    ----------
    config : ExperimentConfig
        Validated configuration.
    output : str, optional
        CSV path; overrides ``config.output``. Standard output if neither is
        set.
    store : str, optional
        Directory of a :class:`~cvdistil.treants.Run` to persist the
        configuration, the table and the output mixtures in.
    workers : int
        Processes used for the sweep points.

    Returns
    -------
    pandas.DataFrame
        The sweep table.
    """
    output = output or config.output
    results = protocols.run_sweep(config, workers=workers)
    table = protocols.table(results)
    write_table(table, output)
    logger.info("wrote %d rows to %s", len(table), output or '<stdout>')

    if store is not None:
        Run(store).record(config, table, results)
        logger.info("stored run in %s", store)

    return table


def monotone_eval(measure, path):
    """Evaluate the named monotone on a covariance or mixture file.

    Covariance measures accept a mixture file with a single branch; mixture
    measures accept a covariance file as a one-branch mixture.

    Returns
    -------
    MonotoneReport
    """
    try:
        func = MEASURES[measure]
    except KeyError:
        raise ValueError("Unknown measure '{}'; expected one of "
                         "{}".format(measure, ', '.join(sorted(MEASURES))))

    item = formats.read_input(path)
    if measure in COVARIANCE_MEASURES:
        if isinstance(item, GaussianMixture):
            if len(item) != 1:
                raise ValueError("{} takes a single covariance matrix; '{}' "
                                 "holds {} branches".format(measure, path,
                                                            len(item)))
            item = item.states[0]
        return func(item.cov)

    if isinstance(item, GaussianState):
        item = GaussianMixture.from_state(item)
    return func(item)
