"""
cvdistil --- distillation of displacement noise from Gaussian states
=====================================================================

Finite mixtures of Gaussian states, post-selected homodyne measurements,
resource monotones and the squeezing and entanglement distillation protocols
built from them, with sweep runs persisted as datreant Treants.
"""
# Bring some often used objects into the current namespace
from datreant import Bundle

from .symplectic import (GaussianState, SymplecticOp, PhysicalityError,
                         vacuum, squeezed_state, tmsv)
from .mixture import (GaussianMixture, HomodyneSpec, GridPolicy,
                      PostSelectionError, homodyne_condition)
from .monotones import FreeSetSpec, MonotoneReport, kappa
from .protocols import (SqueezeNoiseModel, EntNoiseModel, ProtocolResult,
                        EngineError, one_shot_squeeze, multicopy_squeeze,
                        multicopy_ent, sweep)
from .config import ConfigError, ExperimentConfig, parse_config
from .treants import Run
from .manipulators import discover

__all__ = ['GaussianState', 'SymplecticOp', 'PhysicalityError', 'vacuum',
           'squeezed_state', 'tmsv', 'GaussianMixture', 'HomodyneSpec',
           'GridPolicy', 'PostSelectionError', 'homodyne_condition',
           'FreeSetSpec', 'MonotoneReport', 'kappa', 'SqueezeNoiseModel',
           'EntNoiseModel', 'ProtocolResult', 'EngineError',
           'one_shot_squeeze', 'multicopy_squeeze', 'multicopy_ent', 'sweep',
           'ConfigError', 'ExperimentConfig', 'parse_config', 'Run',
           'Bundle', 'discover']
__version__ = "0.1.0-dev"  # NOTE: keep in sync with version in setup.py
