"""Bayesian originator-anonymity analysis for Dandelion, Dandelion++ and Lightning routing."""
from .config import ExperimentConfig, load_config, parse_config
from .estimators import (DandelionOriginatorModel, DandelionPPOriginatorModel,
                         LightningOriginatorModel, PrivacySubgraphLearner)
from .exceptions import (AnonymityError, ConfigError, DuplicateRecordError, EmptyInputError,
                         EmptyTopologyError, ImpossibleObservationError, InsufficientDataError,
                         InvalidParameterError, InvariantViolationError, RunError,
                         SnapshotParseError)
from .metrics import (Summary, effective_anonymity_set, intercept_fraction, min_entropy,
                      shannon_entropy, summarize)
from .posterior import Posterior
from .report import ExperimentReport, emit_report
from .runner import run
