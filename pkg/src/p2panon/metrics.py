"""Anonymity metrics and sample summaries."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import EmptyInputError, InvalidParameterError, InvariantViolationError
from .posterior import Posterior

QUANTILE_METHOD = "linear"
_NORMALISATION_TOL = 1e-6
_NEGLIGIBLE = 1e-300


def _values(p):
    if isinstance(p, Posterior):
        vals = np.fromiter(p.probabilities.values(), dtype=float, count=len(p.probabilities))
    elif isinstance(p, dict):
        vals = np.asarray([p[k] for k in sorted(p)], dtype=float)
    else:
        vals = np.asarray(p, dtype=float).ravel()
    if vals.size == 0 or np.any(vals < 0) or abs(vals.sum() - 1.0) > _NORMALISATION_TOL:
        raise InvariantViolationError("distribution is not normalised")
    return vals


def shannon_entropy(p) -> float:
    """``-sum p log2 p`` in bits; accepts a Posterior, a mapping or an array."""
    vals = _values(p)
    vals = vals[vals > _NEGLIGIBLE]
    h = -float(np.sum(vals * np.log2(vals)))
    return h if h > 0 else 0.0


def min_entropy(p) -> float:
    """``-log2 max p`` in bits."""
    h = -math.log2(float(_values(p).max()))
    return h if h > 0 else 0.0


def effective_anonymity_set(h) -> float:
    if h < 0:
        raise InvalidParameterError("entropy must be non-negative")
    return 2.0 ** h


@dataclass(frozen=True)
class Summary:
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float

    def as_dict(self):
        return asdict(self)


def summarize(samples) -> Summary:
    """Five-number summary plus mean; quartiles by linear interpolation between ranks."""
    x = np.sort(np.asarray(list(samples), dtype=float))
    if x.size == 0:
        raise EmptyInputError("cannot summarise an empty sample")
    q1, med, q3 = np.percentile(x, [25, 50, 75], method=QUANTILE_METHOD)
    return Summary(int(x.size), float(x[0]), float(q1), float(med), float(q3), float(x[-1]),
                   math.fsum(x) / x.size)


def intercept_fraction(intercepted, total) -> float:
    if total <= 0:
        raise EmptyInputError("no transactions were sent")
    if not 0 <= intercepted <= total:
        raise InvalidParameterError("intercepted must lie in [0, total]")
    return intercepted / total
