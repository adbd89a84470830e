"""Input validation helpers shared by the estimators."""
from __future__ import annotations

import numbers

from sklearn.utils.validation import check_is_fitted  # noqa: F401  (re-exported)

from .exceptions import InvalidParameterError
from .graph.topology import Topology


def check_probability(value, name, open_low=True, open_high=True):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidParameterError(f"{name} must be a real number, got {value!r}")
    low_ok = value > 0 if open_low else value >= 0
    high_ok = value < 1 if open_high else value <= 1
    if not (low_ok and high_ok):
        lo, hi = "(" if open_low else "[", ")" if open_high else "]"
        raise InvalidParameterError(f"{name} must lie in {lo}0, 1{hi}, got {value!r}")
    return float(value)


def check_topology(t, need_adversaries=True):
    if not isinstance(t, Topology):
        raise InvalidParameterError(f"expected a Topology, got {type(t).__name__}")
    if t.n == 0:
        raise InvalidParameterError("topology has no nodes")
    if need_adversaries and not t.adversaries:
        raise InvalidParameterError("topology has no adversaries; assign some first")
    if not t.honest_nodes:
        raise InvalidParameterError("topology has no honest nodes")
    return t
