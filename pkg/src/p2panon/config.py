"""Experiment configuration: a JSON document validated into :class:`ExperimentConfig`.

Every violation found is reported together, each tagged with the dotted path
of the offending key.  Example (Dandelion)::

    {
      "scheme": "dandelion",
      "topology": {"generator": "line", "n": 1000},
      "p_f": 0.9,
      "adversary": {"strategy": "random", "fraction": 0.01},
      "runs": 1000,
      "tx_per_node": 1,
      "seed": 1,
      "output": {"path": "dandelion.csv", "format": "csv"}
    }

See ``README.md`` for annotated examples of the other schemes.
"""
from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from .exceptions import ConfigError
from .ln.routing import DEFAULT_AMOUNT, DEFAULT_RF


class Scheme(str, enum.Enum):
    DANDELION = "dandelion"
    DANDELION_PP = "dandelion++"
    LN = "ln"
    SUBGRAPH_LEARNING = "subgraph-learning"


_GENERATORS = {
    Scheme.DANDELION: ("line",),
    Scheme.DANDELION_PP: ("quasi-4-regular", "k-regular"),
    Scheme.LN: ("weighted-random", "scale-free", "snapshot"),
    Scheme.SUBGRAPH_LEARNING: ("k-regular",),
}
_DEFAULT_GENERATOR = {
    Scheme.DANDELION: "line",
    Scheme.DANDELION_PP: "quasi-4-regular",
    Scheme.LN: "weighted-random",
    Scheme.SUBGRAPH_LEARNING: "k-regular",
}
_TOPOLOGY_KEYS = {
    "line": {"n"},
    "quasi-4-regular": {"n"},
    "k-regular": {"n", "out_k", "psg_out_k"},
    "weighted-random": {"n", "avg_degree", "mean_fee", "lcc"},
    "scale-free": {"n", "avg_degree", "mean_fee", "lcc"},
    "snapshot": {"path", "lcc"},
}
_TOP_KEYS = {"scheme", "topology", "p_f", "adversary", "runs", "tx_per_node", "amount", "k",
             "rf", "bias", "bounds", "seed", "prior", "output", "learning"}
_ONLY_FOR = {
    "p_f": (Scheme.DANDELION, Scheme.DANDELION_PP, Scheme.SUBGRAPH_LEARNING),
    "amount": (Scheme.LN,),
    "k": (Scheme.LN,),
    "rf": (Scheme.LN,),
    "bias": (Scheme.LN,),
    "bounds": (Scheme.DANDELION_PP,),
    "learning": (Scheme.SUBGRAPH_LEARNING,),
    "prior": (Scheme.DANDELION, Scheme.DANDELION_PP, Scheme.LN),
}
STRATEGIES = ("random", "top-degree", "top-betweenness")
FORMATS = ("csv", "structured")


@dataclass(frozen=True)
class TopologySpec:
    generator: str
    n: Optional[int] = None
    out_k: Optional[int] = None
    psg_out_k: int = 2
    avg_degree: Optional[int] = None
    mean_fee: Optional[float] = None
    path: Optional[str] = None
    lcc: bool = False


@dataclass(frozen=True)
class AdversarySpec:
    strategy: str = "random"
    count: Optional[int] = None
    fraction: Optional[float] = None

    def resolve(self, n):
        from .graph.ops import adversary_count
        return adversary_count(n, self.fraction, self.count)


@dataclass(frozen=True)
class BoundsSpec:
    max_hops: Optional[int] = None
    min_contribution: float = 1e-12


@dataclass(frozen=True)
class PriorSpec:
    """``table`` maps node id to weight; unlisted honest nodes weigh ``default``."""

    table: tuple = ()
    default: float = 1.0

    def weights(self, honest):
        table = dict(self.table)
        return {v: table.get(v, self.default) for v in honest}


@dataclass(frozen=True)
class OutputSpec:
    path: Optional[str] = None
    format: str = "csv"


@dataclass(frozen=True)
class LearningSpec:
    second_hop: bool = False
    elimination: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    scheme: Scheme
    topology: TopologySpec
    adversary: AdversarySpec
    p_f: Optional[float] = None
    runs: int = 1
    tx_per_node: int = 1
    amount: float = DEFAULT_AMOUNT
    k: int = 1
    rf: float = DEFAULT_RF
    bias: float = 0.0
    bounds: Optional[BoundsSpec] = None
    seed: int = 0
    prior: Optional[PriorSpec] = None
    output: OutputSpec = field(default_factory=OutputSpec)
    learning: LearningSpec = field(default_factory=LearningSpec)

    def with_seed(self, seed):
        from dataclasses import replace
        return replace(self, seed=int(seed))

    def echo(self):
        """Canonical, JSON-ready echo of every effective setting."""
        doc = asdict(self)
        doc["scheme"] = self.scheme.value
        if self.prior is not None:
            doc["prior"] = {"table": {str(k): v for k, v in self.prior.table},
                            "default": self.prior.default}
        return doc


class _Collector:
    def __init__(self):
        self.violations = []

    def add(self, path, msg):
        self.violations.append((path, msg))

    def unknown(self, mapping, allowed, prefix):
        for key in sorted(set(mapping) - set(allowed)):
            self.add(f"{prefix}{key}", "unknown key")

    def integer(self, mapping, key, path, minimum=None, maximum=None, default=None):
        if key not in mapping:
            return default
        v = mapping[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.add(path, f"expected an integer, got {type(v).__name__}")
            return default
        if minimum is not None and v < minimum:
            self.add(path, f"must be >= {minimum}, got {v}")
        if maximum is not None and v > maximum:
            self.add(path, f"must be <= {maximum}, got {v}")
        return v

    def number(self, mapping, key, path, default=None):
        if key not in mapping:
            return default
        v = mapping[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.add(path, f"expected a finite number, got {v!r}")
            return default
        return float(v)

    def boolean(self, mapping, key, path, default=False):
        if key not in mapping:
            return default
        if not isinstance(mapping[key], bool):
            self.add(path, "expected true or false")
            return default
        return mapping[key]

    def obj(self, mapping, key, path):
        v = mapping.get(key, {})
        if not isinstance(v, dict):
            self.add(path, "expected an object")
            return {}
        return v


def _load_document(document):
    if isinstance(document, dict):
        return document
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ConfigError([("<document>", f"not valid JSON: {exc.msg} at line {exc.lineno}")]) from None
    if not isinstance(doc, dict):
        raise ConfigError([("<document>", "top level must be an object")])
    return doc


def parse_config(document, base_dir=None) -> ExperimentConfig:
    """Validate a config (JSON text or mapping); raises :class:`ConfigError` listing every problem.

    Relative snapshot paths resolve against ``base_dir`` (the config file's
    directory when loaded through :func:`load_config`).
    """
    doc = _load_document(document)
    c = _Collector()
    c.unknown(doc, _TOP_KEYS, "")

    scheme = None
    if "scheme" not in doc:
        c.add("scheme", "required")
    else:
        try:
            scheme = Scheme(doc["scheme"])
        except ValueError:
            c.add("scheme", f"must be one of {[s.value for s in Scheme]}, got {doc['scheme']!r}")

    if scheme is not None:
        for key, schemes in _ONLY_FOR.items():
            if key in doc and scheme not in schemes:
                c.add(key, f"not allowed with scheme {scheme.value!r} (mutually exclusive)")

    p_f = c.number(doc, "p_f", "p_f")
    if p_f is not None and not 0 < p_f < 1:
        c.add("p_f", f"must lie in (0, 1), got {p_f}")
    if scheme in _ONLY_FOR["p_f"] and "p_f" not in doc:
        c.add("p_f", f"required for scheme {scheme.value!r}")

    topology = _parse_topology(c, c.obj(doc, "topology", "topology"), scheme, base_dir)
    adversary = _parse_adversary(c, c.obj(doc, "adversary", "adversary"), scheme)

    runs = c.integer(doc, "runs", "runs", minimum=1, default=1)
    default_tx = 50 if scheme is Scheme.SUBGRAPH_LEARNING else 1
    tx = c.integer(doc, "tx_per_node", "tx_per_node", minimum=1, default=default_tx)
    amount = c.number(doc, "amount", "amount", default=DEFAULT_AMOUNT)
    if amount < 0:
        c.add("amount", "must be non-negative")
    k = c.integer(doc, "k", "k", minimum=1, default=1)
    rf = c.number(doc, "rf", "rf", default=DEFAULT_RF)
    if rf < 0:
        c.add("rf", "must be non-negative")
    bias = c.number(doc, "bias", "bias", default=0.0)
    seed = c.integer(doc, "seed", "seed", minimum=0, maximum=2**64 - 1, default=0)

    bounds = None
    if "bounds" in doc:
        b = c.obj(doc, "bounds", "bounds")
        c.unknown(b, {"max_hops", "min_contribution"}, "bounds.")
        mh = c.integer(b, "max_hops", "bounds.max_hops", minimum=1)
        mc = c.number(b, "min_contribution", "bounds.min_contribution", default=1e-12)
        if not 0 <= mc < 1:
            c.add("bounds.min_contribution", "must lie in [0, 1)")
        bounds = BoundsSpec(mh, mc)

    prior = _parse_prior(c, doc["prior"]) if "prior" in doc else None

    out = c.obj(doc, "output", "output")
    c.unknown(out, {"path", "format"}, "output.")
    fmt = out.get("format", "csv")
    if fmt not in FORMATS:
        c.add("output.format", f"must be one of {list(FORMATS)}")
    out_path = out.get("path")
    if out_path is not None and not isinstance(out_path, str):
        c.add("output.path", "expected a string")

    learn = c.obj(doc, "learning", "learning")
    c.unknown(learn, {"second_hop", "elimination"}, "learning.")
    learning = LearningSpec(c.boolean(learn, "second_hop", "learning.second_hop"),
                            c.boolean(learn, "elimination", "learning.elimination"))

    if topology is not None and topology.n is not None and adversary is not None \
            and adversary.count is not None and adversary.count >= topology.n:
        c.add("adversary.count", f"must be < topology.n ({topology.n})")

    if c.violations:
        raise ConfigError(c.violations)
    return ExperimentConfig(scheme, topology, adversary, p_f, runs, tx, amount, k, rf, bias,
                            bounds, seed, prior, OutputSpec(out_path, fmt), learning)


def _parse_topology(c, topo, scheme, base_dir):
    generator = topo.get("generator", _DEFAULT_GENERATOR.get(scheme))
    if generator not in _TOPOLOGY_KEYS:
        c.add("topology.generator", f"must be one of {sorted(_TOPOLOGY_KEYS)}, got {generator!r}")
        return None
    if scheme is not None and generator not in _GENERATORS[scheme]:
        c.add("topology.generator",
              f"{generator!r} cannot be used with scheme {scheme.value!r}; "
              f"choose from {list(_GENERATORS[scheme])}")
    c.unknown(topo, _TOPOLOGY_KEYS[generator] | {"generator"}, "topology.")
    lcc = c.boolean(topo, "lcc", "topology.lcc")
    if generator == "snapshot":
        path = topo.get("path")
        if not isinstance(path, str):
            c.add("topology.path", "required string for the snapshot generator")
            return TopologySpec(generator, lcc=lcc)
        full = Path(base_dir or ".") / path
        if not full.is_file():
            c.add("topology.path", f"file not found: {full}")
        return TopologySpec(generator, path=os.fspath(full), lcc=lcc)

    minimum = {"line": 3, "quasi-4-regular": 5}.get(generator, 3)
    n = c.integer(topo, "n", "topology.n", minimum=minimum)
    if n is None and "n" not in topo:
        c.add("topology.n", "required")
    spec = {"generator": generator, "n": n, "lcc": lcc}
    if generator == "k-regular":
        default_k = 8 if scheme is Scheme.SUBGRAPH_LEARNING else 2
        out_k = c.integer(topo, "out_k", "topology.out_k", minimum=1, default=default_k)
        psg = c.integer(topo, "psg_out_k", "topology.psg_out_k", minimum=1, default=2)
        if n is not None and out_k is not None and n <= out_k:
            c.add("topology.out_k", f"must be < topology.n ({n})")
        if "psg_out_k" in topo and scheme is not Scheme.SUBGRAPH_LEARNING:
            c.add("topology.psg_out_k", "only meaningful for subgraph-learning")
        if out_k is not None and psg is not None and psg > out_k:
            c.add("topology.psg_out_k", "cannot exceed topology.out_k")
        spec.update(out_k=out_k, psg_out_k=psg)
    if generator in ("weighted-random", "scale-free"):
        avg = c.integer(topo, "avg_degree", "topology.avg_degree", minimum=2, default=5)
        fee = c.number(topo, "mean_fee", "topology.mean_fee", default=1000.0)
        if fee <= 0:
            c.add("topology.mean_fee", "must be positive")
        if n is not None and avg is not None and n <= avg:
            c.add("topology.avg_degree", f"must be < topology.n ({n})")
        spec.update(avg_degree=avg, mean_fee=fee)
    return TopologySpec(**spec)


def _parse_adversary(c, adv, scheme):
    c.unknown(adv, {"strategy", "count", "fraction"}, "adversary.")
    strategy = adv.get("strategy", "random")
    if strategy not in STRATEGIES:
        c.add("adversary.strategy", f"must be one of {list(STRATEGIES)}, got {strategy!r}")
    elif scheme is Scheme.SUBGRAPH_LEARNING and strategy != "random":
        c.add("adversary.strategy", "subgraph-learning places adversaries at random")
    count = c.integer(adv, "count", "adversary.count", minimum=1)
    fraction = c.number(adv, "fraction", "adversary.fraction")
    if fraction is not None and not 0 < fraction < 1:
        c.add("adversary.fraction", f"must lie in (0, 1), got {fraction}")
    if ("count" in adv) == ("fraction" in adv):
        c.add("adversary", "give exactly one of 'count' or 'fraction'")
    return AdversarySpec(strategy, count, fraction)


def _parse_prior(c, raw):
    if raw == "uniform":
        return None
    if not isinstance(raw, dict):
        c.add("prior", "expected \"uniform\" or an object with 'table'")
        return None
    c.unknown(raw, {"table", "default"}, "prior.")
    table = raw.get("table")
    if not isinstance(table, dict):
        c.add("prior.table", "expected an object mapping node ids to weights")
        return None
    entries = []
    for key, w in table.items():
        path = f"prior.table.{key}"
        try:
            node = int(key)
        except ValueError:
            c.add(path, "node ids must be integers")
            continue
        if node < 0:
            c.add(path, "node ids must be non-negative")
        if isinstance(w, bool) or not isinstance(w, (int, float)) or not math.isfinite(w) or w < 0:
            c.add(path, "weight must be a non-negative number")
            continue
        entries.append((node, float(w)))
    default = c.number(raw, "default", "prior.default", default=1.0)
    if default < 0:
        c.add("prior.default", "must be non-negative")
    return PriorSpec(tuple(sorted(entries)), default)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError([("--config", f"cannot read {path}: {exc.strerror}")]) from None
    return parse_config(text, base_dir=path.parent)
