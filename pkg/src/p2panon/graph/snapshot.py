"""JSON snapshot ingestion and topology export.

Snapshot schema::

    {
      "nodes": [{"id": "<alias>"}, ...],
      "channels": [
        {"channel_id": "...", "node1": "<alias>", "node2": "<alias>",
         "capacity": <int>,
         "node1_policy": {"base_fee": <int>, "proportional_fee_rate": <float>, "timelock": <int>},
         "node2_policy": {...}},
        ...
      ]
    }

``node1_policy`` governs the direction node1 -> node2 and vice versa; a
missing policy means that direction does not exist.  Parallel channels
between the same pair collapse to the cheapest one per direction, and the
dropped channel ids are listed in the :class:`LoadReport`.

The export format adds ``"kind"`` and ``"roles"`` (one entry per node, in
``nodes`` order).  Topologies without channel policies are exported with an
``"arcs"`` list of ``[src, dst, weight]`` instead of ``"channels"``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..exceptions import DuplicateRecordError, SnapshotParseError
from .topology import ChannelPolicy, Edge, NodeRole, Topology, TopologyKind

_POLICY_KEYS = ("base_fee", "proportional_fee_rate", "timelock")


@dataclass
class LoadReport:
    collapsed: list = field(default_factory=list)   # (dropped_channel_id, kept_channel_id, direction)


def _as_doc(document):
    if isinstance(document, os.PathLike):
        try:
            document = Path(document).read_text()
        except OSError as exc:
            raise SnapshotParseError(f"cannot read {document}: {exc.strerror}") from None
    if isinstance(document, (str, bytes)):
        try:
            return json.loads(document)
        except json.JSONDecodeError as exc:
            raise SnapshotParseError(f"document is not valid JSON: {exc}") from None
    return document


def _number(record, key, where, integer=False):
    if key not in record:
        raise SnapshotParseError(f"{where}: missing '{key}'")
    value = record[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SnapshotParseError(f"{where}: '{key}' must be a number")
    if integer and int(value) != value:
        raise SnapshotParseError(f"{where}: '{key}' must be an integer")
    if value < 0:
        raise SnapshotParseError(f"{where}: '{key}' must be non-negative")
    return int(value) if integer else float(value)


def _policy(raw, capacity, where):
    if not isinstance(raw, dict):
        raise SnapshotParseError(f"{where}: policy must be an object")
    unknown = set(raw) - set(_POLICY_KEYS)
    if unknown:
        raise SnapshotParseError(f"{where}: unknown policy keys {sorted(unknown)}")
    return ChannelPolicy(
        proportional_fee_rate=_number(raw, "proportional_fee_rate", where),
        base_fee=_number(raw, "base_fee", where, integer=True),
        timelock=_number(raw, "timelock", where, integer=True),
        capacity=capacity,
    )


def _policy_rank(policy, channel_id):
    # cheapest at the minimal (unit) amount, then lowest timelock, then channel id
    return (policy.base_fee + policy.proportional_fee_rate, policy.timelock, channel_id)


def parse_ln_snapshot(document):
    """Parse a snapshot; returns ``(topology, load_report)``."""
    doc = _as_doc(document)
    if not isinstance(doc, dict):
        raise SnapshotParseError("top level must be an object")
    for key in ("nodes", "channels"):
        if not isinstance(doc.get(key), list):
            raise SnapshotParseError(f"top level: '{key}' must be a list")

    ids = {}
    aliases = []
    for i, rec in enumerate(doc["nodes"]):
        where = f"nodes[{i}]"
        if not isinstance(rec, dict) or not isinstance(rec.get("id"), str):
            raise SnapshotParseError(f"{where}: expected an object with a string 'id'")
        if rec["id"] in ids:
            raise DuplicateRecordError(f"{where}: duplicate node id {rec['id']!r}")
        ids[rec["id"]] = len(aliases)
        aliases.append(rec["id"])

    best = {}
    report = LoadReport()
    seen_channels = set()
    ends = []
    for i, rec in enumerate(doc["channels"]):
        where = f"channels[{i}]"
        if not isinstance(rec, dict):
            raise SnapshotParseError(f"{where}: expected an object")
        cid = rec.get("channel_id")
        if not isinstance(cid, str):
            raise SnapshotParseError(f"{where}: missing string 'channel_id'")
        where = f"channels[{i}] ({cid})"
        if cid in seen_channels:
            raise DuplicateRecordError(f"{where}: duplicate channel id")
        seen_channels.add(cid)
        ends_ = []
        for key in ("node1", "node2"):
            alias = rec.get(key)
            if alias not in ids:
                raise SnapshotParseError(f"{where}: '{key}' refers to unknown node {alias!r}")
            ends_.append(ids[alias])
        u, v = ends_
        if u == v:
            raise SnapshotParseError(f"{where}: channel connects a node to itself")
        capacity = _number(rec, "capacity", where, integer=True)
        if capacity <= 0:
            raise SnapshotParseError(f"{where}: 'capacity' must be positive")
        extra = set(rec) - {"channel_id", "node1", "node2", "capacity", "node1_policy", "node2_policy"}
        if extra:
            raise SnapshotParseError(f"{where}: unknown keys {sorted(extra)}")
        ends.append((cid, aliases[u], aliases[v]))
        for key, (a, b) in (("node1_policy", (u, v)), ("node2_policy", (v, u))):
            if rec.get(key) is None:
                continue
            policy = _policy(rec[key], capacity, f"{where}.{key}")
            edge = Edge(a, b, policy=policy, channel_id=cid)
            current = best.get((a, b))
            if current is None:
                best[(a, b)] = edge
                continue
            if _policy_rank(policy, cid) < _policy_rank(current.policy, current.channel_id):
                report.collapsed.append((current.channel_id, cid, (aliases[a], aliases[b])))
                best[(a, b)] = edge
            else:
                report.collapsed.append((cid, current.channel_id, (aliases[a], aliases[b])))

    t = Topology(len(aliases), tuple(best.values()), frozenset(), TopologyKind.LN_SNAPSHOT,
                 tuple(aliases), (("channel_ends", tuple(ends)),))
    return t, report


def load_ln_snapshot(document):
    """Load a snapshot document (JSON text, parsed mapping or file path) into a :class:`Topology`."""
    return parse_ln_snapshot(document)[0]


def _num_out(x):
    return int(x) if float(x).is_integer() else float(x)


def _policy_doc(p):
    return {"base_fee": _num_out(p.base_fee),
            "proportional_fee_rate": float(p.proportional_fee_rate),
            "timelock": _num_out(p.timelock)}


def _roles(t):
    return [NodeRole.ADVERSARIAL.value if t.is_adversarial(v) else NodeRole.HONEST.value
            for v in range(t.n)]


def topology_document(t: Topology, include_roles=True):
    """The export document as a plain mapping."""
    doc = {"kind": t.kind.value, "nodes": [{"id": t.alias(v)} for v in range(t.n)]}
    if include_roles:
        doc["roles"] = _roles(t)
    if t.edges and all(e.policy is not None for e in t.edges):
        orientation = {cid: (a1, a2) for cid, a1, a2 in dict(t.params).get("channel_ends", ())}
        channels = {}
        for e in t.edges:
            cid = e.channel_id if e.channel_id is not None else f"{t.alias(e.src)}:{t.alias(e.dst)}"
            a, b = t.alias(e.src), t.alias(e.dst)
            n1, n2 = orientation.get(cid, (min(a, b, key=_alias_key), max(a, b, key=_alias_key)))
            ch = channels.setdefault(cid, {"channel_id": cid, "node1": n1, "node2": n2,
                                           "capacity": _num_out(e.policy.capacity or 0)})
            key = "node1_policy" if a == n1 else "node2_policy"
            ch[key] = _policy_doc(e.policy)
        doc["channels"] = [channels[c] for c in sorted(channels)]
    else:
        doc["arcs"] = [[t.alias(e.src), t.alias(e.dst), _num_out(e.weight)] for e in t.edges]
    return doc


def _alias_key(a):
    return (len(a), a) if a.isdigit() else (float("inf"), a)


def dump_topology(t: Topology, include_roles=True):
    """Normalised JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(topology_document(t, include_roles), indent=2, sort_keys=True) + "\n"


def dump_ln_snapshot(t: Topology):
    """Re-emit a channel topology in the bare snapshot schema (no kind, no roles)."""
    doc = topology_document(t, include_roles=False)
    doc.pop("kind")
    if "channels" not in doc:
        raise SnapshotParseError("topology has no channel policies to export")
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_topology(document):
    """Inverse of :func:`dump_topology`; also accepts bare snapshots."""
    doc = _as_doc(document)
    if not isinstance(doc, dict):
        raise SnapshotParseError("top level must be an object")
    kind = TopologyKind(doc.get("kind", TopologyKind.LN_SNAPSHOT.value))
    if "arcs" in doc:
        aliases = [rec["id"] for rec in doc["nodes"]]
        ids = {a: i for i, a in enumerate(aliases)}
        edges = []
        for i, arc in enumerate(doc["arcs"]):
            try:
                edges.append(Edge(ids[arc[0]], ids[arc[1]], float(arc[2])))
            except (KeyError, IndexError, TypeError, ValueError):
                raise SnapshotParseError(f"arcs[{i}]: malformed arc {arc!r}") from None
        natural = aliases == [str(i) for i in range(len(aliases))]
        t = Topology(len(aliases), tuple(edges), frozenset(), kind,
                     None if natural else tuple(aliases))
    else:
        body = {k: doc[k] for k in ("nodes", "channels") if k in doc}
        t = load_ln_snapshot(body)
        if kind is not TopologyKind.LN_SNAPSHOT:
            t = Topology(t.n, t.edges, frozenset(), kind, t.aliases, t.params)
    roles = doc.get("roles")
    if roles is not None:
        if len(roles) != t.n:
            raise SnapshotParseError("roles: one entry per node required")
        t = t.with_adversaries(v for v, r in enumerate(roles) if r == NodeRole.ADVERSARIAL.value)
    return t
