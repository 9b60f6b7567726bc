"""Digitized city map: nodes carrying subscriber load, streets linking them.

The interchange format is a single JSON document::

    {"area_m2": 230850.0,
     "nodes":   [{"id": 0, "x": 12.5, "y": 80.0, "load": 40, "name": "A"}, ...],
     "streets": [{"id": 0, "from": 0, "to": 1, "load": 12}, ...]}

Street demand is folded into node weights (`effective_load`) because only
nodes take part in clustering.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class MapError(ValueError):
    """Raised for malformed or inconsistent map input."""


@dataclass(frozen=True)
class NodeRecord:
    id: int
    x: float
    y: float
    load: int
    name: str | None = None


@dataclass(frozen=True)
class StreetRecord:
    id: int
    from_id: int
    to_id: int
    load: int
    name: str | None = None


def distribute_street_loads(nodes, streets) -> dict[int, int]:
    """Return node id -> own load plus its share of incident street loads.

    Each street's load is split evenly between its endpoints; an odd unit
    goes to the endpoint with the lower id.
    """
    eff = {n.id: n.load for n in nodes}
    for s in streets:
        half, extra = divmod(s.load, 2)
        lo, hi = sorted((s.from_id, s.to_id))
        eff[lo] += half + extra
        eff[hi] += half
    return eff


@dataclass(frozen=True, eq=False)
class PlanningMap:
    """Immutable validated map. Nodes and streets are held sorted by id.

    ``ids``, ``xy`` and ``weights`` are array views aligned with ``nodes``
    and are what the clustering kernels consume.
    """

    nodes: tuple[NodeRecord, ...]
    streets: tuple[StreetRecord, ...]
    area: float
    effective_load: tuple[int, ...]
    ids: np.ndarray = field(repr=False)
    xy: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, nodes, streets=(), area: float = 1.0, effective_load=None) -> "PlanningMap":
        nodes = tuple(sorted(nodes, key=lambda n: n.id))
        streets = tuple(sorted(streets, key=lambda s: s.id))
        _validate(nodes, streets, area)
        if effective_load is None:
            eff = distribute_street_loads(nodes, streets)
            effective_load = tuple(eff[n.id] for n in nodes)
        else:
            effective_load = tuple(int(v) for v in effective_load)
            if len(effective_load) != len(nodes):
                raise MapError("effective_load length does not match node count")
        ids = np.array([n.id for n in nodes], dtype=np.int64)
        xy = np.array([(n.x, n.y) for n in nodes], dtype=np.float64).reshape(len(nodes), 2)
        weights = np.array(effective_load, dtype=np.float64)
        for arr in (ids, xy, weights):
            arr.setflags(write=False)
        return cls(nodes, streets, float(area), effective_load, ids, xy, weights)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def index_of(self, node_id: int) -> int:
        i = int(np.searchsorted(self.ids, node_id))
        if i >= self.n or self.ids[i] != node_id:
            raise KeyError(node_id)
        return i

    def node(self, node_id: int) -> NodeRecord:
        return self.nodes[self.index_of(node_id)]

    def load_of(self, node_id: int) -> int:
        return self.effective_load[self.index_of(node_id)]

    def subset(self, node_ids) -> "PlanningMap":
        """Sub-map over `node_ids` keeping the parent's effective loads.

        Streets are dropped; their demand already lives in the effective loads.
        """
        idx = sorted(self.index_of(i) for i in node_ids)
        if not idx:
            raise MapError("subset needs at least one node")
        return PlanningMap.build(
            [self.nodes[i] for i in idx],
            (),
            self.area,
            [self.effective_load[i] for i in idx],
        )

    def __eq__(self, other):
        if not isinstance(other, PlanningMap):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.streets == other.streets
            and self.area == other.area
            and self.effective_load == other.effective_load
        )

    __hash__ = None


def total_load(pmap: PlanningMap) -> int:
    return int(sum(pmap.effective_load))


def _validate(nodes, streets, area):
    if not (isinstance(area, (int, float)) and math.isfinite(area) and area > 0):
        raise MapError(f"area must be a positive finite number, got {area!r}")
    if not nodes:
        raise MapError("map must contain at least one node")
    seen = set()
    for n in nodes:
        if n.id in seen:
            raise MapError(f"duplicate node id={n.id}")
        seen.add(n.id)
        if n.id < 0:
            raise MapError(f"negative node id={n.id}")
        if n.load < 0:
            raise MapError(f"negative load on node id={n.id}")
        if not (math.isfinite(n.x) and math.isfinite(n.y)):
            raise MapError(f"non-finite coordinates on node id={n.id}")
    street_ids = set()
    for s in streets:
        if s.id in street_ids:
            raise MapError(f"duplicate street id={s.id}")
        street_ids.add(s.id)
        if s.id < 0:
            raise MapError(f"negative street id={s.id}")
        if s.from_id not in seen or s.to_id not in seen:
            raise MapError(f"dangling endpoint, street id={s.id}")
        if s.from_id == s.to_id:
            raise MapError(f"self-loop street id={s.id}")
        if s.load < 0:
            raise MapError(f"negative load on street id={s.id}")


def _int_field(rec, key, what):
    v = rec.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise MapError(f"{what}: field {key!r} must be an integer, got {v!r}")
    return v


def _num_field(rec, key, what):
    v = rec.get(key)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise MapError(f"{what}: field {key!r} must be a number, got {v!r}")
    return float(v)


def map_from_dict(doc: dict) -> PlanningMap:
    if not isinstance(doc, dict):
        raise MapError("map document must be a JSON object")
    for key in ("area_m2", "nodes"):
        if key not in doc:
            raise MapError(f"missing top-level key {key!r}")
    area = _num_field(doc, "area_m2", "map")
    raw_nodes = doc["nodes"]
    raw_streets = doc.get("streets", [])
    if not isinstance(raw_nodes, list) or not isinstance(raw_streets, list):
        raise MapError("'nodes' and 'streets' must be arrays")

    nodes = []
    for rec in raw_nodes:
        if not isinstance(rec, dict) or "id" not in rec:
            raise MapError(f"node record without id: {rec!r}")
        what = f"node id={rec['id']}"
        # "capacity" is accepted for compatibility with digitizer exports and ignored
        nodes.append(NodeRecord(
            id=_int_field(rec, "id", what),
            x=_num_field(rec, "x", what),
            y=_num_field(rec, "y", what),
            load=_int_field(rec, "load", what),
            name=rec.get("name"),
        ))
    streets = []
    for rec in raw_streets:
        if not isinstance(rec, dict) or "id" not in rec:
            raise MapError(f"street record without id: {rec!r}")
        what = f"street id={rec['id']}"
        streets.append(StreetRecord(
            id=_int_field(rec, "id", what),
            from_id=_int_field(rec, "from", what),
            to_id=_int_field(rec, "to", what),
            load=_int_field(rec, "load", what),
            name=rec.get("name"),
        ))
    return PlanningMap.build(nodes, streets, area)


def parse_map(data: bytes | str) -> PlanningMap:
    """Parse and validate a map document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MapError(f"map file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MapError(f"malformed JSON: {exc}") from None
    return map_from_dict(doc)


def load_map(path) -> PlanningMap:
    with open(path, "rb") as fh:
        return parse_map(fh.read())


def map_to_dict(pmap: PlanningMap) -> dict:
    def node(n):
        d = {"id": n.id, "x": n.x, "y": n.y, "load": n.load}
        if n.name is not None:
            d["name"] = n.name
        return d

    def street(s):
        d = {"id": s.id, "from": s.from_id, "to": s.to_id, "load": s.load}
        if s.name is not None:
            d["name"] = s.name
        return d

    return {
        "area_m2": pmap.area,
        "nodes": [node(n) for n in pmap.nodes],
        "streets": [street(s) for s in pmap.streets],
    }


def emit_map(pmap: PlanningMap) -> str:
    """Canonical JSON text: sorted keys, records sorted by id, one record per line."""
    doc = map_to_dict(pmap)

    def block(records):
        if not records:
            return "[]"
        rows = (json.dumps(r, sort_keys=True, separators=(",", ":")) for r in records)
        return "[\n" + ",\n".join(rows) + "\n]"

    return (
        '{"area_m2":' + json.dumps(doc["area_m2"])
        + ',\n"nodes":' + block(doc["nodes"])
        + ',\n"streets":' + block(doc["streets"])
        + "}\n"
    )
