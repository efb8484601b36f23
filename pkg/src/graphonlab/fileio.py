"""JSON interchange formats for graphons, graphs, partitions and moments.

One self-describing document family:

* graphon: ``masses``, ``blocks`` (upper-triangular records with class
  indices and support/weight arrays; omitted blocks are the zero measure;
  the lower triangle is completed by symmetry), ``functionals``.
* graph: ``n_vertices``, ``labels`` (vertex -> positive label),
  ``edges`` (u, v, psi, optional multiplicity).
* partition: ``class_of`` list.
* moments: ``moments`` list plus ``source`` tag.

Parsing raises :class:`ParseError` with a field path for schema trouble
and :class:`ValidationError` (with the validate_graphon codes) for
semantic trouble. ``parse(serialize(x)) == x`` and serialization is
canonical.
"""
from __future__ import annotations

import json
from typing import Any

from .errors import ParseError, ValidationError
from .graphs import DecoratedMultigraph
from .measures import FiniteMeasure, MomentSequence, TestFunctional, ZERO_MEASURE
from .momentlab import MatchedPair
from .stepgraphon import StepGraphon, validate_graphon
from .transforms import Partition


def _get(obj: Any, key: str, kind, path: str, *, optional: bool = False, default=None):
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    if key not in obj:
        if optional:
            return default
        raise ParseError(f"{path}: missing field {key!r}")
    val = obj[key]
    if kind is float:
        if not isinstance(val, (int, float)) or isinstance(val, bool):
            raise ParseError(f"{path}.{key}: expected a number")
        return float(val)
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ParseError(f"{path}.{key}: expected an integer")
        return val
    if not isinstance(val, kind):
        raise ParseError(f"{path}.{key}: expected {kind.__name__}")
    return val


def _number_list(obj: Any, key: str, path: str, *, integer: bool = False) -> list:
    raw = _get(obj, key, list, path)
    out = []
    for n, x in enumerate(raw):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ParseError(f"{path}.{key}[{n}]: expected a number")
        if integer:
            if not isinstance(x, int):
                raise ParseError(f"{path}.{key}[{n}]: expected an integer")
            out.append(x)
        else:
            out.append(float(x))
    return out


def _wrap_validation(fn, path: str):
    try:
        return fn()
    except ValidationError as e:
        raise ValidationError(f"{path}: {e}", code=e.code) from None


# -- graphons -------------------------------------------------------------------


def parse_measure(obj: Any, path: str) -> FiniteMeasure:
    support = _number_list(obj, "support", path, integer=True)
    weights = _number_list(obj, "weights", path)
    return _wrap_validation(lambda: FiniteMeasure(tuple(support), tuple(weights)), path)


def parse_graphon(doc: Any) -> StepGraphon:
    masses = _number_list(doc, "masses", "graphon")
    q = len(masses)
    cells: dict[tuple[int, int], FiniteMeasure] = {}
    for n, rec in enumerate(_get(doc, "blocks", list, "graphon")):
        path = f"graphon.blocks[{n}]"
        i = _get(rec, "i", int, path)
        j = _get(rec, "j", int, path)
        if not (0 <= i < q and 0 <= j < q):
            raise ParseError(f"{path}: class index out of range for q={q}")
        key = (min(i, j), max(i, j))
        if key in cells:
            raise ParseError(f"{path}: duplicate block for classes {key}")
        cells[key] = parse_measure(rec, path)
    functionals: dict[str, TestFunctional] = {}
    for n, rec in enumerate(_get(doc, "functionals", list, "graphon", optional=True, default=[])):
        path = f"graphon.functionals[{n}]"
        fid = _get(rec, "id", str, path)
        support = _number_list(rec, "support", path, integer=True)
        values = _number_list(rec, "values", path)
        if fid in functionals:
            raise ParseError(f"{path}: duplicate functional id {fid!r}")
        functionals[fid] = _wrap_validation(
            lambda: TestFunctional(fid, tuple(support), tuple(values)), path
        )
    blocks = tuple(
        tuple(cells.get((min(i, j), max(i, j)), ZERO_MEASURE) for j in range(q))
        for i in range(q)
    )
    W = StepGraphon(tuple(masses), blocks, functionals)
    validate_graphon(W)
    return W


def serialize_graphon(W: StepGraphon) -> dict:
    blocks = []
    for i in range(W.q):
        for j in range(i, W.q):
            b = W.blocks[i][j]
            blocks.append(
                {"i": i, "j": j, "support": list(b.support), "weights": list(b.weights)}
            )
    return {
        "masses": list(W.masses),
        "blocks": blocks,
        "functionals": [
            {"id": f.id, "support": list(f.support), "values": list(f.values)}
            for _, f in sorted(W.functionals.items())
        ],
    }


# -- graphs ---------------------------------------------------------------------


def parse_graph(doc: Any) -> DecoratedMultigraph:
    n = _get(doc, "n_vertices", int, "graph")
    edges = []
    for idx, rec in enumerate(_get(doc, "edges", list, "graph", optional=True, default=[])):
        path = f"graph.edges[{idx}]"
        u = _get(rec, "u", int, path)
        v = _get(rec, "v", int, path)
        psi = _get(rec, "psi", str, path)
        mult = _get(rec, "multiplicity", int, path, optional=True, default=1)
        edges.append((u, v, psi, mult))
    labels = {}
    raw_labels = _get(doc, "labels", dict, "graph", optional=True, default={})
    for key, val in raw_labels.items():
        try:
            vertex = int(key)
        except ValueError:
            raise ParseError(f"graph.labels: key {key!r} is not a vertex index") from None
        if isinstance(val, bool) or not isinstance(val, int):
            raise ParseError(f"graph.labels[{key}]: expected an integer label")
        labels[vertex] = val
    return _wrap_validation(lambda: DecoratedMultigraph(n, tuple(edges), labels), "graph")


def serialize_graph(F: DecoratedMultigraph) -> dict:
    return {
        "n_vertices": F.n_vertices,
        "labels": {str(v): l for v, l in sorted(F.labels.items())},
        "edges": [
            {"u": u, "v": v, "psi": psi, "multiplicity": m} for u, v, psi, m in F.edges
        ],
    }


# -- partitions and moments -------------------------------------------------------


def parse_partition(doc: Any) -> Partition:
    class_of = _number_list(doc, "class_of", "partition", integer=True)
    return _wrap_validation(lambda: Partition(tuple(class_of)), "partition")


def serialize_partition(P: Partition) -> dict:
    return {"class_of": list(P.class_of)}


def parse_moments(doc: Any) -> MomentSequence:
    moments = _number_list(doc, "moments", "moments")
    source = _get(doc, "source", str, "moments", optional=True, default="distribution")
    return _wrap_validation(lambda: MomentSequence(tuple(moments), source), "moments")


def serialize_matched_pair(pair: MatchedPair) -> dict:
    return {
        "support_size": pair.support_size,
        "order": pair.order,
        "p": list(pair.p),
        "q": list(pair.q),
        "epsilon": pair.epsilon,
        "null_vector": list(pair.null_vector),
    }


# -- path helpers -----------------------------------------------------------------


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}") from None


def load_graphon(path: str) -> StepGraphon:
    return parse_graphon(_load_json(path))


def load_graph(path: str) -> DecoratedMultigraph:
    return parse_graph(_load_json(path))


def load_partition(path: str) -> Partition:
    return parse_partition(_load_json(path))


def load_moments(path: str) -> MomentSequence:
    return parse_moments(_load_json(path))


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2)
