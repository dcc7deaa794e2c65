"""Instance and witness JSON documents (``"schema": 1``).

An instance document is ``{"schema": 1, "kind": ..., "ell": int, "stages": [...]}``.
Voting documents may instead give shared ``candidates``, ``k`` and ``x`` plus
one vote list per stage under ``profiles``; votes name candidates (or are
``null`` for an abstention).  Per-stage fields by kind:

* matching: ``n``, ``edges`` as ``[u, v]`` or ``[u, v, color]``
* stpath: ``n``, ``edges``, ``s``, ``t``, optional ``vertex_colors`` and ``labels``
* matroid: ``type`` (``graphic`` with ``n`` and ``edges``; ``uniform`` with
  ``size`` and ``rank``; ``partition`` with ``blocks`` and ``capacities``),
  optional ``weights`` (default all 1), ``x`` (default 0) and ``labels``
* voting: ``votes`` (candidate indices or ``null``), ``k``, ``x``
* vertexcover: ``n``, ``edges``, ``k``

Any stage may carry ``colors``, one color per base-set element, used by the
``colored`` command.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Hashable, Sequence

from .core import InstanceFormatError, PreconditionError, Solution
from .instances import VertexCoverStage
from .matching import MatchingStage
from .matroid import GraphicMatroid, MatroidStage, PartitionMatroid, UniformMatroid
from .multistage import MultistageInstance, label_set
from .stpath import StPathStage
from .voting import VotingStage

SCHEMA = 1
KINDS = ("voting", "matroid", "matching", "stpath", "vertexcover")


def dumps(doc: Any) -> str:
    """Canonical rendering: sorted keys, fixed separators, trailing newline."""
    return json.dumps(doc, sort_keys=True) + "\n"


def _get(doc: dict, key: str, where: str, kind: type | tuple = object, default: Any = ...):
    if not isinstance(doc, dict):
        raise InstanceFormatError(where, "expected an object")
    if key not in doc:
        if default is ...:
            raise InstanceFormatError(f"{where}.{key}", "missing")
        return default
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise InstanceFormatError(f"{where}.{key}", f"expected an integer, got {value!r}")
    if kind is not int and not isinstance(value, kind):
        raise InstanceFormatError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
    return value


def _int_list(values: Any, where: str) -> list[int]:
    if not isinstance(values, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in values):
        raise InstanceFormatError(where, "expected a list of integers")
    return list(values)


def _hashable(label: Any) -> Hashable:
    return tuple(_hashable(x) for x in label) if isinstance(label, list) else label


def _edges(doc: dict, where: str, with_color: bool = False) -> tuple[list[tuple[int, int]], list[int] | None]:
    raw = _get(doc, "edges", where, list)
    edges, colors = [], []
    for i, e in enumerate(raw):
        ok = isinstance(e, list) and len(e) in ((2, 3) if with_color else (2,))
        if not ok or any(isinstance(v, bool) or not isinstance(v, int) for v in e):
            raise InstanceFormatError(f"{where}.edges[{i}]", "expected [u, v]" + (" or [u, v, color]" if with_color else ""))
        edges.append((e[0], e[1]))
        if len(e) == 3:
            colors.append(e[2])
    if colors and len(colors) != len(edges):
        raise InstanceFormatError(f"{where}.edges", "either every edge has a color or none does")
    return edges, (colors or None)


def _labels(doc: dict, where: str, size: int) -> tuple[Hashable, ...] | None:
    raw = doc.get("labels")
    if raw is None:
        return None
    if not isinstance(raw, list) or len(raw) != size:
        raise InstanceFormatError(f"{where}.labels", f"expected a list of {size} labels")
    return tuple(_hashable(x) for x in raw)


def _build(where: str, fn, *args):
    try:
        return fn(*args)
    except PreconditionError as exc:
        raise InstanceFormatError(where, str(exc)) from exc


def stage_from_doc(kind: str, doc: dict, where: str):
    if kind == "matching":
        n = _get(doc, "n", where, int)
        edges, colors = _edges(doc, where, with_color=True)
        return _build(where, MatchingStage, n, tuple(edges), tuple(colors) if colors else None)
    if kind == "stpath":
        n = _get(doc, "n", where, int)
        edges, _ = _edges(doc, where)
        colors = doc.get("vertex_colors")
        if colors is not None:
            colors = tuple(_int_list(colors, f"{where}.vertex_colors"))
        return _build(where, StPathStage, n, tuple(edges), _get(doc, "s", where, int), _get(doc, "t", where, int),
                      colors, _labels(doc, where, n))
    if kind == "matroid":
        mtype = _get(doc, "type", where, str)
        if mtype == "graphic":
            n = _get(doc, "n", where, int)
            edges, _ = _edges(doc, where)
            oracle = _build(where, GraphicMatroid, n, tuple(edges))
            default_labels = tuple(edges)
        elif mtype == "uniform":
            oracle = _build(where, UniformMatroid, _get(doc, "size", where, int), _get(doc, "rank", where, int))
            default_labels = None
        elif mtype == "partition":
            blocks = tuple(_int_list(_get(doc, "blocks", where, list), f"{where}.blocks"))
            caps = tuple(_int_list(_get(doc, "capacities", where, list), f"{where}.capacities"))
            oracle = _build(where, PartitionMatroid, blocks, caps)
            default_labels = None
        else:
            raise InstanceFormatError(f"{where}.type", f"unknown matroid type {mtype!r}")
        weights = doc.get("weights")
        weights = tuple(_int_list(weights, f"{where}.weights")) if weights is not None else (1,) * oracle.size
        labels = _labels(doc, where, oracle.size)
        return _build(where, MatroidStage, oracle, weights, _get(doc, "x", where, int, 0),
                      labels if labels is not None else default_labels)
    if kind == "voting":
        votes = _get(doc, "votes", where, list)
        n_cand = _get(doc, "candidates", where, int)
        for i, v in enumerate(votes):
            if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
                raise InstanceFormatError(f"{where}.votes[{i}]", "expected a candidate index or null")
        return _build(where, VotingStage, n_cand, tuple(votes), _get(doc, "k", where, int),
                      _get(doc, "x", where, int), _labels(doc, where, n_cand))
    if kind == "vertexcover":
        n = _get(doc, "n", where, int)
        edges, _ = _edges(doc, where)
        return _build(where, VertexCoverStage, n, tuple(edges), _get(doc, "k", where, int), _labels(doc, where, n))
    raise InstanceFormatError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def _voting_profiles(doc: dict) -> list[dict]:
    """Expand the shared-candidates voting form into per-stage documents."""
    cands = _get(doc, "candidates", "instance", list)
    labels = [_hashable(c) for c in cands]
    if len(set(labels)) != len(labels):
        raise InstanceFormatError("instance.candidates", "candidate names must be distinct")
    index = {c: i for i, c in enumerate(labels)}
    k = _get(doc, "k", "instance", int)
    x = _get(doc, "x", "instance", int)
    stages = []
    for si, votes in enumerate(_get(doc, "profiles", "instance", list)):
        where = f"instance.profiles[{si}]"
        if not isinstance(votes, list):
            raise InstanceFormatError(where, "expected a list of votes")
        mapped = []
        for ai, v in enumerate(votes):
            if v is None:
                mapped.append(None)
            elif _hashable(v) in index:
                mapped.append(index[_hashable(v)])
            else:
                raise InstanceFormatError(f"{where}[{ai}]", f"vote for unknown candidate {v!r}")
        stages.append({"candidates": len(cands), "votes": mapped, "k": k, "x": x, "labels": cands})
    return stages


def instance_from_doc(doc: Any, ell: int | None = None) -> MultistageInstance:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance", "expected a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InstanceFormatError("schema", f"unsupported schema {schema!r}")
    kind = _get(doc, "kind", "instance", str)
    if kind not in KINDS:
        raise InstanceFormatError("kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if ell is None:
        ell = _get(doc, "ell", "instance", int, 0)
    if kind == "voting" and "profiles" in doc:
        stage_docs = _voting_profiles(doc)
    else:
        stage_docs = _get(doc, "stages", "instance", list)
    if not stage_docs:
        raise InstanceFormatError("instance.stages", "at least one stage is required")
    stages = tuple(stage_from_doc(kind, sd, f"stages[{i}]") for i, sd in enumerate(stage_docs))
    if ell < 0:
        raise InstanceFormatError("ell", "must be non-negative")
    return MultistageInstance(stages, ell)


def stage_colors(stage, doc: dict | None) -> tuple[int, ...] | None:
    """Colors attached to a stage, from the document or the stage itself."""
    if doc is not None and "colors" in doc:
        return tuple(_int_list(doc["colors"], "colors"))
    for attr in ("edge_colors", "vertex_colors"):
        value = getattr(stage, attr, None)
        if value is not None:
            return tuple(value)
    return None


def _label_json(label: Hashable) -> Any:
    return list(label) if isinstance(label, tuple) else label


def stage_to_doc(stage) -> dict:
    if stage.kind == "matching":
        colors = stage.edge_colors
        edges = [[u, v] + ([colors[i]] if colors else []) for i, (u, v) in enumerate(stage.edges)]
        return {"n": stage.n, "edges": edges}
    if stage.kind == "stpath":
        doc = {"n": stage.n, "edges": [list(e) for e in stage.edges], "s": stage.s, "t": stage.t}
        if stage.vertex_colors is not None:
            doc["vertex_colors"] = list(stage.vertex_colors)
        if stage.vertex_labels is not None:
            doc["labels"] = [_label_json(x) for x in stage.vertex_labels]
        return doc
    if stage.kind == "matroid":
        o = stage.oracle
        if isinstance(o, GraphicMatroid):
            doc = {"type": "graphic", "n": o.n, "edges": [list(e) for e in o.edges]}
        elif isinstance(o, UniformMatroid):
            doc = {"type": "uniform", "size": o.size, "rank": o.k}
        elif isinstance(o, PartitionMatroid):
            doc = {"type": "partition", "blocks": list(o.block), "capacities": list(o.capacities)}
        else:
            raise PreconditionError(f"matroid oracle {type(o).__name__} has no document form")
        doc.update(weights=list(stage.weights), x=stage.x)
        if stage.element_labels is not None:
            doc["labels"] = [_label_json(x) for x in stage.element_labels]
        return doc
    if stage.kind == "voting":
        doc = {"candidates": stage.n_candidates, "votes": list(stage.votes), "k": stage.k, "x": stage.x}
        if stage.candidate_labels is not None:
            doc["labels"] = [_label_json(x) for x in stage.candidate_labels]
        return doc
    if stage.kind == "vertexcover":
        doc = {"n": stage.n, "edges": [list(e) for e in stage.edges], "k": stage.k}
        if stage.vertex_labels is not None:
            doc["labels"] = [_label_json(x) for x in stage.vertex_labels]
        return doc
    raise PreconditionError(f"unknown kind {stage.kind!r}")


def instance_to_doc(mi: MultistageInstance) -> dict:
    return {"schema": SCHEMA, "kind": mi.kind, "ell": mi.ell, "stages": [stage_to_doc(st) for st in mi.stages]}


def witness_doc(mi: MultistageInstance, seq: Sequence[Solution] | None, **extra: Any) -> dict:
    doc: dict[str, Any] = {"schema": SCHEMA, "kind": mi.kind, "ell": mi.ell, "tau": mi.tau,
                           "answer": "no" if seq is None else "yes"}
    if seq is not None:
        doc["sequence"] = [list(s) for s in seq]
        doc["labels"] = [sorted((_label_json(x) for x in label_set(st, s)), key=repr)
                         for st, s in zip(mi.stages, seq)]
    doc.update(extra)
    return doc


def sequence_from_witness(doc: Any) -> list[Solution]:
    if not isinstance(doc, dict):
        raise InstanceFormatError("witness", "expected a JSON object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise InstanceFormatError("witness.schema", f"unsupported schema {doc.get('schema')!r}")
    raw = _get(doc, "sequence", "witness", list)
    return [tuple(_int_list(s, f"witness.sequence[{i}]")) for i, s in enumerate(raw)]


def load_json(path: str | Path, what: str = "input") -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(what, f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(what, f"invalid JSON at line {exc.lineno} column {exc.colno}") from exc
