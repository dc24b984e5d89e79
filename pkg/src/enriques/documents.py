"""JSON cluster documents: one arena plus one weighted cluster per file.

Schema (format_version 1)::

    {
      "format_version": 1,
      "weight_kind": "virtual" | "multiplicity" | "value",
      "points": [
        {"id": "O",  "weight": 2},
        {"id": "p1", "parent": "O", "weight": 2},
        {"id": "p4", "parent": "p3", "second_proximity": "p2", "weight": 0},
        ...
      ]
    }

Points appear in arena order, so every reference resolves to an earlier
entry.  A weight of 0 keeps the point in the arena without making it a
cluster member; that is how a file carries points the weighted cluster
does not reach (for example satellites shared with another cluster).

Parsing aggregates every structural problem into one
:class:`DocumentValidationError` instead of stopping at the first.
Serialization writes points in arena order under their labels, inventing
``q#1``, ``q#2``, ... for unlabeled points (the ones created during
recovery), so ``parse(serialize(...))`` round-trips and serializer output
re-parses to an equal cluster.
"""

from __future__ import annotations

import json
from typing import Any

from .arena import ArenaTree, PointId
from .cluster import WeightedCluster, WeightKind
from .errors import (
    ArenaMismatch,
    ClusterError,
    Diagnostic,
    DocumentSyntaxError,
    DocumentValidationError,
)

FORMAT_VERSION = 1

_KINDS = {kind.value: kind for kind in WeightKind}


def parse(text: str) -> tuple[ArenaTree, WeightedCluster]:
    """Parse a document into a fresh arena and its weighted cluster."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentSyntaxError(
            f"not valid JSON: {err.msg} (line {err.lineno},"
            f" column {err.colno})", position=err.pos) from err
    diagnostics: list[Diagnostic] = []
    if not isinstance(doc, dict):
        raise DocumentSyntaxError("top level must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        diagnostics.append(Diagnostic(
            "UnsupportedVersion", None,
            f"format_version must be {FORMAT_VERSION}, got {version!r}"))
    kind = _KINDS.get(doc.get("weight_kind"))
    if kind is None:
        diagnostics.append(Diagnostic(
            "UnknownWeightKind", None,
            f"weight_kind must be one of {sorted(_KINDS)},"
            f" got {doc.get('weight_kind')!r}"))
    entries = doc.get("points")
    if not isinstance(entries, list):
        diagnostics.append(Diagnostic(
            "MissingPoints", None, "'points' must be a list"))
        raise DocumentValidationError(diagnostics)

    ids: dict[str, PointId] = {}
    records: list[tuple[PointId | None, PointId | None, str | None]] = []
    weights: dict[PointId, int] = {}

    def resolve(entry_index: int, field: str, value: Any) -> PointId | None:
        if value is None:
            return None
        if not isinstance(value, str) or value not in ids:
            diagnostics.append(Diagnostic(
                "UnknownPoint" if field != "parent" else "UnknownParent",
                entry_index,
                f"{field} {value!r} does not resolve to an earlier point"))
            return None
        return ids[value]

    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            diagnostics.append(Diagnostic(
                "BadEntry", i, "each point needs a string 'id'"))
            continue
        point_id = entry["id"]
        if point_id in ids:
            diagnostics.append(Diagnostic(
                "DuplicateId", i, f"id {point_id!r} already used"))
            continue
        parent = resolve(i, "parent", entry.get("parent"))
        second = resolve(i, "second_proximity", entry.get("second_proximity"))
        weight = entry.get("weight")
        if not isinstance(weight, int) or weight < 0:
            diagnostics.append(Diagnostic(
                "InvalidWeight", i,
                f"weight must be a non-negative integer, got {weight!r}"))
            weight = 0
        label = entry.get("label")
        if label is not None and not isinstance(label, str):
            diagnostics.append(Diagnostic(
                "BadEntry", i, "label must be a string when present"))
            label = None
        ids[point_id] = len(records)
        records.append((parent, second, label if label is not None else point_id))
        if weight > 0:
            weights[len(records) - 1] = weight

    tree = ArenaTree.from_records(records)
    diagnostics.extend(tree.validate())
    if diagnostics:
        raise DocumentValidationError(diagnostics)
    try:
        cluster = WeightedCluster(tree, kind, weights)
    except ClusterError as err:
        raise DocumentValidationError(
            [Diagnostic(type(err).__name__, None, str(err))]) from err
    return tree, cluster


def _document_ids(tree: ArenaTree) -> dict[PointId, str]:
    taken: set[str] = set()
    out: dict[PointId, str] = {}
    counter = 0
    for p in tree.points():
        label = tree.label(p)
        if label is None or label in taken:
            counter += 1
            label = f"q#{counter}"
            while label in taken:
                counter += 1
                label = f"q#{counter}"
        taken.add(label)
        out[p] = label
    return out


def serialize(tree: ArenaTree, cluster: WeightedCluster) -> str:
    """Serialize the whole arena with the cluster's weights (0 = not a member)."""
    if cluster.tree is not tree:
        raise ArenaMismatch("cluster does not live over the given arena")
    names = _document_ids(tree)
    points = []
    for p in tree.points():
        entry: dict[str, Any] = {"id": names[p]}
        parent = tree.parent(p)
        if parent is not None:
            entry["parent"] = names[parent]
        second = tree.second_proximity(p)
        if second is not None:
            entry["second_proximity"] = names[second]
        entry["weight"] = cluster.get(p, 0)
        points.append(entry)
    doc = {
        "format_version": FORMAT_VERSION,
        "weight_kind": cluster.kind.value,
        "points": points,
    }
    return json.dumps(doc, indent=2) + "\n"
