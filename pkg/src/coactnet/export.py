"""Serialization: layer JSON persistence, GraphML and CSV edge-list export.

All writers emit canonical, byte-stable output (sorted keys, sorted
edges, atomic temp-then-rename) so identical inputs produce identical
artifacts.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import Dict, Iterable, List, Mapping, Optional, Tuple
from xml.etree import ElementTree

from coactnet.model import (
    CoActionPair,
    Layer,
    LayerKind,
    UserEdge,
)

EDGE_CSV_HEADERS = ["user_a", "user_b", "weight", "min_delta_t"]


def write_atomic(path: str, data: str) -> None:
    """Write text atomically (temp file in the target directory, then rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_atomic_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pair_to_json(pair: CoActionPair) -> dict:
    return {
        "post_a": pair.post_a,
        "post_b": pair.post_b,
        "user_a": pair.user_a,
        "user_b": pair.user_b,
        "score": pair.score,
        "delta_t": pair.delta_t,
    }


def layer_to_json(layer: Layer, usernames: Optional[Mapping[str, str]] = None) -> dict:
    usernames = usernames or {}
    return {
        "kind": layer.kind.value,
        "evidence_complete": layer.evidence_complete,
        "edges": [
            {
                "user_a": e.user_a,
                "user_b": e.user_b,
                "weight": e.weight,
                "min_delta_t": e.min_delta_t,
                "pairs": [pair_to_json(p) for p in e.pairs],
            }
            for e in layer.edges
        ],
        "usernames": {u: usernames[u] for u in sorted(usernames)},
    }


def layer_from_json(obj: dict) -> Tuple[Layer, Dict[str, str]]:
    kind = LayerKind.from_string(obj["kind"])
    edges = []
    for e in obj["edges"]:
        pairs = tuple(
            CoActionPair(
                layer_kind=kind,
                post_a=p["post_a"],
                post_b=p["post_b"],
                user_a=p["user_a"],
                user_b=p["user_b"],
                score=p["score"],
                delta_t=p["delta_t"],
            )
            for p in e["pairs"]
        )
        edges.append(
            UserEdge(
                user_a=e["user_a"],
                user_b=e["user_b"],
                weight=e["weight"],
                min_delta_t=e["min_delta_t"],
                pairs=pairs,
            )
        )
    layer = Layer(kind=kind, edges=tuple(edges), evidence_complete=obj.get("evidence_complete", True))
    return layer, dict(obj.get("usernames", {}))


def dump_layer(layer: Layer, path: str, usernames: Optional[Mapping[str, str]] = None) -> None:
    write_atomic(path, canonical_json(layer_to_json(layer, usernames)))


def load_layer(path: str) -> Tuple[Layer, Dict[str, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        return layer_from_json(json.load(fh))


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def edges_to_csv(layer: Layer) -> str:
    """CSV edge list with fixed columns user_a,user_b,weight,min_delta_t."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EDGE_CSV_HEADERS)
    for e in layer.edges:
        writer.writerow([e.user_a, e.user_b, e.weight, e.min_delta_t])
    return buf.getvalue()


def edges_from_csv(text: str, kind: LayerKind) -> Layer:
    """Import a CSV edge list (evidence is not part of this format)."""
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != EDGE_CSV_HEADERS:
        raise ValueError(f"edge CSV must have headers {','.join(EDGE_CSV_HEADERS)}")
    edges = [
        UserEdge(
            user_a=row["user_a"],
            user_b=row["user_b"],
            weight=int(row["weight"]),
            min_delta_t=int(row["min_delta_t"]),
        )
        for row in reader
    ]
    return Layer(kind=kind, edges=tuple(edges), evidence_complete=False)


def layer_to_graphml(layer: Layer, usernames: Optional[Mapping[str, str]] = None) -> str:
    """GraphML with a username node attribute and weight/min_delta_t edge attributes."""
    usernames = usernames or {}
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ElementTree.Element("graphml", xmlns=ns)
    for key_id, attr, target, atype in (
        ("d0", "username", "node", "string"),
        ("d1", "weight", "edge", "int"),
        ("d2", "min_delta_t", "edge", "int"),
    ):
        ElementTree.SubElement(
            root, "key", id=key_id, **{"for": target, "attr.name": attr, "attr.type": atype}
        )
    graph = ElementTree.SubElement(root, "graph", id=layer.kind.value, edgedefault="undirected")
    for node in sorted(layer.nodes):
        el = ElementTree.SubElement(graph, "node", id=node)
        data = ElementTree.SubElement(el, "data", key="d0")
        data.text = usernames.get(node, node)
    for e in layer.edges:
        el = ElementTree.SubElement(graph, "edge", source=e.user_a, target=e.user_b)
        w = ElementTree.SubElement(el, "data", key="d1")
        w.text = str(e.weight)
        dt = ElementTree.SubElement(el, "data", key="d2")
        dt.text = str(e.min_delta_t)
    ElementTree.indent(root)
    return ElementTree.tostring(root, encoding="unicode", xml_declaration=True) + "\n"


def layer_from_graphml(text: str) -> Layer:
    """Reimport a GraphML export (round-trips node/edge structure and weights)."""
    root = ElementTree.fromstring(text)
    ns = {"g": "http://graphml.graphdrawing.org/xmlns"}
    graph = root.find("g:graph", ns)
    if graph is None:
        raise ValueError("no <graph> element")
    kind = LayerKind.from_string(graph.get("id", ""))
    keys = {k.get("id"): k.get("attr.name") for k in root.findall("g:key", ns)}
    edges = []
    for el in graph.findall("g:edge", ns):
        attrs = {keys.get(d.get("key")): d.text for d in el.findall("g:data", ns)}
        ua, ub = sorted((el.get("source"), el.get("target")))
        edges.append(
            UserEdge(
                user_a=ua,
                user_b=ub,
                weight=int(attrs.get("weight", 1)),
                min_delta_t=int(attrs.get("min_delta_t", 0)),
            )
        )
    return Layer(kind=kind, edges=tuple(sorted(edges, key=lambda e: e.key)), evidence_complete=False)


def overlap_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source_layer", "target_layer", "node_overlap", "edge_overlap"])
    for row in rows:
        writer.writerow(
            [row["source_layer"], row["target_layer"], row["node_overlap"], row["edge_overlap"]]
        )
    return buf.getvalue()
