"""Read-mostly HTTP JSON API over built layers for the explorer UI.

Snapshots are content-addressed by (base layer digest, filter spec):
repeating a filter request returns the existing snapshot instead of
recomputing. All state is immutable apart from the snapshot registry,
which only supports insert-if-absent.
"""

from __future__ import annotations

import glob
import hashlib
import os
import threading
from dataclasses import dataclass, field
from typing import Dict, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from coactnet import export, filtering, metrics
from coactnet.filtering import FilteredSnapshot
from coactnet.model import (
    DEFAULT_LAYER_FILTERS,
    EvidenceUnavailableError,
    FilterSpec,
    Layer,
    LayerKind,
)

DEFAULT_EVIDENCE_PAGE = 200


class SnapshotRegistry:
    """Thread-safe insert-if-absent registry of immutable snapshots."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._snapshots: Dict[str, FilteredSnapshot] = {}

    def get_or_create(self, layer: Layer, spec: FilterSpec) -> FilteredSnapshot:
        snapshot_id = filtering.snapshot_id_for(layer, spec)
        with self._lock:
            existing = self._snapshots.get(snapshot_id)
        if existing is not None:
            return existing
        snapshot = filtering.apply_filter(layer, spec)
        with self._lock:
            return self._snapshots.setdefault(snapshot.snapshot_id, snapshot)

    def get(self, snapshot_id: str) -> Optional[FilteredSnapshot]:
        with self._lock:
            return self._snapshots.get(snapshot_id)


@dataclass
class ServiceState:
    summary: dict
    layers: Dict[LayerKind, Layer]
    usernames: Dict[str, str] = field(default_factory=dict)
    pseudonymize: bool = False
    registry: SnapshotRegistry = field(default_factory=SnapshotRegistry)

    def display_name(self, user_id: str) -> str:
        if self.pseudonymize:
            tag = hashlib.sha256(user_id.encode()).hexdigest()[:10]
            return f"account_{tag}"
        return self.usernames.get(user_id, user_id)


def load_state(build_dir: str, pseudonymize: bool = False) -> ServiceState:
    """Load the artifacts written by the build/analyze pipeline."""
    import json

    summary_path = os.path.join(build_dir, "summary.json")
    summary = {}
    if os.path.exists(summary_path):
        with open(summary_path, "r", encoding="utf-8") as fh:
            summary = json.load(fh)
    layers: Dict[LayerKind, Layer] = {}
    usernames: Dict[str, str] = {}
    for path in sorted(glob.glob(os.path.join(build_dir, "layers", "*.json"))):
        layer, names = export.load_layer(path)
        layers[layer.kind] = layer
        usernames.update(names)
    if not layers:
        raise FileNotFoundError(f"no layer artifacts under {build_dir}")
    return ServiceState(
        summary=summary, layers=layers, usernames=usernames, pseudonymize=pseudonymize
    )


class FilterRequest(BaseModel):
    variant: str
    value: Optional[int] = None


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="coactnet explorer API")

    def _layer(kind_str: str) -> Layer:
        try:
            kind = LayerKind.from_string(kind_str)
        except ValueError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        layer = state.layers.get(kind)
        if layer is None:
            raise HTTPException(status_code=404, detail=f"layer {kind.value} not built")
        return layer

    def _snapshot(snapshot_id: str) -> FilteredSnapshot:
        snap = state.registry.get(snapshot_id)
        if snap is None:
            raise HTTPException(status_code=404, detail=f"unknown snapshot {snapshot_id}")
        return snap

    @app.get("/dataset/summary")
    def dataset_summary() -> dict:
        return state.summary

    @app.get("/layers")
    def list_layers() -> list:
        out = []
        for kind in sorted(state.layers, key=lambda k: k.value):
            layer = state.layers[kind]
            out.append(
                {
                    "kind": kind.value,
                    "stats": metrics.layer_stats(layer).as_dict(),
                    "default_filter": _filter_json(DEFAULT_LAYER_FILTERS[kind]),
                    "evidence_complete": layer.evidence_complete,
                }
            )
        return out

    @app.get("/layers/{kind}/sweep")
    def layer_sweep(kind: str) -> dict:
        from coactnet.pipeline import sweep_rows_as_dicts

        layer = _layer(kind)
        try:
            report = filtering.sweep_report(layer)
        except EvidenceUnavailableError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {
            "rows": sweep_rows_as_dicts(report),
            "node_jaccard": {f"{a}|{b}": v for (a, b), v in sorted(report.node_jaccard.items())},
        }

    @app.post("/layers/{kind}/filter")
    def filter_layer(kind: str, request: FilterRequest) -> dict:
        layer = _layer(kind)
        try:
            spec = FilterSpec(request.variant, request.value)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        try:
            snap = state.registry.get_or_create(layer, spec)
        except EvidenceUnavailableError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        return {
            "snapshot_id": snap.snapshot_id,
            "kind": layer.kind.value,
            "filter": _filter_json(spec),
            "stats": snap.stats.as_dict(),
        }

    @app.get("/snapshots/{snapshot_id}/components")
    def snapshot_components(
        snapshot_id: str, min_size: int = 1, offset: int = 0, limit: int = 50
    ) -> dict:
        snap = _snapshot(snapshot_id)
        comps = metrics.connected_components(snap.layer)
        comps = [c for c in comps if len(c) >= min_size]
        page = comps[offset : offset + limit]
        return {
            "total": len(comps),
            "offset": offset,
            "components": [
                {
                    "index": offset + i,
                    "size": len(c),
                    "members": sorted(c),
                    "usernames": [state.display_name(u) for u in sorted(c)],
                }
                for i, c in enumerate(page)
            ],
        }

    @app.get("/snapshots/{snapshot_id}/components/{index}")
    def snapshot_component_detail(
        snapshot_id: str,
        index: int,
        evidence_offset: int = 0,
        evidence_limit: int = DEFAULT_EVIDENCE_PAGE,
    ) -> dict:
        snap = _snapshot(snapshot_id)
        comps = metrics.connected_components(snap.layer)
        if not 0 <= index < len(comps):
            raise HTTPException(status_code=404, detail=f"no component {index}")
        comp = comps[index]
        members = sorted(comp)
        internal = [e for e in snap.layer.edges if e.user_a in comp and e.user_b in comp]
        evidence = [p for e in internal for p in e.pairs]
        evidence_limit = min(evidence_limit, DEFAULT_EVIDENCE_PAGE)
        page = evidence[evidence_offset : evidence_offset + evidence_limit]
        return {
            "index": index,
            "size": len(members),
            "members": members,
            "usernames": [state.display_name(u) for u in members],
            "edges": [
                {
                    "user_a": e.user_a,
                    "user_b": e.user_b,
                    "weight": e.weight,
                    "min_delta_t": e.min_delta_t,
                }
                for e in internal
            ],
            "evidence_total": len(evidence),
            "evidence_offset": evidence_offset,
            "evidence": [export.pair_to_json(p) for p in page],
        }

    @app.get("/overlap")
    def overlap(snapshots: str) -> dict:
        ids = [s for s in snapshots.split(",") if s]
        if len(ids) < 2:
            raise HTTPException(status_code=422, detail="need at least two snapshot ids")
        snaps = [_snapshot(s) for s in ids]
        kinds = [s.base_kind for s in snaps]
        if len(set(kinds)) != len(kinds):
            raise HTTPException(status_code=422, detail="snapshots must be of distinct layers")
        matrix = metrics.cross_layer_overlap({s.base_kind: s.layer for s in snaps})
        return {
            "snapshots": {s.base_kind.value: s.snapshot_id for s in snaps},
            "rows": metrics.overlap_rows(matrix),
        }

    return app


def _filter_json(spec: FilterSpec) -> dict:
    return {"variant": spec.variant, "value": spec.value, "label": spec.label}


def serve(build_dir: str, host: str = "127.0.0.1", port: int = 8080, pseudonymize: bool = False):
    """Run the explorer API over a build directory (blocking)."""
    import uvicorn

    app = create_app(load_state(build_dir, pseudonymize=pseudonymize))
    uvicorn.run(app, host=host, port=port, log_level="warning")
