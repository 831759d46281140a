"""Whole-body link model: segment masses, endpoints, center-of-gravity math.

The body is approximated by 15 rigid segments joined in a tree rooted at the
Hip. Each segment carries a mass ratio (fraction of total body mass) and a
cog_ratio placing its center of gravity along the proximal->distal axis.
Segment endpoints resolve to pose landmarks, or to the midpoint of two
landmarks (e.g. the chest spans mid-hip to mid-shoulder).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ModelError, TraceSchemaError
from .trace_io import LandmarkTrace, to_y_up

Endpoint = str | tuple[str, str]


@dataclass(frozen=True)
class SegmentDef:
    """One rigid segment of the link model."""

    name: str
    mass_ratio: float
    proximal: Endpoint
    distal: Endpoint
    cog_ratio: float
    # Hands may name a fingertip landmark that some traces lack; when absent
    # the segment degenerates to a point at the proximal endpoint.
    optional_distal: bool = False

    def __post_init__(self):
        if not 0.0 < self.mass_ratio < 1.0:
            raise ModelError(f"segment {self.name}: mass_ratio must be in (0, 1), "
                             f"got {self.mass_ratio}")
        if not 0.0 <= self.cog_ratio <= 1.0:
            raise ModelError(f"segment {self.name}: cog_ratio must be in [0, 1], "
                             f"got {self.cog_ratio}")

    def landmarks(self) -> tuple[str, ...]:
        names: list[str] = []
        for ep in (self.proximal, self.distal):
            names.extend((ep,) if isinstance(ep, str) else ep)
        return tuple(dict.fromkeys(names))


@dataclass(frozen=True)
class BodyModel:
    """Segments plus the rooted joint tree connecting them."""

    segments: tuple[SegmentDef, ...]
    root: str
    children: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        names = [s.name for s in self.segments]
        if len(set(names)) != len(names):
            raise ModelError("duplicate segment names")
        known = set(names)
        if self.root not in known:
            raise ModelError(f"root segment {self.root!r} not defined")
        parent_count = {n: 0 for n in names}
        for parent, kids in self.children.items():
            if parent not in known:
                raise ModelError(f"tree parent {parent!r} not a segment")
            for kid in kids:
                if kid not in known:
                    raise ModelError(f"tree child {kid!r} not a segment")
                parent_count[kid] += 1
        if parent_count[self.root] != 0:
            raise ModelError(f"root segment {self.root!r} must have no parent")
        for n in names:
            if n != self.root and parent_count[n] != 1:
                raise ModelError(f"segment {n!r} must have exactly one parent joint, "
                                 f"found {parent_count[n]}")
        # n-1 edges and single-parent already hold; reachability rules out
        # disjoint cycles.
        if set(self.traversal_order()) != known:
            raise ModelError("joint graph is not a tree rooted at "
                             f"{self.root!r}: some segments unreachable")

    def segment(self, name: str) -> SegmentDef:
        for s in self.segments:
            if s.name == name:
                return s
        raise ModelError(f"no segment named {name!r}")

    @property
    def segment_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.segments)

    def children_of(self, name: str) -> tuple[str, ...]:
        return self.children.get(name, ())

    def traversal_order(self) -> tuple[str, ...]:
        """Root-first depth-first order; children in declaration order."""
        order: list[str] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            stack.extend(reversed(self.children_of(node)))
        return tuple(order)

    def subtree_mass_ratio(self, name: str) -> float:
        """Summed mass ratio of a segment and everything distal to it."""
        total = 0.0
        stack = [name]
        while stack:
            node = stack.pop()
            total += self.segment(node).mass_ratio
            stack.extend(self.children_of(node))
        return total

    def total_mass_ratio(self) -> float:
        return float(sum(s.mass_ratio for s in self.segments))

    def required_landmarks(self, include_optional: bool = False) -> tuple[str, ...]:
        names: list[str] = []
        for s in self.segments:
            for ep_names, optional in ((_endpoint_names(s.proximal), False),
                                       (_endpoint_names(s.distal), s.optional_distal)):
                if optional and not include_optional:
                    continue
                names.extend(ep_names)
        return tuple(dict.fromkeys(names))


@dataclass
class SegmentCogTrace:
    """Per-segment center-of-gravity positions in meters, +y up."""

    timestamps: np.ndarray
    cogs: dict[str, np.ndarray]

    @property
    def n_frames(self) -> int:
        return len(self.timestamps)

    @property
    def segment_names(self) -> tuple[str, ...]:
        return tuple(self.cogs.keys())


def _endpoint_names(ep: Endpoint) -> tuple[str, ...]:
    return (ep,) if isinstance(ep, str) else tuple(ep)


def _parse_endpoint(raw, segment: str) -> Endpoint:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, (list, tuple)) and len(raw) == 2 and all(isinstance(e, str) for e in raw):
        return (raw[0], raw[1])
    raise ModelError(f"segment {segment!r}: endpoint must be a landmark name or a "
                     f"pair of names, got {raw!r}")


def _model_from_dict(doc: dict, origin: str) -> BodyModel:
    try:
        seg_docs = doc["segments"]
        tree = doc["tree"]
        root = tree["root"]
        children_doc = tree["children"]
    except (KeyError, TypeError) as exc:
        raise ModelError(f"{origin}: model file needs 'segments' and "
                         f"'tree' with 'root' and 'children'") from exc
    segments = []
    for sd in seg_docs:
        try:
            segments.append(SegmentDef(
                name=sd["name"],
                mass_ratio=float(sd["mass_ratio"]),
                proximal=_parse_endpoint(sd["proximal"], sd.get("name", "?")),
                distal=_parse_endpoint(sd["distal"], sd.get("name", "?")),
                cog_ratio=float(sd["cog_ratio"]),
                optional_distal=bool(sd.get("optional_distal", False)),
            ))
        except KeyError as exc:
            raise ModelError(f"{origin}: segment entry missing field {exc}") from exc
    children = {k: tuple(v) for k, v in children_doc.items()}
    model = BodyModel(segments=tuple(segments), root=root, children=children)
    total = model.total_mass_ratio()
    if abs(total - 1.0) > 1e-6:
        raise ModelError(f"{origin}: segment mass ratios must sum to 1, got {total!r}")
    return model


_default_model: BodyModel | None = None


def default_body_model() -> BodyModel:
    """The 15-segment model shipped with the package."""
    global _default_model
    if _default_model is None:
        text = resources.files("effortwave.data").joinpath("body_model.json").read_text()
        _default_model = _model_from_dict(json.loads(text), origin="default body model")
    return _default_model


def load_body_model(path: str | Path) -> BodyModel:
    """Load a model override file (same shape as the packaged default)."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: not valid JSON: {exc}") from exc
    return _model_from_dict(doc, origin=str(path))


def _resolve_endpoint(trace: LandmarkTrace, ep: Endpoint) -> np.ndarray:
    names = _endpoint_names(ep)
    if len(names) == 1:
        return trace.landmark(names[0])
    return 0.5 * (trace.landmark(names[0]) + trace.landmark(names[1]))


def compute_cog_positions(trace: LandmarkTrace, model: BodyModel) -> SegmentCogTrace:
    """Per-segment CoG trajectories in meters with +y up.

    cog = proximal + cog_ratio * (distal - proximal), evaluated per frame in
    trace units, then scaled by unit_scale and rotated to the +y-up frame.
    Missing optional distal landmarks degrade the segment to a point at its
    proximal endpoint.
    """
    available = set(trace.landmark_names)
    cogs: dict[str, np.ndarray] = {}
    for seg in model.segments:
        for name in _endpoint_names(seg.proximal):
            if name not in available:
                raise TraceSchemaError(
                    f"segment {seg.name}: landmark {name!r} not in trace", landmark=name)
        distal_names = _endpoint_names(seg.distal)
        distal_missing = any(n not in available for n in distal_names)
        if distal_missing and not seg.optional_distal:
            missing = next(n for n in distal_names if n not in available)
            raise TraceSchemaError(
                f"segment {seg.name}: landmark {missing!r} not in trace", landmark=missing)

        prox = _resolve_endpoint(trace, seg.proximal)
        if distal_missing:
            raw = prox
        else:
            dist = _resolve_endpoint(trace, seg.distal)
            raw = prox + seg.cog_ratio * (dist - prox)
        cogs[seg.name] = to_y_up(raw * trace.unit_scale, trace.up_axis)
    return SegmentCogTrace(timestamps=trace.timestamps.copy(), cogs=cogs)


def whole_body_com(cogs: SegmentCogTrace, model: BodyModel) -> np.ndarray:
    """Mass-weighted whole-body center of mass, (n_frames, 3).

    Mass ratios sum to 1 for a full model, so the weighted sum needs no
    renormalization.
    """
    com = np.zeros((cogs.n_frames, 3))
    for seg in model.segments:
        com += seg.mass_ratio * cogs.cogs[seg.name]
    return com
