"""Declarative descriptions of synthetic shortcut families.

A spec says *what* gets injected (dot color/location, logo stamp,
watermark tiling) and under which per-image probability and seed. It is
JSON round-trippable so a manifest can embed the exact spec that
produced a perturbed dataset.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import InvalidSpecError
from ..glyphs import mark_stamp, spread_palette

KINDS = ("color_dot", "location_dot", "logo", "watermark")
STAMP_MODES = ("per_class", "target_class")

Color = tuple[float, float, float]


@dataclass(frozen=True)
class TextPattern:
    """Tiling parameters for a full-image watermark overlay."""

    spacing: tuple[int, int] = (12, 12)  # tile pitch (x, y) in pixels
    alpha: float = 0.35
    color: Color = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.spacing[0] < 1 or self.spacing[1] < 1:
            raise InvalidSpecError("text_pattern spacing must be >= 1 pixel")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidSpecError(f"text_pattern alpha {self.alpha} outside [0, 1]")


@dataclass(frozen=True)
class ShortcutSpec:
    """One synthetic shortcut family.

    Fields not relevant to `kind` are ignored. `radius=None` resolves to
    5% of min(height, width), rounded up, at apply time; `palette=None`
    and `anchor_map=None` resolve to built-in defaults once the class
    count (and, for anchors, the image size) is known.
    """

    kind: str
    seed: int = 0
    apply_probability: float = 1.0
    radius: int | None = None
    palette: tuple[Color, ...] | None = None
    anchor_map: tuple[tuple[int, int], ...] | None = None  # per-class (x, y)
    stamp: tuple | None = None  # RGBA rows, shape (h, w, 4) as nested tuples
    stamp_mode: str = "per_class"
    target_class: int | None = None
    stamp_anchor: tuple[int, int] | None = (2, 2)  # None = random placement
    text_pattern: TextPattern | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpecError(f"unknown shortcut kind {self.kind!r}")
        if not 0.0 <= self.apply_probability <= 1.0:
            raise InvalidSpecError(
                f"apply_probability {self.apply_probability} outside [0, 1]"
            )
        if self.radius is not None and self.radius < 1:
            raise InvalidSpecError(f"radius must be >= 1, got {self.radius}")
        if self.stamp_mode not in STAMP_MODES:
            raise InvalidSpecError(f"unknown stamp_mode {self.stamp_mode!r}")
        if self.stamp_mode == "target_class" and self.target_class is None:
            raise InvalidSpecError("stamp_mode 'target_class' requires target_class")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def color_dot(cls, num_classes: int, *, seed: int = 0, radius: int | None = None,
                  apply_probability: float = 1.0,
                  palette: tuple[Color, ...] | None = None) -> "ShortcutSpec":
        if palette is None:
            palette = spread_palette(num_classes)
        return cls(kind="color_dot", seed=seed, radius=radius,
                   apply_probability=apply_probability, palette=tuple(palette))

    @classmethod
    def location_dot(cls, *, seed: int = 0, radius: int | None = None,
                     apply_probability: float = 1.0,
                     color: Color = (1.0, 1.0, 1.0),
                     anchors: tuple[tuple[int, int], ...] | None = None) -> "ShortcutSpec":
        return cls(kind="location_dot", seed=seed, radius=radius,
                   apply_probability=apply_probability,
                   palette=(tuple(color),),
                   anchor_map=tuple(tuple(a) for a in anchors) if anchors else None)

    @classmethod
    def logo(cls, num_classes: int, *, seed: int = 0, apply_probability: float = 1.0,
             stamp: np.ndarray | None = None, mode: str = "per_class",
             target_class: int | None = None,
             anchor: tuple[int, int] | None = (2, 2),
             palette: tuple[Color, ...] | None = None) -> "ShortcutSpec":
        if palette is None:
            palette = spread_palette(num_classes)
        if stamp is None and mode == "target_class":
            stamp = mark_stamp()
        return cls(kind="logo", seed=seed, apply_probability=apply_probability,
                   stamp=_stamp_to_tuple(stamp) if stamp is not None else None,
                   stamp_mode=mode, target_class=target_class,
                   stamp_anchor=tuple(anchor) if anchor is not None else None,
                   palette=tuple(palette))

    @classmethod
    def watermark(cls, *, seed: int = 0, apply_probability: float = 1.0,
                  pattern: TextPattern | None = None) -> "ShortcutSpec":
        return cls(kind="watermark", seed=seed, apply_probability=apply_probability,
                   text_pattern=pattern or TextPattern())

    # -- resolution & validation ----------------------------------------------

    def resolved(self, num_classes: int) -> "ShortcutSpec":
        """Fill class-count-dependent defaults and check class invariants."""
        spec = self
        if spec.kind == "color_dot":
            if spec.palette is None:
                spec = replace(spec, palette=spread_palette(num_classes))
            elif len(spec.palette) != num_classes:
                raise InvalidSpecError(
                    f"palette has {len(spec.palette)} colors for {num_classes} classes"
                )
        if spec.kind == "location_dot":
            if spec.palette is None:
                spec = replace(spec, palette=((1.0, 1.0, 1.0),))
            if spec.anchor_map is not None and len(spec.anchor_map) != num_classes:
                raise InvalidSpecError(
                    f"anchor_map has {len(spec.anchor_map)} entries for "
                    f"{num_classes} classes"
                )
        if spec.kind == "logo":
            if spec.palette is None:
                spec = replace(spec, palette=spread_palette(num_classes))
            if spec.target_class is not None and not 0 <= spec.target_class < num_classes:
                raise InvalidSpecError(
                    f"target_class {spec.target_class} outside 0..{num_classes - 1}"
                )
        return spec

    def resolve_radius(self, height: int, width: int) -> int:
        if self.radius is not None:
            return self.radius
        return math.ceil(0.05 * min(height, width))

    def stamp_array(self) -> np.ndarray | None:
        if self.stamp is None:
            return None
        return np.asarray(self.stamp, dtype=np.float32)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        d = {
            "kind": self.kind,
            "seed": self.seed,
            "apply_probability": self.apply_probability,
        }
        if self.radius is not None:
            d["radius"] = self.radius
        if self.palette is not None:
            d["palette"] = [list(c) for c in self.palette]
        if self.anchor_map is not None:
            d["anchor_map"] = [list(a) for a in self.anchor_map]
        if self.stamp is not None:
            d["stamp"] = _nested_list(self.stamp)
        if self.kind == "logo":
            d["stamp_mode"] = self.stamp_mode
            if self.target_class is not None:
                d["target_class"] = self.target_class
            d["stamp_anchor"] = list(self.stamp_anchor) if self.stamp_anchor else None
        if self.text_pattern is not None:
            d["text_pattern"] = {
                "spacing": list(self.text_pattern.spacing),
                "alpha": self.text_pattern.alpha,
                "color": list(self.text_pattern.color),
            }
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ShortcutSpec":
        known = {"kind", "seed", "apply_probability", "radius", "palette",
                 "anchor_map", "stamp", "stamp_mode", "target_class",
                 "stamp_anchor", "text_pattern"}
        unknown = set(d) - known
        if unknown:
            raise InvalidSpecError(f"unknown spec fields: {sorted(unknown)}")
        tp = None
        if "text_pattern" in d and d["text_pattern"] is not None:
            p = d["text_pattern"]
            tp = TextPattern(spacing=tuple(p["spacing"]), alpha=p["alpha"],
                             color=tuple(p["color"]))
        return cls(
            kind=d["kind"],
            seed=d.get("seed", 0),
            apply_probability=d.get("apply_probability", 1.0),
            radius=d.get("radius"),
            palette=tuple(tuple(c) for c in d["palette"]) if d.get("palette") else None,
            anchor_map=tuple(tuple(a) for a in d["anchor_map"]) if d.get("anchor_map") else None,
            stamp=_tuple_from_nested(d["stamp"]) if d.get("stamp") else None,
            stamp_mode=d.get("stamp_mode", "per_class"),
            target_class=d.get("target_class"),
            stamp_anchor=tuple(d["stamp_anchor"]) if d.get("stamp_anchor") else None,
            text_pattern=tp,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2))

    @classmethod
    def load(cls, path: str | Path) -> "ShortcutSpec":
        return cls.from_json(json.loads(Path(path).read_text()))


def _stamp_to_tuple(stamp: np.ndarray) -> tuple:
    a = np.asarray(stamp, dtype=np.float32)
    if a.ndim != 3 or a.shape[2] != 4:
        raise InvalidSpecError(f"stamp must be (h, w, 4) RGBA, got {a.shape}")
    return tuple(tuple(tuple(float(v) for v in px) for px in row) for row in a)


def _nested_list(t):
    if isinstance(t, tuple):
        return [_nested_list(x) for x in t]
    return t


def _tuple_from_nested(lst):
    if isinstance(lst, list):
        return tuple(_tuple_from_nested(x) for x in lst)
    return float(lst)
