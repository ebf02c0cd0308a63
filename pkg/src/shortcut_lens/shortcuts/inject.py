"""Per-image shortcut painters.

Placement drawing and pixel painting are split so that a recorded
placement can be replayed bit-exactly without touching the rng:

    placement, draws = draw_placement(shape, label, spec, rng)
    out = paint(image, label, spec, placement)

Images are float arrays of shape (channels, height, width) with values
in [0, 1]; painters never modify their input. Coordinates are (x, y) =
(column, row). Dots paint hard-edged discs; logo and watermark overlays
are alpha blends clipped back into [0, 1].
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidSpecError
from ..glyphs import digit_glyph, glyph_stamp, luma, mark_stamp
from .spec import ShortcutSpec, TextPattern


def _check_image(image: np.ndarray) -> None:
    if image.ndim != 3:
        raise InvalidSpecError(f"expected (C, H, W) image, got shape {image.shape}")


def disc_mask(height: int, width: int, cx: int, cy: int, radius: int) -> np.ndarray:
    """Boolean mask of the hard-edged disc (x-cx)^2 + (y-cy)^2 <= r^2."""
    yy, xx = np.ogrid[:height, :width]
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2


def _fill_color(image: np.ndarray, mask: np.ndarray, color) -> np.ndarray:
    out = image.copy()
    if out.shape[0] == 1:
        out[0][mask] = luma(color)
    else:
        for c in range(out.shape[0]):
            out[c][mask] = color[c]
    return out


def _blend_region(region: np.ndarray, rgb: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Alpha-composite an RGBA stamp over a (C, h, w) region."""
    if region.shape[0] == 1:
        ink = (0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2])[None]
    else:
        ink = np.moveaxis(rgb, -1, 0)
    return np.clip(alpha[None] * ink + (1.0 - alpha[None]) * region, 0.0, 1.0)


def ring_anchors(num_classes: int, height: int, width: int,
                 radius: int) -> tuple[tuple[int, int], ...]:
    """Default per-class anchors: evenly spaced on a centered ring."""
    cx0, cy0 = (width - 1) / 2.0, (height - 1) / 2.0
    ring = min(height, width) / 2.0 - radius - 2.0
    if ring < 1.0:
        raise InvalidSpecError(
            f"radius {radius} leaves no room for anchors in {height}x{width} image"
        )
    anchors = []
    for k in range(num_classes):
        theta = 2.0 * math.pi * k / num_classes - math.pi / 2.0
        anchors.append((int(round(cx0 + ring * math.cos(theta))),
                        int(round(cy0 + ring * math.sin(theta)))))
    return tuple(anchors)


def _require_dot_fits(radius: int, height: int, width: int) -> None:
    if 2 * radius + 1 > min(height, width):
        raise InvalidSpecError(
            f"dot radius {radius} does not fit a {height}x{width} image"
        )


def _require_anchor_in_bounds(cx: int, cy: int, radius: int,
                              height: int, width: int) -> None:
    if cx - radius < 0 or cx + radius >= width or cy - radius < 0 or cy + radius >= height:
        raise InvalidSpecError(
            f"dot at ({cx}, {cy}) radius {radius} leaves bounds of "
            f"{height}x{width} image"
        )


# -- placement ----------------------------------------------------------------

def draw_placement(shape: tuple[int, int, int], label: int, spec: ShortcutSpec,
                   rng: np.random.Generator) -> tuple[dict, int]:
    """Draw rng-dependent placement for one image; returns (placement, n_draws)."""
    _, h, w = shape
    if spec.kind == "color_dot":
        r = spec.resolve_radius(h, w)
        _require_dot_fits(r, h, w)
        cx = int(rng.integers(r, w - r))
        cy = int(rng.integers(r, h - r))
        return {"cx": cx, "cy": cy, "radius": r}, 2
    if spec.kind == "location_dot":
        r = spec.resolve_radius(h, w)
        _require_dot_fits(r, h, w)
        if spec.anchor_map is None:
            raise InvalidSpecError(
                "location_dot needs anchor_map (resolve the spec against a dataset "
                "or pass anchors explicitly)"
            )
        if not 0 <= label < len(spec.anchor_map):
            raise InvalidSpecError(f"no anchor for label {label}")
        cx, cy = spec.anchor_map[label]
        _require_anchor_in_bounds(cx, cy, r, h, w)
        return {"cx": int(cx), "cy": int(cy), "radius": r}, 0
    if spec.kind == "logo":
        stamp = _resolve_stamp(spec, label)
        sh, sw = stamp.shape[:2]
        if sh > h or sw > w:
            raise InvalidSpecError(f"stamp {sh}x{sw} larger than image {h}x{w}")
        if spec.stamp_anchor is not None:
            x, y = spec.stamp_anchor
            draws = 0
        else:
            x = int(rng.integers(0, w - sw + 1))
            y = int(rng.integers(0, h - sh + 1))
            draws = 2
        if x < 0 or y < 0 or x + sw > w or y + sh > h:
            raise InvalidSpecError(
                f"stamp at ({x}, {y}) size {sh}x{sw} leaves bounds of {h}x{w} image"
            )
        return {"x": int(x), "y": int(y)}, draws
    # watermark: deterministic full-image tiling, nothing to draw
    return {}, 0


# -- painting -----------------------------------------------------------------

def _resolve_stamp(spec: ShortcutSpec, label: int) -> np.ndarray:
    base = spec.stamp_array()
    if spec.stamp_mode == "target_class":
        return base if base is not None else mark_stamp()
    # per_class: tint a provided stamp, or use the built-in glyph of the class
    if spec.palette is not None:
        if not 0 <= label < len(spec.palette):
            raise InvalidSpecError(f"label {label} outside palette of {len(spec.palette)}")
        color = spec.palette[label]
    else:
        color = (1.0, 1.0, 1.0)
    if base is None:
        return glyph_stamp(label, color=color)
    tinted = base.copy()
    tinted[..., :3] *= np.asarray(color, dtype=np.float32)
    return tinted


def paint(image: np.ndarray, label: int, spec: ShortcutSpec,
          placement: dict) -> np.ndarray:
    """Apply the spec at a fixed placement (replay path; no rng)."""
    _check_image(image)
    c, h, w = image.shape
    if spec.kind in ("color_dot", "location_dot"):
        cx, cy, r = placement["cx"], placement["cy"], placement["radius"]
        if spec.kind == "color_dot":
            if spec.palette is None or not 0 <= label < len(spec.palette):
                n = 0 if spec.palette is None else len(spec.palette)
                raise InvalidSpecError(f"label {label} outside palette of {n}")
            color = spec.palette[label]
        else:
            color = spec.palette[0] if spec.palette else (1.0, 1.0, 1.0)
        return _fill_color(image, disc_mask(h, w, cx, cy, r), color)
    if spec.kind == "logo":
        stamp = _resolve_stamp(spec, label)
        sh, sw = stamp.shape[:2]
        x, y = placement["x"], placement["y"]
        out = image.copy()
        region = out[:, y:y + sh, x:x + sw]
        out[:, y:y + sh, x:x + sw] = _blend_region(region, stamp[..., :3], stamp[..., 3])
        return out
    if spec.kind == "watermark":
        return _paint_watermark(image, label, spec.text_pattern or TextPattern())
    raise InvalidSpecError(f"unknown shortcut kind {spec.kind!r}")


def watermark_alpha(label: int, height: int, width: int,
                    pattern: TextPattern) -> np.ndarray:
    """Per-pixel ink map of the class-k glyph tiled over the whole image."""
    glyph = digit_glyph(label)
    gh, gw = glyph.shape
    sx, sy = pattern.spacing
    ink = np.zeros((height, width), dtype=np.float32)
    for y0 in range(0, height, sy):
        for x0 in range(0, width, sx):
            ys, xs = min(gh, height - y0), min(gw, width - x0)
            ink[y0:y0 + ys, x0:x0 + xs] = np.maximum(
                ink[y0:y0 + ys, x0:x0 + xs], glyph[:ys, :xs]
            )
    return ink * pattern.alpha


def _paint_watermark(image: np.ndarray, label: int,
                     pattern: TextPattern) -> np.ndarray:
    _, h, w = image.shape
    a = watermark_alpha(label, h, w, pattern)
    color = pattern.color
    if image.shape[0] == 1:
        ink = np.full((1, h, w), luma(color), dtype=np.float32)
    else:
        ink = np.stack([np.full((h, w), color[c], dtype=np.float32) for c in range(3)])
    return np.clip(a[None] * ink + (1.0 - a[None]) * image, 0.0, 1.0).astype(image.dtype)


# -- one-image application ----------------------------------------------------

def apply_shortcut(image: np.ndarray, label: int, spec: ShortcutSpec,
                   rng: np.random.Generator) -> tuple[np.ndarray, dict]:
    """Perturb one image; returns (output, record).

    record = {"applied": bool, "placement": dict | None, "draws": int}.
    The apply-probability draw happens first so skipped images consume a
    stable number of rng values.
    """
    _check_image(image)
    draws = 0
    applied = True
    if spec.apply_probability < 1.0:
        applied = bool(rng.random() < spec.apply_probability)
        draws += 1
    if applied and spec.kind == "logo" and spec.stamp_mode == "target_class":
        applied = label == spec.target_class
    if not applied:
        return image.copy(), {"applied": False, "placement": None, "draws": draws}
    placement, extra = draw_placement(image.shape, label, spec, rng)
    out = paint(image, label, spec, placement)
    return out, {"applied": True, "placement": placement, "draws": draws + extra}


def _single(kind: str, image, label, spec, rng) -> np.ndarray:
    if spec.kind != kind:
        raise InvalidSpecError(f"spec kind {spec.kind!r} passed to inject_{kind}")
    out, _ = apply_shortcut(image, label, spec, rng)
    return out


def inject_color_dot(image, label, spec, rng) -> np.ndarray:
    """Filled class-colored disc at an rng-drawn in-bounds position."""
    return _single("color_dot", image, label, spec, rng)


def inject_location_dot(image, label, spec, rng) -> np.ndarray:
    """Fixed-color disc centered at the class anchor."""
    return _single("location_dot", image, label, spec, rng)


def inject_logo(image, label, spec, rng) -> np.ndarray:
    """Alpha-composited stamp selected by the class."""
    return _single("logo", image, label, spec, rng)


def inject_watermark(image, label, spec, rng) -> np.ndarray:
    """Class-variant glyph tiling blended over the full image."""
    return _single("watermark", image, label, spec, rng)
