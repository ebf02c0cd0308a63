"""Procedural desk-scale corpus: 10 shape classes at 32x32.

Class identity is carried by geometry only; shape color, position and
size are randomized per image so nothing but the silhouette predicts
the label. This keeps the corpus learnable by a small CNN in a few
epochs while leaving room for an injected shortcut to dominate.
"""

from __future__ import annotations

from pathlib import Path
import colorsys

import numpy as np

from ..seeding import rng_for
from .folder import DatasetHandle, handle_from_arrays, to_uint8, write_split

CLASS_NAMES = (
    "0_disk", "1_square", "2_triangle", "3_ring", "4_cross",
    "5_hbars", "6_vbars", "7_checker", "8_diamond", "9_corner",
)


def _shape_mask(class_idx: int, size: int, cx: float, cy: float, s: float,
                xx: np.ndarray, yy: np.ndarray) -> np.ndarray:
    dx, dy = xx - cx, yy - cy
    if class_idx == 0:  # disk
        return dx**2 + dy**2 <= s**2
    if class_idx == 1:  # square
        half = 0.85 * s
        return (np.abs(dx) <= half) & (np.abs(dy) <= half)
    if class_idx == 2:  # triangle (apex up)
        inside = dy >= -s
        inside &= dy <= 0.8 * s
        width = (dy + s) / (1.8 * s) * s  # linear flare from apex
        return inside & (np.abs(dx) <= width)
    if class_idx == 3:  # ring
        r2 = dx**2 + dy**2
        return (r2 <= s**2) & (r2 >= (s - 2.6) ** 2)
    if class_idx == 4:  # cross
        t = max(1.6, s * 0.28)
        box = (np.abs(dx) <= s) & (np.abs(dy) <= s)
        return box & ((np.abs(dx) <= t) | (np.abs(dy) <= t))
    if class_idx == 5:  # horizontal bars
        box = (np.abs(dx) <= s) & (np.abs(dy) <= s)
        return box & (np.floor((dy + s) / 3.0).astype(int) % 2 == 0)
    if class_idx == 6:  # vertical bars
        box = (np.abs(dx) <= s) & (np.abs(dy) <= s)
        return box & (np.floor((dx + s) / 3.0).astype(int) % 2 == 0)
    if class_idx == 7:  # checkerboard
        box = (np.abs(dx) <= s) & (np.abs(dy) <= s)
        cells = (np.floor((dx + s) / 4.0) + np.floor((dy + s) / 4.0)).astype(int)
        return box & (cells % 2 == 0)
    if class_idx == 8:  # diamond
        return np.abs(dx) + np.abs(dy) <= s
    # corner L
    t = max(2.0, s * 0.35)
    vert = (dx >= -s) & (dx <= -s + t) & (np.abs(dy) <= s)
    horz = (dy >= s - t) & (dy <= s) & (np.abs(dx) <= s)
    return vert | horz


def render_shape(class_idx: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """One float32 (3, size, size) image in [0,1]."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float32)
    jitter = size * 0.18
    cx = size / 2 + rng.uniform(-jitter, jitter)
    cy = size / 2 + rng.uniform(-jitter, jitter)
    s = rng.uniform(size * 0.16, size * 0.28)

    mask = _shape_mask(class_idx, size, cx, cy, s, xx, yy)

    bg = rng.uniform(0.06, 0.18)
    img = np.full((3, size, size), bg, dtype=np.float32)
    # muted foreground color, class-independent
    r, g, b = colorsys.hsv_to_rgb(rng.uniform(0, 1), rng.uniform(0.2, 0.6),
                                  rng.uniform(0.55, 0.95))
    for c, v in enumerate((r, g, b)):
        img[c][mask] = v
    img += rng.normal(0.0, 0.025, size=img.shape).astype(np.float32)
    return np.clip(img, 0.0, 1.0)


def render_split(split: str, per_class: int, num_classes: int, size: int,
                 seed: int) -> tuple[np.ndarray, np.ndarray]:
    """uint8 images and labels for one split; streams keyed by (split, class, index)."""
    images = np.empty((per_class * num_classes, 3, size, size), dtype=np.uint8)
    labels = np.empty(per_class * num_classes, dtype=np.int64)
    i = 0
    for k in range(num_classes):
        for j in range(per_class):
            rng = rng_for(seed, "shapes", split, k, j)
            images[i] = to_uint8(render_shape(k, size, rng))
            labels[i] = k
            i += 1
    return images, labels


def shapes_handle(split: str, *, per_class: int, num_classes: int = 10,
                  size: int = 32, seed: int = 0) -> DatasetHandle:
    """In-memory handle for one split of the shapes corpus."""
    images, labels = render_split(split, per_class, num_classes, size, seed)
    handle = handle_from_arrays(images, labels, CLASS_NAMES[:num_classes],
                                split=split, root=f"shapes@{seed}")
    return handle


def generate_shapes_corpus(root: str | Path, *, train_per_class: int = 500,
                           test_per_class: int = 100, num_classes: int = 10,
                           size: int = 32, seed: int = 0) -> Path:
    """Write the corpus as a PNG image-folder tree under `root`."""
    root = Path(root)
    for split, per_class in (("train", train_per_class), ("test", test_per_class)):
        images, labels = render_split(split, per_class, num_classes, size, seed)
        write_split(root, split, CLASS_NAMES[:num_classes], images, labels)
    return root
