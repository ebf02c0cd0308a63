"""Built-in 8x8 bitmaps and color palettes for synthetic shortcuts.

Glyphs are hand-drawn digit bitmaps so the package needs no font files;
class k uses glyph k % 10.
"""

from __future__ import annotations

import colorsys

import numpy as np

GLYPH_SIZE = 8

_DIGITS = [
    [
        "..###...",
        ".#...#..",
        ".#..##..",
        ".#.#.#..",
        ".##..#..",
        ".#...#..",
        "..###...",
        "........",
    ],
    [
        "...#....",
        "..##....",
        "...#....",
        "...#....",
        "...#....",
        "...#....",
        "..###...",
        "........",
    ],
    [
        "..###...",
        ".#...#..",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        ".#####..",
        "........",
    ],
    [
        "..###...",
        ".#...#..",
        ".....#..",
        "...##...",
        ".....#..",
        ".#...#..",
        "..###...",
        "........",
    ],
    [
        "....#...",
        "...##...",
        "..#.#...",
        ".#..#...",
        ".#####..",
        "....#...",
        "....#...",
        "........",
    ],
    [
        ".#####..",
        ".#......",
        ".####...",
        ".....#..",
        ".....#..",
        ".#...#..",
        "..###...",
        "........",
    ],
    [
        "..###...",
        ".#......",
        ".####...",
        ".#...#..",
        ".#...#..",
        ".#...#..",
        "..###...",
        "........",
    ],
    [
        ".#####..",
        ".....#..",
        "....#...",
        "...#....",
        "..#.....",
        "..#.....",
        "..#.....",
        "........",
    ],
    [
        "..###...",
        ".#...#..",
        ".#...#..",
        "..###...",
        ".#...#..",
        ".#...#..",
        "..###...",
        "........",
    ],
    [
        "..###...",
        ".#...#..",
        ".#...#..",
        "..####..",
        ".....#..",
        ".....#..",
        "..###...",
        "........",
    ],
]

# default stamp for single-class logo overlays
_MARK = [
    "...##...",
    ".#.##.#.",
    "..####..",
    "########",
    "..####..",
    ".#.##.#.",
    "...##...",
    "........",
]


def _bitmap(rows: list[str]) -> np.ndarray:
    return np.array([[c == "#" for c in row] for row in rows], dtype=np.float32)


def digit_glyph(k: int) -> np.ndarray:
    """8x8 float mask (1 = inked) for digit k % 10."""
    return _bitmap(_DIGITS[k % 10])


def mark_glyph() -> np.ndarray:
    return _bitmap(_MARK)


def glyph_stamp(k: int, color=(1.0, 1.0, 1.0)) -> np.ndarray:
    """RGBA stamp (8, 8, 4) from digit glyph k, inked in `color`."""
    alpha = digit_glyph(k)
    stamp = np.zeros((GLYPH_SIZE, GLYPH_SIZE, 4), dtype=np.float32)
    for c in range(3):
        stamp[:, :, c] = color[c]
    stamp[:, :, 3] = alpha
    return stamp


def mark_stamp(color=(1.0, 1.0, 1.0)) -> np.ndarray:
    """RGBA stamp (8, 8, 4) of the built-in logo mark."""
    alpha = mark_glyph()
    stamp = np.zeros((GLYPH_SIZE, GLYPH_SIZE, 4), dtype=np.float32)
    for c in range(3):
        stamp[:, :, c] = color[c]
    stamp[:, :, 3] = alpha
    return stamp


def spread_palette(n: int) -> tuple[tuple[float, float, float], ...]:
    """n maximally hue-spread saturated RGB colors in [0,1]."""
    colors = []
    for k in range(n):
        r, g, b = colorsys.hsv_to_rgb(k / n, 1.0, 1.0)
        colors.append((float(r), float(g), float(b)))
    return tuple(colors)


def luma(color) -> float:
    """Rec. 601 luma of an RGB triple."""
    r, g, b = color
    return 0.299 * r + 0.587 * g + 0.114 * b
