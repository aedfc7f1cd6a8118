"""The four monochrome colors and their six unordered mixtures."""

from __future__ import annotations

MONO_COLORS = ("b", "g", "r", "y")

Color = str

MIXED_COLORS = ("bg", "br", "by", "gr", "gy", "ry")


def mixed(a: Color, b: Color) -> Color:
    """Unordered pair of two distinct monochrome colors, alphabetical."""
    if a == b or a not in MONO_COLORS or b not in MONO_COLORS:
        raise ValueError(f"not a valid color pair: {a!r}, {b!r}")
    return a + b if a < b else b + a


def complement(colors) -> Color:
    """The single monochrome color missing from a 3-element collection."""
    rest = set(MONO_COLORS) - set(colors)
    if len(rest) != 1:
        raise ValueError(f"expected exactly three distinct colors, got {colors!r}")
    return rest.pop()
