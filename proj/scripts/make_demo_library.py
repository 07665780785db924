#!/usr/bin/env python3
"""Regenerate data/schemes/demo.json.

The demo library is synthetic: 27 schemes x 24 three-color combinations,
each scheme built around its own hue/saturation/lightness character so the
schemes are visually distinct. Colors are plain sRGB hex.
"""

import colorsys
import json
import random
from pathlib import Path

# name, description, base hue (deg), hue spread, saturation range, value range
SCHEMES = [
    ("serene",      "calm, restful, airy",                200,  40, (0.10, 0.35), (0.70, 0.95)),
    ("earthy",      "grounded, natural, warm soil tones",  30,  25, (0.35, 0.65), (0.35, 0.70)),
    ("mellow",      "soft, gentle, low contrast",          45,  60, (0.15, 0.35), (0.60, 0.85)),
    ("muted",       "dusty, quiet, grayed colors",        260, 120, (0.05, 0.20), (0.45, 0.75)),
    ("capricious",  "unpredictable, shifting, varied",      0, 360, (0.30, 0.70), (0.50, 0.90)),
    ("spiritual",   "contemplative, deep, violet calm",   270,  35, (0.25, 0.55), (0.40, 0.80)),
    ("romantic",    "tender, blushing, rosy",             340,  30, (0.15, 0.45), (0.70, 0.95)),
    ("sensual",     "rich, intimate, wine reds",          350,  25, (0.45, 0.80), (0.30, 0.60)),
    ("powerful",    "bold, saturated, commanding",          0,  40, (0.70, 1.00), (0.45, 0.85)),
    ("elegant",     "refined, understated, cool neutrals",220,  50, (0.05, 0.18), (0.55, 0.90)),
    ("robust",      "sturdy, dark, oak and leather",       25,  20, (0.40, 0.70), (0.25, 0.50)),
    ("delicate",    "light, fragile, pastel wash",        140, 180, (0.06, 0.18), (0.85, 0.98)),
    ("playful",     "bright, bouncing, candy colors",      50, 300, (0.55, 0.95), (0.75, 1.00)),
    ("energetic",   "vivid, hot, kinetic",                 15,  60, (0.75, 1.00), (0.70, 1.00)),
    ("traditional", "settled, heritage, deep greens",     150,  40, (0.30, 0.60), (0.30, 0.60)),
    ("classic",     "timeless, navy and burgundy",        230,  30, (0.35, 0.65), (0.30, 0.60)),
    ("festive",     "celebratory, sparkling, warm",       350, 120, (0.55, 0.90), (0.65, 0.95)),
    ("fanciful",    "whimsical, dreamlike, lilac",        290,  70, (0.25, 0.55), (0.65, 0.95)),
    ("cool",        "crisp, icy, blue-leaning",           210,  40, (0.25, 0.60), (0.60, 0.95)),
    ("warm",        "sunlit, amber, inviting",             35,  30, (0.45, 0.80), (0.60, 0.95)),
    ("luscious",    "ripe, juicy, berry and plum",        320,  45, (0.50, 0.85), (0.45, 0.80)),
    ("sweet",       "sugary, light pinks and creams",      345, 40, (0.15, 0.40), (0.80, 1.00)),
    ("spicy",       "peppery, hot reds and oranges",       12,  25, (0.65, 1.00), (0.55, 0.90)),
    ("tangy",       "sharp, citrus, zesty",                55,  35, (0.60, 0.95), (0.75, 1.00)),
    ("unique",      "unexpected, contrasting accents",    180, 360, (0.40, 0.90), (0.50, 0.95)),
    ("tranquil",    "still water, hushed blue-greens",    175,  30, (0.15, 0.40), (0.60, 0.90)),
    ("nurturing",   "soft greens, comforting, kind",      100,  35, (0.20, 0.45), (0.55, 0.90)),
]

COMBINATIONS_PER_SCHEME = 24


def hex_color(rng, base_hue, spread, sat_range, val_range):
    hue = (base_hue + rng.uniform(-spread / 2, spread / 2)) % 360
    sat = rng.uniform(*sat_range)
    val = rng.uniform(*val_range)
    r, g, b = colorsys.hsv_to_rgb(hue / 360.0, sat, val)
    return "#{:02X}{:02X}{:02X}".format(round(r * 255), round(g * 255),
                                        round(b * 255))


def main():
    rng = random.Random(20240529)
    schemes = []
    for name, description, hue, spread, sat, val in SCHEMES:
        combos = []
        for _ in range(COMBINATIONS_PER_SCHEME):
            combos.append({
                "dominant": {"srgb": hex_color(rng, hue, spread, sat, val)},
                "subordinate": {"srgb": hex_color(rng, hue, spread, sat, val)},
                "accent": {"srgb": hex_color(rng, hue, spread * 1.5,
                                             (min(1.0, sat[0] + 0.2),
                                              min(1.0, sat[1] + 0.2)), val)},
            })
        schemes.append({
            "name": name,
            "description": description,
            "combinations": combos,
        })

    doc = {
        "source": "synthetic demo palettes",
        "schemes": schemes,
    }
    out = Path(__file__).resolve().parent.parent / "data" / "schemes" / "demo.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {out} ({len(schemes)} schemes, "
          f"{sum(len(s['combinations']) for s in schemes)} combinations)")


if __name__ == "__main__":
    main()
