#!/usr/bin/env python3
"""Builds the .hvf vector fonts under assets/fonts/ from hanzi-writer-data.

Each .hvf file is a JSON document with flattened glyph outlines (closed
polygons in a 1024-unit em square, y down). Style variants are produced by
affine-transforming the outlines; "hollow" and "heavy" variants carry a
render flag that the rasterizer applies in coverage space.

Usage:
  python3 tools/make_fonts.py --data <hanzi-writer-data dir> \
      --vocab assets/vocab/chars-200.txt --out assets/fonts
"""

import argparse
import json
import math
import os
import re
import sys

TOKEN_RE = re.compile(r"[MLQCZmlqcz]|-?\d+(?:\.\d+)?(?:e-?\d+)?")

EM = 1024
CENTER = (512.0, 512.0)


def parse_path(d):
    """SVG path -> list of closed polylines (flattened, data coords)."""
    tokens = TOKEN_RE.findall(d)
    i = 0
    polys = []
    cur = []
    pos = (0.0, 0.0)
    start = (0.0, 0.0)

    def num():
        nonlocal i
        v = float(tokens[i])
        i += 1
        return v

    while i < len(tokens):
        cmd = tokens[i]
        i += 1
        if cmd in "Mm":
            if cur:
                polys.append(cur)
            x, y = num(), num()
            if cmd == "m":
                x, y = pos[0] + x, pos[1] + y
            pos = (x, y)
            start = pos
            cur = [pos]
        elif cmd in "Ll":
            x, y = num(), num()
            if cmd == "l":
                x, y = pos[0] + x, pos[1] + y
            pos = (x, y)
            cur.append(pos)
        elif cmd in "Qq":
            cx, cy, x, y = num(), num(), num(), num()
            if cmd == "q":
                cx, cy, x, y = pos[0] + cx, pos[1] + cy, pos[0] + x, pos[1] + y
            cur.extend(flatten_quad(pos, (cx, cy), (x, y)))
            pos = (x, y)
        elif cmd in "Cc":
            c1x, c1y, c2x, c2y, x, y = (num(), num(), num(), num(), num(), num())
            if cmd == "c":
                c1x, c1y = pos[0] + c1x, pos[1] + c1y
                c2x, c2y = pos[0] + c2x, pos[1] + c2y
                x, y = pos[0] + x, pos[1] + y
            cur.extend(flatten_cubic(pos, (c1x, c1y), (c2x, c2y), (x, y)))
            pos = (x, y)
        elif cmd in "Zz":
            if cur:
                polys.append(cur)
                cur = []
            pos = start
        else:
            raise ValueError("unexpected token %r" % cmd)
    if cur:
        polys.append(cur)
    return polys


def flatten_quad(p0, p1, p2, tol=1.5):
    pts = []
    n = max(2, subdiv_count([p0, p1, p2], tol))
    for k in range(1, n + 1):
        t = k / n
        mt = 1 - t
        x = mt * mt * p0[0] + 2 * mt * t * p1[0] + t * t * p2[0]
        y = mt * mt * p0[1] + 2 * mt * t * p1[1] + t * t * p2[1]
        pts.append((x, y))
    return pts


def flatten_cubic(p0, p1, p2, p3, tol=1.5):
    pts = []
    n = max(2, subdiv_count([p0, p1, p2, p3], tol))
    for k in range(1, n + 1):
        t = k / n
        mt = 1 - t
        x = (mt ** 3 * p0[0] + 3 * mt * mt * t * p1[0]
             + 3 * mt * t * t * p2[0] + t ** 3 * p3[0])
        y = (mt ** 3 * p0[1] + 3 * mt * mt * t * p1[1]
             + 3 * mt * t * t * p2[1] + t ** 3 * p3[1])
        pts.append((x, y))
    return pts


def subdiv_count(ctrl, tol):
    # segment count from control-polygon length; enough at em scale
    length = sum(math.dist(ctrl[i], ctrl[i + 1]) for i in range(len(ctrl) - 1))
    return min(48, max(2, int(math.sqrt(length / tol))))


def to_font_space(polys):
    # hanzi-writer stroke data: y axis points up with baseline offset 900;
    # font space is y-down in a 1024 em square
    return [[(x, 900.0 - y) for (x, y) in poly] for poly in polys]


def apply_transform(polys, m):
    a, b, c, d = m
    cx, cy = CENTER
    out = []
    for poly in polys:
        q = []
        for (x, y) in poly:
            dx, dy = x - cx, y - cy
            q.append((a * dx + b * dy + cx, c * dx + d * dy + cy))
        out.append(q)
    return out


def dedupe(poly):
    out = []
    for p in poly:
        ip = (int(round(p[0])), int(round(p[1])))
        if not out or out[-1] != ip:
            out.append(ip)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


VARIANTS = [
    # (file stem, 2x2 transform about em center, render mode)
    ("hz-kai", (1.0, 0.0, 0.0, 1.0), "solid"),
    ("hz-kai-bold", (1.0, 0.0, 0.0, 1.0), "heavy"),
    ("hz-kai-slant", (1.0, -0.22, 0.0, 1.0), "solid"),
    ("hz-kai-narrow", (0.80, 0.0, 0.0, 1.0), "solid"),
    ("hz-kai-wide", (1.22, 0.0, 0.0, 0.96), "solid"),
    ("hz-kai-hollow", (1.0, 0.0, 0.0, 1.0), "hollow"),
    ("hz-kai-slant-hollow", (1.0, 0.20, 0.0, 1.0), "hollow"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--data", required=True, help="hanzi-writer-data directory")
    ap.add_argument("--vocab", required=True, help="character list, one per line")
    ap.add_argument("--out", required=True, help="output directory")
    args = ap.parse_args()

    chars = []
    with open(args.vocab, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                chars.append(line[0])

    glyphs = {}
    for ch in chars:
        path = os.path.join(args.data, ch + ".json")
        if not os.path.exists(path):
            print("missing stroke data for %r, skipping" % ch, file=sys.stderr)
            continue
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        polys = []
        for stroke in data["strokes"]:
            polys.extend(parse_path(stroke))
        glyphs[ch] = to_font_space(polys)

    os.makedirs(args.out, exist_ok=True)
    for stem, m, render in VARIANTS:
        out_glyphs = {}
        for ch, polys in glyphs.items():
            tp = apply_transform(polys, m)
            out_glyphs[str(ord(ch))] = [dedupe(p) for p in tp if len(dedupe(p)) >= 3]
        doc = {
            "format": "hvf-1",
            "name": stem,
            "units_per_em": EM,
            "render": render,
            "glyphs": out_glyphs,
        }
        out_path = os.path.join(args.out, stem + ".hvf")
        with open(out_path, "w", encoding="utf-8") as f:
            json.dump(doc, f, ensure_ascii=True, separators=(",", ":"))
        print("wrote %s (%d glyphs)" % (out_path, len(out_glyphs)))


if __name__ == "__main__":
    main()
