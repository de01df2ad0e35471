#!/usr/bin/env python3
"""Generates the procedural background patches under assets/backgrounds/.

Two disjoint sets (set-a, set-b) of 96x96 RGB textures: smooth gradients,
low-frequency value noise, stripes and blotches. Seeded, so the committed
PNGs are reproducible.
"""

import argparse
import os

import numpy as np
from PIL import Image


def value_noise(rng, size, cells, lo, hi):
    grid = rng.uniform(lo, hi, (cells + 1, cells + 1, 3))
    img = np.zeros((size, size, 3))
    for y in range(size):
        for x in range(size):
            gx, gy = x * cells / size, y * cells / size
            x0, y0 = int(gx), int(gy)
            fx, fy = gx - x0, gy - y0
            fx = fx * fx * (3 - 2 * fx)
            fy = fy * fy * (3 - 2 * fy)
            a = grid[y0, x0] * (1 - fx) + grid[y0, x0 + 1] * fx
            b = grid[y0 + 1, x0] * (1 - fx) + grid[y0 + 1, x0 + 1] * fx
            img[y, x] = a * (1 - fy) + b * fy
    return img


def gradient(rng, size):
    c0 = rng.uniform(20, 235, 3)
    c1 = rng.uniform(20, 235, 3)
    ang = rng.uniform(0, np.pi)
    dx, dy = np.cos(ang), np.sin(ang)
    yy, xx = np.mgrid[0:size, 0:size]
    t = (xx * dx + yy * dy) / (size * (abs(dx) + abs(dy)) + 1e-9)
    t = (t - t.min()) / (t.max() - t.min() + 1e-9)
    return c0[None, None, :] * (1 - t[..., None]) + c1[None, None, :] * t[..., None]


def stripes(rng, size):
    c0 = rng.uniform(30, 225, 3)
    c1 = rng.uniform(30, 225, 3)
    period = rng.integers(8, 24)
    ang = rng.uniform(0, np.pi)
    dx, dy = np.cos(ang), np.sin(ang)
    yy, xx = np.mgrid[0:size, 0:size]
    t = 0.5 + 0.5 * np.sin(2 * np.pi * (xx * dx + yy * dy) / period)
    return c0[None, None, :] * (1 - t[..., None]) + c1[None, None, :] * t[..., None]


def make_set(out_dir, seed, size=96, count=10):
    os.makedirs(out_dir, exist_ok=True)
    rng = np.random.default_rng(seed)
    makers = [gradient, stripes,
              lambda r, s: value_noise(r, s, 4, 20, 235),
              lambda r, s: value_noise(r, s, 9, 40, 215)]
    for i in range(count):
        base = makers[i % len(makers)](rng, size)
        grain = rng.normal(0, 4.0, base.shape)
        img = np.clip(base + grain, 0, 255).astype(np.uint8)
        Image.fromarray(img, "RGB").save(os.path.join(out_dir, "patch-%02d.png" % i))
    print("wrote %d patches to %s" % (count, out_dir))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="assets/backgrounds")
    args = ap.parse_args()
    make_set(os.path.join(args.out, "set-a"), seed=11)
    make_set(os.path.join(args.out, "set-b"), seed=47)


if __name__ == "__main__":
    main()
