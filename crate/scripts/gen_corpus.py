#!/usr/bin/env python3
"""Regenerates the bundled OFF corpus in ../corpus.

Procedural stand-ins for the usual test models. Vertices are emitted ring by
ring so neighboring indices are usually neighbors on the surface, as in
scanned or modelled meshes. Output is deterministic.
"""

import math
import os
import random

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "corpus")


def write_off(name, verts, faces):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        f.write("OFF\n%d %d 0\n" % (len(verts), len(faces)))
        for x, y, z in verts:
            f.write("%.6f %.6f %.6f\n" % (x, y, z))
        for a, b, c in faces:
            f.write("3 %d %d %d\n" % (a, b, c))
    print("%s: %d vertices, %d faces" % (name, len(verts), len(faces)))


def lat_long(n_lon, n_lat, point):
    """Closed genus-0 surface from point(theta, phi); poles first and last."""
    verts = [point(0.0, 0.0)]
    for i in range(1, n_lat):
        phi = math.pi * i / n_lat
        for j in range(n_lon):
            verts.append(point(2 * math.pi * j / n_lon, phi))
    verts.append(point(0.0, math.pi))
    faces = []
    ring = lambda i, j: 1 + (i - 1) * n_lon + (j % n_lon)
    for j in range(n_lon):
        faces.append((0, ring(1, j), ring(1, j + 1)))
    for i in range(1, n_lat - 1):
        for j in range(n_lon):
            a, b = ring(i, j), ring(i, j + 1)
            c, d = ring(i + 1, j), ring(i + 1, j + 1)
            faces.append((a, c, b))
            faces.append((b, c, d))
    south = len(verts) - 1
    for j in range(n_lon):
        faces.append((south, ring(n_lat - 1, j + 1), ring(n_lat - 1, j)))
    return verts, faces


def beetle(rng):
    bumps = [(rng.uniform(0, 2 * math.pi), rng.uniform(0.3, 2.8), rng.uniform(0.02, 0.06)) for _ in range(12)]

    def point(theta, phi):
        r = 1.0
        for t0, p0, h in bumps:
            d = math.hypot(theta - t0, phi - p0)
            r += h * math.exp(-d * d * 6)
        return (1.6 * r * math.sin(phi) * math.cos(theta),
                1.0 * r * math.sin(phi) * math.sin(theta),
                0.7 * r * math.cos(phi))

    return lat_long(40, 30, point)


def cow(rng):
    def point(theta, phi):
        s, c = math.sin(phi), math.cos(phi)
        body = 1.0 + 0.15 * math.sin(3 * theta) * s + 0.08 * math.cos(5 * phi)
        x = 2.2 * body * s * math.cos(theta)
        y = 1.1 * body * s * math.sin(theta)
        z = 1.3 * body * c + 0.25 * math.exp(-((theta - 0.2) ** 2) * 4) * s
        return (x + 0.003 * rng.gauss(0, 1), y, z)

    return lat_long(60, 40, point)


def mushroom(rng):
    # Profile (radius, height) from the stem foot up over the cap.
    profile = []
    for k in range(8):
        t = k / 7
        profile.append((0.35 + 0.05 * math.sin(3 * t), -1.0 + 1.2 * t))
    for k in range(10):
        a = math.pi / 2 * (1 - k / 9)
        profile.append((1.2 * math.cos(a) + 0.05, 0.2 + 0.7 * math.sin(a)))
    n_seg = 32
    verts = [(0.0, 0.0, -1.0)]
    for r, h in profile:
        for j in range(n_seg):
            t = 2 * math.pi * j / n_seg
            wob = 1 + 0.03 * math.sin(5 * t + h)
            verts.append((r * wob * math.cos(t), r * wob * math.sin(t), h + 0.002 * rng.gauss(0, 1)))
    verts.append((0.0, 0.0, 0.92))
    ring = lambda i, j: 1 + i * n_seg + (j % n_seg)
    faces = [(0, ring(0, j + 1), ring(0, j)) for j in range(n_seg)]
    for i in range(len(profile) - 1):
        for j in range(n_seg):
            a, b = ring(i, j), ring(i, j + 1)
            c, d = ring(i + 1, j), ring(i + 1, j + 1)
            faces.append((a, b, c))
            faces.append((b, d, c))
    top = len(verts) - 1
    last = len(profile) - 1
    faces += [(top, ring(last, j), ring(last, j + 1)) for j in range(n_seg)]
    return verts, faces


def casting(rng):
    n_u, n_v = 64, 24
    verts = []
    for i in range(n_u):
        a = 2 * math.pi * i / n_u
        big = 2.0 + 0.2 * math.cos(3 * a)
        for j in range(n_v):
            b = 2 * math.pi * j / n_v
            small = 0.55 + 0.08 * math.sin(2 * b + a)
            verts.append(((big + small * math.cos(b)) * math.cos(a),
                          (big + small * math.cos(b)) * math.sin(a),
                          0.8 * small * math.sin(b) + 0.001 * rng.gauss(0, 1)))
    idx = lambda i, j: (i % n_u) * n_v + (j % n_v)
    faces = []
    for i in range(n_u):
        for j in range(n_v):
            a, b = idx(i, j), idx(i + 1, j)
            c, d = idx(i, j + 1), idx(i + 1, j + 1)
            faces.append((a, b, c))
            faces.append((b, d, c))
    return verts, faces


def mannequin(rng):
    t = (1 + 5 ** 0.5) / 2
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
             (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
             (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
             (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(2):
        cache = {}
        new_faces = []

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                p, q = verts[a], verts[b]
                verts.append(tuple((p[k] + q[k]) / 2 for k in range(3)))
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    out = []
    for x, y, z in verts:
        n = math.sqrt(x * x + y * y + z * z)
        x, y, z = x / n, y / n, z / n
        out.append((0.5 * x * (1 + 0.2 * z), 0.45 * y, 1.8 * z + 0.01 * rng.gauss(0, 1)))
    return out, faces


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20211)
    for name, gen in [("beetle.off", beetle), ("casting.off", casting), ("cow.off", cow),
                      ("mannequin.off", mannequin), ("mushroom.off", mushroom)]:
        write_off(name, *gen(rng))


if __name__ == "__main__":
    main()
