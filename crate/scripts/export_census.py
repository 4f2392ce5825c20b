#!/usr/bin/env python3
"""Export SnapPy census triangulations to the triangulation / shapes JSON schema.

Usage: export_census.py OUTDIR NAME [NAME ...]

Writes NAME.json (triangulation with explicit peripheral rows), NAME.shapes.json
(complete-structure shapes, one per tetrahedron, slot-0 quad) and
NAME.meta.json (homology data used as an independent oracle in tests).
"""
import json
import os
import sys

import snappy


def parse_gluings(M):
    lines = M._to_string().splitlines()
    n = M.num_tetrahedra()
    # locate the tetrahedron count line that follows the cusp table
    idx = None
    for i, line in enumerate(lines):
        if line.strip() == str(n) and i > 5:
            idx = i + 1
            break
    gluings = []
    for t in range(n):
        block = [l for l in lines[idx:] if l.strip()][t * 8:(t + 1) * 8]
        nbrs = [int(x) for x in block[0].split()]
        perms = [[int(c) for c in p] for p in block[1].split()]
        row = []
        for f in range(4):
            p = perms[f]
            assert sorted(p) == [0, 1, 2, 3]
            row.append([nbrs[f], p[f], p])
        gluings.append(row)
    return gluings


def perm_sign(p):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


def z2_rank(rows, ncols):
    rows = [[x % 2 for x in r] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][c]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [(a + b) % 2 for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def word_vector(word, gens):
    v = [0] * len(gens)
    for ch in word:
        g = ch.lower()
        v[gens.index(g)] += 1 if ch == g else -1
    return v


def export(outdir, name):
    M = snappy.Manifold(name)
    n = M.num_tetrahedra()
    k = M.num_cusps()
    assert M.is_orientable()
    gl = parse_gluings(M)
    for row in gl:
        for (_, _, p) in row:
            assert perm_sign(p) == -1, "expected orientation-reversing gluings"
    eqs = [[int(x) for x in r] for r in M.gluing_equations()]
    def blocks(r):
        return [r[3 * t] for t in range(n)] + [r[3 * t + 1] for t in range(n)] + [r[3 * t + 2] for t in range(n)]
    edge_rows = [blocks(list(map(int, r))) for r in eqs[:n]]
    periph = [blocks(list(map(int, r))) for r in eqs[n:n + 2 * k]]
    tri = {"name": name, "tetrahedra": n, "gluings": gl, "peripheral": periph}
    with open(os.path.join(outdir, name + ".json"), "w") as fh:
        json.dump(tri, fh)
    shapes = M.tetrahedra_shapes('rect')
    with open(os.path.join(outdir, name + ".shapes.json"), "w") as fh:
        json.dump({"triangulation": name,
                   "z": [[float(z.real()), float(z.imag())] for z in shapes]}, fh)
    # homology oracle: H_1(M; Z_2) and H_1(M-hat; Z_2) from the fundamental group
    G = M.fundamental_group(simplify_presentation=False)
    gens = G.generators()
    rels = [word_vector(r, gens) for r in G.relators()]
    h1 = len(gens) - z2_rank(rels, len(gens))
    periph_words = [w for pair in G.peripheral_curves() for w in pair]
    h1hat = len(gens) - z2_rank(rels + [word_vector(w, gens) for w in periph_words], len(gens))
    meta = {"name": name, "tetrahedra": n, "cusps": k,
            "snappy_edge_rows": edge_rows,
            "h1_z2": h1, "h1_hat_z2": h1hat,
            "homology": str(M.homology())}
    with open(os.path.join(outdir, name + ".meta.json"), "w") as fh:
        json.dump(meta, fh)
    print(name, n, k, M.homology(), h1, h1hat)


if __name__ == "__main__":
    out = sys.argv[1]
    os.makedirs(out, exist_ok=True)
    for nm in sys.argv[2:]:
        export(out, nm)
