#!/usr/bin/env python3
"""Writes fixtures/*.json: the named examples fx1..fx6 and a seeded random corpus.

Usage: make_fixtures.py [outdir] [--goldens path/to/bimodcheck]
"""

import argparse
import json
import random
import subprocess
from fractions import Fraction
from pathlib import Path


# ---- algebras as structure constants -------------------------------------

def table(dim, prod):
    return [[prod(i, j) for j in range(dim)] for i in range(dim)]


def unit_vec(n, i):
    v = [0] * n
    v[i] = 1
    return v


def product_algebra(n):
    return {"dim": n, "basis": [f"e{i + 1}" for i in range(n)],
            "mult": table(n, lambda i, j: unit_vec(n, i) if i == j else [0] * n),
            "unit": [1] * n}


def truncated(n):
    names = ["1", "x"] + [f"x^{p}" for p in range(2, n)]
    return {"dim": n, "basis": names[:n],
            "mult": table(n, lambda i, j: unit_vec(n, i + j) if i + j < n else [0] * n),
            "unit": unit_vec(n, 0)}


def matrix_units(n):
    d = n * n

    def prod(a, b):
        i, j = divmod(a, n)
        k, l = divmod(b, n)
        return unit_vec(d, i * n + l) if j == k else [0] * d

    return {"dim": d, "basis": [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)],
            "mult": table(d, prod), "unit": [1 if a // n == a % n else 0 for a in range(d)]}


def upper_triangular():
    # basis E11, E12, E22
    idx = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    pairs = list(idx)

    def prod(a, b):
        (i, j), (k, l) = pairs[a], pairs[b]
        return unit_vec(3, idx[(i, l)]) if j == k else [0] * 3

    return {"dim": 3, "basis": ["E11", "E12", "E22"], "mult": table(3, prod), "unit": [1, 0, 1]}


def mult(alg, x, y):
    n = alg["dim"]
    out = [0] * n
    for i in range(n):
        for j in range(n):
            c = x[i] * y[j]
            if c:
                for k in range(n):
                    out[k] += c * alg["mult"][i][j][k]
    return out


# ---- actions --------------------------------------------------------------

def regular_left(alg):
    n = alg["dim"]
    return [[[mult(alg, unit_vec(n, i), unit_vec(n, c))[r] for c in range(n)] for r in range(n)] for i in range(n)]


def regular_right(alg, image):
    """Right action of A on B through the images (vectors in B) of A's basis."""
    n = alg["dim"]
    return [[[mult(alg, unit_vec(n, c), img)[r] for c in range(n)] for r in range(n)] for img in image]


def trivial_right(dim):
    return [identity(dim)]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def block(a, b):
    n, m = len(a), len(b)
    out = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = a[i][j]
    for i in range(m):
        for j in range(m):
            out[n + i][n + j] = b[i][j]
    return out


def inverse(p, modulus=None):
    n = len(p)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(p)]
    for c in range(n):
        piv = next(r for r in range(c, n) if red(a[r][c], modulus) != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = inv_of(a[c][c], modulus)
        a[c] = [red(x * inv, modulus) for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [red(x - f * y, modulus) for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def red(x, modulus):
    if modulus is None:
        return x
    return Fraction(x.numerator * pow(x.denominator, -1, modulus) % modulus)


def inv_of(x, modulus):
    if modulus is None:
        return 1 / x
    return Fraction(pow(int(x), -1, modulus))


def random_invertible(rng, n, modulus=None):
    while True:
        p = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        if modulus is not None:
            p = [[x % modulus for x in row] for row in p]
        try:
            inverse(p, modulus)
            return p
        except StopIteration:
            continue


def conjugate(actions, p, modulus=None):
    pinv = inverse(p, modulus)
    return [[[red(Fraction(x), modulus) for x in row] for row in matmul(matmul(pinv, a), p)] for a in actions]


def entry(x, modulus):
    x = Fraction(x)
    if modulus is not None:
        return int(red(x, modulus))
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def encode(obj, modulus):
    if isinstance(obj, list):
        return [encode(x, modulus) for x in obj]
    return entry(obj, modulus)


def explicit(left, right, lam, rho, modulus):
    return {"left": left, "right": right, "dim": len(lam[0]),
            "left_action": encode(lam, modulus), "right_action": encode(rho, modulus)}


def algebra_json(alg, modulus):
    return {"dim": alg["dim"], "basis": alg["basis"], "mult": encode(alg["mult"], modulus),
            "unit": encode(alg["unit"], modulus)}


def task(op, args, expect=None, **opts):
    t = {"op": op, "args": args}
    t.update(opts)
    if expect is not None:
        t["expect"] = expect
    return t


def document(field, algebras, bimodules, tasks, ring_maps=None):
    modulus = None if field == "Q" else int(field[2:])
    doc = {"field": field, "algebras": {n: algebra_json(a, modulus) for n, a in algebras.items()}}
    if ring_maps:
        doc["ring_maps"] = ring_maps
    doc["bimodules"] = bimodules
    doc["tasks"] = tasks
    return doc


# ---- the named examples ---------------------------------------------------

def b_over_k(alg, modulus=None):
    return explicit("B", "k", regular_left(alg), trivial_right(alg["dim"]), modulus)


def fx1():
    k = product_algebra(1)
    return document("Q", {"K": k}, {"M": explicit("K", "K", regular_left(k), regular_left(k), None)}, [
        task("generator", ["M"], {"value": True}),
        task("separable", ["M"], {"value": True}),
        task("diagnose", ["M"], {"generator": True, "separable": True, "smooth": True, "hdim": "0"}),
        task("multiplication", ["k_to_K"], {"source_dim": 1, "target_dim": 1, "surjective": True}),
    ], ring_maps={"k_to_K": {"unit": "K"}})


def grid(name, gen, sep, smooth, hdim, nmax=3):
    return [
        task("generator", [name], {"value": gen}),
        task("separable", [name], {"value": sep}),
        task("smooth", [name], {"value": smooth}),
        task("hdim", [name], {"hdim": hdim}, nmax=nmax),
        task("diagnose", [name], {"generator": gen, "separable": sep, "smooth": smooth, "hdim": hdim}, nmax=nmax),
    ]


def fx2():
    b = product_algebra(2)
    return document("Q", {"B": b}, {"B_over_k": b_over_k(b)}, grid("B_over_k", True, True, True, "0") + [
        task("m_hochschild", ["B_over_k", "@regular"], {"dims": [2, 0, 0]}, nmax=2),
        task("rel_hochschild", ["k_to_B", "@regular"], {"dims": [2, 0, 0]}, nmax=2),
        task("bar_resolution", ["B_over_k"], {"d_squared_zero": True, "homotopy": True, "h0": 2, "center_dim": 2}, depth=3),
        task("smooth_extension", ["k_to_B"], {"value": True}),
        task("separable_extension", ["k_to_B"], {"value": True}),
    ], ring_maps={"k_to_B": {"unit": "B"}})


def fx3():
    b = truncated(2)
    k_over_b = explicit("B", "k", [[[1]], [[0]]], [[[1]]], None)
    return document("Q", {"B": b}, {"B_over_k": b_over_k(b), "k_over_B": k_over_b},
                    grid("B_over_k", True, False, False, "> 3") + [
        task("m_hochschild", ["B_over_k", "@regular"], {"dims": [2, 1, 1]}, nmax=2),
        task("rel_hochschild", ["k_to_B", "@regular"], {"dims": [2, 1, 1]}, nmax=2),
        task("bar_resolution", ["B_over_k"], {"dims": [4, 8, 16], "d_squared_zero": True, "homotopy": True}, depth=3),
        task("multiplication", ["k_to_B"], {"source_dim": 4, "target_dim": 2, "kernel_dim": 2, "surjective": True}),
        task("smooth_extension", ["k_to_B"], {"value": False}),
        task("separable_extension", ["k_to_B"], {"value": False}),
        task("generator", ["k_over_B"], {"value": False}),
        task("fg_projective", ["k_over_B"], {"left": False}),
        task("trace", ["k_over_B", "@regular"], {"dim": 1}),
        task("static", ["k_over_B"], {"consistent": True}),
        task("sugano", ["k_over_B"], {"precondition": False, "consistent": True}),
        task("endomorphism_ring", ["B_over_k"], {"dim": 2, "valid": True}),
    ], ring_maps={"k_to_B": {"unit": "B"}})


def fx4():
    b = upper_triangular()
    return document("Q", {"B": b}, {"B_over_k": b_over_k(b)}, grid("B_over_k", True, False, True, "1") + [
        task("m_hochschild", ["B_over_k", "@regular"], {"dims": [1, 0, 0]}, nmax=2),
        task("rel_hochschild", ["k_to_B", "@regular"], {"dims": [1, 0, 0]}, nmax=2),
        task("bar_resolution", ["B_over_k"], {"dims": [9, 27], "d_squared_zero": True, "homotopy": True}, depth=2),
        task("smooth_extension", ["k_to_B"], {"value": True}),
        task("separable_extension", ["k_to_B"], {"value": False}),
    ], ring_maps={"k_to_B": {"unit": "B"}})


def column_module(n):
    b = matrix_units(n)
    lam = []
    for a in range(n * n):
        i, j = divmod(a, n)
        m = [[0] * n for _ in range(n)]
        m[i][j] = 1
        lam.append(m)
    return b, lam


def fx5():
    b, lam = column_module(2)
    bims = {"M": explicit("B", "k", lam, trivial_right(2), None), "k_k": explicit("k", "k", [[[1]]], [[[1]]], None)}
    return document("Q", {"B": b}, bims, grid("M", True, True, True, "0") + [
        task("fg_projective", ["M"], {"left": True, "right": True}),
        task("endomorphism_ring", ["M"], {"dim": 1, "valid": True}),
        task("trace", ["M", "@regular"], {"dim": 4}),
        task("static", ["M"], {"ev_over_s_isomorphism": True, "consistent": True}),
        task("sugano", ["M"], {"precondition": True, "separable": True, "consistent": True}),
        task("morita", ["M", "@regular"], {"equal": True, "phi": {"ok": True}}, nmax=2),
        task("morita", ["M", "@ker_ev"], {"equal": True, "phi": {"ok": True}}, nmax=2),
        task("smooth_product", ["M", "k_k"], {"consistent": True}, mode=1),
    ])


def fx6():
    b = matrix_units(2)
    a = product_algebra(2)
    image = [unit_vec(4, 0), unit_vec(4, 3)]  # e1 -> E11, e2 -> E22
    m = explicit("B", "A", regular_left(b), regular_right(b, image), None)
    return document("Q", {"B": b, "A": a}, {"M": m}, grid("M", True, True, True, "0") + [
        task("multiplication", ["A_to_B"], {"source_dim": 8, "kernel_dim": 4, "surjective": True}),
        task("separable_extension", ["A_to_B"], {"value": True}),
        task("endomorphism_ring", ["M"], {"dim": 4, "valid": True}),
        task("morita", ["M", "@regular"], {"equal": True, "phi": {"ok": True}}, nmax=2),
        task("morita", ["M", "@ker_ev"], {"equal": True, "phi": {"ok": True}}, nmax=2),
        task("phi", ["M", "@regular"], {"ok": True}, nmax=2),
        task("sugano", ["M"], {"precondition": True, "consistent": True}),
    ], ring_maps={"A_to_B": {"source": "A", "target": "B",
                             "matrix": [[1, 0], [0, 0], [0, 0], [0, 1]]}})


# ---- the random corpus ----------------------------------------------------

CORPUS_TASKS = ["generator", "separable", "smooth", "diagnose", "bar_resolution"]


def corpus_doc(field, algebras, bimodules, names, ring_maps=None, nmax=2, depth=2):
    tasks = []
    for n in names:
        for op in CORPUS_TASKS:
            opts = {"nmax": nmax} if op == "diagnose" else {"depth": depth} if op == "bar_resolution" else {}
            tasks.append(task(op, [n], **opts))
    return document(field, algebras, bimodules, tasks, ring_maps)


def corpus(rng):
    docs = {}

    def conj(left, right, lam, rho, modulus=None):
        p = random_invertible(rng, len(lam[0]), modulus)
        return explicit(left, right, conjugate(lam, p, modulus), conjugate(rho, p, modulus), modulus)

    b = product_algebra(2)
    docs["rand01"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(2))}, ["M"], nmax=3)

    b = truncated(2)
    docs["rand02"] = corpus_doc("F_3", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(2), 3)}, ["M"], nmax=3)

    b = upper_triangular()
    docs["rand03"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(3))}, ["M"])

    b, lam = column_module(2)
    docs["rand04"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", lam, trivial_right(2))}, ["M"], nmax=3)

    sum_lam = [block(x, x) for x in lam]
    docs["rand05"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", sum_lam, trivial_right(4))}, ["M"], nmax=1, depth=1)

    b = product_algebra(3)
    docs["rand06"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(3))}, ["M"])

    b = upper_triangular()
    a = product_algebra(2)
    image = [unit_vec(3, 0), unit_vec(3, 2)]
    docs["rand07"] = corpus_doc("Q", {"B": b, "A": a},
                                {"M": conj("B", "A", regular_left(b), regular_right(b, image))}, ["M"], nmax=3)

    b = truncated(2)
    docs["rand08"] = corpus_doc("F_2", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(2), 2)}, ["M"])

    b = truncated(3)
    docs["rand09"] = corpus_doc("Q", {"B": b}, {"M": conj("B", "k", regular_left(b), trivial_right(3))}, ["M"], nmax=1, depth=1)

    b = product_algebra(2)
    reg = regular_left(b)
    first = [[[1]], [[0]]]
    docs["rand10"] = corpus_doc("Q", {"B": b},
                                {"M": conj("B", "k", [block(x, y) for x, y in zip(reg, first)], trivial_right(3))}, ["M"], nmax=3, depth=1)

    b = truncated(2)
    docs["rand11"] = corpus_doc("Q", {"B": b}, {"M": explicit("B", "k", [[[1]], [[0]]], [[[1]]], None)}, ["M"])

    b, _ = column_module(2)
    a = product_algebra(2)
    image = [unit_vec(4, 0), unit_vec(4, 3)]
    docs["rand12"] = corpus_doc("Q", {"B": b, "A": a},
                                {"M": conj("B", "A", regular_left(b), regular_right(b, image))}, ["M"], nmax=1)

    b = truncated(2)
    ident = [unit_vec(2, 0), unit_vec(2, 1)]
    docs["rand13"] = corpus_doc("F_5", {"B": b},
                                {"M": conj("B", "B", regular_left(b), regular_right(b, ident), 5)}, ["M"], nmax=3)
    return docs


def write_goldens(cli, paths):
    for path in paths:
        report = subprocess.run([cli, "check", str(path), "--format", "json"], check=True, capture_output=True).stdout
        path.with_suffix(".golden.json").write_bytes(report)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default=Path(__file__).resolve().parent.parent / "fixtures", type=Path)
    parser.add_argument("--goldens", metavar="CLI", help="also write <name>.golden.json reports with this binary")
    args = parser.parse_args()
    out = args.outdir
    written = []
    out.mkdir(parents=True, exist_ok=True)
    docs = {"fx1": fx1(), "fx2": fx2(), "fx3": fx3(), "fx4": fx4(), "fx5": fx5(), "fx6": fx6()}
    corpus_dir = out / "corpus"
    corpus_dir.mkdir(exist_ok=True)
    for name, doc in docs.items():
        written.append(out / f"{name}.json")
        written[-1].write_text(json.dumps(doc, indent=2) + "\n")
    for name, doc in corpus(random.Random(20240917)).items():
        written.append(corpus_dir / f"{name}.json")
        written[-1].write_text(json.dumps(doc, indent=2) + "\n")
    if args.goldens:
        write_goldens(args.goldens, written)


if __name__ == "__main__":
    main()
