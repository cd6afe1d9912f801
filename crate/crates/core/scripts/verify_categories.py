"""Independent pentagon/hexagon scan of the bundled category files.

Reads the JSON files, converts the stored F entries to splitting-tree symbols
F^{abc}_d[e, f] and checks the textbook multiplicity-free pentagon and both
hexagons with numpy. Prints the maximum residual per file.
"""
import cmath
import itertools
import json
import math
import os
import sys

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def const(s):
    s = s.replace("exp(2*pi*i*", "cmath.exp(2j*math.pi*")
    return complex(eval(s, {"sqrt": lambda x: cmath.sqrt(x) if isinstance(x, complex) or x < 0 else math.sqrt(x),
                            "cmath": cmath, "math": math}))


def check(path):
    cat = json.load(open(path))
    L = [l["name"] for l in cat["labels"]]
    N = {(a, b, c): 0 for a, b, c in itertools.product(L, repeat=3)}
    for a, b, c, n in cat["fusion"]:
        N[a, b, c] = n
    F = {}
    for ent in cat["F"]:
        a1, a2, a3, a4, m, n = ent["labels"]
        F[a1, a2, a3, a4, n, m] = const(ent["value"])
    R = {tuple(ent["labels"]): const(ent["value"]) for ent in cat["R"]}

    def f(a, b, c, d, e, g):
        return F.get((a, b, c, d, e, g), 0)

    pent = 0.0
    for a, b, c, d, e in itertools.product(L, repeat=5):
        for fl, g, k, l in itertools.product(L, repeat=4):
            if not (N[a, b, fl] and N[fl, c, g] and N[g, d, e] and N[c, d, l] and N[b, l, k] and N[a, k, e]):
                continue
            lhs = f(fl, c, d, e, g, l) * f(a, b, l, e, fl, k)
            rhs = sum(f(a, b, c, g, fl, h) * f(a, h, d, e, g, k) * f(b, c, d, k, h, l) for h in L)
            pent = max(pent, abs(lhs - rhs))
    hexa = 0.0
    for inv in (False, True):
        def r(x, y, z):
            if (x, y, z) not in R:
                return 0
            return 1 / R[y, x, z] if inv else R[x, y, z]
        for a, b, c, d in itertools.product(L, repeat=4):
            for e, g in itertools.product(L, repeat=2):
                if not (N[a, c, e] and N[e, b, d] and N[c, b, g] and N[a, g, d]):
                    continue
                lhs = r(c, a, e) * f(a, c, b, d, e, g) * r(c, b, g)
                rhs = sum(f(c, a, b, d, e, fl) * r(c, fl, d) * f(a, b, c, d, fl, g) for fl in L)
                hexa = max(hexa, abs(lhs - rhs))
    return pent, hexa


if __name__ == "__main__":
    names = sys.argv[1:] or ["trivial", "ising", "fibonacci"]
    for n in names:
        p, h = check(os.path.join(DATA, n + ".json"))
        print("%-10s pentagon %.2e  hexagon %.2e" % (n, p, h))
