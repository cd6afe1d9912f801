"""Write the bundled category files (trivial, Ising, Fibonacci).

F entries are listed for every admissible index tuple in the stored
convention F(P(Y1,Y2) -> I(Y3,Y4)), keyed by (a1, a2, a3, a4, M, N), where
M is the inner channel of the product and N that of the iterate. In terms of
the usual splitting-tree symbols this is F^{a1 a2 a3}_{a4}[N, M].
"""
import itertools
import json
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data")


def category(name, labels, unit, c, h, fuse, fstd, rvals):
    n = {}
    for a, b, d in itertools.product(labels, repeat=3):
        n[a, b, d] = 1 if d in fuse(a, b) else 0
    fusion = [[a, b, d, 1] for a, b, d in itertools.product(labels, repeat=3) if n[a, b, d]]
    fent = []
    for a1, a2, a3, a4, m, nn in itertools.product(labels, repeat=6):
        if n[a2, a3, m] and n[a1, m, a4] and n[a1, a2, nn] and n[nn, a3, a4]:
            fent.append({"labels": [a1, a2, a3, a4, m, nn], "value": fstd(a1, a2, a3, a4, nn, m)})
    rent = []
    for y, x, z in itertools.product(labels, repeat=3):
        if n[x, y, z]:
            rent.append({"labels": [y, x, z], "value": rvals.get((y, x, z), "1")})
    return {
        "name": name,
        "unit": unit,
        "central_charge": c,
        "conventions": {"sigma23": "solve", "basis": "canonical"},
        "labels": [{"name": a, "dual": a, "h": h[a]} for a in labels],
        "fusion": fusion,
        "F": fent,
        "R": rent,
    }


def dump(obj, path):
    lines = ["{"]
    for key in ("name", "unit", "central_charge", "conventions"):
        lines.append("  %s: %s," % (json.dumps(key), json.dumps(obj[key])))
    for i, key in enumerate(("labels", "fusion", "F", "R")):
        lines.append("  %s: [" % json.dumps(key))
        items = obj[key]
        for j, it in enumerate(items):
            lines.append("    " + json.dumps(it) + ("," if j + 1 < len(items) else ""))
        lines.append("  ]" + ("," if i < 3 else ""))
    lines.append("}")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def trivial():
    return category("trivial", ["e"], "e", "0", {"e": "0"}, lambda a, b: ["e"],
                    lambda *args: "1", {})


def ising():
    labels = ["e", "eps", "sigma"]

    def fuse(a, b):
        if a == "e":
            return [b]
        if b == "e":
            return [a]
        if a == b == "eps":
            return ["e"]
        if a == b == "sigma":
            return ["e", "eps"]
        return ["sigma"]

    def fstd(a, b, c, d, e, f):
        if (a, b, c, d) == ("sigma",) * 4:
            return "-sqrt(1/2)" if e == f == "eps" else "sqrt(1/2)"
        if (a, b, c, d) in [("eps", "sigma", "eps", "sigma"), ("sigma", "eps", "sigma", "eps")]:
            return "-1"
        return "1"

    r = {
        ("sigma", "sigma", "e"): "exp(2*pi*i*(-1/16))",
        ("sigma", "sigma", "eps"): "exp(2*pi*i*(3/16))",
        ("sigma", "eps", "sigma"): "exp(2*pi*i*(-1/4))",
        ("eps", "sigma", "sigma"): "exp(2*pi*i*(-1/4))",
        ("eps", "eps", "e"): "-1",
    }
    return category("ising", labels, "e", "1/2", {"e": "0", "eps": "1/2", "sigma": "1/16"}, fuse, fstd, r)


def fibonacci():
    labels = ["e", "t"]

    def fuse(a, b):
        if a == "e":
            return [b]
        if b == "e":
            return [a]
        return ["e", "t"]

    def fstd(a, b, c, d, e, f):
        if (a, b, c, d) == ("t",) * 4:
            if e == f == "e":
                return "(sqrt(5)-1)/2"
            if e == f == "t":
                return "(1-sqrt(5))/2"
            return "sqrt((sqrt(5)-1)/2)"
        return "1"

    r = {("t", "t", "e"): "exp(2*pi*i*(-2/5))", ("t", "t", "t"): "exp(2*pi*i*(3/10))"}
    return category("fibonacci", labels, "e", "14/5", {"e": "0", "t": "2/5"}, fuse, fstd, r)


if __name__ == "__main__":
    for name, obj in [("trivial", trivial()), ("ising", ising()), ("fibonacci", fibonacci())]:
        dump(obj, os.path.join(OUT, name + ".json"))
