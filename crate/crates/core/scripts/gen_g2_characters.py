"""Characters of the two (G2)_1 modules, the chiral theory behind the bundled
Fibonacci data (c = 14/5, h = 2/5).

Both characters solve the second-order modular differential equation
    (q d/dq)^2 chi - (E2/6) (q d/dq) chi + mu E4 chi = 0,   mu = -119/3600,
whose indicial roots are -7/60 and 17/60. The recursion is solved in exact
rationals; every coefficient is checked to be a non-negative integer.

Usage: python3 gen_g2_characters.py [N]   (writes ../data/fibonacci.chars.json)
"""
import json
import os
import sys
from fractions import Fraction as Q


def sigma(k, n):
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def solve(alpha, n_terms, mu):
    e2 = [Q(1)] + [Q(-24 * sigma(1, n)) for n in range(1, n_terms)]
    e4 = [Q(1)] + [Q(240 * sigma(3, n)) for n in range(1, n_terms)]
    a = [Q(1)]
    for n in range(1, n_terms):
        x = alpha + n
        lead = x * x - x / 6 + mu
        rhs = Q(0)
        for k in range(1, n + 1):
            rhs += (-e2[k] * (x - k) / 6 + mu * e4[k]) * a[n - k]
        a.append(-rhs / lead)
    return a


def main():
    n_terms = int(sys.argv[1]) if len(sys.argv) > 1 else 400
    mu = Q(-119, 3600)
    chars = []
    for label, alpha, a0 in (("e", Q(-7, 60), 1), ("t", Q(17, 60), 7)):
        assert alpha * alpha - alpha / 6 + mu == 0
        a = [c * a0 for c in solve(alpha, n_terms, mu)]
        for c in a:
            assert c.denominator == 1 and c >= 0, (label, c)
        chars.append({"label": label, "offset": str(alpha), "coeffs": [str(c.numerator) for c in a]})
    assert chars[0]["coeffs"][1] == "14"  # dim G2
    assert chars[1]["coeffs"][0] == "7"  # 7-dimensional lowest space
    out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "fibonacci.chars.json")
    with open(out, "w") as f:
        f.write('{\n  "name": "fibonacci",\n  "characters": [\n')
        f.write(",\n".join("    " + json.dumps(c) for c in chars))
        f.write("\n  ]\n}\n")
    print("wrote", os.path.normpath(out))


if __name__ == "__main__":
    main()
