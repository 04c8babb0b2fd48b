"""Brute-force trace valuations for the certificate fixtures, computed with sympy.

Run from the repository root:  python3 tests/fixtures/bt_oracle.py
"""
import json
import sympy as sp

t = sp.symbols("t")


def words(letters, inverse, radius):
    level = [""]
    for _ in range(radius):
        nxt = []
        for w in level:
            for c in letters:
                if w and w[-1] == inverse[c]:
                    continue
                nxt.append(w + c)
        yield from nxt
        level = nxt


def laurent_valuation(expr):
    num, den = sp.fraction(sp.together(sp.expand(expr)))
    if num == 0:
        return None
    def low(p):
        return min(m[0] for m in sp.Poly(sp.expand(p), t).monoms())
    return low(num) - low(den)


def padic_valuation(q, p):
    q = sp.Rational(q)
    if q == 0:
        return None
    return sp.multiplicity(p, q.p) - sp.multiplicity(p, q.q)


def run(mats, radius, val):
    letters = "aAbB"[: 2 * len(mats)]
    table = {}
    for i, m in enumerate(mats):
        table["aAbB"[2 * i]] = m
        table["aAbB"[2 * i + 1]] = m.inv()
    inverse = {"a": "A", "A": "a", "b": "B", "B": "b"}
    entries = []
    first_fail = None
    for w in words(letters, inverse, radius):
        prod = sp.eye(2)
        for c in w:
            prod = prod * table[c]
        v = val(sp.simplify(prod.trace()))
        entries.append([w, v])
        if first_fail is None and (v is None or v >= 0):
            first_fail = w
    return {
        "radius": radius,
        "status": "pass" if first_fail is None else "fail",
        "first_failure": first_fail,
        "words": len(entries),
        "trace_valuations": entries,
    }


def main():
    d = sp.Matrix([[t, 0], [0, 1 / t]])
    g = sp.Matrix([[1, 1], [1, 2]])
    schottky = [d, g * d * g.inv()]
    unipotent = [sp.Matrix([[1, 1], [0, 1]])]
    out = {
        "schottky": run(schottky, 6, laurent_valuation),
        "unipotent_p3": run(unipotent, 1, lambda x: padic_valuation(x, 3)),
    }
    with open("tests/fixtures/bt_certificates.json", "w") as f:
        json.dump(out, f, indent=1, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
