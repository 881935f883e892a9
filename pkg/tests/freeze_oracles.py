"""Regenerate tests/data/frozen_oracles.json from the brute-force oracles.

Only the slow reference implementations are called here, so the frozen file
never depends on the fast code paths it is later compared against.

    python3 tests/freeze_oracles.py
"""

import json
from fractions import Fraction
from pathlib import Path

from slicevc.harness import oracles
from slicevc.harness.generators import gen_blowup_graph, gen_class_based, gen_random, gen_threshold

OUT = Path(__file__).parent / "data" / "frozen_oracles.json"
EPS = Fraction(1, 10)


def enc(x):
    return [x.numerator, x.denominator] if isinstance(x, Fraction) else x


def halves(n):
    return [list(range(n // 2)), list(range(n // 2, n))]


def main():
    rows = []
    for seed in range(4):
        G = gen_blowup_graph(12, 3, Fraction(1, 10), seed).graph
        rows.append({
            "kind": "blowup_graph", "args": [12, 3, [1, 10], seed],
            "density": enc(oracles.brute_density_pair(G, range(12), range(12))),
            "vc": oracles.brute_vc(G),
            "pair_audit": enc(oracles.brute_pair_fraction(G, halves(12), halves(12), EPS)),
        })
    for seed in range(3):
        H = gen_class_based(6, 2, Fraction(1, 20), seed).graph
        parts = [range(6)] * 3
        rows.append({
            "kind": "class_based", "args": [6, 2, [1, 20], seed],
            "density": enc(oracles.brute_density_triple(H, *parts)),
            "svc": oracles.brute_svc(H),
            "triple_audit": enc(oracles.brute_triple_fraction(H, [halves(6)] * 3, EPS)),
        })
    for seed in range(2):
        H = gen_threshold(6, seed)
        rows.append({"kind": "threshold", "args": [6, seed], "svc": oracles.brute_svc(H),
                     "density": enc(oracles.brute_density_triple(H, *[range(6)] * 3))})
        H = gen_random(20, Fraction(1, 2), seed)
        P, Q, R = H.tensor[:, :, 0], H.tensor[:, 0, :], H.tensor[0, :, :]
        rows.append({"kind": "random", "args": [20, [1, 2], seed],
                     "triangles": oracles.brute_triangles(P, Q, R, range(20), range(20), range(20))})
    OUT.write_text(json.dumps(rows, indent=1) + "\n")


if __name__ == "__main__":
    main()
