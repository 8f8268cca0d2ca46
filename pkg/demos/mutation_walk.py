"""From the Clifford diagram to (2,5,29) by cut transfers.

Starts from the (1,1,1) triangle, trades all three corners for nodes, and
then mutates along the word that leads to (2,5,29). After every step the
mutated diagram is compared with the seed diagram that is built directly
from the new triple. Both are drawn as SVG in the output directory.
"""

import argparse
from pathlib import Path

from atfcert.affine import fmt_q
from atfcert.atf import diagram_equiv, mutate_slot, seed_diagram, trade_all
from atfcert.markov import MarkovTriple, mutate, word_to
from atfcert.svg import render


def describe(d):
    verts = ", ".join(f"({fmt_q(x)},{fmt_q(y)})" for x, y in d.polygon.vertices)
    lengths = ", ".join(fmt_q(x) for x in d.polygon.lattice_lengths())
    return f"{d.triple}: vertices {verts}; edge lengths {lengths}; area {fmt_q(d.polygon.area())}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target", default="2,5,29")
    ap.add_argument("--out", default="demo_out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    target = MarkovTriple.parse(args.target).canonical()
    d = trade_all(seed_diagram(MarkovTriple(1, 1, 1)))
    t = d.triple
    print("start  ", describe(d))
    for step, slot in enumerate(word_to(target), 1):
        d = mutate_slot(d, slot)
        t = mutate(t, slot).canonical()
        g = diagram_equiv(d, seed_diagram(t))
        print(f"step {step} (slot {'ABC'[slot]})", describe(d))
        print(f"        equivalent to the seed of {t}: {g is not None}; fiber stays at {tuple(map(fmt_q, d.fiber))}")
        (out / f"walk_{step}_{t.a}_{t.b}_{t.c}.svg").write_text(render(d, title=f"after step {step}"))
    (out / "walk_seed.svg").write_text(render(seed_diagram(target), title=f"seed of {target}"))
    print(f"SVGs written to {out}/")


if __name__ == "__main__":
    main()
