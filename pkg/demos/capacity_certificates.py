"""Ball packings as exact certificates.

For a few triples this builds every packing the library knows about,
re-verifies it, and prints the resulting lower bounds as rational
multiples of pi. Each report is also written out as a JSON document that
`atfcert verify` accepts, together with an SVG of the seed diagram and
its packings.
"""

import argparse
from pathlib import Path

from atfcert import serialize
from atfcert.affine import fmt_q
from atfcert.atf import seed_diagram
from atfcert.markov import MarkovTriple
from atfcert.packing import capacity_report
from atfcert.svg import render


def show(value):
    if isinstance(value, bool) or value is None:
        return str(value)
    return fmt_q(value)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("triples", nargs="*", default=["1,1,1", "1,1,2", "1,2,5", "2,5,29"])
    ap.add_argument("--out", default="demo_out")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)

    for text in args.triples:
        t = MarkovTriple.parse(text).canonical()
        r = capacity_report(t)
        print(f"== {t}")
        for e in r.entries:
            mark = "ok " if e.verified else "BAD"
            n = len(e.packing.placements)
            print(f"  [{mark}] {e.packing.name:<18} {n} ball(s), affine size {fmt_q(e.affine_size):>6}, capacity {fmt_q(e.capacity_over_pi)} pi")
        for k, v in r.headline.items():
            print(f"  {k} {show(v)}")
        for k, v in r.external.items():
            print(f"  cited, not computed: {k} {show(v)}")

        d = seed_diagram(t)
        packs = [e.packing for e in r.entries]
        stem = f"report_{t.a}_{t.b}_{t.c}"
        (out / f"{stem}.json").write_text(serialize.dumps(serialize.make_document(d, packs, r)))
        same_chart = tuple(p for p in packs if p.diagram == d)
        (out / f"{stem}.svg").write_text(render(d, same_chart, title=f"packings for {t}"))
        problems = serialize.verify_document(serialize.loads((out / f"{stem}.json").read_text()))
        print(f"  re-read {stem}.json: {'all certificates verify' if not problems else problems}")


if __name__ == "__main__":
    main()
