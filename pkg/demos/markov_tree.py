"""Walk the Markov tree.

Prints every triple with c <= 1000 next to its parent and the word of
mutations that reaches it from (1,1,1), then the two growth facts that the
packing constructions lean on: 2ab <= c, and c^2 takes at least two thirds
of a^2 + b^2 + c^2.
"""

from fractions import Fraction

from atfcert.markov import ROOT, check_growth_facts, parent, sorted_triples, word_to


def main():
    print(f"{'triple':>22}  {'parent':>18}  word")
    for t in sorted_triples(1000):
        up = "-" if t == ROOT else str(parent(t))
        word = "".join("ABC"[s] for s in word_to(t)) or "(root)"
        print(f"{str(t):>22}  {up:>18}  {word}")

    print()
    worst = None
    for t in sorted_triples(1000):
        g = check_growth_facts(t)
        assert g.ok, t
        if g.applies:
            ratio = Fraction(*g.square_ratio)
            if worst is None or ratio < worst[0]:
                worst = (ratio, t)
    print("2ab <= c holds for every triple with 2 <= c <= 1000")
    print(f"smallest c^2/(a^2+b^2+c^2) is {worst[0]} = {float(worst[0]):.4f}, at {worst[1]}")


if __name__ == "__main__":
    main()
