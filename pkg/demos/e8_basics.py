"""Warm-up: minimal vectors, symmetries, and the mass identity for e8.

Run as `python3 demos/e8_basics.py`.
"""

from fractions import Fraction

from qflat.enumeration import (automorphism_order, representation_count,
                               short_vectors)
from qflat.gram import e8_form
from qflat.massledger import GenusInput, siegel_check


def main():
    e8 = e8_form()
    print("Gram matrix:")
    print(e8.text().rstrip())

    count = representation_count(e8, 2)
    print(f"\nvectors of norm 2: {count}")

    listing = short_vectors(e8, 2, expand=True)
    sample = [v for v in listing.vectors if e8.value(v) == 2][:3]
    for v in sample:
        print("  e.g.", v)

    order = automorphism_order(e8)
    print(f"\nautomorphism group order: {order}")

    # one-class genus, so the weighted average over the genus is just
    # the representation count, and the density product must match it
    genus = GenusInput((e8,), (order,))
    ledger = siegel_check(genus, 2, prime_bound=10_000, tol=Fraction(1, 50))
    iv = ledger.rhs.interval
    print(f"\nmass identity at m = 2:")
    print(f"  enumerated side: {ledger.lhs}")
    print(f"  density product: [{float(iv.lo):.9f}, {float(iv.hi):.9f}]")
    print(f"  agreement within 1/50: {'yes' if ledger.passed else 'NO'}")


if __name__ == "__main__":
    main()
