"""Certify that two hyperbolic isometries power to a free group.

The generators act on the space of binary forms (a, b, c) with the
discriminant pairing b^2 - 4ac; they arise as symmetric squares of
integer 2x2 matrices.  The certificate is a ping-pong table: four
disjoint boundary neighborhoods, each swallowing the complement of its
partner under the m-th power, checked end to end in exact rationals.

Run as `python3 demos/free_subgroup.py`.
"""

from qflat.pingpong import (schottky_certify, symmetric_square,
                            translation_axis, translation_length)


def main():
    m1 = ((2, 1), (1, 1))
    m2 = ((1, 1), (1, 2))
    g1 = symmetric_square(m1)
    g2 = symmetric_square(m2)
    print("g1 =", g1)
    print("g2 =", g2)

    for name, g in (("g1", g1), ("g2", g2)):
        length = translation_length(g)
        axis = translation_axis(g)
        print(f"\n{name}: translation length in "
              f"[{float(length.lo):.12f}, {float(length.hi):.12f}]")
        ray = ", ".join(str(c) for c in axis.attracting)
        print(f"    attracting ray ({ray})")
        print(f"    eigenvalue {axis.eigenvalue} "
              f"(field disc {axis.field_disc})")

    cert = schottky_certify(g1, g2, m_max=20)
    print(f"\nping-pong table found at m = {cert.m}")
    for box in cert.boxes:
        print(f"  {box.label}: u in [{box.u_lo}, {box.u_hi}], "
              f"w in [{box.w_lo}, {box.w_hi}]")
    for text in cert.inclusions:
        print(f"  certified: {text}")
    print(f"word audit: {cert.words_checked} reduced words of length <= 6, "
          "none equal to the identity")
    print(f"\nhence <g1^{cert.m}, g2^{cert.m}> is free of rank 2.")


if __name__ == "__main__":
    main()
