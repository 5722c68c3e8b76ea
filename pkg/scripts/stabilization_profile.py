#!/usr/bin/env python3
"""Profile the two stabilization rules for the limit identities.

For each weight a and truncation order this prints the n at which the
consecutive-agreement rule accepts, the n the square-root bound would
jump to, and whether the bound's value already agrees with the stable
one.  The bound is derived from the quadratic exponent growth a*n^2 of
the extreme z-slices; the table shows that the unnormalized values
converge only linearly in n (the top row of the polynomial moves by
O(n)), so the square-root jump lands far too early at every order.
"""

import argparse

from qident.hfamily import stabilized_h_value
from qident.qobjects import Monomial
from qident.series import HalfInt, he


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", nargs="*", default=["3/2", "5/2", "7/2"])
    ap.add_argument("--orders", nargs="*", type=int, default=[20, 40, 60, 80])
    ap.add_argument("--m", default="0", help="z exponent (half-integer)")
    args = ap.parse_args()

    m = HalfInt.parse(args.m)
    w = Monomial(-1, m)
    print(f"{'a':>5} {'order':>6} {'n(consec)':>10} {'n(bound)':>9} {'bound agrees':>13}")
    for a_tok in args.a:
        a = HalfInt.parse(a_tok)
        for onum in args.orders:
            order = he(onum)
            stable, n_c = stabilized_h_value(a, w, order, "consecutive")
            jumped, n_b = stabilized_h_value(a, w, order, "bound")
            agrees = "yes" if jumped == stable else "no"
            print(f"{str(a):>5} {onum:>6} {n_c:>10} {n_b:>9} {agrees:>13}")


if __name__ == "__main__":
    main()
