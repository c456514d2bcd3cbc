"""Optimal Orlicz targets and domains for power-log Young functions (m=1, n=3).

Prints the tail exponents of A_m, E_m and B_m next to the closed forms
A_m = t^6/48, E_m = t^2/4 (for A = t^2) and B_m = t^2/2 (for B = t^6).
"""

import numpy as np

from rispace import optimal_orlicz as O
from rispace import young as Y


def tails(F):
    return f"t^{F.p0:g} l^{F.alpha0:g} at 0, t^{F.pinf:g} l^{F.alphainf:g} at inf"


def main():
    t = np.array([1e-2, 1.0, 1e2])
    A = Y.power(2)
    A_m, E_m = O.construct_A_m(A, 1, 3), O.construct_E_m(A, 1, 3)
    print("A = t^2")
    print("  A_m / (t^6/48):", A_m(t) / (t ** 6 / 48))
    print("  E_m / (t^2/4): ", E_m(t) / (t ** 2 / 4))
    B_m = O.construct_B_m(Y.power(6), 1, 3)
    print("B = t^6")
    print("  B_m / (t^2/2): ", B_m(t) / (t ** 2 / 2))

    print("\ntail exponents of the constructions")
    for args in [(2, 0, 2, 0), (2, 1, 2, 1), (1.5, 0, 3, 0), (2, 0, 4, 0)]:
        A = Y.power_log(*args)
        res = O.optimal_orlicz_target(A, 1, 3)
        print(f"A = {A.describe()}")
        print(f"  A_m: {tails(res.A_m)}" + (f", capped at {res.A_m.cap:.4g}" if res.A_m.cap else ""))
        print(f"  E_m: {tails(res.E_m)}")
        print(f"  target: {res.target.spec()}")

    print("\nOrlicz domains")
    for B in [Y.power(6), Y.power_log(2, 0, 6, 0), Y.exponential(1.0), Y.power(1.2)]:
        r = O.optimal_orlicz_domain(B, 1, 3)
        extra = f", I(B_m) = {r.upper_index:.4f}" if hasattr(r, "upper_index") else ""
        print(f"  B = {B.describe()}: {r.kind}{extra}")


if __name__ == "__main__":
    main()
