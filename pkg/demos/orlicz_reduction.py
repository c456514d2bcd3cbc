"""The three equivalent statements for L^A -> L^B on a few power-log pairs (m=1, n=3).

(2) B(t) <= A_m(C t), (3) K(t) <= conj(B_m)(C t), and (4) the modular
inequality on the height family; a "None" in (4) means the family
evidence is inconclusive.
"""

from rispace import optimal_orlicz as O
from rispace import young as Y


PAIRS = [
    (Y.power(2), Y.power(6)),
    (Y.power(2), Y.power(7)),
    (Y.power_log(2, 0, 4, 0), Y.power(6)),
    (Y.power(1.5), Y.power(3)),
    (Y.power(1), Y.power(1)),
]


def main():
    print(f"{'A':>30} {'B':>8} {'(2)':>6} {'(3)':>6} {'(4)':>6}  C4")
    for A, B in PAIRS:
        r = O.orlicz_reduction_check(A, B, 1, 3)
        c4 = "-" if r.c4 is None else f"{r.c4:g}"
        print(f"{A.describe():>30} {B.describe():>8} {str(r.statement2):>6} "
              f"{str(r.statement3):>6} {str(r.statement4):>6}  {c4}")


if __name__ == "__main__":
    main()
