"""Ratios ||Hf||_Y / ||f||_{L^2} for m=1, n=3 on the sharpness family.

L^{6,2} is the optimal r.i. target of L^2, so its ratios level off; the
strictly smaller L^{6,1} has ratios that keep growing as eps -> 0.
Writes the ratio-vs-scale table to peetre_sharpness.csv.
"""

from pathlib import Path

from rispace.cli import emit_report
from rispace.optimal_ri import optimal_target_lz, sharpness_family, verify_reduction
from rispace.spaces import Lebesgue, Lorentz


def main():
    print("optimal target of L^2:", optimal_target_lz(2, 2, (0, 0), 1, 3).spec())
    fam = sharpness_family(0.75, 2)
    for Y in (Lorentz(6, 2), Lorentz(6, 1)):
        rep = verify_reduction(Lebesgue(2), Y, 1, 3, fam)
        print(f"\nY = {Y.spec()}: verdict {rep.verdict}")
        print(f"{'member':>10} {'ratio':>10}")
        for r in rep.records:
            print(f"{r.id:>10} {r.ratio:10.5f}")
        if Y == Lorentz(6, 1):
            emit_report(rep, str(Path(__file__).with_name("peetre_sharpness.csv")), "csv")


if __name__ == "__main__":
    main()
