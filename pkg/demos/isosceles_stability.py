"""Isosceles balanced configurations with masses (1, 1, mu).

Prints the closed-form (h, k) curve for a few mass ratios, where each meets
the Lagrange line, and then perturbs the equal-mass shape rho = 0.8 at fixed
angular momentum to see whether it stays close.

    python demos/isosceles_stability.py
"""

import numpy as np

from balanced3body import IsoscelesParams, isosceles_embedding, lagrange_junction
from balanced3body.closed_forms import isosceles_curve
from balanced3body.dynamics import stability_probe, worker_count


def curves():
    rho = np.linspace(0.1, 1.9, 10)
    for mu in (0.5, 1.0, 2.0):
        cur = isosceles_curve(mu, rho)
        j = lagrange_junction(mu)
        print(f"\nmu = {mu}: meets the Lagrange line at (h, k) = ({j.h:.6f}, {j.k:.6f})")
        print("   rho      chi          h           k")
        for r, c, h, k in zip(cur["rho"], cur["chi"], cur["h"], cur["k"]):
            print(f"  {r:5.2f}  {c:8.5f}  {h:11.6f}  {k:9.6f}")


def probe(rho=0.8, eps=1e-4, periods=20, trials=8):
    eq, _ = isosceles_embedding(IsoscelesParams(rho, 1.0))
    rep = stability_probe(eq, eps=eps, periods=periods, trials=trials, seed=0,
                          workers=worker_count())
    print(f"\nequal masses, rho = {rho}: {trials} perturbations of size {eps:g} over {periods} periods")
    for t in rep.trials:
        lo, hi = t.distance_ratio
        print(f"  trial {t.index:2d}: shape deviation {t.shape_deviation:.2e}, "
              f"distances within [{lo:.5f}, {hi:.5f}] of equilibrium")
    print(f"bounded: {rep.bounded}; largest deviation {rep.max_shape_deviation / eps:.1f} eps")


if __name__ == "__main__":
    curves()
    probe()
