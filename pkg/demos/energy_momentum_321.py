"""Balanced families of the masses (3,2,1)/6 and their energy-momentum image.

Traces the three families, lifts every sample to a relative equilibrium and
prints where each family has a cusp (h' = k' = 0) or touches k = 1/4.
Pass a path to also write the samples as CSV.

    python demos/energy_momentum_321.py [out.csv]
"""

import sys

import numpy as np

from balanced3body import (MassTriple, detect_cusps, detect_k_quarter, equilateral_family,
                           lift_family, trace_families)


def main(out=None):
    m = MassTriple(3, 2, 1).normalized()
    fam = equilateral_family(m)
    print(f"masses {m.as_array()}, Lagrange line h_L = {fam.h_L:.10f}, k in [0, {fam.k_max:.6f}]")

    rows = []
    for f in trace_families(m):
        lf = lift_family(f)
        print(f"\n{f.family_id} ({f.kind}): {len(lf)} physical samples, "
              f"b in [{lf.b.min():.3g}, {lf.b.max():.3g}]")
        print(f"  h in [{lf.h.min():.6f}, {lf.h.max():.6f}], k at ends {lf.k[0]:.2e}, {lf.k[-1]:.2e}")
        for c in detect_cusps(lf):
            print(f"  cusp at b = {c.b:.6f}, a = {c.a:.6f}: (h, k) = ({c.h:.8f}, {c.k:.8f})")
        for q in detect_k_quarter(lf):
            kind = "cusp" if q.cusp else "smooth tangency"
            print(f"  k = 1/4 ({kind}) at b = {q.b:.6f}, a = {q.a:.6f}, h = {q.h:.8f}")
        for i in range(len(lf)):
            rows.append((f.family_id, lf.b[i], lf.a[i], lf.h[i], lf.k[i]))

    if out:
        with open(out, "w") as fh:
            fh.write("family_id,b,a,h,k\n")
            for r in rows:
                fh.write(f"{r[0]},{r[1]:.17g},{r[2]:.17g},{r[3]:.17g},{r[4]:.17g}\n")
        print(f"\nwrote {len(rows)} samples to {out}")
    h = np.array([r[3] for r in rows])
    print(f"\nevery sample has h <= h_L: {bool(np.all(h <= fam.h_L * (1 - 1e-15)))}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else None)
