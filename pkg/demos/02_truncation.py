"""
Two ways to cut an infinite array
=================================

Shorting the two edge feeds exactly, or terminating them in a large
resistor R, should give the same finite array as R grows.  The gap between
the two closes like 1/R, with a prefactor set by the size of the impedance
matrix itself.

Run with ``python3 demos/02_truncation.py``.
"""

import numpy as np

from slotcap import (
    ArrayGeometry,
    MediumSpec,
    SpectralContext,
    infinite_array_impedance,
    truncate_by_admittance,
    truncate_by_termination,
)

geom = ArrayGeometry(1e-3, 0.03, 16)
for medium, name in ((MediumSpec.free_space(), "free space"), (MediumSpec.half_space(11.7), "silicon")):
    print(f"\n{name}: relative Frobenius gap, termination vs exact short")
    print("   f [GHz]    R=1e3      R=1e5      R=1e7     ||Z||_2/R at 1e5")
    for f in np.geomspace(5e8, 5e9, 5):
        z = infinite_array_impedance(SpectralContext(f), geom, medium, include_edge_ports=True)
        exact = truncate_by_admittance(z)
        gaps = [
            np.linalg.norm(truncate_by_termination(z, r_open=r) - exact) / np.linalg.norm(exact)
            for r in (1e3, 1e5, 1e7)
        ]
        bound = np.linalg.norm(truncate_by_termination(z, r_open=1e5), 2) / 1e5
        print(f"   {f / 1e9:6.3f}  " + "  ".join(f"{g:.2e}" for g in gaps) + f"   {bound:.2e}")

# In free space the finite array has impedance entries of order 1e2 to
# 1e3 ohm, so R = 1e5 is not yet "open" at the 1e-3 level.  Each extra
# factor of 100 in R buys exactly a factor of 100 in agreement.
