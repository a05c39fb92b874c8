"""
Slot impedance from the spectral integral
=========================================

Walks from the line-source kernel to the impedance matrix of a finite
connected slot array, in free space and on a silicon half-space.

Run with ``python3 demos/01_slot_impedance.py``.
"""

import numpy as np

from slotcap import (
    ArrayGeometry,
    MediumSpec,
    SpectralContext,
    infinite_array_impedance,
    spectral_function,
    truncate_by_admittance,
    voltage_profile,
)

# 1 mm slots fed every 30 mm; the feed gap defaults to the slot width
geom = ArrayGeometry(slot_width=1e-3, feed_pitch=0.03, element_count=16)
free = MediumSpec.free_space()
silicon = MediumSpec.half_space(11.7)
f = 2e9
ctx = SpectralContext(f)

# The kernel D(kx) is smooth on the real axis except at the branch points
# +-k of each half-space.  Sample it on both sides of the free-space one.
k0 = ctx.k0
kx = k0 * np.array([0.0, 0.5, 0.99, 1.01, 2.0, 10.0])
print("D(kx) in free space at 2 GHz")
for u, d in zip(kx / k0, spectral_function(kx, ctx, free, geom.slot_width)):
    print(f"  kx/k0 = {u:5.2f}   D = {d.real: .4e} {d.imag:+.4e}j")

# Voltage along an infinite slot for a unit current at x = 0.  The
# dielectric slows the wave, so the phase turns faster with distance.
x = geom.feed_pitch * np.arange(1, 6)
for name, medium in (("free space", free), ("silicon", silicon)):
    v = voltage_profile(x, 1.0, ctx, geom, medium)
    print(f"\nv(x) along the slot, {name}")
    for xi, vi in zip(x, v):
        print(f"  x = {xi * 1e3:5.1f} mm   |v| = {abs(vi):8.3f} V   arg = {np.angle(vi, deg=True):7.1f} deg")

# Sampling v(x) at the feeds gives a Toeplitz mutual-impedance matrix.
# Shorting the two outer feeds leaves the finite N-port.
z_inf = infinite_array_impedance(ctx, geom, free, include_edge_ports=True)
z_fin = truncate_by_admittance(z_inf)
c = geom.element_count // 2
print(f"\ncentral self-impedance: infinite {z_inf[c + 1, c + 1]:.2f} ohm, finite {z_fin[c, c]:.2f} ohm")

# Edge effects fade as the array grows.  Elements near the centre approach
# the infinite-array value, though edge standing waves keep it from doing so
# monotonically for every N.
print("\ncentral self-impedance vs element count at 1.58 GHz")
ctx = SpectralContext(1.58e9)
for n in (8, 16, 32, 64):
    g = ArrayGeometry(1e-3, 0.03, n)
    z = infinite_array_impedance(ctx, g, free, include_edge_ports=True)
    zc = truncate_by_admittance(z)[n // 2, n // 2]
    print(f"  N = {n:2d}   Z = {zc.real:7.2f} {zc.imag:+7.2f}j   |Z - Z_inf| = {abs(zc - z[1, 1]):6.1f}")
