#!/usr/bin/env python3
"""Regenerate data/gold_permittivity.csv.

Anchor rows are obtained by inverting the reduced impedance
xi_tilde = k0 * w / sqrt(eps) at w = 0.75 um for the seven tabulated
(zeta, eta) pairs at 1000..7000 cm^-1. The 400 and 7400 cm^-1 end rows are
linear extrapolations of the nearest anchor pair. Intermediate rows on a
100 cm^-1 grid are linear interpolations, so the file defines the same
piecewise-linear curve as the anchors alone.
"""
import math
import sys

WIDTH_M = 0.75e-6
ANCHORS = [
    (1000, 0.0018, -0.0083),
    (2000, 0.0038, -0.0297),
    (3000, 0.0064, -0.0668),
    (4000, 0.0094, -0.1191),
    (5000, 0.0126, -0.1864),
    (6000, 0.0159, -0.2663),
    (7000, 0.0194, -0.3613),
]


def eps_from_xi_tilde(k_cm, zeta, eta):
    k0 = 200.0 * math.pi * k_cm
    return (k0 * WIDTH_M / complex(zeta, eta)) ** 2


def main(out):
    nodes = [(k, eps_from_xi_tilde(k, z, e)) for k, z, e in ANCHORS]
    lo = nodes[0][1] + (nodes[1][1] - nodes[0][1]) * (400 - 1000) / 1000
    hi = nodes[-1][1] + (nodes[-1][1] - nodes[-2][1]) * (7400 - 7000) / 1000
    nodes = [(400, lo)] + nodes + [(7400, hi)]

    def at(k):
        for (k1, e1), (k2, e2) in zip(nodes, nodes[1:]):
            if k1 <= k <= k2:
                t = (k - k1) / (k2 - k1)
                return e1 + (e2 - e1) * t
        raise ValueError(k)

    out.write("# source: gold, reverse-engineered from reduced impedances "
              "(zeta, eta) at 1000..7000 cm^-1 with w = 0.75 um\n")
    out.write("# end rows 400 and 7400 cm^-1 linearly extrapolated; "
              "interior rows linearly interpolated on a 100 cm^-1 grid\n")
    out.write("# convention: Im(eps) >= 0 for exp(-i omega t)\n")
    out.write("k0_cm,eps_re,eps_im\n")
    for k in range(400, 7401, 100):
        e = at(k)
        out.write(f"{k},{e.real:.15g},{e.imag:.15g}\n")


if __name__ == "__main__":
    main(sys.stdout)
