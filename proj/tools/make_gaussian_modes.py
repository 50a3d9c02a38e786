"""Write synthetic Gaussian mode profiles for the sample device.

E_x = exp(-(x^2 + y^2) / (2 w^2)) on a strip-waveguide index map
(core 1.7 um x 0.8 um, n = 2.0, cladding 1.45).
"""
import argparse
import math
from pathlib import Path

BANDS = {
    # band: (lambda_um, waist_um, neff, ng)
    "F": (1.72, 0.70, 1.7977, 2.1),
    "P": (1.72 / 3.0, 0.45, 1.7977, 2.3),
}


def write_profile(path, band, lam, waist, neff, ng, n=41, d=0.1):
    half = (n - 1) / 2
    with open(path, "w") as f:
        f.write(f"# synthetic Gaussian mode, waist {waist} um\n")
        f.write(f"band {band}\nnx {n}\nny {n}\ndx_um {d}\ndy_um {d}\n")
        f.write(f"lambda_um {lam:.12g}\nneff {neff}\nng {ng}\n")
        for iy in range(n):
            for ix in range(n):
                x, y = (ix - half) * d, (iy - half) * d
                e = math.exp(-(x * x + y * y) / (2 * waist * waist))
                core = abs(x) <= 0.85 and abs(y) <= 0.4
                idx = 2.0 if core else 1.45
                f.write(f"{ix} {iy} {e:.12e} 0 0 0 0 0 {idx}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/sample", type=Path)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for band, (lam, waist, neff, ng) in BANDS.items():
        write_profile(args.out / f"mode_{band}.txt", band, lam, waist, neff, ng)


if __name__ == "__main__":
    main()
