#!/usr/bin/env python3
"""Generate the synthetic effective-index tables shipped in data/sample/.

The tables describe a silica-clad silicon nitride strip waveguide in shape
only: two bands (a fundamental band "F" used for all generated and seed
photons, and a higher-order pump band "P") whose dispersion is constructed
so that

  * k_P(lambda_F / 3) = 3 k_F(lambda_F) = 1.97e7 rad/m at lambda_F = 1.72 um
  * group index 2.1 (F at 1.72 um) and 2.3 (P at 1.72/3 um)
  * beta2 = 3.2e-26 s^2/m at 1.72 um and 5.5e-26 s^2/m at 1.52 um (band F)
  * k_P - k_S - 2 k_G = 0 for lambda_S = 2.3 um, energy-conserving G

The F-band beta2(omega) is the minimum-curvature polynomial meeting these
constraints. Values are written with 15 significant digits.
"""
import argparse
import pathlib

import numpy as np

C = 299792458.0


def omega(lam_um):
    return 2.0 * np.pi * C / (lam_um * 1e-6)


def f_band():
    wf = omega(1.72)
    kf = 1.97e7 / 3.0
    inv_v = 2.1 / C
    ws = omega(2.3)
    wg = (3.0 * wf - ws) / 2.0
    scale = 1e14
    deg = 3  # beta2 polynomial degree in x = (w - wf)/scale

    # k(x) = kf + inv_v*x*scale + sum a_j scale^2 x^{j+2}/((j+1)(j+2))
    def k_basis(w):
        x = (w - wf) / scale
        return np.array([scale**2 * x ** (j + 2) / ((j + 1) * (j + 2)) for j in range(deg + 1)])

    def b2_basis(w):
        x = (w - wf) / scale
        return np.array([x**j for j in range(deg + 1)])

    def k_lin(w):
        return kf + inv_v * (w - wf)

    rows, rhs = [], []
    rows.append(b2_basis(wf)); rhs.append(3.2e-26)
    rows.append(b2_basis(omega(1.52))); rhs.append(5.5e-26)
    # stimulated phase matching: 3 k_F(wf) - k(ws) - 2 k(wg) = 0 (linear parts cancel)
    rows.append(k_basis(ws) + 2 * k_basis(wg)); rhs.append(0.0)
    A = np.array(rows)
    b = np.array(rhs)

    # minimise integral of beta2'(x)^2 over the band subject to A a = b
    xs = np.linspace((omega(2.6) - wf) / scale, (omega(1.0) - wf) / scale, 2001)
    D = np.array([[j * x ** (j - 1) if j > 0 else 0.0 for j in range(deg + 1)] for x in xs])
    H = D.T @ D / len(xs) + 1e-12 * np.eye(deg + 1)
    kkt = np.block([[2 * H, A.T], [A, np.zeros((A.shape[0], A.shape[0]))]])
    sol = np.linalg.solve(kkt, np.concatenate([np.zeros(deg + 1), b]))
    coef = sol[: deg + 1]

    def k(w):
        return k_lin(w) + coef @ k_basis(w)

    def beta2(w):
        return coef @ b2_basis(w)

    return k, beta2


def p_band():
    wp = 3.0 * omega(1.72)
    kp = 1.97e7
    inv_v = 2.3 / C
    b2, b3 = 1.6e-25, 2.0e-41

    def k(w):
        x = w - wp
        return kp + inv_v * x + b2 * x * x / 2 + b3 * x**3 / 6

    return k


def write(path, band, lams, k):
    with open(path, "w") as fh:
        fh.write(f"# band: {band}\n")
        fh.write("# synthetic strip-waveguide dispersion, see tools/make_sample_dispersion.py\n")
        fh.write("wavelength_um,n_eff\n")
        for lam in lams:
            w = omega(lam)
            fh.write(f"{lam:.6f},{k(w) * C / w:.15g}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "sample"))
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    kf, b2 = f_band()
    kp = p_band()
    write(out / "band_F.csv", "F", np.round(np.arange(1.0, 2.6 + 1e-9, 0.01), 6), kf)
    write(out / "band_P.csv", "P", np.round(np.arange(0.50, 0.66 + 1e-9, 0.001), 6), kp)
    for lam in (1.0, 1.12, 1.52, 1.72, 2.3, 2.6):
        print(f"beta2_F({lam}) = {b2(omega(lam)):.3e}")


if __name__ == "__main__":
    main()
