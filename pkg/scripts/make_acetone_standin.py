"""Generate the bundled acetone density stand-in table.

The table is synthetic.  It reproduces the qualitative structure of measured
acetone densities (liquid/vapour jump along the saturation curve that closes
at the critical point, continuous supercritical region) from simple
correlations:

* saturation pressure: Clausius-Clapeyron through the normal boiling point
  (329.2 K, 1.013 bar) and the critical point (508.1 K, 47.0 bar);
* saturated densities: rectilinear diameter plus a tau^0.325 coexistence
  law, calibrated to 784.5 kg/m^3 liquid at 298 K;
* off-saturation: weakly compressible liquid, ideal-gas-like vapour;
* supercritical: logistic blend of the two branches across the extended
  saturation line, sharpening to a step as T -> Tc.

Usage: python scripts/make_acetone_standin.py [output.csv]
"""
import sys
from pathlib import Path

import numpy as np

TC, PC, RHOC = 508.1, 47.0, 278.0
TB, PB = 329.2, 1.013
B = np.log(PC / PB) / (1 / TB - 1 / TC)
A = np.log(PC) + B / TC
DIAM, COEX, BETA = 0.997, 1.878, 0.325


def p_sat(T):
    return np.exp(A - B / T)


def compressibility(tau):
    return 1e-4 * (1 + 1 / (np.abs(tau) + 0.05))


def density(T, p):
    tau = 1 - T / TC
    ps = p_sat(T)
    sub = tau > 0
    taup = np.where(sub, tau, 0.0)
    rho_l_sat = RHOC * (1 + DIAM * tau + COEX * taup ** BETA)
    rho_g_sat = RHOC * (1 + DIAM * tau - COEX * taup ** BETA)
    liquid = rho_l_sat * (1 + compressibility(taup) * (p - ps))
    vapour = rho_g_sat * p / ps
    subcritical = np.where(p >= ps, liquid, vapour)
    # supercritical blend
    dense = RHOC * (1 + DIAM * tau) * (1 + compressibility(0.0) * (p - ps))
    gas = RHOC * (p / ps) * (TC / T)
    width = 3 * (T / TC - 1) + 1e-9
    w = 1 / (1 + np.exp(-np.clip(np.log(p / ps) / width, -500, 500)))
    supercritical = w * dense + (1 - w) * gas
    return np.where(sub, subcritical, supercritical)


def main(out):
    T = np.linspace(300.0, 600.0, 121)
    p = np.linspace(1.0, 80.0, 121)
    TT, PP = np.meshgrid(T, p, indexing="ij")
    rho = density(TT, PP)
    with open(out, "w") as fh:
        fh.write("T,p,rho\n")
        for t, pp, r in zip(TT.ravel(), PP.ravel(), rho.ravel()):
            fh.write(f"{t:.2f},{pp:.4f},{r:.3f}\n")


if __name__ == "__main__":
    default = Path(__file__).resolve().parents[1] / "src" / "vskdnn" / "resources" / "acetone_standin.csv"
    main(sys.argv[1] if len(sys.argv) > 1 else default)
