"""Negative-capacitance stabilization map for series stacks.

Samples the quasi-static S-curve E(P) of the bare ferroelectric, then
classifies MFDM stacks over a (t_d, eps_d) grid: a series dielectric with
enough specific capacitance flattens the combined V(P) and removes the
hysteresis. Writes the S-curve and the verdict map to demo_out/.
"""

from pathlib import Path

from ferrosim import (DielectricLayer, FerroMaterial, StackConfig,
                      calibrate_landau, nc_hysteresis_check, scurve)
from ferrosim.csvio import write_scurve_csv

out = Path("demo_out")
out.mkdir(exist_ok=True)

alpha, beta = calibrate_landau(0.25, 1e8)
mat = FerroMaterial(alpha=alpha, beta=beta, gamma=0.0, k=1e-10, rho=1.0,
                    eps_f=30.0, t_f=10e-9)

sc = scurve(mat)
write_scurve_csv(out / "scurve.csv", sc)
print(f"S-curve written; NC region |P| < {sc.nc_upper:.4f} C/m2 "
      f"(dE/dP < 0 inside)")

print("\nstability map (rows t_d, columns eps_d; H = hysteretic, S = stabilized):")
eps_list = (2.0, 4.0, 8.0, 16.0, 32.0)
print("  t_d\\eps " + "".join(f"{e:>6.0f}" for e in eps_list))
for t_d_nm in (0.3, 0.6, 1.2, 2.4, 4.8):
    row = []
    for eps_d in eps_list:
        stack = StackConfig(ferro=mat, area=100e-12,
                            dielectric=DielectricLayer(eps_d=eps_d,
                                                       t_d=t_d_nm * 1e-9))
        row.append("S" if nc_hysteresis_check(stack).non_hysteretic else "H")
    print(f"  {t_d_nm:5.1f}nm " + "".join(f"{c:>6s}" for c in row))

lines = ["t_d_nm,eps_d,verdict,min_dv_dp"]
for t_d_nm in (0.3, 0.6, 1.2, 2.4, 4.8):
    for eps_d in eps_list:
        stack = StackConfig(ferro=mat, area=100e-12,
                            dielectric=DielectricLayer(eps_d=eps_d,
                                                       t_d=t_d_nm * 1e-9))
        res = nc_hysteresis_check(stack)
        lines.append(f"{t_d_nm},{eps_d},{res.verdict},{res.min_dv_dp!r}")
(out / "nc_map.csv").write_text("\n".join(lines) + "\n")
print(f"\nwrote {out}/scurve.csv and nc_map.csv")
