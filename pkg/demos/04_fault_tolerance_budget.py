"""
Logical error budget for routing
================================

How much logical error does a full permutation cost, and how often must the
code be corrected while blocks are moving?
"""

from blockroute import FtParams, k_max_report, operating_point_table, total_logical_error

for d_c in (7, 9):
    b = total_logical_error(FtParams.from_p_eff(1e-3, d_c, n_l=100))
    print(f"d_C={d_c}: T={b.t_routing} rounds, p_L={b.p_l:.1e}, "
          f"union bound {b.p_l_total:.3f}, exact {b.p_l_total_exact:.3f}")

print()
for row in operating_point_table([5e-3, 1e-3, 1e-4, 1e-5]):
    exps = {d: (None if v is None else round(v, 1)) for d, v in row.log10_p_l.items()}
    print(f"p_phys={row.p_phys:g}  ratio={row.ratio:g}  log10 p_L={exps}  {row.regime}")
    for note in row.notes:
        print("   ", note)

# stop-and-correct interval: the closed form collapses to 0 at small t
print()
for d_c, target in ((5, 1e-9), (7, 1e-3)):
    rep = k_max_report(d_c, 1e-3, target)
    print(f"d_C={d_c}, p_target={target:g}: closed form {rep['k_max_chernoff']}, exact {rep['k_max_exact']}")
    for note in rep["notes"]:
        print("   ", note)
