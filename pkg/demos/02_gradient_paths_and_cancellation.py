"""
Gradient paths and simultaneous cancellation on M_7
===================================================

The shipped local field has three critical triangles eta_1, eta_2, eta_3
and four critical edges sigma_1..sigma_4.  We list the gradient paths
leaving each triangle, then cancel three pairs at once.
"""

from morsematch import F_STAR_CELLS as S, f_star_field, format_cell
from morsematch.cancellation import NoPathError, apply_plan, cancel_pair, check_simultaneous
from morsematch.gvf import enumerate_paths, path_endpoints

names = {cell: name for name, cell in S.items()}
field = f_star_field()
print("critical vector of the local field:", field.critical_vector())

for eta in ("eta1", "eta2", "eta3"):
    print(f"\npaths from {eta} = {format_cell(S[eta])}")
    for path in enumerate_paths(field, S[eta]):
        print("  " + " > ".join(format_cell(c) for c in path.cells), f"  [{names[path.end]}]")
    ends = path_endpoints(field, S[eta])
    print("  endpoints:", {names[c]: k for c, k in ends.items()})

# there is no path from eta_3 to sigma_4, so that pair cannot be cancelled
try:
    cancel_pair(field, S["eta3"], S["sigma4"])
except NoPathError as exc:
    print("\n", exc)

# eta_2 only reaches sigma_3 among the chosen edges; that forces the rest
plan = check_simultaneous(
    field, [S["eta1"], S["eta2"], S["eta3"]], [S["sigma4"], S["sigma3"], S["sigma1"]]
)
print("\nunique bijection:", {names[e]: names[s] for e, s in plan.bijection.items()})
after = apply_plan(field, plan)
print("critical vector after:", after.critical_vector())
print("named edges still critical:", [n for n in ("sigma1", "sigma2", "sigma3", "sigma4") if after.is_critical(S[n])])
