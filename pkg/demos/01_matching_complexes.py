"""
Matching complexes and their homology
=====================================

Build M_n for small n, look at face counts, and compute integer homology
by Smith normal form.  M_7 is the first one with torsion.
"""

from morsematch import build_matching_complex, euler_characteristic, simplicial_homology
from morsematch.homology import morse_lower_bounds, simplicial_boundary, smith_normal_form

for n in range(3, 10):
    cplx = build_matching_complex(n)
    h = simplicial_homology(cplx)
    print(f"M_{n}: f = {cplx.f_vector()}, chi = {euler_characteristic(cplx)}")
    print(f"     {h.compact()}")

# the 3-torsion of M_7 lives in the boundary map from triangles to edges
m7 = build_matching_complex(7)
factors, rank = smith_normal_form(simplicial_boundary(m7, 2))
print("rank of d_2 on M_7:", rank, " invariant factors > 1:", [d for d in factors if d > 1])

# fewest critical cells any gradient field on M_7 can have
print("lower bounds for M_7:", morse_lower_bounds(simplicial_homology(m7)))
