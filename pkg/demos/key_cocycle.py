"""Walk through the key cocycle computation at j = 5.

T_j is half the coboundary of t1^(2^j).  The product T_j | T_(j+1) is not a
coboundary on the nose, but after adding d(c_j) every surviving coefficient
is 4 mod 8 and no v1 is left.  The same holds for every larger j, since the
residual for j + 1 is the exponent-doubling of the one for j.

Run with:  python demos/key_cocycle.py
"""

from cobarkit import make_T, make_correction, residual
from cobarkit.cobar import divide_by_four_mod2, key_product, verify_stabilization

j = 5

T = make_T(j)
print(f"T_{j} has {len(T)} terms; mod 2 it is {T.reduce(1)}")
print(f"d(T_{j}) = {T.differential() or 0}")

prod = key_product(j)
print(f"T_{j} | T_{j + 1} has {len(prod)} terms")

c = make_correction(j)
print(f"\nc_{j} ({len(c)} terms):")
print(c.pretty())

bare = residual(j, correction=False)
odd = sum(1 for _, k in bare if k % 4)
print(f"\nwithout the correction, {odd} of {len(bare)} coefficients are not divisible by 4")

r = residual(j)
print(f"with it, R_{j} has {len(r)} terms with coefficients {sorted({k for _, k in r})}")
q = divide_by_four_mod2(r)
print(f"R_{j}/4 mod 2 is a cocycle: {not q.differential()}")

rep = verify_stabilization(7, 5)
print(f"\nR_7 is R_5 with exponents multiplied by 4: {rep.passed}")
