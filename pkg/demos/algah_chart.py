"""Run the algebraic Atiyah-Hirzebruch chart in a few degrees.

The E1 page in degree (s, k, t) is spanned by q-monomials of length k times
Ext classes in degree (s, t - k).  Differentials come from the coproduct on
the q_i and from Massey products; the engine runs them page by page and
reports what is left.

Run with:  python demos/algah_chart.py [n]
"""

import sys

from cobarkit.algah import DegreeFamily, apply_differentials, emit_chart, figure, first_empty_page

n = int(sys.argv[1]) if len(sys.argv) > 1 else 4

for name in ("algA-1", "algA-4", "algA-1-2"):
    chart = apply_differentials(figure(name, n))
    left = [e.name() for e in chart.survivors()]
    print(f"{name}: {len(chart.entries)} entries, {len(chart.arrows)} arrows, "
          f"empty from E{first_empty_page(chart)}" if not left else
          f"{name}: {len(chart.entries)} entries, survivors {left}")

print()
print(emit_chart(apply_differentials(figure("algA-1-2", n)), "pretty"))

# one column up, q0^3 g_n is permanent and nothing can hit it
deg = DegreeFamily(4, 3, 3, 3, n)
print(deg.label())
for e in apply_differentials(deg).survivors():
    print(f"  {e.name():<32} {e.status}")
