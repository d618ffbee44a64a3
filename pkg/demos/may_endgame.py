"""Read off the May E1 name of the residual R_j / 4.

Words t_i^(2^k) weigh 2i - 1.  The residual has maximal weight 12 and its
three words of that weight are bars of t2^(2^(j-2)); together they name
h(2, j-2)^4 on the May E1 page.

Run with:  python demos/may_endgame.py
"""

from collections import Counter

from cobarkit.cobar import divide_by_four_mod2, residual
from cobarkit.may import e1_class, leading_part, may_weight

for j in (5, 6, 7):
    q = divide_by_four_mod2(residual(j))
    weights = Counter(may_weight(k) for k in q.terms)
    lead = leading_part(q, 11)
    print(f"j={j}: weight histogram {dict(sorted(weights.items()))}")
    print(lead.pretty())
    print(f"  class {e1_class(lead)}\n")
