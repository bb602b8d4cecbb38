"""Filtering a strictly semistable sheaf and gluing the pieces back together.

Run with ``python demos/jordan_holder_tour.py``.
"""

# %% A strictly semistable line bundle on two components meeting twice.
from jacstab import CombSheaf, Polarization, build_quasistable, gr, is_W_quasistable, jh_filtration, two_component

g = two_component(2)
pol = Polarization(1, {"u": 1, "v": 1})
i = CombSheaf(g, {"u": 0, "v": 2})

for step in jh_filtration(i, pol).steps:
    print("quotient on", sorted(step.quotient_support), "->", step.piece.multidegree)

# %% The graded object is the split sheaf: both nodes become non-free.
split = gr(i, pol).direct_sum()
print("split sheaf:", split)

# %% Gluing the same pieces back, with the quasistability component chosen.
for w in g.vertices:
    built = build_quasistable(gr(i, pol).pieces, w, pol)
    print(f"glued at {w}:", built, "| quasistable at", w, "->", bool(is_W_quasistable(built, pol, w)))
    assert gr(built, pol) == gr(i, pol)
