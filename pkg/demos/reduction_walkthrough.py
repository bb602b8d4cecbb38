"""Twisting an unstable line bundle back into the semistable range.

Run with ``python demos/reduction_walkthrough.py``.
"""

# %% A badly unbalanced degree vector on a triangle of rational curves.
from jacstab import CombSheaf, Polarization, class_id, cycle_graph, enumerate_classes, reduce, spanning_tree_count

c3 = cycle_graph(3).with_markings({"p": "v1"})
pol = Polarization(1, {"v1": 0, "v2": 0, "v3": 0})
start = CombSheaf(c3, [5, 0, -5])

trace = reduce(start, pol, mark="p")
print("start", start.degree_vector)
for k, step in enumerate(trace.steps):
    print(f"  step {k}: fire {sorted(step.fired)} (phase {step.phase}, min beta {step.beta_min})")
print("final", trace.final.degree_vector, "class", class_id(start))

# %% The final class does not depend on where in the twist class we start.
for d in ([0, 0, 0], [2, -1, -1], [-3, 6, -3]):
    other = CombSheaf(c3, d)
    print(d, "->", reduce(other, pol, mark="p").final.degree_vector, "class", class_id(other))

# %% One representative per twist class, as many as spanning trees.
res = enumerate_classes(c3, pol, 0, "sigma-quasistable", mark="p", invertible_only=True)
print(len(res), "representatives;", spanning_tree_count(c3), "spanning trees")
