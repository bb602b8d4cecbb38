"""Counting stable and semistable line bundles on a curve with two rational components.

Run with ``python demos/two_component_counts.py``.
"""

# %% Two smooth rational curves meeting in delta nodes.
from jacstab import Polarization, enumerate_classes, spanning_tree_count, two_component

for delta in range(1, 6):
    g = two_component(delta)

    # With integral slopes some line bundles sit on the wall beta = 0 and are
    # only semistable.
    pol = Polarization(1, {"u": 0, "v": 0})
    semi = enumerate_classes(g, pol, 0, "semistable", invertible_only=True)
    stable = enumerate_classes(g, pol, 0, "stable", invertible_only=True)
    at_u = enumerate_classes(g, pol, 0, "W-quasistable", w="u", invertible_only=True)

    # Half-integral slopes avoid every wall.
    generic = Polarization(2, {"u": 1, "v": -1})
    gen = enumerate_classes(g, generic, 0, "stable", invertible_only=True)

    print(
        f"delta={delta}: semistable={len(semi)} stable={len(stable)} "
        f"u-quasistable={len(at_u)} generic stable={len(gen)} spanning trees={spanning_tree_count(g)}"
    )

# %% The degree vectors themselves, for three nodes.
g = two_component(3)
pol = Polarization(1, {"u": 0, "v": 0})
stable = set(enumerate_classes(g, pol, 0, "stable").classes)
for c in enumerate_classes(g, pol, 0, "semistable", invertible_only=True).classes:
    print(c.multidegree, "stable" if c in stable else "strictly semistable")
