"""Near the rank-1 boundary: the Q1 and Q2 tables are canonical for every n."""

from kuga import rst
from kuga.rst import BoundaryPoint

for name in ("Q2", "Q1"):
    sc = rst.preset(name, 1)
    print(rst.render_table(sc))

# statuses for a range of fibre dimensions, with and without sigma
for name in ("Q1", "Q2"):
    for sigma in (False, True):
        sts = [rst.analyze(rst.preset(name, n, sigma)).status.value for n in range(1, 7)]
        print(name, "sigma" if sigma else "     ", sts)

# the two isolated types that show up on the boundary
for t in rst.ISOLATED_BOUNDARY_TYPES:
    print(t, t.rst_sum)

# a boundary point is (tau1, v); Q1 fixes (i, 0)
pt = BoundaryPoint(1j, 0)
g = rst.preset("Q1", 1).elements[0].gamma
print(rst.boundary_fixes(g, pt), rst.boundary_fixes(g, BoundaryPoint(2j, 0)))
