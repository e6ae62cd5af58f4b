"""Type tables and RST verdicts at the interior fixed point (rho, tau3)."""

import numpy as np

from kuga import rst
from kuga import symplectic as sp
from kuga.cyclo import snap

sc = rst.preset("C2", 1)  # gamma, sigma acting on C^2 x H_2
print(rst.render_table(sc))

# the automorphy factor of gamma: one eigenvalue exp(2 pi i 5/6), one trivial
N = sc.automorphy(sc.elements[0].gamma)
print("N =\n", np.round(N, 6))
print("eigen-exponents:", sorted(str(snap(z)) for z in np.linalg.eigvals(N)))

# gamma^5 is the trouble maker for small n
for n in range(1, 6):
    v = rst.analyze(rst.preset("C2", n, True))
    w = v.witness
    print(n, v.status.value, "" if w is None else f"{w.powers} {w.type} sum={w.rst_sum}")

# moving the point with a random symplectic matrix changes nothing
h = sp.SpElement(np.array([[1, 0, 1, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
g = sp.SpElement(sp.PRESET_MATRICES["C2"])
moved = rst.Scenario("C2^h", "interior", sp.act(h, sc.point), (h @ g @ h.inverse(),), 1, True)
print(sorted(str(r.type) for r in rst.build_table(moved)) ==
      sorted(str(r.type) for r in rst.build_table(sc)))
