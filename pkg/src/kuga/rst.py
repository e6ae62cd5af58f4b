"""Singularity types of torsion elements of the Kuga group and RST verdicts.

Interior fixed points
    An element ``(l, gamma)`` fixing ``(Z, tau)`` acts on the fibre tangent
    space by ``X -> X N`` with ``N = (C tau + D)^-1``.  If the eigenvalues of
    ``N`` have exponents ``e1, e2`` it acts on the tangent space of the Siegel
    space by the symmetric square, giving base slots ``(2 e1, e1 + e2, 2 e2)``
    and fibre slots ``e1`` (n times) then ``e2`` (n times).

Rank-1 boundary points
    Local coordinates are ``H_1 x C x C`` (the F, V(F) and torus slots) plus
    the fibre.  The base slots are read off the inverse element:
    ``(c tau1 + d)^-2`` on F and ``u (c tau1 + d)^-1`` on V(F), where
    ``((a, b), (c, d))`` and ``u`` are the ``gamma'`` and ``U`` submatrices of
    ``gamma^-1``; the torus slot is 0.  Fibre slots come from ``N`` of the
    element itself, exactly as in the interior.

The tables are indexed by powers ``(k1, k2)`` of the generators and written
over the lcm of the orders of the generators that occur, as in the printed
tables.  Eigenvalue slots are ordered along a common eigenbasis of the whole
(abelian) group, sorted by the exponent of the first generator, descending.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import symplectic as sp
from .cyclo import (DEFAULT_TOL, ONE, SingularityType, UnityExponent,
                    format_fraction, snap)
from .errors import (DoesNotFixPoint, ExponentOutOfRange, NotARootOfUnity,
                     SnapFailure, WrongLocus)
from .symplectic import KugaElement, SiegelPoint, SpElement


class Locus(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary-rank1"


class Status(str, Enum):
    CANONICAL = "canonical"
    NOT_CANONICAL = "not-canonical"
    INDETERMINATE = "indeterminate-quasi-reflection"


ISOLATED_BOUNDARY_TYPES = (SingularityType(2, (1, 1, 1)), SingularityType(3, (1, 2, 1)))

_DIAG_TOL = 1e-7


def _snap(z, max_order, tol):
    try:
        return snap(z, max_order, tol)
    except NotARootOfUnity as exc:
        raise SnapFailure(str(exc)) from None


@dataclass(frozen=True)
class BoundaryPoint:
    """A point ``(tau1, v, 0)`` of ``H_1 x C x C`` near a rank-1 boundary component."""

    tau1: complex
    v: complex = 0j
    exact: Optional[str] = None

    def __post_init__(self):
        if complex(self.tau1).imag <= 0:
            raise ValueError("tau1 must lie in the upper half plane")

    def model(self, tau3: complex) -> SiegelPoint:
        """An interior point with the same ``tau1, tau2`` and the given ``tau3``."""
        return SiegelPoint([[self.tau1, self.v], [self.v, tau3]])


def boundary_fixes(gamma: SpElement, point: BoundaryPoint, tol: float = sp.FIX_TOL) -> bool:
    """Whether ``gamma`` stabilises the boundary point.

    ``gamma`` has to act on ``(tau1, tau2)`` independently of ``tau3``, which
    is what makes the action extend to the boundary; checked at two heights.
    """
    _, _, C, _ = gamma.blocks
    if C[:, 1].any():
        return False
    target = np.array([point.tau1, point.v], dtype=complex)
    for height in (2.0, 50.0):
        image = sp.act(gamma, point.model(1j * height)).tau
        if np.max(np.abs(image[0, :] - target)) > tol:
            return False
    return True


def boundary_automorphy_inverse(gamma: SpElement, point: BoundaryPoint,
                                tol: float = sp.FIX_TOL) -> np.ndarray:
    """``N = (C tau + D)^-1`` at the boundary point (it does not involve ``tau3``)."""
    if not boundary_fixes(gamma, point, tol):
        raise DoesNotFixPoint(f"{gamma!r} does not fix {point!r}")
    _, _, C, D = gamma.blocks
    t = np.array([[point.tau1, point.v], [point.v, 0]], dtype=complex)
    return np.linalg.inv(C @ t + D)


def _eigen_exponents(N: np.ndarray, basis: Optional[np.ndarray], max_order: int, tol: float):
    if basis is None:
        basis = _own_basis(N, max_order, tol)
    D = np.linalg.solve(basis, N @ basis)
    if abs(D[0, 1]) > _DIAG_TOL or abs(D[1, 0]) > _DIAG_TOL:
        raise SnapFailure("automorphy factor is not diagonal in the supplied eigenbasis")
    return _snap(D[0, 0], max_order, tol), _snap(D[1, 1], max_order, tol)


def _own_basis(N, max_order, tol):
    return common_eigenbasis([N], [max_order], tol)


def common_eigenbasis(Ns: Sequence[np.ndarray], max_orders: Sequence[int],
                      tol: float = DEFAULT_TOL) -> np.ndarray:
    """Columns: a common eigenbasis of commuting finite-order 2x2 matrices.

    Columns are ordered by the exponents of ``Ns[0], Ns[1], ...`` on them,
    largest first.  If every matrix is scalar the standard basis is returned.
    """
    S = sum(math.sqrt(i + 2) * N for i, N in enumerate(Ns))
    vals, vecs = np.linalg.eig(S)
    if abs(vals[0] - vals[1]) < 1e-9:
        return np.eye(2, dtype=complex)

    def key(col):
        v = vecs[:, col]
        out = []
        for N, mo in zip(Ns, max_orders):
            lam = (v.conj() @ N @ v) / (v.conj() @ v)
            out.append(_snap(lam, mo, max(tol, 1e-9)).fraction)
        return tuple(out)

    cols = sorted(range(2), key=key, reverse=True)
    return vecs[:, cols]


def _gamma(g) -> SpElement:
    return g.gamma if isinstance(g, KugaElement) else g


def interior_type(g: Union[KugaElement, SpElement], tau: SiegelPoint, n: int, *,
                  basis: Optional[np.ndarray] = None, tol: float = DEFAULT_TOL) -> SingularityType:
    """Type of ``g`` at an interior fixed point, over the order of ``g.gamma``."""
    gamma = _gamma(g)
    k = sp.order(gamma)
    N = sp.automorphy_inverse(gamma, tau)
    e1, e2 = _eigen_exponents(N, basis, 2 * k, tol)
    exps = (e1 * e1, e1 * e2, e2 * e2) + (e1,) * n + (e2,) * n
    labels = ("base-H2",) * 3 + ("fiber",) * (2 * n)
    return SingularityType.from_exponents(exps, k, labels)


def boundary_type(g: Union[KugaElement, SpElement], scenario: Union["Scenario", BoundaryPoint],
                  n: int, *, basis: Optional[np.ndarray] = None,
                  tol: float = DEFAULT_TOL) -> SingularityType:
    """Type of ``g`` at a rank-1 boundary point, over the order of ``g.gamma``."""
    if isinstance(scenario, Scenario):
        if scenario.locus is not Locus.BOUNDARY:
            raise WrongLocus(f"scenario {scenario.name!r} is {scenario.locus.value}, not boundary-rank1")
        point = scenario.point
    else:
        point = scenario
    if not isinstance(point, BoundaryPoint):
        raise WrongLocus("boundary types need a BoundaryPoint")
    gamma = _gamma(g)
    k = sp.order(gamma)
    N = boundary_automorphy_inverse(gamma, point)
    e1, e2 = _eigen_exponents(N, basis, 2 * k, tol)

    inv_prime, inv_u = sp.submatrices(gamma.inverse())
    c, d = inv_prime[1]
    u = int(inv_u[0, 0])
    factor = c * point.tau1 + d
    f_slot = _snap(factor ** -2, 2 * k, tol)
    v_slot = _snap(u / factor, 2 * k, tol)
    exps = (f_slot, v_slot, ONE) + (e1,) * n + (e2,) * n
    labels = ("base-F", "base-V", "base-torus") + ("fiber",) * (2 * n)
    return SingularityType.from_exponents(exps, k, labels)


def direct_type(base_exponents: Sequence[int], order: int, fiber_exponents: Sequence[int],
                n: int) -> SingularityType:
    """Type from given base exponents plus ``n`` copies of each fibre exponent (all over ``order``)."""
    base = tuple(base_exponents)
    fiber = tuple(fiber_exponents)
    if len(fiber) != 2:
        raise ValueError("exactly two fibre exponents are required")
    for a in base + fiber:
        if not 0 <= a < order:
            raise ExponentOutOfRange(f"exponent {a} outside [0, {order})")
    exps = base + (fiber[0],) * n + (fiber[1],) * n
    labels = ("base-H2",) * len(base) + ("fiber",) * (2 * n)
    return SingularityType(order, exps, labels)


@dataclass(frozen=True)
class DirectGenerator:
    """A generator given by its tangent action only (no matrix available)."""

    order: int
    base: tuple
    fiber: tuple

    def type(self, n: int) -> SingularityType:
        return direct_type(self.base, self.order, self.fiber, n)


class _Character:
    """Slot-wise exponents of a diagonal action; composes by adding exponents."""

    __slots__ = ("exps",)

    def __init__(self, exps):
        self.exps = tuple(exps)

    def one(self):
        return _Character((ONE,) * len(self.exps))

    def __matmul__(self, other):
        return _Character(a * b for a, b in zip(self.exps, other.exps))

    def is_identity(self):
        return all(e == ONE for e in self.exps)

    def __eq__(self, other):
        return isinstance(other, _Character) and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)


@dataclass(frozen=True)
class TableRow:
    powers: tuple
    type: SingularityType

    @property
    def k1(self) -> int:
        return self.powers[0]

    @property
    def k2(self) -> int:
        return self.powers[1] if len(self.powers) > 1 else 0

    @property
    def rst_sum(self) -> Fraction:
        return self.type.rst_sum

    def to_dict(self):
        return {"k1": self.k1, "k2": self.k2, "powers": list(self.powers),
                "type": str(self.type), "rst_sum": format_fraction(self.rst_sum)}


@dataclass
class Scenario:
    """A fixed-point configuration: where, which generators, how many fibre factors.

    ``generators`` are :class:`KugaElement` / :class:`SpElement` (lifted with
    ``l = 0``) or :class:`DirectGenerator`.  With ``include_sigma`` the element
    ``(0, -1_4)`` is appended; at the boundary its translation part plays no
    role in the types, so it is taken to be 0 as well.
    """

    name: str
    locus: Locus
    point: Union[SiegelPoint, BoundaryPoint, None]
    generators: tuple
    n: int
    include_sigma: bool = False
    tol: float = DEFAULT_TOL
    elements: tuple = field(init=False, repr=False)
    direct: bool = field(init=False, repr=False, default=False)
    _basis: Optional[np.ndarray] = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.locus = Locus(self.locus)
        if self.n < 0:
            raise ValueError("n must be >= 0")
        gens = []
        for g in self.generators:
            if isinstance(g, SpElement):
                g = KugaElement.lift(g, self.n)
            elif isinstance(g, KugaElement) and g.n != self.n:
                raise ValueError(f"generator has fibre dimension {g.n}, scenario n = {self.n}")
            gens.append(g)
        if not gens:
            raise ValueError("a scenario needs at least one generator")
        self.generators = tuple(gens)
        self.direct = all(isinstance(g, DirectGenerator) for g in gens)
        if not self.direct and any(isinstance(g, DirectGenerator) for g in gens):
            raise ValueError("cannot mix matrix and direct generators")
        if self.include_sigma:
            if self.direct:
                gens.append(DirectGenerator(2, (0,) * len(gens[0].base), (1, 1)))
            else:
                gens.append(KugaElement.lift(-SpElement.identity(), self.n))
        self.elements = tuple(gens)
        if not self.direct:
            if self.locus is Locus.INTERIOR and not isinstance(self.point, SiegelPoint):
                raise WrongLocus("interior scenarios need a SiegelPoint")
            if self.locus is Locus.BOUNDARY and not isinstance(self.point, BoundaryPoint):
                raise WrongLocus("boundary scenarios need a BoundaryPoint")
            for g in self.elements:
                self.automorphy(g.gamma)  # raises DoesNotFixPoint

    def automorphy(self, gamma: SpElement) -> np.ndarray:
        if self.locus is Locus.INTERIOR:
            return sp.automorphy_inverse(gamma, self.point)
        return boundary_automorphy_inverse(gamma, self.point)

    def generator_orders(self) -> tuple:
        if self.direct:
            return tuple(g.order for g in self.elements)
        return tuple(sp.order(g.gamma) for g in self.elements)

    def basis(self) -> Optional[np.ndarray]:
        """Common eigenbasis of the fibre action, or None for non-commuting generators."""
        if self._basis is None:
            Ns = [self.automorphy(g.gamma) for g in self.elements]
            if any(np.max(np.abs(a @ b - b @ a)) > _DIAG_TOL for a in Ns for b in Ns):
                return None
            orders = [2 * k for k in self.generator_orders()]
            self._basis = common_eigenbasis(Ns, orders, self.tol)
        return self._basis

    def element_type(self, g) -> SingularityType:
        """Type of a group element over its own order."""
        if isinstance(g, DirectGenerator):
            return g.type(self.n)
        if isinstance(g, _Character):
            return SingularityType.from_exponents(g.exps, labels=self._labels())
        if self.locus is Locus.INTERIOR:
            return interior_type(g, self.point, self.n, basis=self.basis(), tol=self.tol)
        return boundary_type(g, self.point, self.n, basis=self.basis(), tol=self.tol)

    def _labels(self):
        t = self.elements[0].type(self.n) if self.direct else None
        return t.labels if t is not None else None

    def table_order(self, powers: Sequence[int]) -> int:
        orders = self.generator_orders()
        return math.lcm(1, *(k for k, m in zip(orders, powers) if m))

    def word(self, powers: Sequence[int]):
        if self.direct:
            chars = [_Character(g.type(self.n).unity_exponents()) for g in self.elements]
            out = chars[0].one()
            for c, m in zip(chars, powers):
                for _ in range(m):
                    out = out @ c
            return out
        out = self.elements[0].one()
        for g, m in zip(self.elements, powers):
            out = out @ (g ** m)
        return out

    def closure(self, cap: int = sp.CLOSURE_CAP):
        """``(element, powers)`` for the whole group, identity included."""
        if self.direct:
            gens = [_Character(g.type(self.n).unity_exponents()) for g in self.elements]
        elif self.locus is Locus.BOUNDARY:
            # translation parts are divided out near the boundary
            gens = [g.gamma for g in self.elements]
        else:
            gens = list(self.elements)
        return sp.closure(gens, cap, with_words=True)

    def row_type(self, g, powers) -> SingularityType:
        return self.element_type(g).over(self.table_order(powers))


def build_table(scenario: Scenario) -> list:
    """One row per nontrivial ``(k1, k2, ...)`` with ``0 <= k_i < order_i``."""
    orders = scenario.generator_orders()
    rows = []
    for powers in np.ndindex(*orders):
        powers = tuple(int(m) for m in powers)
        if not any(powers):
            continue
        rows.append(TableRow(powers, scenario.row_type(scenario.word(powers), powers)))
    rows.sort(key=lambda r: r.powers)
    return rows


@dataclass(frozen=True)
class Witness:
    powers: tuple
    type: SingularityType

    @property
    def rst_sum(self) -> Fraction:
        return self.type.rst_sum

    def to_dict(self):
        return {"k1": self.powers[0], "k2": self.powers[1] if len(self.powers) > 1 else 0,
                "powers": list(self.powers), "type": str(self.type),
                "rst_sum": format_fraction(self.rst_sum)}


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Optional[Witness]
    table: tuple
    scenario: str = ""
    n: int = 0

    @property
    def min_rst_sum(self) -> Optional[Fraction]:
        sums = [r.rst_sum for r in self.table]
        return min(sums) if sums else None

    def to_dict(self):
        return {"scenario": self.scenario, "n": self.n, "status": self.status.value,
                "witness": None if self.witness is None else self.witness.to_dict(),
                "table": [r.to_dict() for r in self.table]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def analyze(scenario: Scenario) -> Verdict:
    """Apply the Reid-Shepherd-Barron-Tai criterion to the group of the scenario.

    Elements acting trivially on the tangent space are skipped: they are not
    part of the effective group.  Sums are compared to 1 exactly.
    """
    rows = []
    for g, powers in scenario.closure():
        if g.is_identity():
            continue
        t = scenario.row_type(g, powers)
        if t.is_trivial:
            continue
        rows.append(TableRow(powers, t))
    rows.sort(key=lambda r: r.powers)
    table = tuple(rows)
    if any(r.type.is_quasi_reflection for r in rows):
        return Verdict(Status.INDETERMINATE, None, table, scenario.name, scenario.n)
    worst = min(rows, key=lambda r: r.rst_sum, default=None)
    if worst is None or worst.rst_sum >= 1:
        return Verdict(Status.CANONICAL, None, table, scenario.name, scenario.n)
    return Verdict(Status.NOT_CANONICAL, Witness(worst.powers, worst.type), table,
                   scenario.name, scenario.n)


def render_table(scenario: Scenario, rows: Optional[Sequence[TableRow]] = None) -> str:
    """Text table laid out like the printed ones: rows ``k1``, columns ``k2``."""
    if rows is None:
        rows = build_table(scenario)
    orders = scenario.generator_orders()
    if len(orders) > 2:
        raise ValueError("text tables are only laid out for one or two generators")
    cols = orders[1] if len(orders) == 2 else 1
    cells = {r.powers if len(r.powers) == 2 else (r.powers[0], 0): str(r.type) for r in rows}
    grid = [["k1\\k2"] + [str(c) for c in range(cols)]]
    for k1 in range(orders[0]):
        grid.append([str(k1)] + [cells.get((k1, c), "N/A") for c in range(cols)])
    widths = [max(len(line[i]) for line in grid) for i in range(cols + 1)]
    lines = [f"# {scenario.name} {scenario.locus.value} n={scenario.n}"]
    for i, line in enumerate(grid):
        lines.append(" | ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())
        if i == 0:
            lines.append("-+-".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def table_to_dict(scenario: Scenario, rows: Optional[Sequence[TableRow]] = None):
    if rows is None:
        rows = build_table(scenario)
    return {"scenario": scenario.name, "locus": scenario.locus.value, "n": scenario.n,
            "rows": [r.to_dict() for r in rows]}


PRESETS = ("C1", "C2", "Q1", "Q2")


def preset(name: str, n: int, include_sigma: bool = True, *, tau3: complex = 2j,
           tol: float = DEFAULT_TOL) -> Scenario:
    """The four worked fixed-point situations.

    ``C1`` has no printed generator matrix and is given by its tangent action;
    ``tau3`` picks the point on the curve ``C2``.
    """
    if name == "C1":
        gen = DirectGenerator(4, (2, 3, 0), (1, 2))
        return Scenario("C1", Locus.INTERIOR, None, (gen,), n, include_sigma, tol)
    if name == "C2":
        point = SiegelPoint.diagonal(sp.RHO, tau3, exact="rho")
        return Scenario("C2", Locus.INTERIOR, point, (sp.preset_matrix("C2"),), n,
                        include_sigma, tol)
    if name == "Q2":
        point = BoundaryPoint(sp.RHO, 0j, exact="rho")
        return Scenario("Q2", Locus.BOUNDARY, point, (sp.preset_matrix("Q2"),), n,
                        include_sigma, tol)
    if name == "Q1":
        point = BoundaryPoint(1j, 0j, exact="i")
        return Scenario("Q1", Locus.BOUNDARY, point, (sp.preset_matrix("Q1"),), n,
                        include_sigma, tol)
    raise KeyError(f"unknown preset {name!r}; choose from {list(PRESETS)}")


_NAMED = {"rho": sp.RHO, "i": 1j}


def _parse_complex(x, path):
    if isinstance(x, bool):
        raise ValueError(f"{path}: {x!r} is not a number")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(c, (int, float)) for c in x):
        return complex(x[0], x[1])
    if isinstance(x, str):
        if x in _NAMED:
            return _NAMED[x]
        try:
            return complex(x.replace(" ", ""))
        except ValueError:
            pass
    raise ValueError(f"{path}: cannot read {x!r} as a complex number")


def scenario_from_dict(obj, n: int, include_sigma: bool, tol: float = DEFAULT_TOL,
                       name: str = "file") -> Scenario:
    """Scenario from the JSON input format.

    ``{"locus": "interior", "tau": [[t1, t2], [t2, t3]], "generators": [...]}``
    or ``{"locus": "boundary-rank1", "point": [tau1, v], "generators": [...]}``.
    Complex numbers are numbers, ``[re, im]`` pairs, strings such as ``"2j"``,
    or the names ``"rho"`` and ``"i"``.  Generators follow the matrix format of
    :func:`kuga.symplectic.parse_kuga`.
    """
    if not isinstance(obj, dict):
        raise ValueError("top level: expected a JSON object")
    locus = obj.get("locus", "interior")
    try:
        locus = Locus(locus)
    except ValueError:
        raise ValueError(f"locus: {locus!r} is not one of {[l.value for l in Locus]}") from None
    n = obj.get("n", n)
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"n: {n!r} is not a non-negative integer")
    gens = obj.get("generators")
    if not isinstance(gens, list) or not gens:
        raise ValueError("generators: expected a non-empty list")
    elements = [sp.parse_kuga(g, n, f"generators[{i}]") for i, g in enumerate(gens)]
    if locus is Locus.INTERIOR:
        tau = obj.get("tau")
        if not isinstance(tau, list) or len(tau) != 2 or not all(
                isinstance(r, list) and len(r) == 2 for r in tau):
            raise ValueError("tau: expected a 2x2 array")
        vals = [[_parse_complex(x, f"tau[{i}][{j}]") for j, x in enumerate(r)]
                for i, r in enumerate(tau)]
        try:
            point = SiegelPoint(vals)
        except ValueError as exc:
            raise ValueError(f"tau: {exc}") from None
    else:
        pt = obj.get("point")
        if not isinstance(pt, list) or len(pt) not in (1, 2):
            raise ValueError("point: expected [tau1] or [tau1, v]")
        vals = [_parse_complex(x, f"point[{i}]") for i, x in enumerate(pt)]
        try:
            point = BoundaryPoint(*vals)
        except ValueError as exc:
            raise ValueError(f"point: {exc}") from None
    name = obj.get("name", name)
    return Scenario(str(name), locus, point, tuple(elements), n, include_sigma, tol)
