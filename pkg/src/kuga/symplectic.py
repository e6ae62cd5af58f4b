"""Sp(4, Z) matrices, the level subgroup Gamma_p, and the action on the Siegel space.

Matrices are 4x4 integer numpy arrays split into 2x2 blocks ``A, B, C, D``.
An element acts on the Siegel upper half space by
``tau -> (A tau + B)(C tau + D)^-1``; the inverse automorphy factor
``N = (C tau + D)^-1`` is what moves the fibre coordinates at a fixed point.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (ClosureExceedsCap, DoesNotFixPoint, NotSymplectic,
                     NumericalBreakdown, OrderExceedsCap)

STANDARD_FORM = np.block([[np.zeros((2, 2), dtype=np.int64), np.eye(2, dtype=np.int64)],
                          [-np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64)]])

RHO = complex(-0.5, 3 ** 0.5 / 2)  # exp(2 pi i / 3)

FIX_TOL = 1e-8
ORDER_CAP = 60
CLOSURE_CAP = 256


def _as_int_matrix(M, shape) -> np.ndarray:
    arr = np.asarray(M)
    if arr.shape != shape:
        raise ValueError(f"expected an integer matrix of shape {shape}, got {arr.shape}")
    if arr.dtype.kind not in "iu":
        rounded = np.rint(arr.astype(float))
        if not np.array_equal(rounded, arr):
            raise ValueError("matrix entries must be integers")
        arr = rounded
    return arr.astype(np.int64)


class SpElement:
    """A 4x4 integer matrix preserving ``form``.

    Instances are immutable and hashable so they can be collected into finite
    groups.  The multiplicative order is computed on demand and memoised; the
    memo is a plain attribute write of a deterministic value, so concurrent
    readers can at worst compute it twice.
    """

    __slots__ = ("_m", "_form", "_order", "_key")

    def __init__(self, entries, form=None, *, _checked=False):
        m = _as_int_matrix(entries, (4, 4))
        J = STANDARD_FORM if form is None else _as_int_matrix(form, (4, 4))
        if not _checked and not np.array_equal(m.T @ J @ m, J):
            raise NotSymplectic(f"transpose(M) J M != J for M =\n{m}")
        m.setflags(write=False)
        self._m = m
        self._form = J
        self._order = None
        self._key = m.tobytes()

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def form(self) -> np.ndarray:
        return self._form

    @property
    def blocks(self):
        m = self._m
        return m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:]

    @classmethod
    def identity(cls, form=None) -> "SpElement":
        return cls(np.eye(4, dtype=np.int64), form, _checked=True)

    def one(self) -> "SpElement":
        return SpElement.identity(self._form)

    def is_identity(self) -> bool:
        return np.array_equal(self._m, np.eye(4, dtype=np.int64))

    def __matmul__(self, other: "SpElement") -> "SpElement":
        if not isinstance(other, SpElement):
            return NotImplemented
        return SpElement(self._m @ other._m, self._form, _checked=True)

    def inverse(self) -> "SpElement":
        # M^-1 = J^-1 M^T J; J^-1 is integral because J is unimodular up to sign
        J = self._form
        Jinv = np.rint(np.linalg.inv(J)).astype(np.int64)
        return SpElement(Jinv @ self._m.T @ J, J, _checked=True)

    def __pow__(self, m: int) -> "SpElement":
        base = self if m >= 0 else self.inverse()
        m = abs(m)
        result = self.one()
        while m:
            if m & 1:
                result = result @ base
            base = base @ base
            m >>= 1
        return result

    def __neg__(self) -> "SpElement":
        return SpElement(-self._m, self._form, _checked=True)

    def __eq__(self, other):
        return isinstance(other, SpElement) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"SpElement({self._m.tolist()})"

    @property
    def order(self) -> int:
        return order(self)


class KugaElement:
    """The block matrix ``((1_n, l), (0, gamma))`` with ``l`` an ``n x 4`` integer matrix."""

    __slots__ = ("l", "gamma", "n", "_key")

    def __init__(self, l, gamma: SpElement, n: Optional[int] = None):
        if not isinstance(gamma, SpElement):
            gamma = SpElement(gamma)
        if l is None:
            l = np.zeros((n or 0, 4), dtype=np.int64)
        l = np.asarray(l)
        if l.size == 0:
            l = np.zeros((n or 0, 4), dtype=np.int64)
        l = _as_int_matrix(l, (l.shape[0], 4))
        if n is not None and l.shape[0] != n:
            raise ValueError(f"l has {l.shape[0]} rows but n = {n}")
        l.setflags(write=False)
        self.l = l
        self.gamma = gamma
        self.n = l.shape[0]
        self._key = (self.n, l.tobytes(), gamma._key)

    @classmethod
    def lift(cls, gamma: SpElement, n: int) -> "KugaElement":
        return cls(None, gamma, n)

    def one(self) -> "KugaElement":
        return KugaElement(None, self.gamma.one(), self.n)

    def is_identity(self) -> bool:
        return self.gamma.is_identity() and not self.l.any()

    def block_matrix(self) -> np.ndarray:
        n = self.n
        top = np.hstack([np.eye(n, dtype=np.int64), self.l])
        bottom = np.hstack([np.zeros((4, n), dtype=np.int64), self.gamma.matrix])
        return np.vstack([top, bottom])

    def __matmul__(self, other: "KugaElement") -> "KugaElement":
        if not isinstance(other, KugaElement):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("cannot compose elements with different fibre dimension")
        return KugaElement(other.l + self.l @ other.gamma.matrix, self.gamma @ other.gamma, self.n)

    def inverse(self) -> "KugaElement":
        ginv = self.gamma.inverse()
        return KugaElement(-self.l @ ginv.matrix, ginv, self.n)

    def __pow__(self, m: int) -> "KugaElement":
        base = self if m >= 0 else self.inverse()
        result = self.one()
        for _ in range(abs(m)):
            result = result @ base
        return result

    def __eq__(self, other):
        return isinstance(other, KugaElement) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"KugaElement(l={self.l.tolist()}, gamma={self.gamma.matrix.tolist()})"


class SiegelPoint:
    """A point of the Siegel upper half space of degree 2."""

    __slots__ = ("tau", "exact")

    def __init__(self, tau, exact: Optional[str] = None, tol: float = 1e-12):
        t = np.array(tau, dtype=complex)
        if t.shape != (2, 2):
            raise ValueError(f"tau must be 2x2, got shape {t.shape}")
        if np.max(np.abs(t - t.T)) > tol:
            raise ValueError("tau must be symmetric")
        t = (t + t.T) / 2
        if np.min(np.linalg.eigvalsh(t.imag)) <= 0:
            raise ValueError("Im(tau) must be positive definite")
        t.setflags(write=False)
        self.tau = t
        self.exact = exact

    @classmethod
    def diagonal(cls, tau1: complex, tau3: complex, exact: Optional[str] = None) -> "SiegelPoint":
        return cls([[tau1, 0], [0, tau3]], exact)

    def __repr__(self):
        tag = f", exact={self.exact!r}" if self.exact else ""
        return f"SiegelPoint({self.tau.tolist()}{tag})"


def validate_symplectic(M, form=None) -> SpElement:
    """Check ``transpose(M) J M == J`` and wrap ``M``; raises :class:`NotSymplectic`."""
    if form is not None:
        J = _as_int_matrix(form, (4, 4))
        if not np.array_equal(J.T, -J) or round(np.linalg.det(J)) == 0:
            raise ValueError("the symplectic form must be antisymmetric and invertible")
    return SpElement(M, form)


def gamma_p_congruence(M: SpElement, p: int) -> bool:
    """Whether ``M - 1`` lies in the congruence lattice cutting out Gamma_p.

    Rows 1, 3, 4 are free in columns 1-3 and divisible by ``p`` in column 4;
    row 2 is divisible by ``p`` in columns 1-3 and by ``p**2`` in column 4.
    """
    mat = M.matrix if isinstance(M, SpElement) else _as_int_matrix(M, (4, 4))
    X = mat - np.eye(4, dtype=np.int64)
    moduli = np.ones((4, 4), dtype=np.int64)
    moduli[:, 3] = p
    moduli[1, :3] = p
    moduli[1, 3] = p * p
    return bool(np.all(X % moduli == 0))


def order(M: Union[SpElement, KugaElement], cap: int = ORDER_CAP) -> int:
    """Smallest ``m >= 1`` with ``M**m == 1``; raises :class:`OrderExceedsCap`."""
    if isinstance(M, KugaElement):
        power_ = M.one()
        for m in range(1, cap + 1):
            power_ = power_ @ M
            if power_.is_identity():
                return m
        raise OrderExceedsCap(f"no power <= {cap} of {M!r} is the identity")
    if M._order is not None and M._order <= cap:
        return M._order
    power_ = M.one()
    for m in range(1, cap + 1):
        power_ = power_ @ M
        if power_.is_identity():
            M._order = m
            return m
    raise OrderExceedsCap(f"no power <= {cap} of {M!r} is the identity")


def _tau_array(tau) -> np.ndarray:
    return tau.tau if isinstance(tau, SiegelPoint) else np.asarray(tau, dtype=complex)


def _cd_factor(M: SpElement, tau) -> np.ndarray:
    _, _, C, D = M.blocks
    t = _tau_array(tau)
    J = C @ t + D
    det = np.linalg.det(J)
    if abs(det) < 1e-12 or np.linalg.cond(J) > 1e12:
        raise NumericalBreakdown(f"C tau + D is numerically singular (det = {det})")
    return J


def act(M: SpElement, tau: SiegelPoint) -> SiegelPoint:
    """``(A tau + B)(C tau + D)^-1``."""
    A, B, _, _ = M.blocks
    t = _tau_array(tau)
    J = _cd_factor(M, t)
    out = np.linalg.solve(J.T, (A @ t + B).T).T
    out = (out + out.T) / 2
    return SiegelPoint(out, tol=1e-9)


def fixes(M: SpElement, tau: SiegelPoint, tol: float = FIX_TOL) -> bool:
    image = act(M, tau)
    return float(np.max(np.abs(image.tau - _tau_array(tau)))) <= tol


def automorphy_inverse(M: SpElement, tau: SiegelPoint, tol: float = FIX_TOL) -> np.ndarray:
    """``N = (C tau + D)^-1`` at a fixed point ``tau`` of ``M``."""
    if not fixes(M, tau, tol):
        raise DoesNotFixPoint(f"{M!r} does not fix {tau!r}")
    return np.linalg.inv(_cd_factor(M, tau))


def submatrices(M: SpElement):
    """``gamma' = ((g11, g13), (g31, g33))`` and ``U = (g22)`` (1-based indices)."""
    m = M.matrix
    gamma_prime = np.array([[m[0, 0], m[0, 2]], [m[2, 0], m[2, 2]]], dtype=np.int64)
    U = np.array([[m[1, 1]]], dtype=np.int64)
    return gamma_prime, U


def closure(generators: Sequence, cap: int = CLOSURE_CAP, with_words: bool = False):
    """All elements of the finite group generated by ``generators``.

    Breadth-first from the identity, right-multiplying by each generator in
    turn, so every element is reached first by a word of minimal length.  With
    ``with_words`` the result is a list of ``(element, powers)`` pairs where
    ``powers[i]`` counts how often generator ``i`` occurs in that word; for
    commuting generators this is the ``(k1, k2, ...)`` label of the element.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    one = gens[0].one()
    seen = {one: (0,) * len(gens)}
    queue = deque([one])
    while queue:
        x = queue.popleft()
        word = seen[x]
        for i, g in enumerate(gens):
            y = x @ g
            if y not in seen:
                if len(seen) >= cap:
                    raise ClosureExceedsCap(f"group generated by {len(gens)} elements exceeds {cap}")
                seen[y] = word[:i] + (word[i] + 1,) + word[i + 1:]
                queue.append(y)
    if with_words:
        return list(seen.items())
    return list(seen)


PRESET_MATRICES = {
    "C2": [[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]],
    "Q2": [[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 1]],
    "Q1": [[0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]],
    "minus1": (-np.eye(4, dtype=np.int64)).tolist(),
}


def preset_matrix(name: str) -> SpElement:
    try:
        return SpElement(PRESET_MATRICES[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESET_MATRICES)}") from None


def parse_matrix(obj, path: str = "matrix") -> SpElement:
    """Build an element from a JSON value: a preset name or a 4x4 integer array."""
    if isinstance(obj, str):
        try:
            return preset_matrix(obj)
        except KeyError as exc:
            raise ValueError(f"{path}: {exc.args[0]}") from None
    if not isinstance(obj, list) or len(obj) != 4:
        raise ValueError(f"{path}: expected 4 rows of 4 integers")
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != 4:
            raise ValueError(f"{path}[{i}]: expected a row of 4 integers")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise ValueError(f"{path}[{i}][{j}]: {x!r} is not an integer")
    try:
        return SpElement(obj)
    except NotSymplectic as exc:
        raise ValueError(f"{path}: not symplectic for the standard form") from exc


def parse_kuga(obj, n: int, path: str = "generator") -> KugaElement:
    """``{"gamma": <matrix>, "l": [[...], ...]}`` or a bare matrix (``l = 0``)."""
    if isinstance(obj, dict):
        if "gamma" not in obj:
            raise ValueError(f"{path}: missing field 'gamma'")
        gamma = parse_matrix(obj["gamma"], f"{path}.gamma")
        l = obj.get("l")
        if l is None:
            return KugaElement.lift(gamma, n)
        if not isinstance(l, list) or len(l) != n:
            raise ValueError(f"{path}.l: expected {n} rows of 4 integers")
        for i, row in enumerate(l):
            if not isinstance(row, list) or len(row) != 4 or not all(
                    isinstance(x, int) and not isinstance(x, bool) for x in row):
                raise ValueError(f"{path}.l[{i}]: expected a row of 4 integers")
        return KugaElement(np.array(l, dtype=np.int64).reshape(n, 4), gamma, n)
    return KugaElement.lift(parse_matrix(obj, path), n)


def load_matrix_json(text: str) -> SpElement:
    return parse_matrix(json.loads(text))
