"""Modular form dimensions, the Jacobi cusp form lower bound, and the (p, n) region.

``j(k, p)`` is a lower bound for the dimension of Jacobi cusp forms of weight
``k`` and index ``p``; through the Gritsenko lift it bounds ``dim S_k`` of the
level group from below.  A nonzero cusp form of weight ``k = n + 2`` makes the
n-fold Kuga variety of relative general type.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from sympy import isprime, primerange

GENERAL_TYPE_PRIME = 37  # A_p itself is of general type from here on


class RegionStatus(str, Enum):
    RGT = "rgt"
    UNKNOWN = "unknown"
    OUT_OF_SCOPE = "out-of-scope"


@dataclass(frozen=True)
class RegionCell:
    p: int
    n: int
    status: RegionStatus

    def to_dict(self):
        return {"p": self.p, "n": self.n, "status": self.status.value}


def dim_M(r: int) -> int:
    """Dimension of modular forms of weight ``r`` for SL(2, Z); 0 for odd or negative ``r``."""
    if r < 0 or r % 2:
        return 0
    return r // 12 if r % 12 == 2 else r // 12 + 1


def jacobi_lower_bound(k: int, p: int) -> int:
    """``j(k, p)``, summed up to ``t = p``.  Not clamped: the value may be negative."""
    if k < 1 or p < 1:
        raise ValueError("k and p must be positive")
    t = p
    if k % 2 == 0:
        return sum(dim_M(k + 2 * j) - (j * j // (4 * p) + 1) for j in range(0, t + 1))
    return sum(dim_M(k + 2 * j - 1) - (j * j // (4 * p) + 1) for j in range(1, t))


def minimal_prime(k: int, p_max: int = 1000) -> Optional[int]:
    """Smallest prime ``p <= p_max`` with ``j(k, p) > 0``, or None."""
    if p_max < 2:
        raise ValueError("p_max must be >= 2")
    for p in primerange(2, p_max + 1):
        if jacobi_lower_bound(k, p) > 0:
            return int(p)
    return None


def classify(p: int, n: int) -> RegionCell:
    """Where ``(p, n)`` sits relative to the proven relative-general-type region.

    Only proven territory is reported as ``rgt``; everything else inside the
    scope (odd primes) is ``unknown``, never a negative answer.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if p < 3 or not isprime(p):
        return RegionCell(p, n, RegionStatus.OUT_OF_SCOPE)
    rgt = n >= 4 or (p >= 5 and n >= 3) or p >= GENERAL_TYPE_PRIME
    return RegionCell(p, n, RegionStatus.RGT if rgt else RegionStatus.UNKNOWN)


def region_grid(p_max: int, n_max: int) -> list:
    """``classify`` over odd primes ``p <= p_max`` and ``0 <= n <= n_max``, p-major."""
    if p_max < 3 or n_max < 0:
        raise ValueError("need p_max >= 3 and n_max >= 0")
    return [classify(int(p), n) for p in primerange(3, p_max + 1) for n in range(n_max + 1)]


def grid_to_csv(cells) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "n", "status"])
    for c in cells:
        writer.writerow([c.p, c.n, c.status.value])
    return buf.getvalue()


def grid_to_json(cells) -> str:
    return json.dumps([c.to_dict() for c in cells], indent=2) + "\n"


def grid_to_plot_data(cells) -> str:
    """Whitespace-separated ``p n flag`` blocks (one per prime) for gnuplot."""
    lines = ["# p n rgt"]
    last = None
    for c in cells:
        if last is not None and c.p != last:
            lines.append("")
        lines.append(f"{c.p} {c.n} {int(c.status is RegionStatus.RGT)}")
        last = c.p
    return "\n".join(lines) + "\n"
