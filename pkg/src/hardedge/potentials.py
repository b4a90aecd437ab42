"""Radially symmetric confining potentials and their droplet geometry.

A potential is described by its radial profile ``q(r)`` together with the
analytically exact derivative ``dq(r) = q'(r)`` and radial Laplacian
``lap(r) = (r q'(r))'/r``. Two families are supported:

* ``power``: ``q(r) = r^(2d)`` with exponent ``d >= 1``;
* ``evenpoly``: ``q(r) = sum_j c_j r^(2j)`` with ``c_j >= 0`` for ``j >= 1``
  (the constant ``c_0`` may have any sign) and at least one positive
  non-constant coefficient.

Both families are subharmonic by construction; construction still runs a loud
grid scan so that a bad profile never reaches the distribution machinery.

The outer droplet radius ``R0`` is the smallest root of ``r q'(r) = 2``; the
inner radius ``r0`` is the infimum of the set beyond which ``q'`` stays
positive. The edge density is ``delta = lap(R0)/4`` and the inward rescaling
constant is ``C0 = R0 * delta * log 4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOG4 = math.log(4.0)

# subharmonicity / bracketing scan window
_SCAN_LO = 1e-6
_SCAN_HI = 1e3
_SCAN_POINTS = 10_000


class PotentialError(ValueError):
    """Raised for profiles outside the admissible radial families."""


@dataclass(frozen=True)
class RadialPotential:
    """Evaluable radial profile with exact first derivative and Laplacian."""

    family: str
    d: float = 0.0
    coeffs: tuple[float, ...] = ()

    def q(self, r):
        if self.family == "power":
            return _maybe_float(np.asarray(r, dtype=float) ** (2.0 * self.d), r)
        s = np.asarray(r, dtype=float) ** 2
        return _maybe_float(np.polynomial.polynomial.polyval(s, self._c()), r)

    def dq(self, r):
        rr = np.asarray(r, dtype=float)
        if self.family == "power":
            return _maybe_float(2.0 * self.d * rr ** (2.0 * self.d - 1.0), r)
        dcoef = np.array([2.0 * j * c for j, c in enumerate(self.coeffs)][1:] or [0.0])
        return _maybe_float(rr * np.polynomial.polynomial.polyval(rr * rr, dcoef), r)

    def lap(self, r):
        rr = np.asarray(r, dtype=float)
        if self.family == "power":
            return _maybe_float(4.0 * self.d ** 2 * rr ** (2.0 * self.d - 2.0), r)
        lcoef = np.array([4.0 * j * j * c for j, c in enumerate(self.coeffs)][1:] or [0.0])
        return _maybe_float(np.polynomial.polynomial.polyval(rr * rr, lcoef), r)

    def _c(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def kernel_args(self) -> tuple[int, np.ndarray]:
        """(kind, params) pair consumed by the numeric kernels."""
        if self.family == "power":
            return 0, np.array([self.d])
        return 1, self._c()

    def descriptor(self) -> str:
        if self.family == "power":
            return f"power:{self.d:g}"
        return "evenpoly:" + ",".join(f"{c:g}" for c in self.coeffs)

    def as_json_dict(self) -> dict:
        if self.family == "power":
            return {"family": "power", "d": self.d}
        return {"family": "evenpoly", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class Droplet:
    """Ring geometry of the support together with the edge rescaling data."""

    r0: float
    R0: float
    delta: float
    C0: float

    def as_dict(self) -> dict:
        return {"r0": self.r0, "R0": self.R0, "delta": self.delta, "C0": self.C0}


def make_potential(spec) -> RadialPotential:
    """Build a validated potential from a descriptor.

    Accepts ``power:<d>`` / ``evenpoly:<c0>,<c1>,...`` strings, their JSON
    dict forms ``{"family": "power", "d": ...}`` / ``{"family": "evenpoly",
    "coeffs": [...]}``, or an existing :class:`RadialPotential`.
    """
    if isinstance(spec, RadialPotential):
        pot = spec
    elif isinstance(spec, str):
        pot = _parse_descriptor(spec)
    elif isinstance(spec, dict):
        pot = _parse_json_dict(spec)
    else:
        raise PotentialError(f"unsupported potential descriptor: {spec!r}")

    if pot.family == "power":
        if not math.isfinite(pot.d) or pot.d < 1.0:
            raise PotentialError(f"power exponent must satisfy d >= 1, got {pot.d}")
    elif pot.family == "evenpoly":
        cs = pot._c()
        if cs.size == 0 or not np.all(np.isfinite(cs)):
            raise PotentialError("evenpoly requires a finite coefficient list")
        if cs.size < 2 or np.any(cs[1:] < 0.0):
            raise PotentialError("evenpoly coefficients c_j (j >= 1) must be >= 0")
        if not np.any(cs[1:] > 0.0):
            raise PotentialError("evenpoly needs at least one positive non-constant coefficient")
    else:
        raise PotentialError(f"unknown potential family {pot.family!r}")

    _subharmonicity_scan(pot)
    return pot


def _parse_descriptor(text: str) -> RadialPotential:
    head, sep, rest = text.partition(":")
    if not sep:
        raise PotentialError(f"malformed potential descriptor {text!r}")
    head = head.strip().lower()
    try:
        if head == "power":
            return RadialPotential("power", d=float(rest))
        if head == "evenpoly":
            coeffs = tuple(float(tok) for tok in rest.split(","))
            return RadialPotential("evenpoly", coeffs=coeffs)
    except ValueError as exc:
        raise PotentialError(f"malformed potential descriptor {text!r}: {exc}") from None
    raise PotentialError(f"unknown potential family {head!r}")


def _parse_json_dict(obj: dict) -> RadialPotential:
    family = obj.get("family")
    if family == "power":
        return RadialPotential("power", d=float(obj["d"]))
    if family == "evenpoly":
        return RadialPotential("evenpoly", coeffs=tuple(float(c) for c in obj["coeffs"]))
    raise PotentialError(f"unknown potential family {family!r}")


def _subharmonicity_scan(pot: RadialPotential) -> None:
    """Reject profiles that fail lap >= 0 or monotone r*q'(r) on a log grid."""
    r = np.geomspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    lap = pot.lap(r)
    if np.any(lap < -1e-12 * (1.0 + np.abs(lap))):
        raise PotentialError("potential is not subharmonic on the scan grid")
    f = r * pot.dq(r)
    if np.any(np.diff(f) < -1e-9 * (1.0 + np.abs(f[:-1]))):
        raise PotentialError("r*q'(r) is not nondecreasing on the scan grid")


def droplet(pot: RadialPotential) -> Droplet:
    """Solve the droplet ring for a validated potential.

    ``R0`` is found by bisection on ``r q'(r) - 2`` (monotone) followed by a
    Newton polish; ``r0`` is 0 for power profiles and located by scan plus
    bisection on ``q'`` otherwise. Also checks the logarithmic-growth
    admissibility of the profile at ``10 R0`` and ``100 R0``.
    """
    grid = np.geomspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    f = grid * pot.dq(grid) - 2.0
    hits = np.nonzero(f > 0.0)[0]
    if hits.size == 0:
        raise PotentialError(
            "no solution of r*q'(r) = 2 in the scan window; growth is not admissible"
        )
    i = hits[0]
    lo = grid[i - 1] if i > 0 else _SCAN_LO * 0.5
    R0 = _bisect_increasing(lambda r: r * pot.dq(r) - 2.0, lo, grid[i])
    R0 = _newton_polish(
        lambda r: r * pot.dq(r) - 2.0, lambda r: r * pot.lap(r), R0, lo, grid[i]
    )

    if pot.family == "power":
        r0 = 0.0
    else:
        dq = pot.dq(grid)
        bad = np.nonzero((grid < R0) & (dq <= 0.0))[0]
        if bad.size == 0:
            r0 = 0.0
        else:
            j = bad[-1]
            r0 = _bisect_increasing(pot.dq, grid[j], grid[j + 1])

    delta = pot.lap(R0) / 4.0
    if not delta > 0.0:
        raise PotentialError("potential is not strictly subharmonic at the outer edge")

    v = lambda r: pot.q(r) - 2.0 * math.log(r)
    if not (v(100.0 * R0) > v(10.0 * R0) > v(R0)):
        raise PotentialError("q(r) - 2 log r is not growing beyond the droplet")

    return Droplet(r0=r0, R0=R0, delta=delta, C0=R0 * delta * LOG4)


def effective_potential_vk(pot: RadialPotential, n: int, k: int, r):
    """One-dimensional mode potential ``V_k(r) = q(r) - (2 - (2k+1)/n) log r``."""
    _check_mode(n, k)
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0.0):
        raise ValueError("V_k is defined for r > 0")
    c = 2.0 - (2.0 * k + 1.0) / n
    return _maybe_float(pot.q(rr) - c * np.log(rr), r)


def effective_potential_vk_prime(pot: RadialPotential, n: int, k: int, r):
    """Exact derivative ``V_k'(r) = q'(r) - (2 - (2k+1)/n)/r``."""
    _check_mode(n, k)
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0.0):
        raise ValueError("V_k' is defined for r > 0")
    c = 2.0 - (2.0 * k + 1.0) / n
    return _maybe_float(pot.dq(rr) - c / rr, r)


def saddle_tk(pot: RadialPotential, n: int, k: int, drop: Droplet | None = None):
    """Largest ``t`` in ``[r0, R0]`` with ``t q'(t) = 2 - (2k+1)/n``.

    Returns ``None`` when no such point exists (the target value is outside
    the range ``[0, 2]`` that ``r q'(r)`` attains on the droplet); downstream
    quadrature then anchors at the left endpoint.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    drop = drop or droplet(pot)
    c = 2.0 - (2.0 * k + 1.0) / n
    if c < 0.0 or c > 2.0:
        return None
    if c == 0.0:
        return drop.r0
    lo = max(drop.r0, 1e-300)
    g = lambda r: r * pot.dq(r) - c
    t = _bisect_increasing(g, lo, drop.R0)
    return _newton_polish(g, lambda r: r * pot.lap(r), t, lo, drop.R0)


def _check_mode(n: int, k: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= k <= n - 1:
        raise ValueError(f"mode index k must lie in [0, {n - 1}], got {k}")


def _maybe_float(value: np.ndarray, like):
    return float(value) if np.isscalar(like) or np.ndim(like) == 0 else value


def _bisect_increasing(g, lo: float, hi: float, rtol: float = 1e-12) -> float:
    """Bisection for an increasing g with g(lo) <= 0 <= g(hi)."""
    glo = g(lo)
    if glo > 0.0:
        return lo
    if g(hi) < 0.0:
        raise PotentialError("root bracket lost; profile violates monotonicity")
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _newton_polish(g, gprime, x: float, lo: float, hi: float) -> float:
    for _ in range(8):
        slope = gprime(x)
        if slope == 0.0:
            break
        step = g(x) / slope
        nxt = min(max(x - step, lo), hi)
        if abs(nxt - x) <= 2.0 * np.finfo(float).eps * abs(nxt):
            return nxt
        x = nxt
    return x
