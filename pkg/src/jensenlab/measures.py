"""Signed measures on compact intervals: masses, moments, barycenters.

Two concrete representations are supported and tagged by type:

* :class:`DiscreteSignedMeasure` -- finitely many weighted atoms; all
  computations are exact floating sums taken in ascending position order.
* :class:`DensitySignedMeasure` -- a catalog density on an interval,
  integrated by panelized quadrature that honours the breakpoints of both
  the density and the integrand.

Mixtures, unbounded intervals and genuinely two-dimensional measures are out
of scope; the separable product fixture is served by
:func:`iterated_product_moments`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from .errors import ConstructionError, PreconditionError, SchemaError
from .functions import FunctionSpec, Interval, _as_interval, identity
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate_panelized


@dataclass(frozen=True)
class DiscreteSignedMeasure:
    """sum_k w_k * delta_{x_k} on ``support_interval``.

    Atoms are sorted ascending at construction; duplicate positions merge by
    summing their weights.
    """

    atoms: tuple[tuple[float, float], ...]
    support_interval: Interval

    def __init__(self, atoms: Sequence[Sequence[float]], support_interval: Interval):
        merged: dict[float, float] = {}
        for pos, w in atoms:
            pos, w = float(pos), float(w)
            if not (math.isfinite(pos) and math.isfinite(w)):
                raise ConstructionError(f"non-finite atom ({pos}, {w})")
            merged[pos] = merged.get(pos, 0.0) + w
        ordered = tuple(sorted(merged.items()))
        if not ordered:
            raise ConstructionError("a discrete measure needs at least one atom")
        if all(w == 0.0 for _, w in ordered):
            raise ConstructionError("all atom weights are zero")
        for pos, _ in ordered:
            if not support_interval.contains(pos):
                raise ConstructionError(
                    f"atom at {pos} outside support interval "
                    f"[{support_interval.lo}, {support_interval.hi}]")
        object.__setattr__(self, "atoms", ordered)
        object.__setattr__(self, "support_interval", support_interval)

    @property
    def interval(self) -> Interval:
        return self.support_interval

    def positions(self) -> np.ndarray:
        return np.array([p for p, _ in self.atoms])

    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])


@dataclass(frozen=True)
class DensitySignedMeasure:
    """density(x) dx on ``interval``.

    ``breakpoints`` are the interior kink/jump locations of the density; the
    density's own breakpoints are merged in automatically.
    """

    interval: Interval
    density: FunctionSpec
    breakpoints: tuple[float, ...]

    def __init__(self, interval: Interval, density: FunctionSpec,
                 breakpoints: Sequence[float] = ()):
        if not density.domain.contains_interval(interval):
            raise ConstructionError(
                f"density domain [{density.domain.lo}, {density.domain.hi}] does not "
                f"contain [{interval.lo}, {interval.hi}]")
        bks = sorted(set(float(t) for t in breakpoints)
                     | {t for t in density.breakpoints() if interval.lo < t < interval.hi})
        for t in bks:
            if not interval.lo < t < interval.hi:
                raise ConstructionError(f"breakpoint {t} not interior to the interval")
        object.__setattr__(self, "interval", interval)
        object.__setattr__(self, "density", density)
        object.__setattr__(self, "breakpoints", tuple(bks))

    def breakpoints_within(self, sub: Interval) -> tuple[float, ...]:
        return tuple(t for t in self.breakpoints if sub.lo < t < sub.hi)


SignedMeasure = Union[DiscreteSignedMeasure, DensitySignedMeasure]


@dataclass(frozen=True)
class MomentSummary:
    """Total mass, first moment and (when mass is positive) the barycenter."""

    total_mass: float
    first_moment: float
    barycenter: float | None

    @property
    def barycenter_defined(self) -> bool:
        return self.barycenter is not None


@dataclass(frozen=True)
class ProductMomentSummary:
    """Moments of density(x) dx dy on an axis-aligned rectangle."""

    mass: float
    barycenter_x: float | None
    barycenter_y: float | None


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def total_mass(m: SignedMeasure, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """mu([lo, hi]); exact weight sum for atoms, quadrature for densities."""
    if isinstance(m, DiscreteSignedMeasure):
        s = 0.0
        for _, w in m.atoms:
            s += w
        return s
    return integrate_panelized(m.density, m.interval, m.breakpoints, cfg).value


def integrate(f: FunctionSpec, m: SignedMeasure,
              cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """integral of f d(mu).  f's domain must contain the support interval."""
    if not f.domain.contains_interval(m.interval):
        raise PreconditionError(
            f"integrand domain [{f.domain.lo}, {f.domain.hi}] does not contain the "
            f"measure interval [{m.interval.lo}, {m.interval.hi}]")
    if isinstance(m, DiscreteSignedMeasure):
        vals = f(m.positions())
        s = 0.0
        for w, v in zip(m.weights(), np.atleast_1d(vals)):
            s += float(w) * float(v)
        return s
    density = m.density
    bks = sorted(set(m.breakpoints)
                 | {t for t in f.breakpoints() if m.interval.lo < t < m.interval.hi})
    return integrate_panelized(lambda x: f(x) * density(x),
                               m.interval, bks, cfg).value


def moments(m: SignedMeasure, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> MomentSummary:
    """Mass, first moment, and barycenter (undefined unless mass > 0)."""
    mass = total_mass(m, cfg)
    first = integrate(identity(m.interval), m, cfg)
    bary = first / mass if mass > 0 else None
    return MomentSummary(mass, first, bary)


def iterated_product_moments(mx: DensitySignedMeasure, y_interval: Interval,
                             cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> ProductMomentSummary:
    """Moments of the separable product measure density(x) dx dy.

    The x-marginal is ``mx`` scaled by the y-length; the y-marginal is uniform,
    so the y-barycenter is the midpoint of ``y_interval`` whenever the total
    mass is positive.
    """
    mom = moments(mx, cfg)
    mass = mom.total_mass * y_interval.length
    if mass > 0:
        return ProductMomentSummary(mass, mom.barycenter, y_interval.midpoint)
    return ProductMomentSummary(mass, None, None)


# ---------------------------------------------------------------------------
# JSON schema (shared with the CLI)
# ---------------------------------------------------------------------------

def measure_to_json_obj(m: SignedMeasure) -> dict[str, Any]:
    if isinstance(m, DiscreteSignedMeasure):
        return {"type": "discrete",
                "interval": m.support_interval.as_list(),
                "atoms": [[p, w] for p, w in m.atoms]}
    return {"type": "density",
            "interval": m.interval.as_list(),
            "density": m.density.to_json_obj(),
            "breakpoints": list(m.breakpoints)}


def measure_from_json_obj(obj: Any, path: str = "measure") -> SignedMeasure:
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    kind = obj.get("type")
    if kind == "discrete":
        extra = set(obj) - {"type", "interval", "atoms"}
        if extra:
            raise SchemaError(f"unknown fields {sorted(extra)}", path)
        if "interval" not in obj or "atoms" not in obj:
            raise SchemaError("discrete measure needs 'interval' and 'atoms'", path)
        interval = _as_interval(obj["interval"], f"{path}.interval")
        atoms = obj["atoms"]
        if not (isinstance(atoms, list) and atoms
                and all(isinstance(a, list) and len(a) == 2
                        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in a)
                        for a in atoms)):
            raise SchemaError("atoms must be a non-empty list of [position, weight]",
                              f"{path}.atoms")
        try:
            return DiscreteSignedMeasure(atoms, interval)
        except ConstructionError as exc:
            raise SchemaError(str(exc), f"{path}.atoms") from exc
    if kind == "density":
        extra = set(obj) - {"type", "interval", "density", "breakpoints"}
        if extra:
            raise SchemaError(f"unknown fields {sorted(extra)}", path)
        if "interval" not in obj or "density" not in obj:
            raise SchemaError("density measure needs 'interval' and 'density'", path)
        interval = _as_interval(obj["interval"], f"{path}.interval")
        density = FunctionSpec.from_json_obj(obj["density"], f"{path}.density")
        bks = obj.get("breakpoints", [])
        if not (isinstance(bks, list)
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in bks)):
            raise SchemaError("breakpoints must be a list of numbers", f"{path}.breakpoints")
        try:
            return DensitySignedMeasure(interval, density, [float(b) for b in bks])
        except ConstructionError as exc:
            raise SchemaError(str(exc), path) from exc
    raise SchemaError("type must be 'discrete' or 'density'", f"{path}.type")
