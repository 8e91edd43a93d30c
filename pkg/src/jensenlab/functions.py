"""Evaluable real functions on compact intervals.

The catalog is closed so that job files stay portable: every family can be
serialized to JSON and rebuilt bit-identically.  All families evaluate
vectorized over numpy arrays and report their interior breakpoints (kinks and
jumps) so that quadrature panels never straddle one.

An extra ``callable`` family wraps an arbitrary evaluation handle with a
declared domain for library-level use; it is the only family that does not
serialize.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConstructionError, DomainError, SchemaError

# Guard band kept clear around tan poles; evaluation inside it is refused at
# construction time rather than patched up later.
TAN_POLE_GUARD = 1e-6

# Maximum jump tolerated at a glue seam.
GLUE_CONTINUITY_TOL = 1e-9

_SERIALIZABLE_FAMILIES = (
    "polynomial",
    "tan",
    "odd_power",
    "piecewise_linear",
    "grid_samples",
    "piecewise_constant",
    "odd_extension",
    "point_symmetric_extension",
    "chord",
    "glue",
)


@dataclass(frozen=True)
class Interval:
    """Closed bounded interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConstructionError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ConstructionError(f"degenerate interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def slack(self) -> float:
        # absolute tolerance used for membership tests near the endpoints
        return 1e-12 * max(1.0, abs(self.lo), abs(self.hi))

    def contains(self, x: float) -> bool:
        eps = self.slack()
        return self.lo - eps <= x <= self.hi + eps

    def contains_interval(self, other: "Interval") -> bool:
        eps = self.slack()
        return self.lo - eps <= other.lo and other.hi <= self.hi + eps

    def clamp(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def as_list(self) -> list[float]:
        return [self.lo, self.hi]


def _as_interval(obj: Any, path: str = "domain") -> Interval:
    if isinstance(obj, Interval):
        return obj
    if (isinstance(obj, (list, tuple)) and len(obj) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)):
        try:
            return Interval(float(obj[0]), float(obj[1]))
        except ConstructionError as exc:
            raise SchemaError(str(exc), path) from exc
    raise SchemaError("expected [lo, hi] with lo < hi", path)


def _tan_pole_distance(interval: Interval) -> float:
    """Distance from the interval to the nearest pole of tan."""
    # poles at pi/2 + k*pi; nearest pole to each endpoint and to the span
    k_lo = math.floor((interval.lo - math.pi / 2) / math.pi)
    dist = math.inf
    for k in range(k_lo - 1, k_lo + int(interval.length / math.pi) + 3):
        pole = math.pi / 2 + k * math.pi
        if interval.lo <= pole <= interval.hi:
            return 0.0
        dist = min(dist, abs(pole - interval.lo), abs(pole - interval.hi))
    return dist


class FunctionSpec:
    """A member of the closed function catalog.

    Instances are immutable; ``spec(x)`` evaluates vectorized and raises
    :class:`DomainError` when any point falls outside ``spec.domain``.
    """

    __slots__ = ("family", "params", "domain", "_breakpoints")

    def __init__(self, family: str, params: dict[str, Any], domain: Interval,
                 breakpoints: tuple[float, ...] = ()):
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "_breakpoints", breakpoints)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("FunctionSpec is immutable")

    def __repr__(self):
        return f"FunctionSpec({self.family!r}, domain=[{self.domain.lo}, {self.domain.hi}])"

    # ------------------------------------------------------------------ eval

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        eps = self.domain.slack()
        if arr.size:
            lo, hi = self.domain.lo - eps, self.domain.hi + eps
            bad = (arr < lo) | (arr > hi) | ~np.isfinite(arr)
            if bad.any():
                pt = float(arr[bad].flat[0]) if np.isfinite(arr[bad].flat[0]) else float("nan")
                raise DomainError(
                    f"{self.family} evaluated at {pt!r} outside domain "
                    f"[{self.domain.lo}, {self.domain.hi}]", point=pt)
        out = self._eval(arr)
        if np.ndim(x) == 0:
            return float(out)
        return out

    def _eval(self, arr: np.ndarray) -> np.ndarray:
        fam, p = self.family, self.params
        if fam == "polynomial":
            return npoly.polyval(arr, p["coeffs"])
        if fam == "tan":
            return np.tan(arr)
        if fam == "odd_power":
            return arr ** p["exponent"]
        if fam in ("piecewise_linear", "grid_samples"):
            return np.interp(arr, p["xs"], p["ys"])
        if fam == "piecewise_constant":
            idx = np.searchsorted(p["breaks"], arr, side="right")
            return np.asarray(p["values"], dtype=float)[idx]
        if fam == "odd_extension":
            base: FunctionSpec = p["base"]
            return np.sign(arr) * base._eval(np.abs(arr))
        if fam == "point_symmetric_extension":
            base, c = p["base"], p["center"]
            right = arr >= c
            out = np.empty_like(arr)
            out[right] = base._eval(arr[right])
            out[~right] = 2.0 * p["center_value"] - base._eval(2.0 * c - arr[~right])
            return out
        if fam == "chord":
            (x1, y1), _ = p["p1"], p["p2"]
            return y1 + p["slope"] * (arr - x1)
        if fam == "glue":
            left, right, split = p["left"], p["right"], p["split"]
            mask = arr < split
            out = np.empty_like(arr)
            out[mask] = left._eval(arr[mask])
            out[~mask] = right._eval(arr[~mask])
            return out
        if fam == "callable":
            return np.asarray(p["fn"](arr), dtype=float)
        raise ConstructionError(f"unknown family {fam!r}")  # pragma: no cover

    # ----------------------------------------------------------- structure

    def breakpoints(self) -> tuple[float, ...]:
        """Interior kink/jump locations, strictly inside the domain."""
        lo, hi = self.domain.lo, self.domain.hi
        return tuple(t for t in self._breakpoints if lo < t < hi)

    def restricted(self, domain: Interval) -> "FunctionSpec":
        """Same function on a subinterval of the current domain."""
        if not self.domain.contains_interval(domain):
            raise DomainError(
                f"cannot restrict to [{domain.lo}, {domain.hi}]: outside "
                f"[{self.domain.lo}, {self.domain.hi}]")
        return FunctionSpec(self.family, self.params, domain, self._breakpoints)

    def negated(self) -> "FunctionSpec":
        """The function x -> -f(x), staying inside the catalog when possible."""
        fam, p, d = self.family, self.params, self.domain
        if fam == "polynomial":
            return polynomial([-c for c in p["coeffs"]], d)
        if fam == "odd_power":
            coeffs = [0.0] * p["exponent"] + [-1.0]
            return polynomial(coeffs, d)
        if fam in ("piecewise_linear", "grid_samples"):
            knots = [(x, -y) for x, y in zip(p["xs"], p["ys"])]
            ctor = piecewise_linear if fam == "piecewise_linear" else grid_samples
            return ctor(knots, d)
        if fam == "piecewise_constant":
            return piecewise_constant(p["breaks"], [-v for v in p["values"]], d)
        if fam == "chord":
            (x1, y1), (x2, y2) = p["p1"], p["p2"]
            return chord_through((x1, -y1), (x2, -y2), d)
        if fam == "glue":
            return glue(p["left"].negated(), p["right"].negated(), p["split"])
        if fam == "odd_extension":
            return FunctionSpec("callable", {"fn": lambda a: -self._eval(a)}, d)
        return FunctionSpec("callable", {"fn": lambda a: -self._eval(a)}, d)

    # -------------------------------------------------------------- JSON

    def to_json_obj(self) -> dict[str, Any]:
        fam, p = self.family, self.params
        if fam not in _SERIALIZABLE_FAMILIES:
            raise SchemaError(f"family {fam!r} does not serialize", "function.family")
        params: dict[str, Any]
        if fam == "polynomial":
            params = {"coeffs": list(p["coeffs"])}
        elif fam == "tan":
            params = {}
        elif fam == "odd_power":
            params = {"exponent": p["exponent"]}
        elif fam in ("piecewise_linear", "grid_samples"):
            key = "knots" if fam == "piecewise_linear" else "points"
            params = {key: [[x, y] for x, y in zip(p["xs"], p["ys"])]}
        elif fam == "piecewise_constant":
            params = {"breaks": list(p["breaks"]), "values": list(p["values"])}
        elif fam == "odd_extension":
            params = {"base": p["base"].to_json_obj()}
        elif fam == "point_symmetric_extension":
            params = {"base": p["base"].to_json_obj(), "center": p["center"]}
        elif fam == "chord":
            params = {"p1": list(p["p1"]), "p2": list(p["p2"])}
        else:  # glue
            params = {"left": p["left"].to_json_obj(),
                      "right": p["right"].to_json_obj(),
                      "split": p["split"]}
        return {"family": fam, "params": params, "domain": self.domain.as_list()}

    @staticmethod
    def from_json_obj(obj: Any, path: str = "function") -> "FunctionSpec":
        if not isinstance(obj, dict):
            raise SchemaError("expected an object", path)
        extra = set(obj) - {"family", "params", "domain"}
        if extra:
            raise SchemaError(f"unknown fields {sorted(extra)}", path)
        for key in ("family", "params", "domain"):
            if key not in obj:
                raise SchemaError(f"missing field {key!r}", path)
        fam = obj["family"]
        params = obj["params"]
        if not isinstance(params, dict):
            raise SchemaError("params must be an object", f"{path}.params")
        domain = _as_interval(obj["domain"], f"{path}.domain")
        try:
            return _FROM_JSON[fam](params, domain, path)
        except KeyError:
            raise SchemaError(
                f"unknown family {fam!r}; expected one of {list(_SERIALIZABLE_FAMILIES)}",
                f"{path}.family") from None
        except ConstructionError as exc:
            raise SchemaError(str(exc), path) from exc


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def polynomial(coeffs: Sequence[float], domain: Interval | Sequence[float]) -> FunctionSpec:
    """sum(coeffs[k] * x**k) on the given domain."""
    domain = _as_interval(domain)
    cs = [float(c) for c in coeffs]
    if not cs:
        raise ConstructionError("polynomial needs at least one coefficient")
    if not all(math.isfinite(c) for c in cs):
        raise ConstructionError("polynomial coefficients must be finite")
    return FunctionSpec("polynomial", {"coeffs": tuple(cs)}, domain)


def constant(value: float, domain: Interval | Sequence[float]) -> FunctionSpec:
    return polynomial([value], domain)


def identity(domain: Interval | Sequence[float]) -> FunctionSpec:
    return polynomial([0.0, 1.0], domain)


def tan_function(domain: Interval | Sequence[float]) -> FunctionSpec:
    domain = _as_interval(domain)
    if _tan_pole_distance(domain) < TAN_POLE_GUARD:
        raise ConstructionError(
            f"tan domain [{domain.lo}, {domain.hi}] crosses the pole guard band "
            f"({TAN_POLE_GUARD} around odd multiples of pi/2)")
    return FunctionSpec("tan", {}, domain)


def odd_power(exponent: int, domain: Interval | Sequence[float]) -> FunctionSpec:
    """x**exponent for odd positive exponent (odd and convex on [0, inf))."""
    domain = _as_interval(domain)
    if not (isinstance(exponent, int) and exponent >= 1 and exponent % 2 == 1):
        raise ConstructionError(f"exponent must be an odd positive integer, got {exponent!r}")
    return FunctionSpec("odd_power", {"exponent": exponent}, domain)


def _check_knots(knots: Sequence[Sequence[float]], what: str) -> tuple[tuple[float, ...], tuple[float, ...]]:
    pts = [(float(x), float(y)) for x, y in knots]
    if len(pts) < 2:
        raise ConstructionError(f"{what} needs at least two points")
    xs = tuple(x for x, _ in pts)
    ys = tuple(y for _, y in pts)
    if any(not (math.isfinite(x) and math.isfinite(y)) for x, y in pts):
        raise ConstructionError(f"{what} points must be finite")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ConstructionError(f"{what} abscissae must be strictly increasing")
    return xs, ys


def piecewise_linear(knots: Sequence[Sequence[float]],
                     domain: Interval | Sequence[float] | None = None) -> FunctionSpec:
    """Linear interpolation through the knots; kinks at interior knots."""
    xs, ys = _check_knots(knots, "piecewise_linear")
    dom = Interval(xs[0], xs[-1]) if domain is None else _as_interval(domain)
    if not Interval(xs[0], xs[-1]).contains_interval(dom):
        raise ConstructionError("domain must lie within the knot range")
    return FunctionSpec("piecewise_linear", {"xs": xs, "ys": ys}, dom, xs[1:-1])


def grid_samples(points: Sequence[Sequence[float]],
                 domain: Interval | Sequence[float] | None = None) -> FunctionSpec:
    """Sampled values on a grid, linearly interpolated between samples."""
    xs, ys = _check_knots(points, "grid_samples")
    dom = Interval(xs[0], xs[-1]) if domain is None else _as_interval(domain)
    if not Interval(xs[0], xs[-1]).contains_interval(dom):
        raise ConstructionError("domain must lie within the sample range")
    return FunctionSpec("grid_samples", {"xs": xs, "ys": ys}, dom, xs[1:-1])


def piecewise_constant(breaks: Sequence[float], values: Sequence[float],
                       domain: Interval | Sequence[float]) -> FunctionSpec:
    """Right-continuous step function: values[i] on [break[i-1], break[i])."""
    domain = _as_interval(domain)
    bs = tuple(float(b) for b in breaks)
    vs = tuple(float(v) for v in values)
    if len(vs) != len(bs) + 1:
        raise ConstructionError("need exactly len(breaks) + 1 values")
    if any(b2 <= b1 for b1, b2 in zip(bs, bs[1:])):
        raise ConstructionError("breaks must be strictly increasing")
    if bs and not (domain.lo < bs[0] and bs[-1] < domain.hi):
        raise ConstructionError("breaks must be interior to the domain")
    if not all(math.isfinite(v) for v in vs):
        raise ConstructionError("step values must be finite")
    return FunctionSpec("piecewise_constant", {"breaks": bs, "values": vs}, domain, bs)


def odd_extension(base: FunctionSpec,
                  domain: Interval | Sequence[float] | None = None) -> FunctionSpec:
    """sign(x) * base(|x|); odd by construction.

    ``base`` must live on [0, B] with base(0) = 0 (otherwise the extension
    would jump at the origin).  Intended use has ``base`` convex on [0, B].
    """
    if abs(base.domain.lo) > 1e-12:
        raise ConstructionError("odd_extension base domain must start at 0")
    b0 = float(base(0.0))
    if abs(b0) > GLUE_CONTINUITY_TOL:
        raise ConstructionError(f"odd_extension base must vanish at 0, got {b0!r}")
    full = Interval(-base.domain.hi, base.domain.hi)
    dom = full if domain is None else _as_interval(domain)
    if not full.contains_interval(dom):
        raise ConstructionError("domain must lie within [-B, B] for base on [0, B]")
    bks = sorted({0.0} | {t for t in base.breakpoints()} | {-t for t in base.breakpoints()})
    return FunctionSpec("odd_extension", {"base": base}, dom, tuple(bks))


def point_symmetric_extension(base: FunctionSpec, center: float,
                              domain: Interval | Sequence[float] | None = None) -> FunctionSpec:
    """Extend base (on [c, B]) left of c by f(c - t) = 2 f(c) - f(c + t)."""
    c = float(center)
    if abs(base.domain.lo - c) > base.domain.slack():
        raise ConstructionError("base domain must start at the symmetry center")
    big = base.domain.hi
    full = Interval(2 * c - big, big)
    dom = full if domain is None else _as_interval(domain)
    if not full.contains_interval(dom):
        raise ConstructionError(
            f"domain must lie within [{full.lo}, {full.hi}] so reflections stay inside base")
    cval = float(base(c))
    bks = sorted({c} | {t for t in base.breakpoints()} | {2 * c - t for t in base.breakpoints()})
    return FunctionSpec("point_symmetric_extension",
                        {"base": base, "center": c, "center_value": cval}, dom, tuple(bks))


def chord_through(p1: Sequence[float], p2: Sequence[float],
                  domain: Interval | Sequence[float]) -> FunctionSpec:
    """The affine function through two graph points."""
    domain = _as_interval(domain)
    x1, y1 = float(p1[0]), float(p1[1])
    x2, y2 = float(p2[0]), float(p2[1])
    if x2 <= x1:
        raise ConstructionError("chord anchors must satisfy x1 < x2")
    slope = (y2 - y1) / (x2 - x1)
    return FunctionSpec("chord", {"p1": (x1, y1), "p2": (x2, y2), "slope": slope}, domain)


def glue(left: FunctionSpec, right: FunctionSpec, split: float) -> FunctionSpec:
    """left on [lo, split), right on [split, hi]; continuous at the seam."""
    s = float(split)
    dom = Interval(left.domain.lo, right.domain.hi)
    if not (left.domain.contains(s) and right.domain.contains(s)):
        raise ConstructionError("split must belong to both pieces' domains")
    if not (dom.lo < s < dom.hi):
        raise ConstructionError("split must be interior to the glued domain")
    jump = abs(float(left(s)) - float(right(s)))
    if jump > GLUE_CONTINUITY_TOL:
        raise ConstructionError(f"glue is discontinuous at {s}: jump {jump:.3e}")
    bks = sorted({s}
                 | {t for t in left.breakpoints() if t < s}
                 | {t for t in right.breakpoints() if t > s})
    return FunctionSpec("glue", {"left": left, "right": right, "split": s}, dom, tuple(bks))


def from_callable(fn: Callable[[np.ndarray], np.ndarray],
                  domain: Interval | Sequence[float],
                  breakpoints: Sequence[float] = ()) -> FunctionSpec:
    """Library-level escape hatch: wrap an evaluation handle with a domain.

    Not serializable; CLI jobs must use catalog families.
    """
    domain = _as_interval(domain)
    return FunctionSpec("callable", {"fn": fn}, domain, tuple(sorted(breakpoints)))


# ---------------------------------------------------------------------------
# JSON deserialization table
# ---------------------------------------------------------------------------

def _need(params: dict, keys: set[str], path: str) -> None:
    extra = set(params) - keys
    if extra:
        raise SchemaError(f"unknown params {sorted(extra)}", f"{path}.params")
    missing = keys - set(params)
    if missing:
        raise SchemaError(f"missing params {sorted(missing)}", f"{path}.params")


def _num_list(v: Any, path: str) -> list[float]:
    if not (isinstance(v, list) and v
            and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v)):
        raise SchemaError("expected a non-empty list of numbers", path)
    return [float(t) for t in v]


def _pair_list(v: Any, path: str) -> list[list[float]]:
    if not (isinstance(v, list) and all(isinstance(t, list) and len(t) == 2 for t in v)):
        raise SchemaError("expected a list of [x, y] pairs", path)
    return [_num_list(t, path) for t in v]


_FROM_JSON: dict[str, Callable[[dict, Interval, str], FunctionSpec]] = {
    "polynomial": lambda p, d, path: (
        _need(p, {"coeffs"}, path) or polynomial(_num_list(p["coeffs"], f"{path}.params.coeffs"), d)),
    "tan": lambda p, d, path: (_need(p, set(), path) or tan_function(d)),
    "odd_power": lambda p, d, path: (
        _need(p, {"exponent"}, path) or _odd_power_json(p, d, path)),
    "piecewise_linear": lambda p, d, path: (
        _need(p, {"knots"}, path) or piecewise_linear(_pair_list(p["knots"], f"{path}.params.knots"), d)),
    "grid_samples": lambda p, d, path: (
        _need(p, {"points"}, path) or grid_samples(_pair_list(p["points"], f"{path}.params.points"), d)),
    "piecewise_constant": lambda p, d, path: (
        _need(p, {"breaks", "values"}, path) or piecewise_constant(
            [float(b) for b in p["breaks"]] if isinstance(p["breaks"], list) else _bad(f"{path}.params.breaks"),
            _num_list(p["values"], f"{path}.params.values"), d)),
    "odd_extension": lambda p, d, path: (
        _need(p, {"base"}, path) or odd_extension(
            FunctionSpec.from_json_obj(p["base"], f"{path}.params.base"), d)),
    "point_symmetric_extension": lambda p, d, path: (
        _need(p, {"base", "center"}, path) or point_symmetric_extension(
            FunctionSpec.from_json_obj(p["base"], f"{path}.params.base"),
            _num(p["center"], f"{path}.params.center"), d)),
    "chord": lambda p, d, path: (
        _need(p, {"p1", "p2"}, path) or chord_through(
            _num_list(p["p1"], f"{path}.params.p1"), _num_list(p["p2"], f"{path}.params.p2"), d)),
    "glue": lambda p, d, path: (
        _need(p, {"left", "right", "split"}, path) or glue(
            FunctionSpec.from_json_obj(p["left"], f"{path}.params.left"),
            FunctionSpec.from_json_obj(p["right"], f"{path}.params.right"),
            _num(p["split"], f"{path}.params.split"))),
}


def _bad(path: str):
    raise SchemaError("expected a list of numbers", path)


def _num(v: Any, path: str) -> float:
    if not (isinstance(v, (int, float)) and not isinstance(v, bool)):
        raise SchemaError("expected a number", path)
    return float(v)


def _odd_power_json(p: dict, d: Interval, path: str) -> FunctionSpec:
    e = p["exponent"]
    if not isinstance(e, int) or isinstance(e, bool):
        raise SchemaError("exponent must be an integer", f"{path}.params.exponent")
    return odd_power(e, d)
