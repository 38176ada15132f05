"""Named hypersurface families of Q^3_eps x R with chart maps into the ambient charts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ambient import AmbientSpace
from .jets import cos, cosh, log, sin, sinh

CONSTRAINT_TOL = 1e-12
MIN_RADIUS = 1e-6

FAMILIES = (
    "slice",
    "totally-geodesic-cylinder",
    "umbilical-cylinder",
    "sphere-torus-cylinder",
    "hyperbolic-torus-cylinder",
    "parabolic-helicoid",
)

# families that admit only one sign of the ambient curvature
_FIXED_EPSILON = {
    "sphere-torus-cylinder": 1,
    "hyperbolic-torus-cylinder": -1,
    "parabolic-helicoid": -1,
}

_DEFAULTS = {
    "umbilical-cylinder": {"r1": 1.0},
    "sphere-torus-cylinder": {"r1": 0.6, "r2": 0.8},
    "hyperbolic-torus-cylinder": {"r1": math.sqrt(2.0), "r2": 1.0},
    "parabolic-helicoid": {"B": 1.0},
    "slice": {"t0": 0.0},
}

Box = Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]


class ConfigError(ValueError):
    """Invalid family name, epsilon, or parameters violating a family constraint."""


def _default_box(family: str, eps: int) -> Box:
    if family == "slice":
        return ((-0.5, 0.5), (-0.5, 0.5), (-0.5, 0.5) if eps == 1 else (0.5, 1.5))
    if family == "totally-geodesic-cylinder":
        return ((-0.5, 0.5), (-0.5, 0.5) if eps == 1 else (0.5, 1.5), (0.0, 1.0))
    if family == "umbilical-cylinder":
        return ((0.6, 2.4), (0.0, 3.0), (0.0, 1.0))
    if family == "sphere-torus-cylinder":
        # sin(b) <= 0 keeps the image away from the projection pole
        return ((0.0, 3.0), (3.3, 6.1), (0.0, 1.0))
    if family == "hyperbolic-torus-cylinder":
        return ((-1.0, 1.0), (0.0, 3.0), (0.0, 1.0))
    return ((-1.0, 1.0), (-1.0, 1.0), (0.5, 2.0))


@dataclass(frozen=True)
class Immersion:
    family: str
    epsilon: int
    params: Dict[str, float] = field(default_factory=dict)
    box: Box = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))
    checked: bool = True

    @classmethod
    def create(
        cls,
        family: str,
        epsilon: Optional[int] = None,
        *,
        r1: Optional[float] = None,
        r2: Optional[float] = None,
        B: Optional[float] = None,
        t0: Optional[float] = None,
        box: Optional[Box] = None,
        check: bool = True,
    ) -> "Immersion":
        """Build a family, validating its constraints unless ``check`` is False.

        An unchecked immersion still gets its chart map; it simply carries
        whatever (possibly inconsistent) radii it was given, so downstream
        verification is what decides.
        """
        if family not in FAMILIES:
            raise ConfigError(f"unknown family {family!r}; choose one of {', '.join(FAMILIES)}")
        fixed = _FIXED_EPSILON.get(family)
        if epsilon is None:
            epsilon = fixed if fixed is not None else 1
        if epsilon not in (1, -1):
            raise ConfigError(f"epsilon must be +1 or -1, got {epsilon!r}")
        if fixed is not None and epsilon != fixed:
            raise ConfigError(f"{family} lives only in the epsilon={fixed:+d} ambient")

        given = {"r1": r1, "r2": r2, "B": B, "t0": t0}
        params = dict(_DEFAULTS.get(family, {}))
        for k in list(params):
            if given[k] is not None:
                params[k] = float(given[k])
        extra = [k for k, v in given.items() if v is not None and k not in params]
        if extra:
            raise ConfigError(f"{family} takes no parameter(s) {', '.join(extra)}")
        for k in ("r1", "r2", "B", "t0"):
            if k in params and not math.isfinite(params[k]):
                raise ConfigError(f"{k} must be finite")
        imm = cls(family, epsilon, params, box or _default_box(family, epsilon), check)
        imm._validate(strict=check)
        return imm

    # validation ------------------------------------------------------------
    def _validate(self, strict: bool) -> None:
        p = self.params
        for k in ("r1", "r2"):
            if k in p and p[k] < MIN_RADIUS:
                raise ConfigError(f"{k} = {p[k]} is not a positive radius (domain error)")
        if self.family == "umbilical-cylinder" and self.epsilon == 1 and p["r1"] >= math.pi - 1e-3:
            raise ConfigError("umbilical sphere radius must stay below pi in S^3")
        for lo, hi in self.box:
            if not lo < hi:
                raise ConfigError(f"empty parameter interval [{lo}, {hi}]")
        if not strict:
            return
        defect = self.constraint_defect()
        if defect is not None and abs(defect) > CONSTRAINT_TOL:
            rel = "r1^2 + r2^2" if self.family == "sphere-torus-cylinder" else "r1^2 - r2^2"
            raise ConfigError(f"{self.family} requires {rel} = 1; off by {defect:.3e}")

    def constraint_defect(self) -> Optional[float]:
        p = self.params
        if self.family == "sphere-torus-cylinder":
            return p["r1"] ** 2 + p["r2"] ** 2 - 1.0
        if self.family == "hyperbolic-torus-cylinder":
            return p["r1"] ** 2 - p["r2"] ** 2 - 1.0
        return None

    @property
    def ambient(self) -> AmbientSpace:
        return AmbientSpace(self.epsilon)

    # chart map ---------------------------------------------------------------
    def chart_map(self, u: Sequence) -> List:
        """Ambient chart coordinates (x1, x2, x3, t) of the parameter point ``u``.

        Works for floats, numpy arrays, and jets alike.
        """
        a, b, c = u
        p, eps, fam = self.params, self.epsilon, self.family
        zero = a * 0.0
        if fam == "slice":
            return [a, b, c, zero + p["t0"]]
        if fam == "totally-geodesic-cylinder":
            return [a, b, zero, c] if eps == 1 else [a, zero, b, c]
        if fam == "umbilical-cylinder":
            r = p["r1"]
            if eps == 1:
                rho, centre = math.tan(r / 2.0), 0.0
            else:
                rho, centre = math.sinh(r), math.cosh(r)
            sa = sin(a)
            return [rho * sa * cos(b), rho * sa * sin(b), rho * cos(a) + centre, c]
        if fam == "sphere-torus-cylinder":
            r1, r2 = p["r1"], p["r2"]
            den = 1.0 - r2 * sin(b)
            return [r1 * cos(a) / den, r1 * sin(a) / den, r2 * cos(b) / den, c]
        if fam == "hyperbolic-torus-cylinder":
            r1, r2 = p["r1"], p["r2"]
            den = r1 * cosh(a) - r2 * sin(b)
            return [r1 * sinh(a) / den, r2 * cos(b) / den, 1.0 / den, c]
        # parabolic helicoid over the horospheres w = const, graph t = -B log w
        return [a, b, c, -p["B"] * log(c)]

    # closed-form expectations ------------------------------------------------------
    def expected_curvatures(self) -> Optional[Tuple[float, float, float]]:
        """Principal curvatures up to an overall sign, sorted; None when not known in closed form."""
        p, eps, fam = self.params, self.epsilon, self.family
        if fam in ("slice", "totally-geodesic-cylinder"):
            vals = (0.0, 0.0, 0.0)
        elif fam == "umbilical-cylinder":
            k = 1.0 / math.tan(p["r1"]) if eps == 1 else 1.0 / math.tanh(p["r1"])
            vals = (0.0, k, k)
        elif fam in ("sphere-torus-cylinder", "hyperbolic-torus-cylinder"):
            r1, r2 = p["r1"], p["r2"]
            vals = (0.0, eps * r2 / r1, -r1 / r2)
        else:
            B = p["B"]
            k = B / math.sqrt(1.0 + B * B)
            vals = (0.0, k, k)
        return tuple(sorted(vals))

    def expected_cos_theta(self) -> float:
        if self.family == "slice":
            return 1.0
        if self.family == "parabolic-helicoid":
            return 1.0 / math.sqrt(1.0 + self.params["B"] ** 2)
        return 0.0

    @property
    def vertical(self) -> bool:
        return self.family not in ("slice", "parabolic-helicoid")

    def describe(self) -> Dict[str, object]:
        return {
            "family": self.family,
            "epsilon": self.epsilon,
            "params": dict(sorted(self.params.items())),
            "box": [list(iv) for iv in self.box],
            "constraint_checked": self.checked,
        }
