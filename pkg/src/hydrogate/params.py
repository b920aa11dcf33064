"""System parameters for the hydrodynamic-gating transmitter.

All quantities are SI internally (m, s, mol/m^3, Pa.s). Config files and the
calibration scenario table use the same convention; conversion from the
mm / mM bench units happens once, in the tables below.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .errors import InvalidParameter, LengthMismatch, UnknownParameter

_REL_TOL = 1e-12


@dataclass(frozen=True)
class SystemParameters:
    """Single source of truth for one run of the transmitter model.

    Defaults reproduce the bench-top reference configuration: a cross
    junction with a 12.5 mm supply channel, 5 mm wide channels, and a
    87.5 mm propagation channel.
    """

    c_s: float = 1e-2     # supply concentration, mol/m^3
    u_s: float = 1e-2     # supply mean velocity, m/s
    r_u: float = 5.0      # gating/supply velocity ratio, u_g = r_u * u_s
    D: float = 1e-10      # ligand diffusivity, m^2/s
    T_g: float = 2.0      # gating-off (injection) duration, s
    T_p: float = 2.0      # period between consecutive gatings, s
    l_s: float = 12.5e-3  # supply channel length, m
    l_gi: float = 12.5e-3  # gating inlet arm length, m
    l_go: float = 12.5e-3  # gating outlet arm length, m
    l_p: float = 87.5e-3  # propagation channel length (incl. junction), m
    l_ch: float = 100e-3  # main channel total length, l_s + l_p, m
    w_ch: float = 5e-3    # channel width, m
    x_g: float = 25e-3    # pulse generation point, m
    x_s: float = 80e-3    # pulse sampling point, m
    t_g: float = 12.18    # pulse generation time, s
    t_s: float = 15.19    # pulse sampling time, s
    mu: float = 1.0e-3    # dynamic viscosity, Pa.s (water)

    @property
    def u_g(self) -> float:
        """Gating inlet mean velocity, m/s."""
        return self.r_u * self.u_s

    def replace(self, **changes) -> "SystemParameters":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


_FIELDS = {f.name for f in dataclasses.fields(SystemParameters)}

# Quantities that must be strictly positive.
_POSITIVE = ("c_s", "u_s", "T_g", "T_p", "l_s", "l_gi", "l_go", "l_p",
             "l_ch", "w_ch", "x_g", "x_s", "t_g", "t_s", "mu")

# Admissible override ranges for calibration scenarios (SI units). Spans
# cover the scenario table with headroom; overrides outside are rejected.
ADMISSIBLE = {
    "c_s": (1e-4, 100.0),
    "u_s": (1e-4, 0.1),
    "r_u": (0.0, 50.0),
    "T_g": (0.1, 10.0),
    "l_ch": (20e-3, 0.5),
    "l_go": (1e-3, 0.1),
}


def validate(p: SystemParameters) -> SystemParameters:
    """Check all invariants, returning ``p`` unchanged if they hold."""
    for name in _POSITIVE:
        v = getattr(p, name)
        if not (v > 0):
            raise InvalidParameter(name, f"must be strictly positive, got {v}")
    if p.D < 0:
        raise InvalidParameter("D", f"must be non-negative, got {p.D}")
    if p.r_u < 0:
        raise InvalidParameter("r_u", f"must be non-negative, got {p.r_u}")
    if abs(p.l_ch - (p.l_s + p.l_p)) > _REL_TOL * p.l_ch:
        raise LengthMismatch(
            f"l_ch = {p.l_ch} but l_s + l_p = {p.l_s + p.l_p}")
    if not (p.x_g < p.x_s <= p.l_ch):
        raise InvalidParameter("x_s", f"need x_g < x_s <= l_ch, got "
                               f"x_g={p.x_g}, x_s={p.x_s}, l_ch={p.l_ch}")
    if p.x_g < p.l_s:
        raise InvalidParameter("x_g", f"must lie at or past the junction "
                               f"(x_g >= l_s = {p.l_s}), got {p.x_g}")
    return p


def from_dict(d: dict) -> SystemParameters:
    """Build validated parameters from a config mapping (SI units).

    Unknown keys are an error. A redundant ``u_g`` key is accepted only
    if it is consistent with ``r_u * u_s``.
    """
    d = dict(d)
    u_g = d.pop("u_g", None)
    unknown = set(d) - _FIELDS
    if unknown:
        raise UnknownParameter(f"unknown config keys: {sorted(unknown)}")
    p = SystemParameters(**d)
    if u_g is not None and abs(u_g - p.u_g) > 1e-9 * max(abs(u_g), p.u_g):
        raise InvalidParameter(
            "u_g", f"inconsistent with r_u * u_s = {p.u_g}, got {u_g}")
    return validate(p)


def from_json(text: str) -> SystemParameters:
    return from_dict(json.loads(text))


def load_config(path) -> SystemParameters:
    with open(path) as fh:
        return from_dict(json.load(fh))


@dataclass(frozen=True)
class Scenario:
    """One calibration scenario: exactly one parameter changed from base."""

    name: str
    overrides: dict
    base: SystemParameters

    def __post_init__(self):
        for k, v in self.overrides.items():
            if k not in ADMISSIBLE:
                raise UnknownParameter(f"scenario parameter {k!r} is not "
                                       f"sweepable")
            lo, hi = ADMISSIBLE[k]
            if not (lo <= v <= hi):
                raise InvalidParameter(k, f"{v} outside admissible "
                                       f"range [{lo}, {hi}]")

    @property
    def params(self) -> SystemParameters:
        return apply_overrides(self.base, self.overrides)


def apply_overrides(base: SystemParameters, overrides: dict) -> SystemParameters:
    """Apply scenario overrides, keeping the l_ch = l_s + l_p identity.

    Channel-length overrides hold l_s fixed and stretch l_p, so the
    junction does not move. Gating-outlet overrides keep the arm
    mirrored on the supply segment (l_go = l_s, hence
    l_go + l_p = l_ch), which is what makes the circuit divider reduce
    to the l_go/l_ch closed form.
    """
    changes = dict(overrides)
    l_ch = changes.get("l_ch", base.l_ch)
    if "l_go" in changes:
        changes["l_s"] = changes["l_go"]
        changes["l_gi"] = changes["l_go"]
        changes["l_p"] = l_ch - changes["l_go"]
        # the generation point rides with the junction
        changes["x_g"] = base.x_g + (changes["l_go"] - base.l_go)
    elif "l_ch" in changes:
        changes["l_p"] = l_ch - base.l_s
    return validate(base.replace(**changes))


# Scenario table: 6 parameters x 5 values, SI units (concentrations in
# mol/m^3, velocities in m/s, lengths in m). Row-major expansion order.
SCENARIO_TABLE = (
    ("c_s", (1.0, 10.0, 20.0, 30.0, 40.0), "mM"),
    ("u_s", (10e-3, 11e-3, 12e-3, 13e-3, 15e-3), "mm/s"),
    ("r_u", (1.0, 2.0, 3.0, 4.0, 10.0), ""),
    ("T_g", (1.0, 2.0, 3.0, 4.0, 5.0), "s"),
    ("l_ch", (100e-3, 110e-3, 120e-3, 130e-3, 200e-3), "mm"),
    ("l_go", (12.5e-3, 13.5e-3, 14.5e-3, 15.5e-3, 25e-3), "mm"),
)

_UNIT_SCALE = {"mM": 1.0, "mm/s": 1e3, "": 1.0, "s": 1.0, "mm": 1e3}


def _scenario_name(param: str, value: float, unit: str) -> str:
    shown = value * _UNIT_SCALE[unit]
    if shown == int(shown):
        shown = int(shown)
    return f"{param}={shown}{unit}"


def expand_scenarios(base: SystemParameters) -> list[Scenario]:
    """Expand the 30-scenario calibration protocol, row-major."""
    validate(base)
    out = []
    for param, values, unit in SCENARIO_TABLE:
        for v in values:
            out.append(Scenario(_scenario_name(param, v, unit),
                                {param: v}, base))
    return out
