"""Validity conditions and analytic strength formulas as dimensionless ratios.

Every adiabaticity condition of the scheme is evaluated as a named
nonnegative ratio with a pass/warn threshold (0.15 for the "much smaller
than one" conditions, 0.1 for the spectral-separation one, both
configurable).  Ratios that need the Raman pair when it is absent are
marked ``not_evaluated`` rather than failed: the eliminated-tier scenarios
never use them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .models import SchemeParams, derive_params

DEFAULT_THRESHOLD = 0.15
SEPARATION_THRESHOLD = 0.1


@dataclass(frozen=True)
class RatioEntry:
    value: float | None
    threshold: float
    status: str  # "pass" | "warn" | "not_evaluated"


@dataclass(frozen=True)
class EnhancedStrength:
    """Atom-number-boosted nonlinearity at the optimizing theta choice.

    ``strength`` is the literal N (g^2/2 D1)^2 / theta_choice =
    N^{3/4} g^2/(2 D1); ``simple_estimate`` is the order-of-magnitude form
    (sqrt(N) g / D1) N^{1/4} g, which carries an extra factor 2.  Both are
    reported so the bookkeeping difference stays visible.
    """

    theta_choice: float
    strength: float
    simple_estimate: float


@dataclass(frozen=True)
class RegimeReport:
    ratios: dict
    strengths: dict
    notes: tuple = field(default_factory=tuple)

    @property
    def worst_status(self) -> str:
        statuses = [r.status for r in self.ratios.values()]
        return "warn" if "warn" in statuses else "pass"

    def to_dict(self) -> dict:
        return {
            "ratios": {
                name: {"value": r.value, "threshold": r.threshold,
                       "status": r.status}
                for name, r in self.ratios.items()
            },
            "strengths": dict(self.strengths),
            "notes": list(self.notes),
        }


def kerr_strength(p: SchemeParams) -> float:
    """kappa = N g^4 / (4 delta1^2 theta)."""
    return derive_params(p).kappa


def enhanced_strength(p: SchemeParams) -> EnhancedStrength:
    """Strength at theta chosen so (g^2/2 delta1)/theta = N^{-1/4}."""
    p = derive_params(p)
    n = p.n_atoms
    x = p.stark
    theta_choice = n**0.25 * x
    strength = n * x**2 / theta_choice          # = N^{3/4} g^2 / (2 delta1)
    estimate = (math.sqrt(n) * p.g / p.delta1) * n**0.25 * p.g
    return EnhancedStrength(theta_choice, strength, estimate)


def check(p: SchemeParams, thresholds: dict | None = None) -> RegimeReport:
    """Evaluate every validity ratio and strength for a parameter set."""
    p = derive_params(p)
    th = {"default": DEFAULT_THRESHOLD, "separation": SEPARATION_THRESHOLD}
    th.update(thresholds or {})

    def threshold(name):
        return float(th.get(name, th["default"]))

    sqrt_n = math.sqrt(p.n_atoms)
    g, d1, theta = abs(p.g), abs(p.delta1), abs(p.theta)
    x = g**2 / (2 * d1)

    values: dict = {
        "dispersive_cavity": sqrt_n * g / d1,
        "second_dispersive": sqrt_n * x / theta,
        "rot_condition": (x / theta) ** 3 * sqrt_n,
    }
    if p.lam is not None:
        lam, d2 = abs(p.lam), abs(p.delta2)
        values["dispersive_laser"] = sqrt_n * lam / d2
        values["separation"] = max(sqrt_n * g, sqrt_n * lam) / abs(p.delta2 - p.delta1)
        values["footnote_ratio"] = (lam**3 / d2**2) / (g**2 / d1)
    else:
        values["dispersive_laser"] = None
        values["separation"] = None
        values["footnote_ratio"] = None

    ratios = {}
    order = ("dispersive_cavity", "dispersive_laser", "separation",
             "second_dispersive", "rot_condition", "footnote_ratio")
    for name in order:
        v = values[name]
        tol = threshold(name)
        if v is None:
            ratios[name] = RatioEntry(None, tol, "not_evaluated")
        else:
            ratios[name] = RatioEntry(float(v), tol,
                                      "pass" if v <= tol else "warn")

    enh = enhanced_strength(p)
    strengths = {
        "kappa": p.kappa,
        "rot_strength": p.n_atoms * p.stark**2 / p.theta,
        "theta_choice": enh.theta_choice,
        "enhanced_exact": enh.strength,
        "enhanced_simple_estimate": enh.simple_estimate,
    }
    notes = [
        "enhanced_exact is N (g^2/2 delta1)^2 / theta_choice; "
        "enhanced_simple_estimate is (sqrt(N) g/delta1) N^(1/4) g, "
        "a factor 2 larger -- both reported on purpose.",
    ]
    if values["footnote_ratio"] is None:
        notes.append("laser ratios not evaluated: no (lam, delta2) supplied.")
    return RegimeReport(ratios, strengths, tuple(notes))
