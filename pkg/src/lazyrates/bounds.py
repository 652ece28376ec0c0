"""Closed-form bounds and the (chi, epsilon, delta) parameter sets.

Two conventions are carried side by side for the concentration parameters:

``paper_literal``
    the displayed exponent formulas, evaluated verbatim;
``proof_consistent``
    the values the derivation actually produces, ``chi = 2 sqrt(d_S/d_E)`` and
    ``chi = 2 sqrt(d_S) / d_E^(1/3)``, with ``epsilon = 2 d_S chi`` from the
    linear near-mixed bound.

For set 1 both conventions give the same ``epsilon``; they differ for ``chi`` by a
factor 2 and, for set 2, in ``epsilon`` as well. All logarithms are base 2.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal, NamedTuple

from .errors import ParameterError

__all__ = [
    "Bound",
    "BoundParameters",
    "lemma2_bound",
    "lemma2_exact_bound",
    "purity_bound",
    "universal_bound",
    "lemma1_params",
    "main_result_params",
    "bounds_report",
]

Variant = Literal["set1", "set2"]
Convention = Literal["paper_literal", "proof_consistent"]
VARIANTS = ("set1", "set2")
CONVENTIONS = ("paper_literal", "proof_consistent")


class Bound(NamedTuple):
    value: float
    applicable: bool


def _nonneg(**kw):
    for name, v in kw.items():
        if not v >= 0:
            raise ParameterError(f"{name} must be nonnegative, got {v!r}")


def lemma2_bound(chi: float, d_S: int, strength: float = 1.0) -> Bound:
    """Entropy-rate bound ``2 * strength * d_S * chi`` for states ``chi``-close to mixed.

    Valid when ``chi <= 1/d_S`` and ``d_S >= 2``; outside that window the value is
    still returned, flagged ``applicable=False``.
    """
    _nonneg(chi=chi, strength=strength)
    if d_S < 2:
        raise ParameterError(f"d_S must be at least 2, got {d_S!r}")
    return Bound(float(2.0 * strength * d_S * chi), bool(chi <= 1.0 / d_S))


def lemma2_exact_bound(chi: float, d_S: int, strength: float = 1.0) -> float:
    """``2 * strength * (-log2(1 - d_S chi / 2))``, the bound before linearisation."""
    _nonneg(chi=chi, strength=strength)
    if d_S < 2:
        raise ParameterError(f"d_S must be at least 2, got {d_S!r}")
    x = 0.5 * d_S * chi
    if x > 0.5 * (1 + 1e-12):
        raise ParameterError(f"chi={chi!r} is outside the window chi <= 1/d_S = {1 / d_S!r}")
    return -2.0 * strength * math.log2(1.0 - min(x, 0.5))


def purity_bound(chi: float, strength: float = 1.0) -> float:
    """``strength * chi``; bounds ``||[rho_S (x) I, rho]||_1`` per unit strength."""
    _nonneg(chi=chi, strength=strength)
    return strength * chi


def universal_bound(d_S: int, strength: float = 1.0) -> float:
    """``4 * strength * log2(d_S)``, valid for every state."""
    if d_S < 1:
        raise ParameterError(f"d_S must be positive, got {d_S!r}")
    _nonneg(strength=strength)
    return 4.0 * strength * math.log2(d_S)


@dataclass(frozen=True)
class BoundParameters:
    """One row of concentration parameters.

    ``chi`` is the near-mixed threshold, ``epsilon`` the entropy-rate threshold
    (``None`` for pure near-mixed rows) and ``delta`` the failure probability.
    ``applicable`` reports the validity constraint of the row: ``chi <= 1/d_S``
    for near-mixed rows, the stated dimension constraint for main-result rows.
    """

    source: str
    variant: str
    convention: str
    d_S: int
    d_E: int
    chi: float
    epsilon: float | None
    delta: float
    applicable: bool

    @property
    def vacuous(self) -> bool:
        return self.delta >= 1.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["vacuous"] = self.vacuous
        return d


def _check_dims(d_S, d_E):
    for name, v in (("d_S", d_S), ("d_E", d_E)):
        if isinstance(v, bool) or int(v) != v or v < 2:
            raise ParameterError(f"{name} must be an integer >= 2, got {v!r}")
    return int(d_S), int(d_E)


def _check_choice(variant, convention):
    if variant not in VARIANTS:
        raise ParameterError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if convention not in CONVENTIONS:
        raise ParameterError(f"convention must be one of {CONVENTIONS}, got {convention!r}")


def _delta(variant: str, d_S: int, d_E: int) -> float:
    if variant == "set1":
        return 2.0 * math.exp(-d_S**2 / 16.0)
    return 2.0 * math.exp(-d_S * d_E ** (1.0 / 3.0) / 16.0)


def _chi(variant: str, convention: str, d_S: int, d_E: int) -> float:
    lS, lE = math.log2(d_S), math.log2(d_E)
    if convention == "paper_literal":
        if variant == "set1":
            return 2.0 ** (-0.5 * (lE - lS - 4.0))
        return 2.0 ** (-(lE - 1.5 * lS - 5.0) / 3.0)
    if variant == "set1":
        return 2.0 * math.sqrt(d_S / d_E)
    return 2.0 * math.sqrt(d_S) / d_E ** (1.0 / 3.0)


def lemma1_params(d_S: int, d_E: int, variant: Variant = "set1",
                  convention: Convention = "paper_literal") -> BoundParameters:
    """``(chi, delta)`` such that ``Pr[||rho_S - I/d_S||_1 >= chi] <= delta``."""
    d_S, d_E = _check_dims(d_S, d_E)
    _check_choice(variant, convention)
    chi = _chi(variant, convention, d_S, d_E)
    return BoundParameters("lemma1", variant, convention, d_S, d_E, chi, None,
                           _delta(variant, d_S, d_E), chi <= 1.0 / d_S)


def main_result_params(d_S: int, d_E: int, variant: Variant = "set1",
                       convention: Convention = "paper_literal") -> BoundParameters:
    """``(epsilon, delta)`` such that ``Pr[|dH(S)/dt| >= ||H_int|| epsilon] <= delta``.

    ``applicable`` is ``log d_E > 3 log d_S`` for set 1 and
    ``log d_E > (9/2) log d_S`` for set 2, decided in exact integer arithmetic.
    """
    d_S, d_E = _check_dims(d_S, d_E)
    _check_choice(variant, convention)
    lS, lE = math.log2(d_S), math.log2(d_E)
    chi = _chi(variant, convention, d_S, d_E)
    if convention == "proof_consistent":
        eps = 2.0 * d_S * chi
    elif variant == "set1":
        eps = 2.0 ** (-0.5 * (lE - 3.0 * lS - 4.0))
    else:
        eps = 2.0 ** (-0.5 * (lE - 4.5 * lS - 5.0))
    applicable = d_E > d_S**3 if variant == "set1" else d_E**2 > d_S**9
    return BoundParameters("main", variant, convention, d_S, d_E, chi, eps,
                           _delta(variant, d_S, d_E), applicable)


def bounds_report(d_S: int, d_E: int) -> list[BoundParameters]:
    """Every (source, variant, convention) row for one dimension pair."""
    rows = []
    for fn in (lemma1_params, main_result_params):
        for variant in VARIANTS:
            for convention in CONVENTIONS:
                rows.append(fn(d_S, d_E, variant, convention))
    return rows


def format_bounds_table(rows: list[BoundParameters]) -> str:
    header = f"{'source':<7}{'set':<6}{'convention':<18}{'chi':>12}{'epsilon':>12}{'delta':>12}  applicable  vacuous"
    lines = [header, "-" * len(header)]
    for r in rows:
        eps = "-" if r.epsilon is None else f"{r.epsilon:.6g}"
        lines.append(
            f"{r.source:<7}{r.variant:<6}{r.convention:<18}{r.chi:>12.6g}{eps:>12}{r.delta:>12.6g}"
            f"  {str(r.applicable):<10}  {r.vacuous}"
        )
    return "\n".join(lines)
