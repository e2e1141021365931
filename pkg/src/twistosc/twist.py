"""Deformation functions f_kappa(t) controlling [x1, x2] = i f_kappa(t).

Five single-term families are supported.  ``constant`` reproduces the
canonical (theta) deformation; the trigonometric and hyperbolic families
use the argument t / tau.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import InvalidParameterError


class Family(str, enum.Enum):
    CONSTANT = "constant"
    SIN = "sin"
    COS = "cos"
    SINH = "sinh"
    COSH = "cosh"


_SHAPES = {
    Family.SIN: math.sin,
    Family.COS: math.cos,
    Family.SINH: math.sinh,
    Family.COSH: math.cosh,
}


@dataclass(frozen=True)
class TwistFunction:
    """A deformation function ``kappa * shape(t / tau)``.

    ``tau`` is ignored for the constant family.
    """

    family: Family
    kappa: float
    tau: float = 1.0

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if not math.isfinite(self.kappa):
            raise InvalidParameterError(f"kappa must be finite, got {self.kappa!r}")
        if family is not Family.CONSTANT and not (self.tau > 0 and math.isfinite(self.tau)):
            raise InvalidParameterError(
                f"tau must be positive for the {family.value} family, got {self.tau!r}"
            )

    def __call__(self, t: float) -> float:
        return eval_twist(self, t)

    def to_dict(self) -> dict:
        d = {"family": self.family.value, "kappa": self.kappa}
        if self.family is not Family.CONSTANT:
            d["tau"] = self.tau
        return d

    def to_spec(self) -> str:
        return ",".join(f"{k}={v}" for k, v in self.to_dict().items())


def make_twist(family, kappa: float, tau: float | None = None) -> TwistFunction:
    try:
        family = Family(str(family).lower()) if not isinstance(family, Family) else family
    except ValueError:
        names = ", ".join(f.value for f in Family)
        raise InvalidParameterError(f"unknown twist family {family!r} (expected one of {names})")
    if tau is None:
        if family is not Family.CONSTANT:
            raise InvalidParameterError(f"the {family.value} family needs tau")
        tau = 1.0
    return TwistFunction(family, float(kappa), float(tau))


def eval_twist(tf: TwistFunction, t: float) -> float:
    if tf.family is Family.CONSTANT:
        return tf.kappa
    try:
        return tf.kappa * _SHAPES[tf.family](t / tf.tau)
    except OverflowError as exc:
        raise OverflowError(
            f"{tf.family.value}(t/tau) overflows at t={t!r}, tau={tf.tau!r}"
        ) from exc


def parse_twist(text: str) -> TwistFunction:
    """Parse ``family=sin,kappa=2.0,tau=1.0`` into a :class:`TwistFunction`."""
    fields = {}
    for item in filter(None, (part.strip() for part in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise InvalidParameterError(f"malformed twist field {item!r}; expected key=value")
        fields[key.strip().lower()] = value.strip()
    unknown = set(fields) - {"family", "kappa", "tau"}
    if unknown:
        raise InvalidParameterError(f"unknown twist keys: {', '.join(sorted(unknown))}")
    if "family" not in fields:
        raise InvalidParameterError("twist spec needs a family")
    try:
        kappa = float(fields.get("kappa", 0.0))
        tau = float(fields["tau"]) if "tau" in fields else None
    except ValueError as exc:
        raise InvalidParameterError(f"bad number in twist spec {text!r}") from exc
    return make_twist(fields["family"], kappa, tau)
