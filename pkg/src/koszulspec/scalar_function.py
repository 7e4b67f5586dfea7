"""Scalar functions on the non-negative half line used by the polar transform."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SpecError

KINDS = ("identity", "power", "inverse-power", "log", "exp", "polynomial")


@dataclass(frozen=True)
class Interval:
    """Admissible interval ``[lo, hi)`` or ``(lo, hi)`` of the real line."""

    lo: float
    hi: float = np.inf
    lo_open: bool = False

    def contains(self, t: np.ndarray, tol: float = 0.0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.lo_open:
            lower = t > self.lo
        else:
            lower = t >= self.lo - tol
        return lower & (t <= self.hi)

    def describe(self) -> str:
        left = "(" if self.lo_open else "["
        return f"{left}{self.lo:g}, {self.hi:g})"


@dataclass(frozen=True)
class ScalarFunction:
    """A function ``f`` applied to moduli and to positive polar factors.

    Build instances with the class constructors (``power``, ``log``, ...)
    rather than directly. ``exponent`` is only meaningful for the power kinds
    and ``coefficients`` (ascending order) only for polynomials.
    """

    kind: str
    exponent: float | None = None
    coefficients: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown function kind {self.kind!r}")
        if self.kind in ("power", "inverse-power"):
            if self.exponent is None or not self.exponent > 0:
                raise SpecError("power exponents must be positive reals")
        if self.kind == "polynomial" and not self.coefficients:
            raise SpecError("polynomial needs at least one coefficient")

    @classmethod
    def identity(cls) -> ScalarFunction:
        return cls("identity")

    @classmethod
    def power(cls, exponent: float) -> ScalarFunction:
        return cls("power", exponent=float(exponent))

    @classmethod
    def p_power(cls, p: float) -> ScalarFunction:
        """``t**(2p)``, the transform attached to p-hyponormal operators."""
        return cls.power(2.0 * p)

    @classmethod
    def inverse_power(cls, exponent: float) -> ScalarFunction:
        return cls("inverse-power", exponent=float(exponent))

    @classmethod
    def log(cls) -> ScalarFunction:
        return cls("log")

    @classmethod
    def exp(cls) -> ScalarFunction:
        return cls("exp")

    @classmethod
    def polynomial(cls, coefficients) -> ScalarFunction:
        return cls("polynomial", coefficients=tuple(float(c) for c in coefficients))

    @classmethod
    def parse(cls, text: str) -> ScalarFunction:
        """Parse the CLI notation: ``identity``, ``power:EXP``, ``inverse-power:EXP``,
        ``log``, ``exp`` or ``poly:c0,c1,...``."""
        name, _, arg = text.strip().partition(":")
        try:
            if name == "identity":
                return cls.identity()
            if name == "power":
                return cls.power(float(arg))
            if name == "inverse-power":
                return cls.inverse_power(float(arg))
            if name == "log":
                return cls.log()
            if name == "exp":
                return cls.exp()
            if name in ("poly", "polynomial"):
                return cls.polynomial(float(c) for c in arg.split(","))
        except ValueError as exc:
            raise SpecError(f"cannot parse function {text!r}: {exc}") from None
        raise SpecError(f"unknown function {text!r}")

    @property
    def domain(self) -> Interval:
        if self.kind in ("log", "inverse-power"):
            return Interval(0.0, lo_open=True)
        if self.kind == "power":
            return Interval(0.0)
        # entire functions also act on indefinite Hermitian matrices
        return Interval(-np.inf)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "identity":
            return t.copy()
        if self.kind in ("power", "inverse-power"):
            return np.power(np.maximum(t, 0.0), self.exponent)
        if self.kind == "log":
            return np.log(t)
        if self.kind == "exp":
            return np.exp(t)
        return np.polynomial.polynomial.polyval(t, self.coefficients)

    def check_domain(self, values, tol: float = 0.0, what: str = "value") -> None:
        """Raise :class:`DomainError` naming the first offending value."""
        values = np.atleast_1d(np.asarray(values, dtype=float))
        ok = self.domain.contains(values, tol)
        if not ok.all():
            bad = values[~ok][0]
            raise DomainError(
                f"{what} {bad:.6g} lies outside the domain {self.domain.describe()} "
                f"of {self.label}"
            )

    def inverse(self) -> ScalarFunction:
        """Inverse on the image of the positive half line, where one exists."""
        if self.kind == "identity":
            return self
        if self.kind == "power":
            return ScalarFunction.inverse_power(1.0 / self.exponent)
        if self.kind == "inverse-power":
            return ScalarFunction.power(1.0 / self.exponent)
        if self.kind == "log":
            return ScalarFunction.exp()
        if self.kind == "exp":
            return ScalarFunction.log()
        raise DomainError("polynomials have no registered inverse")

    @property
    def label(self) -> str:
        if self.kind in ("power", "inverse-power"):
            return f"{self.kind}:{self.exponent:g}"
        if self.kind == "polynomial":
            return "poly:" + ",".join(f"{c:g}" for c in self.coefficients)
        return self.kind

    def describe(self) -> dict:
        out = {"kind": self.kind, "label": self.label, "domain": self.domain.describe()}
        if self.exponent is not None:
            out["exponent"] = self.exponent
        if self.coefficients:
            out["coefficients"] = list(self.coefficients)
        return out
