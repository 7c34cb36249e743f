"""Exception hierarchy shared by every module.

Two families matter to callers: *structural* problems with the input
(malformed meshes, complexes, configs) and *refusals*, where the input is
well formed but the requested quantity is undefined (an exceptional weight)
or cannot be certified (a spectrum that stops short of the needed cutoff).
"""

from __future__ import annotations


class ConifoldError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ConifoldError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class StructuralError(ConifoldError, ValueError):
    """Malformed geometric or combinatorial input."""


class InputError(ConifoldError, ValueError):
    """Required data is missing or inconsistent."""


class NumericError(ConifoldError, ArithmeticError):
    """A floating-point computation failed its accuracy check."""

    def __init__(self, message: str, residuals=None):
        super().__init__(message)
        self.residuals = list(residuals) if residuals is not None else []


class Refusal(ConifoldError):
    """Base for well-formed requests that the toolkit declines to answer."""

    def details(self) -> dict:
        return {}


class CompletenessError(Refusal):
    """A spectrum is not known far enough to certify an interval scan."""

    def __init__(self, required_cutoff, available_cutoff, end_index: int | None = None):
        self.required_cutoff = required_cutoff
        self.available_cutoff = available_cutoff
        self.end_index = end_index
        where = "" if end_index is None else f" on end {end_index}"
        super().__init__(
            f"spectrum{where} is complete only up to {available_cutoff}; "
            f"need eigenvalues up to {required_cutoff}"
        )

    def details(self) -> dict:
        return {
            "reason": "incomplete spectrum",
            "end": self.end_index,
            "required_cutoff": self.required_cutoff,
            "available_cutoff": self.available_cutoff,
        }


class ExceptionalWeightError(Refusal):
    """A weight coincides with an exceptional value, so nothing is Fredholm."""

    def __init__(self, end_index: int, weight, witness, required_cutoff=None):
        self.end_index = end_index
        self.weight = weight
        self.witness = witness
        self.required_cutoff = required_cutoff
        super().__init__(
            f"weight {weight} on end {end_index} is exceptional "
            f"(gamma={witness.gamma}, multiplicity {witness.multiplicity})"
        )

    def details(self) -> dict:
        return {
            "reason": "exceptional weight",
            "end": self.end_index,
            "weight": self.weight,
            "gamma": self.witness.gamma,
            "multiplicity": self.witness.multiplicity,
            "required_cutoff": self.required_cutoff,
        }
