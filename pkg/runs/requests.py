"""
Run request models shared by the command line and the HTTP API.

Defaults come from Settings, so both surfaces behave the same way.
"""

import re
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import get_settings
from monge_ampere.errors import ConfigurationError
from monge_ampere.measures import DiracSpread
from monge_ampere.operator import EpsilonSign
from monge_ampere.poisson import PoissonMethod
from monge_ampere.solvers import InitialGuess, SamplingMode, SolverMethod, StoppingRule

_POWER = re.compile(r"^1/(\d+)\^(\d+)$")
_RECIPROCAL = re.compile(r"^1/(\d+)$")


def parse_h(text: str | float | Fraction) -> Fraction:
    """Accept 1/2^k, 1/n or a decimal; return the mesh length as a Fraction."""
    if isinstance(text, Fraction):
        value = text
    elif isinstance(text, (int, float)):
        value = Fraction(str(text))
    else:
        raw = text.strip().replace(" ", "")
        if match := _POWER.match(raw) or _RECIPROCAL.match(raw):
            base = int(match.group(1))
            if base == 0:
                raise ConfigurationError(f"invalid mesh length {text!r}")
            exponent = int(match.group(2)) if match.re is _POWER else 1
            value = Fraction(1, base ** exponent)
        else:
            try:
                value = Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise ConfigurationError(f"invalid mesh length {text!r}") from None
    if value <= 0:
        raise ConfigurationError(f"mesh length must be positive, got {text!r}")
    return value


def parse_h_list(text: str | list) -> list[Fraction]:
    items = text.split(",") if isinstance(text, str) else list(text)
    items = [item for item in items if str(item).strip()]
    if not items:
        raise ConfigurationError("h list is empty")
    return [parse_h(item) for item in items]


def _method(value: str | SolverMethod) -> SolverMethod:
    if value == "precond":
        return SolverMethod.PRECONDITIONED
    return SolverMethod(value)


def _setting(name: str):
    return lambda: getattr(get_settings(), name)


class SolverOptions(BaseModel):
    """Fields shared by every run kind."""

    model_config = ConfigDict(validate_default=True)

    method: SolverMethod = SolverMethod.PRECONDITIONED
    mu: float = Field(default_factory=_setting("mu"), gt=0)
    tol: float = Field(default_factory=_setting("tol"), gt=0)
    max_iter: int = Field(default_factory=_setting("max_iter"), ge=1)
    stencil_width: int = Field(default_factory=_setting("stencil_width"), ge=1)
    epsilon: float = Field(default_factory=_setting("epsilon"), ge=0)
    epsilon_sign: EpsilonSign = Field(default_factory=_setting("epsilon_sign"))
    init: str = "exact"
    poisson: PoissonMethod = Field(default_factory=_setting("poisson"))
    poisson_tol: float = Field(default_factory=_setting("poisson_tol"), gt=0, lt=1)
    poisson_max_iter: int = Field(default_factory=_setting("poisson_max_iter"), ge=1)
    dirac_spread: DiracSpread = Field(default_factory=_setting("dirac_spread"))
    stopping: StoppingRule = Field(default_factory=_setting("stopping"))
    threads: Optional[int] = Field(default_factory=_setting("threads"))

    @field_validator("method", mode="before")
    @classmethod
    def normalize_method(cls, v):
        return _method(v)

    @field_validator("init")
    @classmethod
    def validate_init(cls, v: str) -> str:
        if v in ("exact", "extension") or (v.startswith("file:") and len(v) > 5):
            return v
        raise ValueError("init must be exact, extension or file:PATH")

    @property
    def initial_guess(self) -> InitialGuess:
        if self.init.startswith("file:"):
            return InitialGuess.CUSTOM
        return InitialGuess(self.init)

    @property
    def init_path(self) -> Optional[str]:
        return self.init[len("file:"):] if self.init.startswith("file:") else None


class SolveRequest(SolverOptions):
    problem: str
    h: str | float


class StudyRequest(SolverOptions):
    problem: str
    h_list: list[str | float] = Field(..., min_length=1)


class VerifyRequest(SolverOptions):
    suites: list[str] = Field(..., min_length=1)
    h: Optional[str | float] = None
    h_list: Optional[list[str | float]] = None
    method: Optional[SolverMethod] = None
    trials: Optional[int] = Field(None, ge=1)
    seed: int = Field(default_factory=_setting("seed"))
    sampling: SamplingMode = SamplingMode.SMOOTH
    retry_mu: list[float] = Field(default_factory=lambda: [500.0])

    @field_validator("method", mode="before")
    @classmethod
    def normalize_method(cls, v):
        return None if v is None else _method(v)
