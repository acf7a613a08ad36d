"""Reference nearest-level-spacing distributions.

All densities are supported on s >= 0. The Ginibre law is the infinite-N
complex Gaussian ensemble result truncated at n_trunc terms and evaluated in
the log domain; `ginibre_c` is its mean spacing, used to rescale it to unit
mean.
"""

import logging
from enum import StrEnum
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate, special

from src.config import settings
from src.exceptions import ParameterError

logger = logging.getLogger(__name__)

MIN_TRUNCATION = 50
SAMPLING_GRID_MAX = 8.0
SAMPLING_GRID_POINTS = 8001


class ReferenceKind(StrEnum):
    GINIBRE_COMPLEX = "ginibre_complex"
    POISSON_REAL = "poisson_real"
    POISSON_COMPLEX = "poisson_complex"
    SUB_WIGNER = "sub_wigner"


def _check_truncation(n_trunc: int) -> None:
    if n_trunc < MIN_TRUNCATION:
        raise ParameterError(f"Ginibre truncation must be at least {MIN_TRUNCATION}, got {n_trunc}")


def _log_gap_terms(s: np.ndarray, n_trunc: int) -> tuple[np.ndarray, np.ndarray]:
    """ln Q(n+1, s^2) for n = 1 .. n_trunc-1, one row per s."""
    n = np.arange(1, n_trunc, dtype=float)
    x = np.square(s)[:, None]
    with np.errstate(divide="ignore"):
        log_q = np.log(special.gammaincc(n[None, :] + 1.0, x))
    return n, log_q


def ginibre_gap_probability(s, n_trunc: int | None = None) -> np.ndarray:
    """Probability that no other level lies within distance s (unscaled)."""
    n_trunc = settings.GINIBRE_TRUNCATION if n_trunc is None else n_trunc
    _check_truncation(n_trunc)
    values = np.atleast_1d(np.asarray(s, dtype=float))
    _, log_q = _log_gap_terms(values, n_trunc)
    return np.exp(log_q.sum(axis=1))


def ginibre_pdf(s, n_trunc: int | None = None) -> np.ndarray | float:
    """Unscaled Ginibre spacing density p(s).

    p(s) = prod_n e_n(s^2) e^{-s^2} * sum_n 2 s^{2n+1} / (n! e_n(s^2)),
    with e_n(x) e^{-x} = Q(n+1, x) the regularized upper incomplete gamma.
    """
    n_trunc = settings.GINIBRE_TRUNCATION if n_trunc is None else n_trunc
    _check_truncation(n_trunc)
    scalar = np.ndim(s) == 0
    values = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(values < 0):
        raise ParameterError("spacings must be non-negative")

    result = np.zeros_like(values)
    positive = values > 0
    if np.any(positive):
        sp = values[positive]
        n, log_q = _log_gap_terms(sp, n_trunc)
        log_s = np.log(sp)[:, None]
        log_terms = (
            np.log(2.0)
            + (2.0 * n[None, :] + 1.0) * log_s
            - np.square(sp)[:, None]
            - special.gammaln(n[None, :] + 1.0)
            - log_q
        )
        with np.errstate(invalid="ignore"):
            log_p = log_q.sum(axis=1) + special.logsumexp(log_terms, axis=1)
        result[positive] = np.nan_to_num(np.exp(log_p), nan=0.0)
    return float(result[0]) if scalar else result


@lru_cache(maxsize=16)
def ginibre_c(n_trunc: int | None = None) -> float:
    """Mean of the unscaled Ginibre spacing law (about 1.1429)."""
    n_trunc = settings.GINIBRE_TRUNCATION if n_trunc is None else n_trunc
    # mean = integral of the gap probability
    value, error = integrate.quad(
        lambda s: float(ginibre_gap_probability(s, n_trunc)[0]), 0.0, np.inf, limit=200
    )
    logger.debug("Ginibre c=%.8f (quadrature error %.1e, n_trunc=%d)", value, error, n_trunc)
    return value


def sub_wigner_norm(b: float, c: float) -> float:
    """Amplitude a making a s^b exp(-c s^2) a probability density."""
    if b <= -1 or c <= 0:
        raise ParameterError(f"sub-Wigner needs b > -1 and c > 0, got b={b}, c={c}")
    k = 0.5 * (b + 1.0)
    return float(2.0 * np.exp(k * np.log(c) - special.gammaln(k)))


class ReferenceDistribution(BaseModel):
    """A reference spacing law: Ginibre (unit-mean rescaled), Poisson or sub-Wigner."""

    model_config = ConfigDict(frozen=True)

    kind: ReferenceKind
    a: float | None = Field(None, description="Sub-Wigner amplitude; derived when omitted")
    b: float | None = None
    c: float | None = None
    n_trunc: int = Field(default_factory=lambda: settings.GINIBRE_TRUNCATION)

    @model_validator(mode="after")
    def _check_params(self) -> "ReferenceDistribution":
        if self.kind == ReferenceKind.SUB_WIGNER:
            if self.b is None or self.c is None:
                raise ParameterError("sub-Wigner distribution requires b and c")
            sub_wigner_norm(self.b, self.c)
        if self.kind == ReferenceKind.GINIBRE_COMPLEX:
            _check_truncation(self.n_trunc)
        return self

    @classmethod
    def sub_wigner(cls, b: float, c: float) -> "ReferenceDistribution":
        return cls(kind=ReferenceKind.SUB_WIGNER, b=b, c=c)

    @property
    def amplitude(self) -> float:
        if self.kind != ReferenceKind.SUB_WIGNER:
            raise ParameterError(f"{self.kind} has no amplitude parameter")
        return self.a if self.a is not None else sub_wigner_norm(self.b, self.c)

    def pdf(self, s) -> np.ndarray | float:
        scalar = np.ndim(s) == 0
        x = np.atleast_1d(np.asarray(s, dtype=float))
        if np.any(x < 0):
            raise ParameterError("spacings must be non-negative")
        match self.kind:
            case ReferenceKind.POISSON_REAL:
                values = np.exp(-x)
            case ReferenceKind.POISSON_COMPLEX:
                values = 0.5 * np.pi * x * np.exp(-0.25 * np.pi * x**2)
            case ReferenceKind.SUB_WIGNER:
                values = self.amplitude * np.power(x, self.b) * np.exp(-self.c * x**2)
            case ReferenceKind.GINIBRE_COMPLEX:
                scale = ginibre_c(self.n_trunc)
                values = scale * ginibre_pdf(scale * x, self.n_trunc)
        return float(values[0]) if scalar else values

    def cdf(self, s) -> np.ndarray | float:
        scalar = np.ndim(s) == 0
        x = np.clip(np.atleast_1d(np.asarray(s, dtype=float)), 0.0, None)
        match self.kind:
            case ReferenceKind.POISSON_REAL:
                values = -np.expm1(-x)
            case ReferenceKind.POISSON_COMPLEX:
                values = -np.expm1(-0.25 * np.pi * x**2)
            case ReferenceKind.SUB_WIGNER:
                values = special.gammainc(0.5 * (self.b + 1.0), self.c * x**2)
                # a may have been set explicitly off the normalization
                values = values * self.amplitude / sub_wigner_norm(self.b, self.c)
            case ReferenceKind.GINIBRE_COMPLEX:
                scale = ginibre_c(self.n_trunc)
                values = 1.0 - ginibre_gap_probability(scale * x, self.n_trunc)
        return float(values[0]) if scalar else values

    def mean(self) -> float:
        value, _ = integrate.quad(lambda s: s * self.pdf(s), 0.0, np.inf, limit=200)
        return value

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Draw n spacings by inverse-transform sampling."""
        u = rng.random(n)
        match self.kind:
            case ReferenceKind.POISSON_REAL:
                return -np.log1p(-u)
            case ReferenceKind.POISSON_COMPLEX:
                return np.sqrt(-4.0 * np.log1p(-u) / np.pi)
            case ReferenceKind.SUB_WIGNER:
                return np.sqrt(special.gammaincinv(0.5 * (self.b + 1.0), u) / self.c)
            case ReferenceKind.GINIBRE_COMPLEX:
                grid = np.linspace(0.0, SAMPLING_GRID_MAX, SAMPLING_GRID_POINTS)
                return np.interp(u, self.cdf(grid), grid)
