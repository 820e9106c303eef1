"""M/G/1 queue-occupancy cost of retry-inflated arrivals.

``mg1_term`` evaluates, verbatim,

    (lam**2 * sigma + lam / mu) / (2 * (1 - lam / mu))

with ``sigma`` taken exactly as the caller provides it (its units are the
caller's choice; it is not normalized to a variance or second moment).
``mean_queue_textbook`` gives the standard Pollaczek-Khinchine mean number
in system, reading ``sigma`` as the service-time second moment, for
cross-checking against the as-written form.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "UnstableQueueError",
    "Mg1Params",
    "mg1_term",
    "retry_penalty",
    "mean_queue_textbook",
    "retry_penalty_textbook",
    "SIGMA_NOTE",
]

SIGMA_NOTE = (
    "sigma is used exactly as given (as-written parameter); "
    "the textbook variant reads it as the service-time second moment E[S^2]"
)


class UnstableQueueError(ValueError):
    """Arrival rate at or above the service rate; the queue has no steady state."""


def _check_stable(lam: float, mu: float) -> float:
    if mu <= 0:
        raise ValueError(f"mu must be > 0 (got {mu!r})")
    if lam < 0:
        raise ValueError(f"arrival rate must be >= 0 (got {lam!r})")
    utilization = lam / mu
    if utilization >= 1.0:
        raise UnstableQueueError(f"utilization {utilization!r} >= 1 (lam={lam!r}, mu={mu!r})")
    return utilization


@dataclass(frozen=True)
class Mg1Params:
    """Arrival/service rates for the retry-penalty comparison: ``lambda_base``
    without retries, ``lambda_retry`` with retry-inflated arrivals."""

    lambda_base: float
    lambda_retry: float
    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0 (got {self.sigma!r})")
        if not 0 <= self.lambda_base <= self.lambda_retry:
            raise ValueError(
                f"need 0 <= lambda_base <= lambda_retry "
                f"(got {self.lambda_base!r}, {self.lambda_retry!r})"
            )
        _check_stable(self.lambda_retry, self.mu)


def mg1_term(lam: float, mu: float, sigma: float) -> float:
    """Queued-packet count at arrival rate ``lam``, as-written form."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0 (got {sigma!r})")
    utilization = _check_stable(lam, mu)
    return (lam * lam * sigma + lam / mu) / (2.0 * (1.0 - utilization))


def retry_penalty(p: Mg1Params) -> float:
    """Extra packets to accommodate when arrivals inflate from
    ``lambda_base`` to ``lambda_retry``. Non-negative; exactly 0 when the
    rates coincide."""
    if p.lambda_retry == p.lambda_base:
        return 0.0
    return mg1_term(p.lambda_retry, p.mu, p.sigma) - mg1_term(p.lambda_base, p.mu, p.sigma)


def mean_queue_textbook(lam: float, mu: float, sigma: float) -> float:
    """Pollaczek-Khinchine mean number in system, sigma read as E[S^2]."""
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0 (got {sigma!r})")
    utilization = _check_stable(lam, mu)
    return utilization + (lam * lam * sigma) / (2.0 * (1.0 - utilization))


def retry_penalty_textbook(p: Mg1Params) -> float:
    if p.lambda_retry == p.lambda_base:
        return 0.0
    return mean_queue_textbook(p.lambda_retry, p.mu, p.sigma) - mean_queue_textbook(
        p.lambda_base, p.mu, p.sigma
    )
