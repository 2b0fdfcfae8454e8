from __future__ import annotations

import asyncio
import logging
import math
import multiprocessing
import os
import sys
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from ._afunc import AEvaluator
from ._bfunc import DEFAULT_SERIES_TOL, b_value
from ._coeffs import CoeffTerm, generate_terms, normalization_radical
from ._model import (
    IntegralRequest,
    ScaledParams,
    scale_parameters,
    selection_check,
    validate_request,
)
from ._precision import Arithmetic, Number, escalate, lost_digits
from ._utils import IntegralError, NotConverged, ZeroBySelection

__all__ = [
    "EvalConfig",
    "IntegralResult",
    "MuPlan",
    "evaluate",
    "evaluate_batch",
    "evaluate_batch_async",
    "mu_limits",
]

MU_TOL_ENV = "STO_INTEGRALS_MU_TOL"
SERIES_TOL_ENV = "STO_INTEGRALS_SERIES_TOL"
PRECISION_TOL_ENV = "STO_INTEGRALS_PRECISION_TOL"

#: Consecutive quiet mu-shells needed to truncate an unbounded mu-sum
QUIET_SHELLS_TO_STOP = 4
#: Shells below this multiple of eps times their absolute term sum are noise
NOISE_FLOOR_ULPS = 64
#: Integrals below this size in atomic units need no relative precision
ABSOLUTE_TOL = 1e-16

logger = logging.getLogger("sto_integrals.engine")

#: Picklable callable run once per batch item
Worker = Callable[["IntegralRequest", "EvalConfig"], Any]


@dataclass(frozen=True)
class EvalConfig:
    mu_tol: float = 1e-14
    mu_cap: int = 120
    series_tol: float = DEFAULT_SERIES_TOL
    #: Relative error a float evaluation must be able to meet, else mpmath is used
    precision_tol: float = 1e-11
    oracle_mode: bool = False

    def __post_init__(self):
        if not (self.mu_tol > 0 and self.series_tol > 0 and self.precision_tol > 0):
            raise ValueError(
                f"tolerances must be positive, got mu_tol={self.mu_tol} "
                f"series_tol={self.series_tol} precision_tol={self.precision_tol}"
            )
        if self.precision_tol >= 1:
            raise ValueError(f"precision_tol must be below 1, got {self.precision_tol}")
        if self.mu_cap < 0:
            raise ValueError(f"mu_cap must be non-negative, got {self.mu_cap}")

    @classmethod
    def from_env(cls, **overrides) -> EvalConfig:
        """Defaults, then environment variables, then explicit overrides"""
        values: Dict[str, object] = {}
        if MU_TOL_ENV in os.environ:
            values["mu_tol"] = float(os.environ[MU_TOL_ENV])
        if SERIES_TOL_ENV in os.environ:
            values["series_tol"] = float(os.environ[SERIES_TOL_ENV])
        if PRECISION_TOL_ENV in os.environ:
            values["precision_tol"] = float(os.environ[PRECISION_TOL_ENV])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)  # type: ignore[arg-type]


@dataclass(frozen=True)
class IntegralResult:
    value: float
    mu_used: int = 0
    terms_evaluated: int = 0
    truncation_estimate: float = 0.0
    zero_by_selection: bool = False
    #: mpmath working digits of an escalated evaluation, None for floats
    dps: Optional[int] = None


@dataclass(frozen=True)
class MuPlan:
    """mu values start, start+1, ... up to ``stop`` keeping only ``parity``

    ``stop`` of None means unbounded, and ``parity`` of None means no filter.
    """

    start: int
    stop: Optional[int] = None
    parity: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return self.stop is not None

    def __contains__(self, mu: object) -> bool:
        if not isinstance(mu, int) or mu < self.start:
            return False
        if self.stop is not None and mu > self.stop:
            return False
        return self.parity is None or mu % 2 == self.parity

    def values(self, cap: Optional[int] = None) -> Iterator[int]:
        """mu values in the plan; unbounded plans need a cap"""
        last = self.stop
        if cap is not None:
            last = cap if last is None else min(cap, last)
        assert last is not None, "unbounded plan iterated without a cap"
        return (mu for mu in range(self.start, last + 1) if mu in self)


def mu_limits(beta1: float, beta2: float, g1: int, g2: int, abs_sigma: int) -> MuPlan:
    """Which mu contribute to one coefficient term

    When beta = 0 the B factor vanishes unless mu + |sigma| + g is even and
    mu <= g + |sigma|.

    >>> list(mu_limits(0.0, 0.5, 2, 3, 0).values())
    [0, 2]
    >>> list(mu_limits(0.0, 0.0, 2, 4, 0).values())
    [0, 2]
    >>> mu_limits(0.1, 0.5, 2, 3, 1)
    MuPlan(start=1, stop=None, parity=None)
    """
    stop: Optional[int] = None
    parity: Optional[int] = None
    for beta, g in ((beta1, g1), (beta2, g2)):
        if beta != 0:
            continue
        wanted = (abs_sigma + g) % 2
        end = g + abs_sigma
        if parity is not None and parity != wanted:
            return MuPlan(abs_sigma, abs_sigma - 1)
        parity = wanted
        stop = end if stop is None else min(stop, end)
    return MuPlan(abs_sigma, stop, parity)


class _Tables:
    """Memoized B and A values, confined to one evaluation and one arithmetic"""

    def __init__(
        self, params: ScaledParams, abs_sigma: int, series_tol: float, arith: Arithmetic
    ):
        self.arith = arith
        self.betas = (params.beta1, params.beta2)
        self.abs_sigma = abs_sigma
        self.series_tol = arith.epsilon if arith.multiprecision else series_tol
        self.b: Dict[Tuple[int, int, int], Number] = {}
        self.a = AEvaluator(params.alpha1, params.alpha2, abs_sigma, arith)

    def b_value(self, electron: int, mu: int, g: int) -> Number:
        key = (electron, mu, g)
        if key not in self.b:
            self.b[key] = b_value(
                mu,
                g,
                self.betas[electron],
                self.abs_sigma,
                self.series_tol,
                self.arith,
            )
        return self.b[key]


@dataclass(frozen=True)
class _Sum:
    """The mu-sum of one run, before the common factors are applied"""

    total: Number
    magnitude: Number
    mu: int
    evaluated: int
    last_shell: Number
    capped: bool = False


def _union_plan(plans: Sequence[MuPlan], abs_sigma: int) -> MuPlan:
    if any(not plan.bounded for plan in plans):
        return MuPlan(abs_sigma)
    stops = [plan.stop for plan in plans if plan.stop is not None]
    return MuPlan(abs_sigma, max(stops, default=abs_sigma - 1))


def float_loss_digits(precision_tol: float) -> float:
    """Cancellation a float mu-sum may show and still meet ``precision_tol``

    >>> round(float_loss_digits(1e-11), 2)
    2.85
    """
    return math.log10(precision_tol / (NOISE_FLOOR_ULPS * sys.float_info.epsilon))


def evaluate(req: IntegralRequest, cfg: EvalConfig | None = None) -> IntegralResult:
    """The integral W sum_k C_k sum_mu (2mu+1) B B A, in atomic units

    mu is the outer loop, so each shell is complete when it is added. The sum
    is done in floats first. When the absolute sum of its products shows that
    the floats cannot meet ``cfg.precision_tol``, it is done again in mpmath.
    """
    cfg = cfg or EvalConfig()
    validate_request(req)
    sigma = selection_check(*req.ms)
    if sigma is ZeroBySelection:
        return IntegralResult(0.0, zero_by_selection=True)
    assert isinstance(sigma, int)
    abs_sigma = abs(sigma)
    if cfg.mu_cap < abs_sigma:
        raise ValueError(f"mu_cap={cfg.mu_cap} is below |sigma|={abs_sigma}")
    params = scale_parameters(req, verify=cfg.oracle_mode)
    terms = generate_terms(req, sigma)
    plans = [
        mu_limits(params.beta1, params.beta2, term.g1, term.g2, abs_sigma)
        for term in terms
    ]
    plan = _union_plan(plans, abs_sigma)
    scale = params.w * normalization_radical(req.orbitals)
    float_loss = float_loss_digits(cfg.precision_tol)

    def run(arith: Arithmetic) -> _Sum:
        tables = _Tables(params, abs_sigma, cfg.series_tol, arith)
        return _sum_shells(terms, plans, plan, tables, cfg, float_loss)

    def loss(outcome: _Sum) -> float:
        if outcome.capped:
            return math.inf
        # an integral that vanishes needs no digits beyond ABSOLUTE_TOL
        floor = ABSOLUTE_TOL / abs(scale)
        total = outcome.total
        if total == total and abs(total) < floor:
            total = floor
        return lost_digits(total, outcome.magnitude)

    outcome, arith = escalate(run, loss, float_loss, f"integral {req}")
    if arith.multiprecision:
        logger.info("%s needed %d working digits", req, arith.dps)
    value = scale * float(outcome.total)
    estimate = 0.0 if plan.bounded else abs(scale * float(outcome.last_shell))
    mu_used = max(outcome.mu, abs_sigma)
    logger.debug(
        "evaluated %s: value=%.17g mu_used=%d terms=%d",
        req,
        value,
        mu_used,
        outcome.evaluated,
    )
    return IntegralResult(value, mu_used, outcome.evaluated, estimate, dps=arith.dps)


def _sum_shells(
    terms: Sequence[CoeffTerm],
    plans: Sequence[MuPlan],
    plan: MuPlan,
    tables: _Tables,
    cfg: EvalConfig,
    float_loss: float,
) -> _Sum:
    """Shells in order of mu until QUIET_SHELLS_TO_STOP of them are negligible

    A float run whose shells go non-finite, or that reaches mu_cap with too
    much cancellation to be trusted, comes back marked ``capped`` so that it
    is redone in mpmath. In mpmath both raise NotConverged.
    """
    arith = tables.arith
    shells: List[Number] = []
    magnitudes: List[Number] = []
    evaluated = 0
    quiet = 0
    mu = tables.abs_sigma - 1
    last_shell: Number = 0.0
    for mu in plan.values(cap=None if plan.bounded else cfg.mu_cap):
        shell, magnitude, count = _shell(mu, terms, plans, tables)
        evaluated += count
        if not arith.isfinite(shell):
            if not arith.multiprecision:
                return _Sum(math.nan, math.nan, mu, evaluated, shell, capped=True)
            raise NotConverged(f"mu-shell {mu} is not finite ({shell})")
        shells.append(shell)
        magnitudes.append(magnitude)
        last_shell = shell
        running = arith.fsum(shells)
        noise = NOISE_FLOOR_ULPS * arith.epsilon * magnitude
        logger.debug(
            "mu=%d shell=%.6e running=%.17g noise=%.3e",
            mu,
            float(shell),
            float(running),
            float(noise),
        )
        if plan.bounded:
            continue
        if abs(shell) <= max(cfg.mu_tol * abs(running), noise):
            quiet += 1
            if quiet >= QUIET_SHELLS_TO_STOP:
                break
        else:
            quiet = 0
    else:
        if not plan.bounded:
            total, magnitude = arith.fsum(shells), arith.fsum(magnitudes)
            if not arith.multiprecision and lost_digits(total, magnitude) > float_loss:
                return _Sum(total, magnitude, mu, evaluated, last_shell, capped=True)
            raise NotConverged(
                f"mu_cap={cfg.mu_cap} reached with last shell "
                f"{float(last_shell):.3e} against sum {float(total):.3e}"
            )
    return _Sum(
        arith.fsum(shells), arith.fsum(magnitudes), mu, evaluated, last_shell
    )


def _shell(
    mu: int, terms: Sequence[CoeffTerm], plans: Sequence[MuPlan], tables: _Tables
) -> Tuple[Number, Number, int]:
    """(2mu+1) sum_k C_k B B A at one mu, its absolute term sum and product count"""
    number = tables.arith.number
    products = []
    magnitudes = []
    for term, plan in zip(terms, plans):
        if mu not in plan:
            continue
        b1 = tables.b_value(0, mu, term.g1)
        b2 = tables.b_value(1, mu, term.g2)
        bb = number(term.weight) * b1 * b2
        if bb == 0:
            continue
        a, a_magnitude = tables.a.terms(mu, term.r1, term.r2)
        products.append(bb * a)
        magnitudes.append(abs(bb) * a_magnitude)
    weight = 2 * mu + 1
    fsum = tables.arith.fsum
    return weight * fsum(products), weight * fsum(magnitudes), len(products)


def _evaluate_or_error(
    req: IntegralRequest, cfg: EvalConfig
) -> IntegralResult | Exception:
    try:
        return evaluate(req, cfg)
    except Exception as error:
        return error


def _log_unexpected(results: Sequence[object]) -> None:
    for index, result in enumerate(results):
        if isinstance(result, Exception) and not isinstance(result, IntegralError):
            logger.error(
                "request %d raised unexpected exception %s",
                index,
                type(result).__name__,
                exc_info=result,
            )


async def evaluate_batch_async(
    reqs: Sequence[IntegralRequest],
    cfg: EvalConfig | Sequence[EvalConfig] | None = None,
    executor: Executor | None = None,
    worker: Worker = _evaluate_or_error,
) -> List[Any]:
    """Evaluate many requests, collecting per-item exceptions instead of raising

    Requests are dispatched to ``executor`` (the loop default if None) and the
    results come back in request order. ``cfg`` is either shared or given per
    request.
    """
    configs = _per_request(cfg, len(reqs))
    loop = asyncio.get_running_loop()
    futures = [
        loop.run_in_executor(executor, worker, req, config)
        for req, config in zip(reqs, configs)
    ]
    results = await asyncio.gather(*futures, return_exceptions=True)
    _log_unexpected(results)
    return list(results)


def evaluate_batch(
    reqs: Sequence[IntegralRequest],
    cfg: EvalConfig | Sequence[EvalConfig] | None = None,
    workers: int = 1,
    worker: Worker = _evaluate_or_error,
) -> List[Any]:
    """Order-preserving evaluate over a batch, optionally across processes

    Every item is computed by the same pure function, so the results do not
    depend on ``workers``. A custom ``worker`` must be importable by name when
    ``workers`` > 1.
    """
    if workers <= 1 or len(reqs) <= 1:
        configs = _per_request(cfg, len(reqs))
        results = [worker(req, config) for req, config in zip(reqs, configs)]
        _log_unexpected(results)
        return results
    context = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=context) as pool:
        return asyncio.run(evaluate_batch_async(reqs, cfg, pool, worker))


def _per_request(
    cfg: EvalConfig | Sequence[EvalConfig] | None, count: int
) -> Sequence[EvalConfig]:
    if cfg is None:
        return [EvalConfig()] * count
    if isinstance(cfg, EvalConfig):
        return [cfg] * count
    if len(cfg) != count:
        raise ValueError(f"{len(cfg)} configs for {count} requests")
    return cfg
