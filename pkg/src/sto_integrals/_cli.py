"""Records and commands behind the ``sto-integrals`` entry point"""

from __future__ import annotations

import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import IO, Any, Dict, List, Optional, Sequence, Tuple

import yaml

from .core import (
    EvalConfig,
    IntegralClass,
    IntegralRequest,
    IntegralResult,
    NotConverged,
    SeriesNotConverged,
    SlaterOrbital,
    evaluate,
    evaluate_batch,
    make_request,
    validate_request,
)
from .log import case_logger
from .oracle import run_checks

__all__ = [
    "CaseParseError",
    "CaseRecord",
    "ResultRecord",
    "Status",
    "cmd_batch",
    "cmd_eval",
    "cmd_verify",
]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3

#: Per-case keys a batch record may set in ``overrides``
OVERRIDE_KEYS = ("mu_tol", "series_tol", "precision_tol", "mu_cap")
RESULT_KEYS = (
    "id",
    "status",
    "message",
    "value",
    "mu_used",
    "terms_evaluated",
    "truncation_estimate",
    "elapsed",
)

logger = logging.getLogger("sto_integrals.cli")


class Status(str, Enum):
    OK = "ok"
    ZERO_BY_SELECTION = "zero_by_selection"
    ERROR = "error"


class CaseParseError(ValueError):
    """A batch line that could not be turned into a request"""

    def __init__(self, case_id: str, message: str):
        super().__init__(f"{case_id}: {message}")
        self.case_id = case_id
        self.message = message


def _orbital(value: Any, key: str) -> SlaterOrbital:
    try:
        if isinstance(value, str):
            return SlaterOrbital.parse(value)
        n, l, m, delta = value  # noqa: E741
        if not all(isinstance(q, int) and not isinstance(q, bool) for q in (n, l, m)):
            raise ValueError(f"n, l and m must be integers, got {value!r}")
        return SlaterOrbital(n, l, m, float(delta))
    except (TypeError, ValueError) as error:
        raise ValueError(f"{key}: {error}") from None


def _override_values(overrides: Dict[str, Any]) -> Dict[str, float]:
    # YAML 1.1 reads 1e-12 (no dot) as a string
    values: Dict[str, float] = {}
    for key, value in overrides.items():
        try:
            values[key] = int(value) if key == "mu_cap" else float(value)
        except (TypeError, ValueError):
            message = f"overrides: {key} is not a number, got {value!r}"
            raise ValueError(message) from None
    return values


@dataclass(frozen=True)
class CaseRecord:
    id: str
    request: IntegralRequest
    overrides: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_line(cls, line: str, fallback_id: str) -> CaseRecord:
        """Parse one YAML flow mapping, e.g. ``{id: h2, class: coulomb, ...}``"""
        try:
            data = yaml.safe_load(line)
        except yaml.YAMLError as error:
            raise CaseParseError(fallback_id, f"not a YAML mapping ({error})") from None
        if not isinstance(data, dict):
            raise CaseParseError(fallback_id, "not a YAML mapping")
        case_id = str(data["id"]) if data.get("id") is not None else fallback_id
        try:
            return cls._from_mapping(case_id, data)
        except (KeyError, TypeError, ValueError) as error:
            text = f"missing key {error}" if isinstance(error, KeyError) else error
            raise CaseParseError(case_id, str(text)) from None

    @classmethod
    def _from_mapping(cls, case_id: str, data: Dict[str, Any]) -> CaseRecord:
        orbitals = [_orbital(data[f"orb{slot}"], f"orb{slot}") for slot in range(1, 5)]
        try:
            distance = float(data["R"])
        except (TypeError, ValueError):
            raise ValueError(f"R: not a number, got {data['R']!r}") from None
        integral_class = IntegralClass(data.get("class", IntegralClass.EXCHANGE))
        overrides = data.get("overrides") or {}
        if not isinstance(overrides, dict):
            raise ValueError("overrides: expected a mapping")
        unknown = set(overrides) - set(OVERRIDE_KEYS)
        if unknown:
            raise ValueError(f"overrides: unknown keys {sorted(unknown)}")
        request = validate_request(make_request(orbitals, distance, integral_class))
        return cls(case_id, request, _override_values(overrides))

    def config(self, base: EvalConfig) -> EvalConfig:
        return replace(base, **self.overrides)


def _format_float(value: Optional[float]) -> str:
    if value is None:
        return "null"
    return "%.17g" % value


@dataclass(frozen=True)
class ResultRecord:
    id: str
    status: Status
    message: Optional[str] = None
    value: Optional[float] = None
    mu_used: Optional[int] = None
    terms_evaluated: Optional[int] = None
    truncation_estimate: Optional[float] = None
    elapsed: Optional[float] = None

    @classmethod
    def from_outcome(
        cls,
        case_id: str,
        outcome: IntegralResult | Exception,
        elapsed: Optional[float] = None,
    ) -> ResultRecord:
        if isinstance(outcome, Exception):
            message = f"{type(outcome).__name__}: {outcome}"
            return cls(case_id, Status.ERROR, message, elapsed=elapsed)
        if not math.isfinite(outcome.value):
            return cls(case_id, Status.ERROR, "non-finite value", elapsed=elapsed)
        status = Status.ZERO_BY_SELECTION if outcome.zero_by_selection else Status.OK
        return cls(
            case_id,
            status,
            None,
            outcome.value,
            outcome.mu_used,
            outcome.terms_evaluated,
            outcome.truncation_estimate,
            elapsed,
        )

    def to_json(self) -> str:
        """One line of JSON with a fixed key order and 17 significant digits

        >>> record = ResultRecord("h2", Status.OK, value=0.1, mu_used=3)
        >>> record.to_json()[:46]
        '{"id": "h2", "status": "ok", "message": null, '
        >>> ResultRecord.from_json(record.to_json()) == record
        True
        """
        parts = []
        for key in RESULT_KEYS:
            value = getattr(self, key)
            if key in ("value", "truncation_estimate", "elapsed"):
                text = _format_float(value)
            elif isinstance(value, Enum):
                text = json.dumps(value.value)
            else:
                text = json.dumps(value)
            parts.append(f"{json.dumps(key)}: {text}")
        return "{" + ", ".join(parts) + "}"

    @classmethod
    def from_json(cls, line: str) -> ResultRecord:
        data = json.loads(line)
        floats = {
            key: None if data[key] is None else float(data[key])
            for key in ("value", "truncation_estimate", "elapsed")
        }
        return cls(
            id=data["id"],
            status=Status(data["status"]),
            message=data["message"],
            mu_used=data["mu_used"],
            terms_evaluated=data["terms_evaluated"],
            **floats,
        )

    def to_text(self) -> str:
        width = max(len(key) for key in RESULT_KEYS) + 2
        lines = []
        for key in RESULT_KEYS:
            value = getattr(self, key)
            if isinstance(value, Enum):
                value = value.value
            elif isinstance(value, float):
                value = _format_float(value)
            lines.append(f"{key:<{width}}{'-' if value is None else value}")
        return "\n".join(lines)


def base_config(args) -> EvalConfig:
    """Defaults, then environment, then command line flags"""
    return EvalConfig.from_env(
        mu_tol=getattr(args, "mu_tol", None),
        series_tol=getattr(args, "series_tol", None),
        precision_tol=getattr(args, "precision_tol", None),
        mu_cap=getattr(args, "mu_cap", None),
    )


def _exit_code(error: Exception) -> int:
    if isinstance(error, (NotConverged, SeriesNotConverged)):
        return EXIT_NOT_CONVERGED
    if isinstance(error, ValueError):
        return EXIT_USAGE
    return EXIT_FAILED


def cmd_eval(args, stdout: Optional[IO[str]] = None) -> int:
    stdout = stdout or sys.stdout
    try:
        orbitals = [
            _orbital(getattr(args, f"orb{slot}"), f"--orb{slot}")
            for slot in range(1, 5)
        ]
        request = validate_request(make_request(orbitals, args.R, args.integral_class))
        cfg = base_config(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        result = evaluate(request, cfg)
    except Exception as error:
        print(f"error: {type(error).__name__}: {error}", file=sys.stderr)
        return _exit_code(error)
    record = ResultRecord.from_outcome("eval", result, time.perf_counter() - start)
    print(record.to_json() if args.format == "json" else record.to_text(), file=stdout)
    return EXIT_OK


def timed_evaluate(
    req: IntegralRequest, cfg: EvalConfig
) -> Tuple[IntegralResult | Exception, float]:
    """Batch worker returning the outcome and its wall time"""
    start = time.perf_counter()
    try:
        outcome: IntegralResult | Exception = evaluate(req, cfg)
    except Exception as error:
        outcome = error
    return outcome, time.perf_counter() - start


def read_cases(
    lines: Sequence[str | bytes],
) -> List[CaseRecord | CaseParseError]:
    """Parse every non-blank, non-comment line, keeping failures in place

    Lines given as bytes are decoded one at a time, so that a line that is not
    UTF-8 fails alone.
    """
    cases: List[CaseRecord | CaseParseError] = []
    for number, line in enumerate(lines, start=1):
        fallback_id = f"line-{number}"
        try:
            text = line.decode("utf-8") if isinstance(line, bytes) else line
        except UnicodeDecodeError as error:
            cases.append(CaseParseError(fallback_id, f"not UTF-8 ({error.reason})"))
            continue
        stripped = text.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            cases.append(CaseRecord.from_line(stripped, fallback_id))
        except CaseParseError as error:
            cases.append(error)
    return cases


def cmd_batch(args) -> int:
    try:
        base = base_config(args)
    except ValueError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    try:
        lines = Path(args.input).read_bytes().splitlines()
    except OSError as error:
        print(f"error: {error}", file=sys.stderr)
        return EXIT_USAGE
    cases = read_cases(lines)
    logger.debug("read %d cases from %s", len(cases), args.input)
    parsed = [case for case in cases if isinstance(case, CaseRecord)]
    configs = []
    failed_config: Dict[int, Exception] = {}
    for index, case in enumerate(parsed):
        try:
            configs.append(case.config(base))
        except (TypeError, ValueError) as error:
            failed_config[index] = error
            configs.append(base)
    outcomes = iter(
        evaluate_batch(
            [case.request for case in parsed],
            configs,
            workers=args.workers,
            worker=timed_evaluate,
        )
    )
    records = []
    position = 0
    for case in cases:
        if isinstance(case, CaseParseError):
            records.append(ResultRecord(case.case_id, Status.ERROR, case.message))
            continue
        outcome, elapsed = next(outcomes)
        if position in failed_config:
            outcome = failed_config[position]
        position += 1
        record = ResultRecord.from_outcome(
            case.id, outcome, elapsed if args.timing else None
        )
        if record.status is Status.ERROR:
            case_logger("batch", case.id).warning("%s", record.message)
        records.append(record)
    with open(args.output, "w", encoding="utf-8") as output:
        for record in records:
            output.write(record.to_json() + "\n")
    counts = {status: 0 for status in Status}
    for record in records:
        counts[record.status] += 1
    print(
        " ".join(f"{status.value}={counts[status]}" for status in Status),
        file=sys.stderr,
    )
    return EXIT_FAILED if counts[Status.ERROR] else EXIT_OK


def cmd_verify(args, stdout: Optional[IO[str]] = None) -> int:
    stdout = stdout or sys.stdout
    grid = getattr(args, "grid", None) or "small"
    results = run_checks(grid)
    width = max(len(result.name) for result in results) + 2
    for result in results:
        verdict = "PASS" if result.passed else "FAIL"
        line = f"{result.name:<{width}}{verdict}  {result.elapsed:8.2f}s"
        if not result.passed:
            line += f"  {result.detail}"
        print(line, file=stdout)
    failed = [result.name for result in results if not result.passed]
    if failed:
        print(f"failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK
