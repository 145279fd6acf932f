"""
Cone scans: one existence decision per grid point of a family of classes on
a fixed admissible manifold.
"""
import itertools
import logging
import time

from dataclasses import (
    dataclass,
    field
)
from fractions import Fraction

from joblib import (
    Parallel,
    delayed
)

from pygqe.admissible import (
    AdmissibleData,
    BaseFactor,
    ConeViolationError,
    InvalidDataError,
    validate
)
from pygqe.config import SolverConfig
from pygqe.gqe.existence import decideExistence
from pygqe.gqe.mode import Mode
from pygqe.gqe.verdict import Verdict
from pygqe.ratpoly import (
    RationalParseError,
    formatRational,
    toRational
)
from pygqe.serialize import formatReal
from pygqe.types import (
    String,
    Int,
    Rational,
    Real,
    List,
    Tuple,
    Map,
    Optional,
    Any
)
from pygqe.version import __version__

logger = logging.getLogger(__name__)

class ScanSpecError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

def _rational(
    value: Any,
    where: String
) -> Rational:
    if isinstance(value, bool) or value is None:
        raise ScanSpecError(f"{__name__}.fromDict(): '{where}' must be a rational, got {value!r}.")
    try:
        return toRational(value)
    except (RationalParseError, TypeError):
        raise ScanSpecError(f"{__name__}.fromDict(): '{where}' must be a rational, got {value!r}.")

def _count(
    value: Any,
    where: String,
    minimum: Int
) -> Int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ScanSpecError(f"{__name__}.fromDict(): '{where}' must be an integer >= {minimum}, got {value!r}.")
    return value

def readValues(
    payload: Any,
    where: String
) -> Tuple[Rational, ...]:
    """
    A list of rationals, or {"start", "stop", "steps"} for `steps` evenly
    spaced values with both ends included.

    >>> readValues({"start": "0.05", "stop": "0.95", "steps": 19}, "x")[:2]
    (Fraction(1, 20), Fraction(1, 10))
    """
    if isinstance(payload, dict) and "values" in payload:
        payload = payload["values"]

    if isinstance(payload, list):
        if not payload:
            raise ScanSpecError(f"{__name__}.fromDict(): '{where}' lists no values.")
        return tuple(_rational(value, f"{where}[{index}]") for (index, value) in enumerate(payload))

    if isinstance(payload, dict) and {"start", "stop", "steps"} <= set(payload):
        start = _rational(payload["start"], f"{where}.start")
        stop = _rational(payload["stop"], f"{where}.stop")
        steps = _count(payload["steps"], f"{where}.steps", 1)
        if steps == 1:
            return (start, )
        return tuple(start + (stop - start) * Fraction(i, steps - 1) for i in range(steps))

    raise ScanSpecError(
        f"{__name__}.fromDict(): '{where}' must be a list, {{\"values\": [...]}} or {{\"start\", \"stop\", \"steps\"}}."
    )

@dataclass(frozen=True)
class FactorAxis:
    d: Int
    s: Rational
    # free axis: the x values to visit
    values: Tuple[Rational, ...] = ()
    # tied axis: x = scale * x[follows]
    follows: Optional[Int] = None
    scale: Rational = Fraction(1)

    @property
    def tied(self) -> bool:
        return self.follows is not None

@dataclass(frozen=True)
class ScanSpec:
    """
    >>> spec = ScanSpec.fromDict({
    ...     "d0": 0,
    ...     "dinf": 0,
    ...     "factors": [
    ...         {"d": 1, "s": "-2", "x": {"start": "0.05", "stop": "0.95", "steps": 19}},
    ...         {"d": 1, "s": "2", "x": {"follows": 0, "scale": "-1"}}
    ...     ]
    ... })
    """
    d0: Int
    dinf: Int
    factors: Tuple[FactorAxis, ...]
    mode: Mode = Mode.Gqe
    bValues: Tuple[Rational, ...] = ()
    out: Optional[String] = None
    jobs: Optional[Int] = None

    @classmethod
    def fromDict(cls, payload: Map[String, Any]) -> "ScanSpec":
        if not isinstance(payload, dict):
            raise ScanSpecError(f"{__name__}.fromDict(): scan spec must be a JSON object.")

        d0 = _count(payload.get("d0", 0), "d0", 0)
        dinf = _count(payload.get("dinf", 0), "dinf", 0)
        try:
            mode = Mode(payload.get("mode", Mode.Gqe.value))
        except ValueError:
            raise ScanSpecError(f"{__name__}.fromDict(): unknown mode {payload.get('mode')!r}.")

        rawFactors = payload.get("factors", [])
        if not isinstance(rawFactors, list):
            raise ScanSpecError(f"{__name__}.fromDict(): 'factors' must be a list.")

        factors: List[FactorAxis] = []
        for (index, raw) in enumerate(rawFactors):
            where = f"factors[{index}]"
            if not isinstance(raw, dict):
                raise ScanSpecError(f"{__name__}.fromDict(): '{where}' must be an object.")
            d = _count(raw.get("d"), f"{where}.d", 1)
            s = _rational(raw.get("s"), f"{where}.s")
            axis = raw.get("x")
            if isinstance(axis, dict) and "follows" in axis:
                follows = _count(axis["follows"], f"{where}.x.follows", 0)
                factors.append(FactorAxis(d, s, follows = follows, scale = _rational(axis.get("scale", 1), f"{where}.x.scale")))
            else:
                factors.append(FactorAxis(d, s, values = readValues(axis, f"{where}.x")))

        for (index, factor) in enumerate(factors):
            if factor.tied and (
                factor.follows >= len(factors)
                or factor.follows == index
                or factors[factor.follows].tied
            ):
                raise ScanSpecError(f"{__name__}.fromDict(): factors[{index}] must follow a free factor.")

        bValues: Tuple[Rational, ...] = ()
        if "b" in payload:
            if mode is not Mode.Generalized:
                raise ScanSpecError(f"{__name__}.fromDict(): 'b' is only allowed in generalized mode.")
            bValues = readValues(payload["b"], "b")
        elif mode is Mode.Generalized:
            bValues = (Fraction(0), )

        jobs = payload.get("jobs")
        if jobs is not None:
            jobs = _count(jobs, "jobs", 1)
        out = payload.get("out")
        if out is not None and not isinstance(out, str):
            raise ScanSpecError(f"{__name__}.fromDict(): 'out' must be a path string.")

        return cls(d0, dinf, tuple(factors), mode, bValues, out, jobs)

    @property
    def template(self) -> AdmissibleData:
        # x values are placeholders, replaced per grid point
        return AdmissibleData(
            self.d0,
            self.dinf,
            tuple(BaseFactor(factor.d, factor.s, Fraction(1, 2)) for factor in self.factors)
        )

    def points(self) -> List[Tuple[Tuple[Rational, ...], Optional[Rational]]]:
        """Grid points (x, b) in lexicographic order of the free axes, b innermost."""
        free = [index for (index, factor) in enumerate(self.factors) if not factor.tied]
        bAxis = self.bValues if self.mode is Mode.Generalized else (None, )

        points = []
        for combination in itertools.product(*(self.factors[index].values for index in free)):
            chosen = dict(zip(free, combination))
            xs = tuple(
                chosen[factor.follows] * factor.scale if factor.tied else chosen[index]
                for (index, factor) in enumerate(self.factors)
            )
            for b in bAxis:
                points.append((xs, b))
        return points

    def header(self) -> List[String]:
        columns = [f"x_{index + 1}" for index in range(len(self.factors))]
        if self.mode is Mode.Generalized:
            columns.append("b")
        return columns + ["verdict", "k", "margin", "root_count", "futaki_k", "millis"]

@dataclass(frozen=True)
class ScanRecord:
    xs: Tuple[Rational, ...]
    b: Optional[Rational]
    # None when the point lies outside the cone
    verdict: Optional[Verdict]
    k: Optional[Real] = None
    margin: Optional[Real] = None
    rootCount: Optional[Int] = None
    futakiK: Optional[Rational] = None
    millis: Int = 0
    reason: Optional[String] = None

    @property
    def skipped(self) -> bool:
        return self.verdict is None

    def toRow(self) -> Map[String, Any]:
        row: Map[String, Any] = {
            f"x_{index + 1}": formatRational(x)
            for (index, x) in enumerate(self.xs)
        }
        if self.b is not None:
            row["b"] = formatRational(self.b)
        row.update({
            "verdict": self.verdict.value,
            "k": formatReal(self.k),
            "margin": formatReal(self.margin),
            "root_count": self.rootCount,
            "futaki_k": formatReal(None if self.futakiK is None else float(self.futakiK)),
            "millis": self.millis
        })
        return row

def evaluatePoint(
    template: AdmissibleData,
    xs: Tuple[Rational, ...],
    mode: Mode,
    b: Optional[Rational],
    config: SolverConfig,
    timing: bool = True
) -> ScanRecord:
    started = time.perf_counter()
    try:
        data = validate(template.withX(list(xs)))
        report = decideExistence(data, mode, b, config)
    except (ConeViolationError, InvalidDataError) as error:
        return ScanRecord(xs, b, None, reason = str(error))

    millis = int(round((time.perf_counter() - started) * 1000)) if timing else 0
    return ScanRecord(
        xs = xs,
        b = b,
        verdict = report.verdict,
        k = report.k,
        margin = report.margin,
        rootCount = report.rootCount,
        futakiK = report.futakiK,
        millis = millis
    )

@dataclass(frozen=True)
class ScanResult:
    spec: ScanSpec
    records: Tuple[ScanRecord, ...]
    skipped: Tuple[ScanRecord, ...]
    summary: Map[String, Any] = field(default_factory = dict)

    def rows(self) -> List[Map[String, Any]]:
        return [record.toRow() for record in self.records]

def _reach(record: ScanRecord) -> Rational:
    return max(abs(x) for x in record.xs) if record.xs else Fraction(0)

def _point(record: ScanRecord) -> Map[String, Any]:
    point = {f"x_{index + 1}": formatRational(x) for (index, x) in enumerate(record.xs)}
    if record.b is not None:
        point["b"] = formatRational(record.b)
    return point

def summarize(
    spec: ScanSpec,
    records: Tuple[ScanRecord, ...],
    skipped: Tuple[ScanRecord, ...]
) -> Map[String, Any]:
    counts = {verdict.value: 0 for verdict in Verdict}
    for record in records:
        counts[record.verdict.value] += 1

    # largest r such that every tested point with max |x_a| <= r exists
    failing = [_reach(record) for record in records if record.verdict is not Verdict.Exists]
    below = [
        _reach(record)
        for record in records
        if not failing or _reach(record) < min(failing)
    ]
    threshold: Optional[Rational] = max(below) if below else None

    existing = [record for record in records if record.verdict is Verdict.Exists]
    box = None
    if existing:
        box = {
            f"x_{index + 1}": [
                formatRational(min(record.xs[index] for record in existing)),
                formatRational(max(record.xs[index] for record in existing))
            ]
            for index in range(len(spec.factors))
        }
        if spec.mode is Mode.Generalized:
            box["b"] = [
                formatRational(min(record.b for record in existing)),
                formatRational(max(record.b for record in existing))
            ]

    transitions = [
        {
            "from": _point(left),
            "to": _point(right),
            "from_verdict": left.verdict.value,
            "to_verdict": right.verdict.value
        }
        for (left, right) in zip(records, records[1:])
        if left.verdict is not right.verdict
    ]

    return {
        "version": __version__,
        "mode": spec.mode.value,
        "points": len(records) + len(skipped),
        "evaluated": len(records),
        "skipped": len(skipped),
        "counts": counts,
        "all_exist_threshold": None if threshold is None else formatRational(threshold),
        "exists_bounding_box": box,
        "transitions": transitions
    }

def runScan(
    spec: ScanSpec,
    config: Optional[SolverConfig] = None,
    jobs: Optional[Int] = None,
    timing: bool = True
) -> ScanResult:
    """
    Evaluate every grid point, `jobs` at a time; records keep grid order
    whatever the parallelism.
    """
    config = config or SolverConfig()
    jobs = jobs or spec.jobs or 1
    template = spec.template
    points = spec.points()
    logger.info("scanning %d point(s) with %d job(s)", len(points), jobs)

    results = Parallel(n_jobs = jobs)(
        delayed(evaluatePoint)(template, xs, spec.mode, b, config, timing)
        for (xs, b) in points
    )

    records: List[ScanRecord] = []
    skipped: List[ScanRecord] = []
    for record in results:
        if record.skipped:
            logger.warning("skipped %s: %s", _point(record), record.reason)
            skipped.append(record)
        else:
            records.append(record)

    summary = summarize(spec, tuple(records), tuple(skipped))
    logger.info("scan counts %s", summary["counts"])
    return ScanResult(spec, tuple(records), tuple(skipped), summary)
