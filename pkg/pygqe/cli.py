"""
Command line entry point `pygqe`:

    pygqe check data.json [--mode gqe|generalized] [--b 3/2]
    pygqe scan grid.json --out grid.csv [--jobs 4] [--no-timing]
    pygqe certify data.json --k -0.3126
    pygqe limits 2 1 [--b 3]

Reports go to standard output as JSON, logs to standard error.
"""
import argparse
import logging
import math
import sys

from pygqe.admissible import (
    AdmissibleData,
    ConeViolationError,
    EmptyExtendedIndexError,
    InvalidDataError,
    validate
)
from pygqe.asymptotics import (
    limitEll,
    limitP,
    limitRootStructure,
    limitScalBar
)
from pygqe.config import (
    ConfigError,
    SolverConfig
)
from pygqe.gqe.existence import (
    certifyCandidate,
    decideExistence
)
from pygqe.gqe.mode import Mode
from pygqe.gqe.verdict import Verdict
from pygqe.ratpoly import (
    RationalParseError,
    formatRational,
    toRational
)
from pygqe.scan import (
    ScanSpec,
    ScanSpecError,
    runScan
)
from pygqe.serialize import (
    InputError,
    readJson,
    writeCsv,
    writeJson
)
from pygqe.types import (
    String,
    Int,
    List,
    Map,
    Optional,
    Any
)
from pygqe.version import __version__

logger = logging.getLogger("pygqe")

EXIT_OK: Int = 0
EXIT_NEGATIVE: Int = 1
EXIT_INPUT: Int = 2
EXIT_INCONCLUSIVE: Int = 3

_VERDICT_EXIT: Map[Verdict, Int] = {
    Verdict.Exists: EXIT_OK,
    Verdict.FailsPositivity: EXIT_NEGATIVE,
    Verdict.NoKFound: EXIT_INCONCLUSIVE,
    Verdict.Inconclusive: EXIT_INCONCLUSIVE
}

_INPUT_ERRORS = (
    ConeViolationError,
    EmptyExtendedIndexError,
    InvalidDataError,
    RationalParseError,
    ConfigError,
    ScanSpecError,
    InputError
)

def _addCommonArgs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-v", "--verbose", action = "count", default = 0, help = "Increase verbosity (-v, -vv)")
    parser.add_argument("-q", "--quiet", action = "store_true", help = "Show errors only")
    parser.add_argument("--config", help = "JSON file of solver settings")
    parser.add_argument("--kmax", type = float, default = None, help = "k-window half width (default 50)")
    parser.add_argument("--tol", type = float, default = None, help = "k-condition tolerance (default 1e-12)")

def _addModeArgs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", choices = [mode.value for mode in Mode], default = None)
    parser.add_argument("--b", default = None, help = "Rational b of the generalized equation; implies --mode generalized")

def buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog = "pygqe",
        description = "Existence of admissible generalized quasi-Einstein metrics."
    )
    parser.add_argument("--version", action = "version", version = f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest = "command", required = True)

    check = sub.add_parser("check", help = "Decide existence in one class")
    check.add_argument("input", help = "Admissible data JSON file, '-' for standard input")
    check.add_argument("--out", default = None, help = "Write the report here instead of standard output")
    _addModeArgs(check)
    _addCommonArgs(check)

    scan = sub.add_parser("scan", help = "Decide existence over a grid of classes")
    scan.add_argument("spec", help = "Scan spec JSON file")
    scan.add_argument("--out", default = None, help = "CSV output path (overrides the spec)")
    scan.add_argument("--summary", default = None, help = "Write the summary JSON here instead of standard output")
    scan.add_argument("--jobs", type = int, default = None, help = "Parallel workers (default 1)")
    scan.add_argument("--no-timing", action = "store_true", help = "Write millis = 0 for byte-identical output")
    _addCommonArgs(scan)

    certify = sub.add_parser("certify", help = "Verify a claimed k without searching")
    certify.add_argument("input", help = "Admissible data JSON file, optionally with 'k', 'mode' and 'b'")
    certify.add_argument("--k", default = None, help = "Claimed k (overrides the input file)")
    _addModeArgs(certify)
    _addCommonArgs(certify)

    limits = sub.add_parser("limits", help = "Small-class limit of P' for (d0, dinf)")
    limits.add_argument("d0", type = int)
    limits.add_argument("dinf", type = int)
    limits.add_argument("--b", default = None, help = "Rational b of the generalized equation")
    limits.add_argument("-v", "--verbose", action = "count", default = 0)
    limits.add_argument("-q", "--quiet", action = "store_true")

    return parser

def _configureLogging(args: argparse.Namespace) -> None:
    if args.quiet:
        level = logging.ERROR
    elif args.verbose >= 2:
        level = logging.DEBUG
    elif args.verbose == 1:
        level = logging.INFO
    else:
        level = logging.WARNING
    logging.basicConfig(level = level, format = "%(levelname)s %(name)s: %(message)s", stream = sys.stderr, force = True)

def _loadConfig(args: argparse.Namespace) -> SolverConfig:
    config = SolverConfig.fromFile(args.config) if args.config else SolverConfig()
    return config.merged(kMax = args.kmax, tol = args.tol)

def _resolveMode(
    mode: Optional[String],
    b: Optional[Any]
) -> Mode:
    if mode is None:
        return Mode.Generalized if b is not None else Mode.Gqe
    try:
        resolved = Mode(mode)
    except ValueError:
        raise InputError(f"{__name__}._resolveMode(): unknown mode {mode!r}.", "mode")
    if resolved is Mode.Gqe and b not in (None, 0):
        raise InputError(f"{__name__}._resolveMode(): b is only meaningful in generalized mode.", "b")
    return resolved

def _readData(payload: Any) -> AdmissibleData:
    return AdmissibleData.fromDict(payload)

def cmdCheck(args: argparse.Namespace) -> Int:
    config = _loadConfig(args)
    data = validate(_readData(readJson(args.input)))
    b = None if args.b is None else toRational(args.b)
    report = decideExistence(data, _resolveMode(args.mode, b), b, config)
    writeJson(report.toDict(), args.out)
    return _VERDICT_EXIT[report.verdict]

def cmdScan(args: argparse.Namespace) -> Int:
    config = _loadConfig(args)
    spec = ScanSpec.fromDict(readJson(args.spec))
    out = args.out or spec.out
    if out is None:
        raise InputError(f"{__name__}.cmdScan(): no CSV output path (use --out or 'out' in the spec).", "out")

    result = runScan(spec, config, jobs = args.jobs, timing = not args.no_timing)
    writeCsv(out, spec.header(), result.rows())
    writeJson(result.summary, args.summary)
    return EXIT_OK

def cmdCertify(args: argparse.Namespace) -> Int:
    config = _loadConfig(args)
    payload = readJson(args.input)
    if not isinstance(payload, dict):
        raise InputError(f"{__name__}.cmdCertify(): input must be a JSON object.")

    data = validate(_readData(payload))
    claimed = args.k if args.k is not None else payload.get("k")
    if claimed is None:
        raise InputError(f"{__name__}.cmdCertify(): no claimed k (use --k or 'k' in the input).", "k")
    try:
        k = float(claimed)
    except (TypeError, ValueError):
        raise InputError(f"{__name__}.cmdCertify(): field 'k' is not a number, got {claimed!r}.", "k")
    if not math.isfinite(k):
        raise InputError(f"{__name__}.cmdCertify(): claimed k must be finite, got {claimed!r}.", "k")

    rawB = args.b if args.b is not None else payload.get("b")
    b = None if rawB is None else toRational(rawB)
    mode = _resolveMode(args.mode or payload.get("mode"), b)

    report = certifyCandidate(data, k, mode, b, config)
    writeJson(report.toDict())
    return EXIT_OK if report.passed else EXIT_NEGATIVE

def cmdLimits(args: argparse.Namespace) -> Int:
    if args.d0 < 0 or args.dinf < 0:
        raise InputError(f"{__name__}.cmdLimits(): d0 and dinf must be non-negative.")
    b = None if args.b is None else toRational(args.b)
    structure = limitRootStructure(args.d0, args.dinf, b)

    payload = structure.toDict()
    payload.update({
        "d0": args.d0,
        "dinf": args.dinf,
        "limit_ell": formatRational(limitEll(args.d0, args.dinf)),
        "limit_scal_bar": formatRational(limitScalBar(args.d0, args.dinf)),
        "limit_p": [formatRational(c) for c in limitP(args.d0, args.dinf, b).coefficients],
        "note": "limit objects are not Kähler classes"
    })
    writeJson(payload)
    return EXIT_OK

_COMMANDS = {
    "check": cmdCheck,
    "scan": cmdScan,
    "certify": cmdCertify,
    "limits": cmdLimits
}

def main(argv: Optional[List[String]] = None) -> Int:
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        # argparse usage errors exit with 2, --help / --version with 0
        return stop.code if isinstance(stop.code, int) else EXIT_INPUT

    _configureLogging(args)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as error:
        logger.error("%s", error)
        return EXIT_INPUT
    except OSError as error:
        logger.error("%s: %s", getattr(error, "filename", None) or "output", error.strerror or error)
        return EXIT_INPUT

if __name__ == "__main__":
    sys.exit(main())
