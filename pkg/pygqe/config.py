import json

from dataclasses import (
    dataclass,
    fields,
    replace
)
from pathlib import Path

from pygqe.types import (
    String,
    Int,
    Real,
    Map,
    Any
)

class ConfigError(Exception):
    def __init__(self, message: String):
        super().__init__(message)

@dataclass(frozen=True)
class SolverConfig:
    """
    Tolerances and windows shared by the solver, the certifier and the scanner.

    >>> config = SolverConfig.fromFile("experiments/tight.json").merged(kMax = 80)
    """
    # k-window [-kMax, kMax] searched for roots of I(k)
    kMax: Real = 50.0
    # |e^{-|k|} I(k)| <= tol * ||P||_1 at accepted roots
    tol: Real = 1e-12
    # moment series below |k| < kSwitch, closed form above
    kSwitch: Real = 1.0
    seriesTol: Real = 1e-18
    gridPoints: Int = 4001
    boundaryTol: Real = 1e-10
    zeroTol: Real = 1e-14
    residualTol: Real = 1e-9
    samples: Int = 200
    sampleClip: Real = 1e-6
    rootWidth: Real = 2.0 ** -44

    def __post_init__(self):
        if self.kMax <= 0:
            raise ConfigError(f"{__name__}.SolverConfig(): kMax must be positive.")
        if self.gridPoints < 3:
            raise ConfigError(f"{__name__}.SolverConfig(): gridPoints must be at least 3.")
        if self.samples < 1:
            raise ConfigError(f"{__name__}.SolverConfig(): samples must be positive.")
        if not (0 < self.sampleClip < 1):
            raise ConfigError(f"{__name__}.SolverConfig(): sampleClip must lie in (0, 1).")
        for name in ("tol", "kSwitch", "seriesTol", "boundaryTol", "zeroTol", "residualTol", "rootWidth"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{__name__}.SolverConfig(): {name} must be positive.")

    @classmethod
    def fromDict(cls, payload: Map[String, Any]) -> "SolverConfig":
        if not isinstance(payload, dict):
            raise ConfigError(f"{__name__}.fromDict(): config must be a JSON object.")

        known = {field.name: field.type for field in fields(cls)}
        unknown = sorted(set(payload) - set(known))
        if unknown:
            raise ConfigError(f"{__name__}.fromDict(): unknown config key(s) {', '.join(unknown)}.")

        values: Map[String, Any] = {}
        for (name, value) in payload.items():
            cast = int if known[name] is Int else float
            if isinstance(value, bool):
                raise ConfigError(f"{__name__}.fromDict(): '{name}' must be a number.")
            try:
                values[name] = cast(value)
            except (TypeError, ValueError):
                raise ConfigError(f"{__name__}.fromDict(): '{name}' must be a number, got {value!r}.")

        return cls(**values)

    @classmethod
    def fromFile(cls, path: String | Path) -> "SolverConfig":
        try:
            payload = json.loads(Path(path).read_text(encoding = "utf-8"))
        except OSError as error:
            raise ConfigError(f"{__name__}.fromFile(): cannot read {path}: {error.strerror}.")
        except json.JSONDecodeError as error:
            raise ConfigError(f"{__name__}.fromFile(): {path} is not valid JSON ({error.msg}).")
        return cls.fromDict(payload)

    def merged(self, **overrides) -> "SolverConfig":
        """Apply the overrides that are not None (command-line flags)."""
        return replace(
            self,
            **{
                name: value
                for (name, value) in overrides.items()
                if value is not None
            }
        )

    def toDict(self) -> Map[String, Any]:
        return {field.name: getattr(self, field.name) for field in fields(self)}
