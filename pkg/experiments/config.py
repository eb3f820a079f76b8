"""
Experiment configuration.

A RunConfig is read from a flat JSON object and/or command flags; flags win.
Keys are the field names below, except `lambda` for the Hölder constant.
Unknown keys and out-of-range values raise ConfigError naming the field.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from django.conf import settings

from problem.boundaries import BoundaryFamily, SmoothnessParams
from problem.exceptions import BoundaryError, InvalidInstance
from problem.instances import Marginal, MarginalKind, NoiseParams, ProblemInstance, make_instance


class ConfigError(BoundaryError, ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class Algorithm(str, Enum):
    ADAPTIVE = "adaptive"
    SUBROUTINE = "subroutine"
    LINESEARCH = "linesearch"
    PASSIVE = "passive"


# JSON keys that differ from the attribute name
KEY_ALIASES = {"lambda": "lam"}


@dataclass
class RunConfig:
    # instance
    family: str = "affine"
    d: int = 2
    alpha: float = 1.0
    lam: float = 1.0
    kappa: float = 1.5
    c: float = 0.4
    c_eff: Optional[float] = None
    eta_upper: Optional[float] = None
    noiseless: bool = False
    marginal: str = "uniform"
    delta0: Optional[float] = None
    kappa_prime: Optional[float] = None
    kappa0: Optional[float] = None
    slope: Optional[float] = None
    offset: float = 0.5
    amplitude: Optional[float] = None
    frequency: float = 1.0
    bumps_per_axis: int = 2
    instance_seed: int = 0

    # algorithm
    algorithm: str = "adaptive"
    alpha_guess: Optional[float] = None
    anchor: Optional[List[float]] = None
    epsilon: float = 2.0 ** -6
    grid_side: int = 0

    # run grid
    n: int = 2 ** 14
    budgets: List[int] = field(default_factory=list)
    delta: float = 0.05
    seeds: List[int] = field(default_factory=lambda: [0])
    master_seed: int = 0

    # outputs
    output: str = ""
    audit_resolution: int = 0
    risk_samples: int = 0
    timing: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in data.items():
            name = KEY_ALIASES.get(key, key)
            if name not in known:
                raise ConfigError(key, "unknown configuration key")
            values[name] = value
        return cls(**values).resolved()

    @classmethod
    def from_file(cls, path, overrides: Optional[Dict[str, Any]] = None) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config", "the configuration document must be a JSON object")
        data.update(overrides or {})
        return cls.from_dict(data)

    def resolved(self) -> "RunConfig":
        """Validate every field and fill the defaults that depend on settings or other fields."""
        self._check_types()
        try:
            self.algorithm = Algorithm(self.algorithm).value
        except ValueError:
            raise ConfigError("algorithm", f"must be one of {[a.value for a in Algorithm]}, got {self.algorithm!r}") from None
        try:
            BoundaryFamily(self.family)
        except ValueError:
            raise ConfigError("family", f"must be one of {[f.value for f in BoundaryFamily]}, got {self.family!r}") from None
        try:
            MarginalKind(self.marginal)
        except ValueError:
            raise ConfigError("marginal", f"must be one of {[m.value for m in MarginalKind]}, got {self.marginal!r}") from None

        if self.d < 2:
            raise ConfigError("d", f"must be >= 2, got {self.d}")
        if self.n < 1:
            raise ConfigError("n", f"must be >= 1, got {self.n}")
        if self.algorithm == Algorithm.ADAPTIVE.value and self.n < 3:
            raise ConfigError("n", "the adaptive procedure needs n >= 3")
        if any(b < 3 for b in self.budgets):
            raise ConfigError("budgets", "every budget must be >= 3")
        if not 0 < self.delta < 1:
            raise ConfigError("delta", f"must lie in (0, 1), got {self.delta}")
        if not self.seeds:
            raise ConfigError("seeds", "at least one seed is required")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds", "seeds must be distinct")
        if min(self.seeds) < 0 or self.master_seed < 0 or self.instance_seed < 0:
            raise ConfigError("seeds", "seeds must be non-negative")
        if not 0 < self.epsilon < 1:
            raise ConfigError("epsilon", f"must lie in (0, 1), got {self.epsilon}")
        if self.grid_side < 0:
            raise ConfigError("grid_side", f"must be >= 0, got {self.grid_side}")
        if self.audit_resolution == 1 or self.audit_resolution < 0:
            raise ConfigError("audit_resolution", "must be 0 (automatic) or >= 2")
        if self.risk_samples < 0:
            raise ConfigError("risk_samples", f"must be >= 0, got {self.risk_samples}")

        if self.alpha_guess is None:
            self.alpha_guess = self.alpha
        elif self.alpha_guess <= 0:
            raise ConfigError("alpha_guess", f"must be > 0, got {self.alpha_guess}")
        if self.anchor is None:
            self.anchor = [0.5] * (self.d - 1)
        if len(self.anchor) != self.d - 1 or not all(
            isinstance(a, (int, float)) and 0 <= a <= 1 for a in self.anchor
        ):
            raise ConfigError("anchor", f"needs {self.d - 1} coordinates in [0, 1], got {self.anchor}")
        if not self.risk_samples:
            self.risk_samples = settings.BOUNDARY_RISK_SAMPLES
        if not self.output:
            self.output = str(settings.BOUNDARY_OUTPUT_DIR)

        # surfaces Hölder/noise violations before any run starts
        self.build_instance()
        return self

    def _check_types(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.type in (int, "int") and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigError(f.name, f"must be an integer, got {value!r}")
            if f.type in (float, Optional[float]) and (isinstance(value, bool) or not isinstance(value, (int, float))):
                raise ConfigError(f.name, f"must be a number, got {value!r}")
            if f.type == bool and not isinstance(value, bool):
                raise ConfigError(f.name, f"must be true or false, got {value!r}")
            if f.type == str and not isinstance(value, str):
                raise ConfigError(f.name, f"must be a string, got {value!r}")
            if f.type in (List[int], Optional[List[float]]) and not isinstance(value, list):
                raise ConfigError(f.name, f"must be a list, got {value!r}")
            if f.type == List[int] and not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
                raise ConfigError(f.name, f"must be a list of integers, got {value!r}")

    def build_instance(self) -> ProblemInstance:
        coefficients = {
            "offset": self.offset,
            "frequency": self.frequency,
            "bumps_per_axis": self.bumps_per_axis,
        }
        if self.slope is not None:
            coefficients["slope"] = self.slope
        if self.amplitude is not None:
            coefficients["amplitude"] = self.amplitude
        try:
            return make_instance(
                self.family,
                self.d,
                SmoothnessParams(self.alpha, self.lam),
                NoiseParams(self.kappa, self.c),
                Marginal(self.marginal, self.delta0, self.kappa_prime, self.kappa0),
                self.instance_seed,
                c_eff=self.c_eff,
                eta_upper_const=self.eta_upper,
                noiseless=self.noiseless,
                **coefficients,
            )
        except InvalidInstance as exc:
            raise ConfigError("instance", str(exc)) from exc

    @property
    def output_dir(self) -> Path:
        return Path(self.output)

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        return data
