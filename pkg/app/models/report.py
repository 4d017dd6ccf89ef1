"""
Result objects for experiments and commands.

Every report serializes to the same JSON shape:

    {"schema": 1, "op": ..., "params": {...}, "seed": ..., "samples": ...,
     "estimate": ..., "std_error": ..., "pass": ..., ...}

Keys are sorted on output so that equal reports give equal bytes.
"""
import json
import math
from typing import Any, Dict, List, Optional

from app import __version__
from app.models.errors import ParameterError

SCHEMA_VERSION = 1


class BiasReport:
    """
    Monte-Carlo estimate of a correlation.

    Attributes:
        relation_id: Name of the relation or event measured
        estimate: Signed correlation in [-1, 1] (2p - 1 for a bit event)
        samples: Number of samples drawn
        std_error: sqrt((1 - estimate^2) / samples)
        seed: Seed the sample stream was derived from
    """

    def __init__(self, relation_id: str, estimate: float, samples: int, seed: int,
                 std_error: Optional[float] = None):
        self.relation_id = relation_id
        self.estimate = estimate
        self.samples = samples
        self.seed = seed
        self.std_error = std_error if std_error is not None else self.standard_error(estimate, samples)

        self._validate()

    @staticmethod
    def standard_error(estimate: float, samples: int) -> float:
        return math.sqrt(max(0.0, 1.0 - estimate * estimate) / samples)

    @classmethod
    def from_count(cls, relation_id: str, zeros: int, samples: int, seed: int) -> "BiasReport":
        """Build from the number of samples where the relation evaluated to 0."""
        if samples <= 0:
            raise ParameterError("Sample count must be positive")
        return cls(relation_id, (2 * zeros - samples) / samples, samples, seed)

    def _validate(self) -> None:
        if self.samples <= 0:
            raise ParameterError("Sample count must be positive")
        if abs(self.estimate) > 1:
            raise ParameterError("Correlation estimate must lie in [-1, 1]")

    @property
    def probability(self) -> float:
        """Pr[relation = 0]."""
        return (1 + self.estimate) / 2

    @property
    def bias(self) -> float:
        """Pr[relation = 0] - 1/2."""
        return self.estimate / 2

    def z_score(self, expected: float = 0.0) -> float:
        if self.std_error == 0:
            return 0.0 if self.estimate == expected else math.inf
        return (self.estimate - expected) / self.std_error

    def within(self, expected: float, sigmas: float) -> bool:
        return abs(self.estimate - expected) <= sigmas * self.std_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "relation": self.relation_id,
            "estimate": self.estimate,
            "samples": self.samples,
            "std_error": self.std_error,
            "seed": self.seed,
        }

    def __repr__(self) -> str:
        return (f"BiasReport(relation='{self.relation_id}', estimate={self.estimate:.6g}, "
                f"se={self.std_error:.3g}, samples={self.samples})")


class RunReport:
    """
    Outcome of one CLI command or experiment.

    Attributes:
        op: Command or operation name
        params: Arguments echoed back
        passed: True only if every case passed
        seed / samples / estimate / std_error: Statistical fields, None when not applicable
        cases: Per-case results (dicts with at least a "pass" key)
        details: Extra operation-specific results
        timing: Wall-clock seconds; left out of statistical reports
    """

    def __init__(self,
                 op: str,
                 params: Optional[Dict[str, Any]] = None,
                 passed: bool = True,
                 seed: Optional[int] = None,
                 samples: Optional[int] = None,
                 estimate: Optional[float] = None,
                 std_error: Optional[float] = None,
                 cases: Optional[List[Dict[str, Any]]] = None,
                 details: Optional[Dict[str, Any]] = None,
                 timing: Optional[float] = None,
                 version: str = __version__):
        self.op = op
        self.params = params or {}
        self.seed = seed
        self.samples = samples
        self.estimate = estimate
        self.std_error = std_error
        self.cases = cases or []
        self.details = details or {}
        self.timing = timing
        self.version = version
        self.passed = passed and all(c.get("pass", True) for c in self.cases)

        self._validate()

    def _validate(self) -> None:
        if not self.op:
            raise ParameterError("Report needs an operation name")

    @classmethod
    def from_bias(cls, op: str, report: BiasReport, params: Dict[str, Any], passed: bool,
                  details: Optional[Dict[str, Any]] = None) -> "RunReport":
        return cls(op, params, passed, seed=report.seed, samples=report.samples,
                   estimate=report.estimate, std_error=report.std_error, details=details)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "schema": SCHEMA_VERSION,
            "op": self.op,
            "params": self.params,
            "seed": self.seed,
            "samples": self.samples,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "pass": self.passed,
            "version": self.version,
        }
        if self.cases:
            data["cases"] = self.cases
        if self.details:
            data["details"] = self.details
        if self.timing is not None:
            data["timing"] = self.timing
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        if data.get("schema") != SCHEMA_VERSION:
            raise ParameterError(f"Unsupported report schema: {data.get('schema')!r}")
        return cls(
            op=data["op"],
            params=data.get("params"),
            passed=bool(data.get("pass", False)),
            seed=data.get("seed"),
            samples=data.get("samples"),
            estimate=data.get("estimate"),
            std_error=data.get("std_error"),
            cases=data.get("cases"),
            details=data.get("details"),
            timing=data.get("timing"),
            version=data.get("version", __version__),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return f"RunReport(op='{self.op}', pass={self.passed}, cases={len(self.cases)})"
