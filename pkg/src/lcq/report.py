"""Per-statement verification records."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .mc import McEstimate, exact

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"
VACUOUS = "not-applicable-pass"

SIGMAS = 3.0
DET_TOL = 1e-9


def _est(x) -> McEstimate:
    if isinstance(x, McEstimate):
        return x
    return exact(float(x))


def within(lhs: McEstimate, rhs: McEstimate, sigmas: float = SIGMAS, tol: float = DET_TOL) -> bool:
    """lhs <= rhs (1 + sigmas * combined relative stderr), plus a deterministic tolerance."""
    rel = math.hypot(lhs.rel_stderr, rhs.rel_stderr) if (lhs.stderr or rhs.stderr) else 0.0
    return lhs.value <= rhs.value * (1.0 + sigmas * rel) + tol * max(abs(rhs.value), abs(lhs.value), 1e-300)


def agree(a: McEstimate, b: McEstimate, sigmas: float = SIGMAS, tol: float = DET_TOL) -> bool:
    return within(a, b, sigmas, tol) and within(b, a, sigmas, tol)


@dataclass
class VerificationReport:
    statement_id: str
    hypothesis_status: str
    lhs: McEstimate
    rhs: McEstimate
    verdict: str
    explicit_constant: float | None = None
    empirical_constant: float | None = None
    seed: int = 0
    runtime_ms: float = 0.0
    caveats: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    instance: str = ""

    # --- constructors -------------------------------------------------
    @classmethod
    def inequality(cls, sid, lhs, rhs, *, explicit_constant=None, seed=0, caveats=(), hypothesis_status="satisfied",
                   sigmas=SIGMAS, tol=DET_TOL, instance="", details=None) -> "VerificationReport":
        lhs, rhs = _est(lhs), _est(rhs)
        if hypothesis_status == "violated":
            verdict = VACUOUS
        else:
            verdict = PASS if within(lhs, rhs, sigmas, tol) else FAIL
        return cls(sid, hypothesis_status, lhs, rhs, verdict, explicit_constant, None, seed,
                   caveats=list(caveats), details=dict(details or {}), instance=instance)

    @classmethod
    def equality(cls, sid, lhs, rhs, *, seed=0, caveats=(), sigmas=SIGMAS, tol=DET_TOL, rel_tol=None,
                 instance="", details=None) -> "VerificationReport":
        """Two-sided check; ``rel_tol`` additionally bounds the relative gap."""
        lhs, rhs = _est(lhs), _est(rhs)
        ok = agree(lhs, rhs, sigmas, tol)
        if rel_tol is not None and rhs.value != 0:
            ok = ok and abs(lhs.value - rhs.value) <= rel_tol * abs(rhs.value)
        return cls(sid, "satisfied", lhs, rhs, PASS if ok else FAIL, 1.0, lhs.value / rhs.value if rhs.value else None,
                   seed, caveats=list(caveats), details=dict(details or {}), instance=instance)

    @classmethod
    def report_only(cls, sid, lhs, rhs, empirical_constant, *, seed=0, caveats=(), hypothesis_status="satisfied",
                    instance="", details=None) -> "VerificationReport":
        return cls(sid, hypothesis_status, _est(lhs), _est(rhs), REPORT_ONLY, None, float(empirical_constant), seed,
                   caveats=list(caveats), details=dict(details or {}), instance=instance)

    @classmethod
    def not_applicable(cls, sid, reason, *, seed=0, instance="") -> "VerificationReport":
        nan = McEstimate(math.nan, 0.0)
        return cls(sid, "not-applicable", nan, nan, VACUOUS, seed=seed, caveats=[reason], instance=instance)

    # --- queries --------------------------------------------------------
    @property
    def ok(self) -> bool:
        return self.verdict != FAIL

    @property
    def stderr(self) -> float:
        return math.hypot(self.lhs.stderr, self.rhs.stderr)

    def to_dict(self, runtime: bool = True) -> dict:
        d = {
            "id": self.statement_id,
            "instance": self.instance,
            "verdict": self.verdict,
            "hypothesis_status": self.hypothesis_status,
            "lhs": _num(self.lhs.value),
            "rhs": _num(self.rhs.value),
            "lhs_stderr": _num(self.lhs.stderr),
            "rhs_stderr": _num(self.rhs.stderr),
            "stderr": _num(self.stderr),
            "constant": _num(self.explicit_constant),
            "empirical_constant": _num(self.empirical_constant),
            "seed": self.seed,
            "caveats": list(self.caveats),
            "details": _jsonable(self.details),
        }
        if runtime:
            d["runtime_ms"] = round(self.runtime_ms, 3)
        return d

    def summary_line(self) -> str:
        emp = "" if self.empirical_constant is None else f" emp={self.empirical_constant:.6g}"
        return (f"{self.statement_id:<34} {self.instance:<40} {self.verdict:<19} "
                f"lhs={self.lhs.value:.6g} rhs={self.rhs.value:.6g}{emp}")


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _jsonable(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return _num(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, McEstimate):
        return obj.to_dict()
    return obj
