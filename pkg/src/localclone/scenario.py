"""Scenario files: JSON objects selecting one check and its inputs.

All coefficient lists are amplitudes (alpha), not probabilities (alpha^2).
Complex amplitudes may be written as ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .characterization.catalyst import CatalystSpec
from .operators import CloneFamily
from .qudit import PureState

log = logging.getLogger(__name__)

KINDS = ("simulate", "check-clonable", "check-catalyst", "witness")
DRIFT_TOL = 1e-6

REQUIRED = {
    "simulate": {"kind", "d", "alpha"},
    "check-clonable": {"kind", "states"},
    "check-catalyst": {"kind", "alpha1", "alpha2", "beta"},
    "witness": {"kind", "states"},
}
OPTIONAL = {
    "simulate": {"parties", "shifts", "tol"},
    "check-clonable": {"d", "tol"},
    "check-catalyst": {"tol"},
    "witness": {"d", "seed", "restarts", "iters", "tol"},
}
DEFAULTS = {
    "simulate": {"parties": 2, "tol": 1e-9},
    "check-clonable": {"tol": 1e-8},
    "check-catalyst": {"tol": 1e-9},
    "witness": {"seed": 0, "restarts": 8, "iters": 20000, "tol": 1e-8},
}


class ScenarioError(ValueError):
    """Malformed or semantically invalid scenario input."""


@dataclass
class Scenario:
    kind: str
    d: int | None = None
    parties: int | None = None
    alpha: list[float] | None = None
    shifts: list[list[int]] | None = None
    states: list[list[complex]] | None = None
    alpha1: list[float] | None = None
    alpha2: list[float] | None = None
    beta: list[float] | None = None
    seed: int | None = None
    restarts: int | None = None
    iters: int | None = None
    tol: float | None = None
    warnings: list[str] = field(default_factory=list, repr=False)

    def echo(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        for name in sorted(REQUIRED[self.kind] | OPTIONAL[self.kind]):
            value = getattr(self, name)
            if name == "kind" or value is None:
                continue
            if name == "states":
                value = [[[z.real, z.imag] for z in s] for s in value]
            out[name] = value
        return out

    def family(self) -> CloneFamily:
        members = [tuple(m) for m in self.shifts]
        return CloneFamily(self.d, tuple(self.alpha), tuple(members), self.parties)

    def pure_states(self) -> list[PureState]:
        return [PureState((self.d, self.d), np.array(s)) for s in self.states]

    def catalyst_spec(self) -> CatalystSpec:
        return CatalystSpec(tuple(self.alpha1), tuple(self.alpha2), tuple(self.beta))


def _int(name: str, value: Any, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"field '{name}': expected an integer, got {value!r}")
    if value < minimum:
        raise ScenarioError(f"field '{name}': must be >= {minimum}, got {value}")
    return value


def _real(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"field '{name}': expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ScenarioError(f"field '{name}': must be finite")
    return float(value)


def _complex(name: str, value: Any) -> complex:
    if isinstance(value, list):
        if len(value) != 2:
            raise ScenarioError(f"field '{name}': complex entries are [re, im] pairs")
        return complex(_real(name, value[0]), _real(name, value[1]))
    return complex(_real(name, value))


def _renormalize(name: str, values: list, warnings: list[str]) -> list:
    norm2 = sum(abs(v) ** 2 for v in values)
    drift = abs(norm2 - 1)
    if drift > DRIFT_TOL:
        raise ScenarioError(
            f"field '{name}': sum of squared magnitudes is {norm2:.9g}, not 1 "
            "(entries are amplitudes, not probabilities)"
        )
    if drift > 0:
        scale = 1 / math.sqrt(norm2)
        values = [v * scale for v in values]
        if drift > 1e-12:
            msg = f"field '{name}': renormalized (squared-norm drift {drift:.2e})"
            warnings.append(msg)
            log.warning(msg)
    return values


def _coefficients(name: str, value: Any, warnings: list[str]) -> list[float]:
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"field '{name}': expected a nonempty list of numbers")
    vals = [_real(name, v) for v in value]
    if any(v <= 0 for v in vals):
        raise ScenarioError(f"field '{name}': coefficients must be strictly positive")
    return _renormalize(name, vals, warnings)


def parse_scenario(source: str | Path) -> Scenario:
    """Parse inline JSON text or a path to a JSON file."""
    text = str(source)
    path = Path(text)
    if not text.lstrip().startswith("{"):
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario {source}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    return validate(raw)


def validate(raw: dict[str, Any]) -> Scenario:
    kind = raw.get("kind")
    if kind not in KINDS:
        raise ScenarioError(f"field 'kind': must be one of {', '.join(KINDS)}, got {kind!r}")
    allowed = REQUIRED[kind] | OPTIONAL[kind]
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ScenarioError(f"unknown field(s) for kind '{kind}': {', '.join(unknown)}")
    missing = sorted(REQUIRED[kind] - set(raw))
    if missing:
        raise ScenarioError(f"missing field(s) for kind '{kind}': {', '.join(missing)}")

    sc = Scenario(kind=kind)
    data = {**DEFAULTS[kind], **raw}
    if "tol" in data:
        sc.tol = _real("tol", data["tol"])
        if sc.tol <= 0:
            raise ScenarioError("field 'tol': must be positive")
    try:
        if kind == "simulate":
            _validate_simulate(sc, data)
        elif kind == "check-catalyst":
            sc.alpha1 = _coefficients("alpha1", data["alpha1"], sc.warnings)
            sc.alpha2 = _coefficients("alpha2", data["alpha2"], sc.warnings)
            sc.beta = _coefficients("beta", data["beta"], sc.warnings)
            sc.catalyst_spec()
        else:
            _validate_states(sc, data)
            if kind == "witness":
                sc.seed = _int("seed", data["seed"], 0)
                sc.restarts = _int("restarts", data["restarts"], 1)
                sc.iters = _int("iters", data["iters"], 1)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return sc


def _validate_simulate(sc: Scenario, data: dict[str, Any]) -> None:
    sc.d = _int("d", data["d"], 2)
    sc.parties = _int("parties", data["parties"], 2)
    sc.alpha = _coefficients("alpha", data["alpha"], sc.warnings)
    if len(sc.alpha) != sc.d:
        raise ScenarioError(f"field 'alpha': need {sc.d} entries, got {len(sc.alpha)}")
    if "shifts" in data:
        shifts = data["shifts"]
        if not isinstance(shifts, list) or not shifts:
            raise ScenarioError("field 'shifts': expected a nonempty list of members")
        members = []
        for m in shifts:
            if not isinstance(m, list):
                raise ScenarioError("field 'shifts': each member is a list of shift indices")
            members.append([_int("shifts", s, 0) for s in m])
        sc.shifts = members
    else:
        full = CloneFamily.full(sc.d, sc.alpha, sc.parties)
        sc.shifts = [list(m) for m in full.members]
    try:
        sc.family()
    except ValueError as exc:
        raise ScenarioError(f"field 'shifts': {exc}") from exc


def _validate_states(sc: Scenario, data: dict[str, Any]) -> None:
    states = data["states"]
    if not isinstance(states, list) or len(states) < 2:
        raise ScenarioError("field 'states': expected a list of at least two states")
    parsed = []
    for i, s in enumerate(states):
        if not isinstance(s, list) or not s:
            raise ScenarioError(f"field 'states[{i}]': expected a list of amplitudes")
        amps = [_complex(f"states[{i}]", z) for z in s]
        parsed.append(_renormalize(f"states[{i}]", amps, sc.warnings))
    lengths = {len(s) for s in parsed}
    if len(lengths) != 1:
        raise ScenarioError("field 'states': all states need the same number of amplitudes")
    n = lengths.pop()
    d = math.isqrt(n)
    if "d" in data:
        d = _int("d", data["d"], 2)
    if d * d != n or d < 2:
        raise ScenarioError(
            f"field 'states': {n} amplitudes do not describe two qudits of dimension {d}"
        )
    sc.d = d
    sc.states = parsed
    try:
        sc.pure_states()
    except ValueError as exc:
        raise ScenarioError(f"field 'states': {exc}") from exc
