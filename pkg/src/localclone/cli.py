"""Command-line front end.

Exit codes: 0 verdict pass, 1 verdict fail, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import protocol
from .characterization import (
    catalyst_no_go_check,
    is_clonable_set,
    schmidt_rank_obstruction,
    witness_search,
)
from .characterization.witness import WITNESS_FIDELITY
from .qudit import SizeCapError, schmidt
from .scenario import Scenario, ScenarioError, parse_scenario, validate

log = logging.getLogger("localclone")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
TOOL = "localclone"


@dataclass
class Report:
    kind: str
    passed: bool
    details: dict[str, Any]
    scenario: dict[str, Any]
    runtime: float | None = None
    version: str = __version__
    warnings: list[str] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if self.passed else EXIT_FAIL

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out = {
            "tool": TOOL,
            "version": self.version,
            "kind": self.kind,
            "verdict": "pass" if self.passed else "fail",
            "scenario": self.scenario,
            "details": self.details,
            "warnings": self.warnings,
        }
        if timing and self.runtime is not None:
            out["runtime_seconds"] = self.runtime
        return out


def _matrix(m: np.ndarray) -> list:
    return [[[z.real, z.imag] for z in row] for row in np.asarray(m)]


def _simulate(sc: Scenario) -> tuple[bool, dict]:
    family = sc.family()
    report = protocol.verify_family(family)
    threshold = 1 - sc.tol
    members = []
    for r in report.reports:
        members.append(
            {
                "member": list(r.member),
                "total_probability": r.total_probability,
                "min_fidelity": r.min_fidelity,
                "branches": [
                    {"k": b.k, "probability": b.probability, "fidelity": b.fidelity}
                    for b in r.branches
                ],
            }
        )
    passed = report.povm_residual <= protocol.POVM_TOL and all(
        r.min_fidelity >= threshold
        and abs(r.total_probability - 1) <= protocol.PROBABILITY_TOL
        for r in report.reports
    )
    return passed, {
        "d": family.d,
        "parties": family.parties,
        "povm_residual": report.povm_residual,
        "fidelity_threshold": threshold,
        "members": members,
    }


def _check_clonable(sc: Scenario) -> tuple[bool, dict]:
    states = sc.pure_states()
    verdict = is_clonable_set(states, tol=sc.tol)
    alpha0 = schmidt(states[0], [0]).coefficients
    obstruction = schmidt_rank_obstruction(alpha0 / np.linalg.norm(alpha0), sc.d)
    fam = verdict.extracted_family
    details = {
        "clonable": verdict.clonable,
        "reason": verdict.reason.value,
        "detail": verdict.detail,
        "shifts": list(verdict.shifts) if fam else None,
        "alpha": list(fam.alpha) if fam else None,
        "reconstruction_fidelities": list(verdict.reconstruction_fidelities),
        "basis_transforms": (
            {
                "alice": _matrix(verdict.basis_transforms[0].matrix),
                "bob": _matrix(verdict.basis_transforms[1].matrix),
            }
            if verdict.basis_transforms
            else None
        ),
        "obstruction": {
            "rank": obstruction.rank,
            "product_rank": obstruction.product_rank,
            "obstruction": obstruction.obstruction,
            "majorization_allows": obstruction.majorization_allows,
        },
    }
    return verdict.clonable, details


def _check_catalyst(sc: Scenario) -> tuple[bool, dict]:
    v = catalyst_no_go_check(sc.catalyst_spec(), tol=sc.tol)
    return v.consistent, {
        "products1": list(v.products1),
        "products2": list(v.products2),
        "multisets_equal": v.multisets_equal,
        "alphas_equal": v.alphas_equal,
        "peeled1": list(v.peeled1) if v.peeled1 is not None else None,
        "peeled2": list(v.peeled2) if v.peeled2 is not None else None,
        "peeling_forces_equal": v.peeling_forces_equal,
        "consistent": v.consistent,
    }


def _witness(sc: Scenario) -> tuple[bool, dict]:
    r = witness_search(
        sc.pure_states(), restarts=sc.restarts, iters=sc.iters, seed=sc.seed, tol=sc.tol
    )
    return r.witness_found, {
        "best_min_fidelity": r.best_min_fidelity,
        "best_restart": r.best_restart,
        "witness_threshold": WITNESS_FIDELITY,
        "orthogonal": r.orthogonal,
        "same_schmidt": r.same_schmidt,
        "structural_failure": r.structural_failure,
        "trace": [
            {"restart": t.restart, "value": t.value, "evaluations": t.evaluations}
            for t in r.trace
        ],
        "best_n": _matrix(r.best_n),
    }


HANDLERS = {
    "simulate": _simulate,
    "check-clonable": _check_clonable,
    "check-catalyst": _check_catalyst,
    "witness": _witness,
}


def execute(sc: Scenario) -> Report:
    start = time.perf_counter()
    passed, details = HANDLERS[sc.kind](sc)
    return Report(
        kind=sc.kind,
        passed=bool(passed),
        details=details,
        scenario=sc.echo(),
        runtime=time.perf_counter() - start,
        warnings=list(sc.warnings),
    )


def _round(obj: Any) -> Any:
    """Floats to 12 significant digits, recursively."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(f"{float(obj):.12g}")
        return 0.0 if value == 0 else value
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def render_json(report: Report, timing: bool = False) -> str:
    return json.dumps(_round(report.to_dict(timing)), indent=2, sort_keys=True) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.12f}"


def render_text(report: Report, timing: bool = False) -> str:
    d = report.details
    lines = [
        f"{TOOL} {report.version}  kind={report.kind}  verdict={'PASS' if report.passed else 'FAIL'}"
    ]
    if timing and report.runtime is not None:
        lines.append(f"runtime: {report.runtime:.3f} s")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    if report.kind == "simulate":
        lines.append(f"d={d['d']} parties={d['parties']} povm_residual={d['povm_residual']:.3e}")
        lines.append(f"{'member':<16}{'k':>4}  {'probability':>16}  {'fidelity':>16}")
        for m in d["members"]:
            label = ",".join(str(s) for s in m["member"])
            for b in m["branches"]:
                lines.append(
                    f"{label:<16}{b['k']:>4}  {_fmt(b['probability']):>16}  {_fmt(b['fidelity']):>16}"
                )
    elif report.kind == "check-clonable":
        lines.append(f"clonable: {d['clonable']}  reason: {d['reason']}")
        if d["detail"]:
            lines.append(f"detail: {d['detail']}")
        if d["shifts"] is not None:
            lines.append(f"{'state':<8}{'shift':>6}  {'reconstruction':>16}")
            for i, (s, f) in enumerate(zip(d["shifts"], d["reconstruction_fidelities"])):
                lines.append(f"{i:<8}{s:>6}  {_fmt(f):>16}")
            lines.append("alpha: " + " ".join(_fmt(a) for a in d["alpha"]))
        ob = d["obstruction"]
        lines.append(
            f"schmidt rank {ob['rank']}, two-copy rank {ob['product_rank']}, "
            f"measure-and-prepare obstruction: {ob['obstruction']}"
        )
    elif report.kind == "check-catalyst":
        lines.append(f"{'i':<6}{'products1':>16}  {'products2':>16}")
        for i, (a, b) in enumerate(zip(d["products1"], d["products2"])):
            lines.append(f"{i:<6}{_fmt(a):>16}  {_fmt(b):>16}")
        lines.append(
            f"multisets equal: {d['multisets_equal']}  alphas equal: {d['alphas_equal']}  "
            f"consistent: {d['consistent']}"
        )
    elif report.kind == "witness":
        lines.append(
            f"best min-fidelity: {_fmt(d['best_min_fidelity'])} (restart {d['best_restart']})"
            f"  threshold {_fmt(d['witness_threshold'])}"
        )
        lines.append(
            f"orthogonal: {d['orthogonal']}  same schmidt: {d['same_schmidt']}"
        )
        lines.append(f"{'restart':<8}{'value':>16}  {'evaluations':>12}")
        for t in d["trace"]:
            lines.append(f"{t['restart']:<8}{_fmt(t['value']):>16}  {t['evaluations']:>12}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str = "text", timing: bool = False) -> bytes:
    text = render_json(report, timing) if fmt == "json" else render_text(report, timing)
    return text.encode("utf-8")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog=TOOL, description="Perfect LOCC cloning simulator and checker.")
    p.add_argument("--scenario", required=True, help="scenario JSON file or inline JSON object")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, help="witness search seed")
    p.add_argument("--tol", type=float, help="tolerance override")
    p.add_argument("--restarts", type=int, help="witness search restarts")
    p.add_argument("--iters", type=int, help="witness search evaluations per restart")
    p.add_argument("--timing", action="store_true", help="include runtime in the report")
    p.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    return p


def _apply_overrides(sc: Scenario, args: argparse.Namespace) -> Scenario:
    raw = sc.echo()
    for name in ("seed", "tol", "restarts", "iters"):
        value = getattr(args, name)
        if value is None:
            continue
        if name != "tol" and sc.kind != "witness":
            log.warning("--%s has no effect on kind '%s'", name, sc.kind)
            continue
        raw[name] = value
    out = validate(raw)
    out.warnings = sc.warnings + out.warnings
    return out


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        sc = _apply_overrides(parse_scenario(args.scenario), args)
        report = execute(sc)
    except (ScenarioError, SizeCapError, ValueError) as exc:
        print(f"{TOOL}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = render(report, args.format, args.timing)
    sys.stdout.buffer.write(out)
    sys.stdout.flush()
    print(f"runtime: {report.runtime:.3f} s", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
