"""Command-line runner: ``qmix --scenario fig1``, ``qmix --spec file.json``, ``qmix run-all``.

Exit codes: 0 when every check passes, 1 on a failed check, 2 on usage,
parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import scenarios
from .analysis import AuditResult, MonteCarloResult, Observable
from .channels import MeasurementBasis
from .errors import QmixError, SpecError
from .scenarios import ObserverRecord, ScenarioReport
from .states import NORM_ATOL, DensityMatrix, Ensemble, PureState, SubsystemLabel, pure_to_density

SCENARIOS = ("fig1", "fig2", "fig3", "mixed_input", "wigner", "audit", "ambiguity")

_PARAM_KEYS = {
    "fig1": ({"alpha", "beta"}, set()),
    "fig2": ({"alpha", "beta"}, set()),
    "fig3": (set(), {"cat"}),
    "mixed_input": ({"ensemble"}, set()),
    "wigner": ({"alpha", "beta"}, {"friend_outcome"}),
    "audit": (set(), {"ensemble", "joint_state", "shots"}),
    "ambiguity": (set(), {"n_angles"}),
}

_R = 1 / math.sqrt(2)
CANONICAL_PARAMS = {
    "fig1": {"alpha": [_R, 0.0], "beta": [_R, 0.0]},
    "fig2": {"alpha": [_R, 0.0], "beta": [_R, 0.0]},
    "fig3": {},
    "mixed_input": {
        "ensemble": [
            {"weight": 0.5, "state": [[_R, 0.0], [_R, 0.0]]},
            {"weight": 0.5, "state": [[math.sqrt(0.3), 0.0], [math.sqrt(0.7), 0.0]]},
        ]
    },
    "wigner": {"alpha": [_R, 0.0], "beta": [_R, 0.0], "friend_outcome": "1"},
    "audit": {},
    "ambiguity": {},
}


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: str
    params: dict = field(default_factory=dict)
    tolerance: float = scenarios.DEFAULT_TOLERANCE
    seed: int = 0
    trials: int = 1000


@dataclass(frozen=True)
class RunSummary:
    spec: ScenarioSpec
    report: ScenarioReport
    exit_status: str


# -- spec parsing ------------------------------------------------------------


def _complex(value, name: str) -> list:
    if isinstance(value, bool):
        raise SpecError(f"{name}: expected a number or [re, im] pair")
    if isinstance(value, (int, float)):
        return [float(value), 0.0]
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        return [float(value[0]), float(value[1])]
    raise SpecError(f"{name}: expected a number or [re, im] pair, got {value!r}")


def _to_complex(pair) -> complex:
    return complex(pair[0], pair[1])


def _amplitudes(value, name: str) -> list:
    if not isinstance(value, list) or not value:
        raise SpecError(f"{name}: expected a list of amplitudes")
    amps = [_complex(v, f"{name}[{i}]") for i, v in enumerate(value)]
    norm2 = sum(a * a + b * b for a, b in amps)
    if abs(norm2 - 1.0) > NORM_ATOL:
        raise SpecError(f"{name}: squared norm is {norm2!r}, expected 1")
    return amps


def _ensemble_param(value, name: str) -> list:
    if not isinstance(value, list) or not value:
        raise SpecError(f"{name}: expected a nonempty list of {{weight, state}} members")
    members = []
    for i, m in enumerate(value):
        if not isinstance(m, dict) or set(m) != {"weight", "state"}:
            raise SpecError(f"{name}[{i}]: expected an object with keys 'weight' and 'state'")
        w = m["weight"]
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise SpecError(f"{name}[{i}].weight: expected a number")
        members.append({"weight": float(w), "state": _amplitudes(m["state"], f"{name}[{i}].state")})
    total = sum(m["weight"] for m in members)
    if abs(total - 1.0) > NORM_ATOL:
        raise SpecError(f"{name}: weights sum to {total!r}, expected 1")
    return members


def _int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise SpecError(f"{name}: expected an integer >= {minimum}, got {value!r}")
    return value


def _validate_params(scenario: str, params: dict) -> dict:
    required, optional = _PARAM_KEYS[scenario]
    missing = required - set(params)
    if missing:
        raise SpecError(f"{scenario}: missing params {sorted(missing)}")
    unknown = set(params) - required - optional
    if unknown:
        raise SpecError(f"{scenario}: unknown params {sorted(unknown)}")
    out = {}
    for key in sorted(params):
        v = params[key]
        if key in ("alpha", "beta"):
            out[key] = _complex(v, key)
        elif key == "ensemble":
            out[key] = _ensemble_param(v, key)
        elif key == "joint_state":
            out[key] = _amplitudes(v, key)
        elif key == "friend_outcome":
            if v is not None and not isinstance(v, str):
                raise SpecError("friend_outcome: expected a string label")
            out[key] = v
        elif key == "cat":
            if not isinstance(v, bool):
                raise SpecError("cat: expected true or false")
            out[key] = v
        elif key == "shots":
            out[key] = _int(v, key, 0)
        elif key == "n_angles":
            out[key] = _int(v, key, 1)
    if "alpha" in out:
        norm2 = sum(x * x for x in out["alpha"] + out["beta"])
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise SpecError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")
    return out


def parse_spec(text: bytes | str) -> ScenarioSpec:
    """Parse and validate a JSON scenario spec, filling in defaults.

    Raises:
        SpecError: on malformed JSON, unknown scenarios or keys, and missing
            or unnormalized parameters.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SpecError(f"spec is not UTF-8: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SpecError("spec must be a JSON object")
    unknown = set(raw) - {"scenario", "params", "tolerance", "seed", "trials"}
    if unknown:
        raise SpecError(f"unknown spec keys {sorted(unknown)}")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise SpecError(f"unknown scenario {scenario!r}; expected one of {list(SCENARIOS)}")
    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise SpecError("params must be a JSON object")
    tolerance = raw.get("tolerance", scenarios.DEFAULT_TOLERANCE)
    if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)) or not tolerance >= 0:
        raise SpecError(f"tolerance must be a non-negative number, got {tolerance!r}")
    return ScenarioSpec(
        scenario=scenario,
        params=_validate_params(scenario, params),
        tolerance=float(tolerance),
        seed=_int(raw.get("seed", 0), "seed", 0),
        trials=_int(raw.get("trials", 1000), "trials", 1),
    )


def spec_to_dict(spec: ScenarioSpec) -> dict:
    return {
        "scenario": spec.scenario,
        "params": spec.params,
        "tolerance": spec.tolerance,
        "seed": spec.seed,
        "trials": spec.trials,
    }


def canonical_spec(scenario: str, **overrides) -> ScenarioSpec:
    if scenario not in SCENARIOS:
        raise SpecError(f"unknown scenario {scenario!r}")
    spec = ScenarioSpec(scenario, _validate_params(scenario, CANONICAL_PARAMS[scenario]))
    return replace(spec, **{k: v for k, v in overrides.items() if v is not None})


# -- running -----------------------------------------------------------------


def _ensemble(members: list) -> Ensemble:
    return Ensemble(
        [(m["weight"], PureState(np.array([_to_complex(a) for a in m["state"]]))) for m in members]
    )


def run(spec: ScenarioSpec) -> RunSummary:
    p, tol = spec.params, spec.tolerance
    name = spec.scenario
    if name == "fig1":
        report = scenarios.scenario_fig1(_to_complex(p["alpha"]), _to_complex(p["beta"]), tol)
    elif name == "fig2":
        report = scenarios.scenario_fig2(_to_complex(p["alpha"]), _to_complex(p["beta"]), tol)
    elif name == "fig3":
        report = scenarios.scenario_fig3(tol, cat=p.get("cat", False))
    elif name == "mixed_input":
        report = scenarios.scenario_mixed_input(_ensemble(p["ensemble"]), tol)
    elif name == "wigner":
        report = scenarios.scenario_wigner(
            _to_complex(p["alpha"]), _to_complex(p["beta"]), p.get("friend_outcome"), tol
        )
    elif name == "audit":
        ens = _ensemble(p["ensemble"]) if "ensemble" in p else None
        joint = None
        if "joint_state" in p:
            joint = pure_to_density(PureState(np.array([_to_complex(a) for a in p["joint_state"]])))
        report = scenarios.scenario_audit(ens, joint, spec.trials, spec.seed, tol, p.get("shots", 0))
    elif name == "ambiguity":
        report = scenarios.scenario_ambiguity(p.get("n_angles", 50), spec.seed, tol)
    else:  # parse_spec guards this
        raise SpecError(f"unknown scenario {name!r}")
    return RunSummary(spec, report, "pass" if report.passed else "fail")


# -- reporting ---------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, DensityMatrix):
        return {"qubits": obj.qubits, "matrix": _jsonable(obj.matrix)}
    if isinstance(obj, PureState):
        return _jsonable(obj.amplitudes)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return np.stack([obj.real, obj.imag], axis=-1).tolist()
        return obj.tolist()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Observable):
        return _jsonable(obj.matrix)
    if isinstance(obj, ObserverRecord):
        return {
            "observer": obj.observer.name,
            "known_outcome": obj.known_outcome,
            "probability": obj.probability,
            "description_of_S": _jsonable(obj.description_of_S),
        }
    if isinstance(obj, AuditResult):
        return {
            "trials": obj.trials,
            "seed": obj.seed,
            "max_abs_gap": obj.max_abs_gap,
            "max_distribution_gap": obj.max_distribution_gap,
            "state_distance": obj.state_distance,
            "worst_observable": _jsonable(obj.worst_observable),
            "monte_carlo": _jsonable(obj.monte_carlo),
        }
    if isinstance(obj, MonteCarloResult):
        return {"shots": obj.shots, "max_z": obj.max_z, "agree": obj.agree}
    if isinstance(obj, (SubsystemLabel, MeasurementBasis)):
        return str(obj)
    return obj


def report_to_dict(report: ScenarioReport) -> dict:
    return {
        "scenario_id": report.scenario_id,
        "parameters": _jsonable(report.parameters),
        "stages": {label: _jsonable(rho) for label, rho in report.stages},
        "metrics": _jsonable(report.metrics),
        "checks": [
            {
                "description": c.description,
                "expected": _jsonable(c.expected),
                "actual": _jsonable(c.actual),
                "tolerance": c.tolerance,
                "deviation": c.deviation,
                "passed": c.passed,
            }
            for c in report.checks
        ],
        "metadata": _jsonable(report.metadata),
    }


def summary_to_dict(summary: RunSummary) -> dict:
    return {
        "scenario": summary.spec.scenario,
        "seed": summary.spec.seed,
        "exit_status": summary.exit_status,
        "spec": spec_to_dict(summary.spec),
        "report": report_to_dict(summary.report),
    }


def _fmt(v) -> str:
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, float) for x in v):
        return f"{v[0]:.6g}{v[1]:+.6g}j"
    if isinstance(v, float):
        return f"{v:.6g}"
    return json.dumps(v)


def _text(summary: RunSummary) -> str:
    r = summary.report
    lines = [
        f"scenario: {summary.spec.scenario}   seed: {summary.spec.seed}   tolerance: {summary.spec.tolerance:g}",
    ]
    if summary.spec.params:
        lines.append("parameters:")
        for k, v in summary.spec.params.items():
            lines.append(f"  {k:<16} {_fmt(v)}")
    if r.metrics:
        lines.append("metrics:")
        for k, v in r.metrics.items():
            lines.append(f"  {k:<28} {_fmt(_jsonable(v))}")
    lines.append("checks:")
    width = max((len(c.description) for c in r.checks), default=0)
    for c in r.checks:
        mark = "✓" if c.passed else "✗"
        lines.append(f"  {mark} {c.description:<{width}}  dev={c.deviation:.2e}  tol={c.tolerance:.0e}")
    lines.append("PASS" if summary.exit_status == "pass" else "FAIL")
    return "\n".join(lines) + "\n"


_NUM = r"-?[0-9][0-9.eE+-]*"
_PAIR = re.compile(rf"\[\s*({_NUM}),\s*({_NUM})\s*\]")


def _dumps(doc) -> bytes:
    # Keep [re, im] pairs on one line; everything else is indented.
    text = _PAIR.sub(r"[\1, \2]", json.dumps(doc, indent=2))
    return (text + "\n").encode("utf-8")


def emit_report(summary: RunSummary, format: str = "json") -> bytes:
    if format == "json":
        return _dumps(summary_to_dict(summary))
    if format == "text":
        return _text(summary).encode("utf-8")
    raise ValueError(f"unknown format {format!r}")


def run_all(tolerance=None, seed=None, trials=None) -> list[RunSummary]:
    """Run every scenario with its canonical parameters, ordered by name."""
    return [
        run(canonical_spec(name, tolerance=tolerance, seed=seed, trials=trials))
        for name in sorted(SCENARIOS)
    ]


def emit_run_all(summaries: list[RunSummary], format: str = "text") -> bytes:
    status = "pass" if all(s.exit_status == "pass" for s in summaries) else "fail"
    if format == "json":
        return _dumps({"exit_status": status, "runs": [summary_to_dict(s) for s in summaries]})
    lines = []
    for s in summaries:
        n_ok = sum(c.passed for c in s.report.checks)
        lines.append(
            f"{s.spec.scenario:<12} {s.exit_status.upper():<4}  ({n_ok}/{len(s.report.checks)} checks)"
        )
    lines.append(status.upper())
    return ("\n".join(lines) + "\n").encode("utf-8")


# -- entry point -------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qmix", description=__doc__.splitlines()[0], allow_abbrev=False)
    p.add_argument("mode", nargs="?", choices=("run", "run-all"), default="run")
    p.add_argument("--scenario", choices=SCENARIOS, help="run a scenario with canonical parameters")
    p.add_argument("--spec", metavar="FILE", help="JSON scenario spec ('-' for stdin)")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--run-all", action="store_true", help="run every scenario with canonical parameters")
    return p


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    out = sys.stdout.buffer
    try:
        if args.run_all or args.mode == "run-all":
            if args.scenario or args.spec:
                parser.error("run-all does not take --scenario or --spec")
            summaries = run_all(args.tolerance, args.seed, args.trials)
            out.write(emit_run_all(summaries, args.format or "text"))
            out.flush()
            return 0 if all(s.exit_status == "pass" for s in summaries) else 1

        if bool(args.scenario) == bool(args.spec):
            parser.error("give exactly one of --scenario or --spec")
        if args.spec:
            data = sys.stdin.buffer.read() if args.spec == "-" else open(args.spec, "rb").read()
            spec = parse_spec(data)
            overrides = {"tolerance": args.tolerance, "seed": args.seed, "trials": args.trials}
            spec = replace(spec, **{k: v for k, v in overrides.items() if v is not None})
        else:
            spec = canonical_spec(args.scenario, tolerance=args.tolerance, seed=args.seed, trials=args.trials)
        if spec.trials < 1 or spec.seed < 0 or spec.tolerance < 0:
            raise SpecError("trials must be positive, seed and tolerance non-negative")
        summary = run(spec)
    except (QmixError, OSError) as exc:
        print(f"qmix: error: {exc}", file=sys.stderr)
        return 2
    out.write(emit_report(summary, args.format or "json"))
    out.flush()
    return 0 if summary.exit_status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
