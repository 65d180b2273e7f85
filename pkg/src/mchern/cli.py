"""Command-line driver: scenario ingestion, verification sweeps, reports.

Exit codes: 0 all checks passed, 1 a verified identity failed, 2 bad
input.  Reports are JSON with sorted keys; all randomness is seeded and
the seed is recorded, so re-running a command reproduces the report byte
for byte.  Wall-clock timings are only attached on request (--timings)
and are never part of the digest.

Default sweep sizes can be overridden with the environment variable
``MC_SWEEP_BOUNDS``, e.g. ``MC_SWEEP_BOUNDS="d_max=4,mu_max=2,count=50"``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time

from . import cfun
from .blowup import (
    BlowupError,
    blow_up,
    program_from_json,
    run_program,
    total_class_delta_matches,
    verify_invariance,
)
from .modsys import system_to_json
from .ring import MotivicClass
from .sampling import random_invariance_case
from .strata import sweep_identities
from .surface import SurfaceModel, events_from_json, events_to_json
from .corpus import swap_last_two

DEFAULT_BOUNDS = {
    "d_max": 6,
    "mu_max": 4,
    "count": 200,
    "max_divisors": 8,
}
DEFAULT_SEED = 101

PASS, FAIL = "pass", "fail"


class ScenarioError(ValueError):
    pass


def sweep_bounds() -> dict:
    bounds = dict(DEFAULT_BOUNDS)
    raw = os.environ.get("MC_SWEEP_BOUNDS", "")
    for chunk in filter(None, (part.strip() for part in raw.split(","))):
        if "=" not in chunk:
            raise ScenarioError(f"bad MC_SWEEP_BOUNDS entry {chunk!r}")
        key, _, value = chunk.partition("=")
        try:
            bounds[key.strip()] = int(value)
        except ValueError:
            raise ScenarioError(f"bad MC_SWEEP_BOUNDS value {chunk!r}") from None
    return bounds


def _bound(args_value, name: str) -> int:
    return args_value if args_value is not None else sweep_bounds()[name]


def load_payload(path: str, expected_kind: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(obj, dict) and "kind" in obj:
        if obj["kind"] != expected_kind:
            raise ScenarioError(
                f"{path} holds a {obj['kind']!r} scenario, expected {expected_kind!r}"
            )
        obj = obj.get("payload", {})
    if not isinstance(obj, dict):
        raise ScenarioError(f"{path}: expected a JSON object")
    return obj


def build_report(command: str, inputs: dict, results: dict, status: str, seed=None) -> dict:
    body = {"command": command, "inputs": inputs, "results": results, "status": status}
    if seed is not None:
        body["seed"] = seed
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    body["digest"] = hashlib.sha256(canonical.encode()).hexdigest()
    return body


def emit(report: dict, args, started: float) -> int:
    if getattr(args, "timings", False):
        report = dict(report)
        report["timings"] = {"wall_seconds": round(time.monotonic() - started, 6)}
    if getattr(args, "json", False):
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        print(f"{report['command']}: {report['status']}")
        for key, value in sorted(report["results"].items()):
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            print(f"  {key}: {value}")
    return 0 if report["status"] == PASS else 1


# -- verify ---------------------------------------------------------------------


def cmd_verify_identity(args, which: str, started: float) -> int:
    d_max = _bound(args.d_max, "d_max")
    mu_max = _bound(args.mu_max, "mu_max")
    if d_max < 1 or mu_max < 0:
        raise ScenarioError("need d_max >= 1 and mu_max >= 0")
    result = sweep_identities(
        d_max, mu_max, which=which, mu0_offset=args.mu0_offset
    )
    results = {"cases": result.cases, "d_max": d_max, "mu_max": mu_max}
    if args.mu0_offset:
        results["mu0_offset"] = args.mu0_offset
    if result.counterexample is not None:
        results["counterexample"] = {
            "d": result.counterexample.d,
            "k": result.counterexample.k,
            "mus": list(result.counterexample.mus),
        }
    status = PASS if result.passed else FAIL
    inputs = {"d_max": d_max, "mu_max": mu_max, "mu0_offset": args.mu0_offset}
    return emit(build_report(f"verify {which}", inputs, results, status), args, started)


def cmd_verify_invariance(args, started: float) -> int:
    count = _bound(args.count, "count")
    max_divisors = _bound(args.max_divisors, "max_divisors")
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    rng = random.Random(seed)
    failures = []
    for index in range(count):
        system, center, loci = random_invariance_case(rng, max_divisors=max_divisors)
        ok = verify_invariance(system, center, loci)
        result = blow_up(system, center)
        if not total_class_delta_matches(system, result.system, center):
            ok = False
        if not ok:
            failures.append(index)
    results = {"cases": count, "max_divisors": max_divisors, "failures": failures}
    status = PASS if not failures else FAIL
    inputs = {"count": count, "max_divisors": max_divisors}
    return emit(
        build_report("verify invariance", inputs, results, status, seed=seed),
        args,
        started,
    )


# -- blowup -----------------------------------------------------------------------


def cmd_blowup_run(args, started: float) -> int:
    path = args.scenario or args.program
    if path is None:
        raise ScenarioError("blowup run needs --program or --scenario")
    payload = load_payload(path, "program")
    program = program_from_json(payload)
    problems = program.initial.validate()
    for locus in program.loci.values():
        problems += program.initial.locus_violations(locus)
    if problems:
        raise ScenarioError("; ".join(problems))
    try:
        outcome = run_program(program, audit=True)
    except BlowupError as exc:
        raise ScenarioError(str(exc)) from exc
    audits = [
        {
            "step": a.index,
            "fresh_id": a.fresh_id,
            "chi_invariant": a.invariance_ok,
            "total_class_ok": a.total_class_ok,
            "fiber_complete": a.fiber_complete,
        }
        for a in outcome.audits
    ]
    final_chi = outcome.final.chi(outcome.final.full_locus())
    results = {
        "steps": audits,
        "final_system": system_to_json(outcome.final, outcome.loci or None),
        "final_chi": final_chi.to_json(),
    }
    if args.emit_snapshots:
        results["snapshots"] = [system_to_json(s) for s in outcome.snapshots]
    status = PASS if outcome.all_checks_passed else FAIL
    inputs = {"program": _digest_file(path)}
    return emit(build_report("blowup run", inputs, results, status), args, started)


# -- surface -----------------------------------------------------------------------


def _load_surface(args) -> tuple[SurfaceModel, str]:
    path = args.scenario or args.program
    if path is None:
        raise ScenarioError("surface commands need --program or --scenario")
    payload = load_payload(path, "surface")
    events = events_from_json(payload)
    try:
        return SurfaceModel(events), path
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def verify_surface_stage(surface: SurfaceModel, m: int) -> dict:
    stage = surface.stage_model(m)
    pushed = surface.pushforward(surface.stringy_class(m), m)
    checks = {
        "pushforward_matches_chern": pushed == stage.chern_class(),
        "unit_pushforward": cfun.verify_unit_pushforward(surface, m),
    }
    system, loci = surface.export_modification_system(m)
    chi_full = system.chi(loci["full"])
    checks["chi_matches_stage_class"] = chi_full == surface.class_of_stage(m)
    checks["euler_chi"] = system.euler_chi(loci["full"]) == 3 + m
    checks["fiber_chi_one"] = all(
        system.chi(locus) == MotivicClass.one()
        for name, locus in loci.items()
        if name != "full"
    )
    return checks


def cmd_surface_verify(args, started: float) -> int:
    surface, path = _load_surface(args)
    if args.stage is not None and not 0 <= args.stage <= surface.k:
        raise ScenarioError(f"stage {args.stage} out of range 0..{surface.k}")
    stages = [args.stage] if args.stage is not None else list(range(surface.k + 1))
    results: dict = {"k": surface.k, "stages": {}}
    ok = True
    for m in stages:
        checks = verify_surface_stage(surface, m)
        if m == 0:
            checks["fiber_profiles_one"] = all(
                surface.fiber_euler_profile(anchor) == 1
                for anchor in surface.relative(0).root_order
            )
        results["stages"][str(m)] = checks
        ok = ok and all(checks.values())
    swapped = swap_last_two(surface.events)
    if swapped is not None:
        other = SurfaceModel(swapped)
        same = other.pushforward(other.stringy_class(0), 0) == surface.pushforward(
            surface.stringy_class(0), 0
        )
        results["order_swap"] = "push-forwards equal" if same else "push-forwards differ"
        ok = ok and same
    status = PASS if ok else FAIL
    inputs = {"program": _digest_file(path), "stage": args.stage}
    return emit(build_report("surface verify-main", inputs, results, status), args, started)


def cmd_surface_report(args, started: float) -> int:
    surface, path = _load_surface(args)
    stringy = surface.stringy_class(0)
    results = {
        "events": events_to_json(surface.events)["events"],
        "k": surface.k,
        "discrepancies": list(surface.discrepancies),
        "incidence": [list(p) for p in surface.meeting_pairs()],
        "chern": surface.chern_class().to_json(),
        "weighted_stratum_class": stringy.to_json(),
        "pushforwards": {
            str(m): surface.pushforward(stringy, m).to_json()
            for m in range(surface.k + 1)
        },
        "fiber_profiles": {
            anchor: str(surface.fiber_euler_profile(anchor))
            for anchor in surface.relative(0).root_order
        },
    }
    inputs = {"program": _digest_file(path)}
    return emit(build_report("surface report", inputs, results, PASS), args, started)


# -- cfun ------------------------------------------------------------------------


def cmd_cfun_push(args, started: float) -> int:
    surface, spath = _load_surface(args)
    payload = load_payload(args.function, "function")
    try:
        function = cfun.function_from_json(payload)
        base = cfun.pushforward(surface, function, args.stage or 0)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    results = {
        "function": cfun.function_to_json(function),
        "pushforward": base.to_json(),
    }
    inputs = {"program": _digest_file(spath), "function": _digest_file(args.function)}
    return emit(build_report("cfun push", inputs, results, PASS), args, started)


# -- motivic ------------------------------------------------------------------------


def cmd_motivic_eval(args, started: float) -> int:
    text = args.class_spec
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ScenarioError(f"cannot read {text[1:]}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = text  # allow a bare polynomial expression
    try:
        value = MotivicClass.from_json(obj)
        results: dict = {"class": value.to_json(), "canonical": str(value)}
        if args.euler:
            results["euler"] = str(value.euler_specialize())
        for q in args.at or ():
            results[f"at_{q}"] = str(value.eval_at(q))
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from exc
    inputs = {"class": obj if isinstance(obj, str) else json.dumps(obj, sort_keys=True)}
    return emit(build_report("motivic eval", inputs, results, PASS), args, started)


# -- plumbing --------------------------------------------------------------------


def _digest_file(path: str) -> str:
    try:
        with open(path, "rb") as handle:
            return hashlib.sha256(handle.read()).hexdigest()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    parser.add_argument("--timings", action="store_true", help="attach wall-clock timings")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mchern",
        description="exact identity checks for localized motivic classes and blow-ups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="identity sweeps")
    vsub = verify.add_subparsers(dest="identity", required=True)
    for name in ("simplex", "simplexcor"):
        vp = vsub.add_parser(name)
        vp.add_argument("--d-max", type=int, default=None)
        vp.add_argument("--mu-max", type=int, default=None)
        vp.add_argument("--mu0-offset", type=int, default=0)
        _add_common(vp)
    vinv = vsub.add_parser("invariance")
    vinv.add_argument("--count", type=int, default=None)
    vinv.add_argument("--seed", type=int, default=None)
    vinv.add_argument("--max-divisors", type=int, default=None)
    _add_common(vinv)

    blowup = sub.add_parser("blowup", help="run blow-up programs")
    bsub = blowup.add_subparsers(dest="action", required=True)
    brun = bsub.add_parser("run")
    brun.add_argument("--program")
    brun.add_argument("--scenario")
    brun.add_argument("--emit-snapshots", action="store_true")
    _add_common(brun)

    surf = sub.add_parser("surface", help="plane blow-up surfaces")
    ssub = surf.add_subparsers(dest="action", required=True)
    sver = ssub.add_parser("verify-main")
    sver.add_argument("--program")
    sver.add_argument("--scenario")
    sver.add_argument("--stage", type=int, default=None)
    _add_common(sver)
    srep = ssub.add_parser("report")
    srep.add_argument("--program")
    srep.add_argument("--scenario")
    _add_common(srep)

    cf = sub.add_parser("cfun", help="constructible functions")
    csub = cf.add_subparsers(dest="action", required=True)
    cpush = csub.add_parser("push")
    cpush.add_argument("--program")
    cpush.add_argument("--scenario")
    cpush.add_argument("--function", required=True)
    cpush.add_argument("--stage", type=int, default=None)
    _add_common(cpush)

    mot = sub.add_parser("motivic", help="evaluate classes")
    msub = mot.add_subparsers(dest="action", required=True)
    meval = msub.add_parser("eval")
    meval.add_argument("class_spec", help="class JSON, bare polynomial, or @file")
    meval.add_argument("--at", type=int, action="append")
    meval.add_argument("--euler", action="store_true")
    _add_common(meval)

    return parser


def main(argv=None) -> int:
    started = time.monotonic()
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            if args.identity in ("simplex", "simplexcor"):
                return cmd_verify_identity(args, args.identity, started)
            return cmd_verify_invariance(args, started)
        if args.command == "blowup":
            return cmd_blowup_run(args, started)
        if args.command == "surface":
            if args.action == "verify-main":
                return cmd_surface_verify(args, started)
            return cmd_surface_report(args, started)
        if args.command == "cfun":
            return cmd_cfun_push(args, started)
        if args.command == "motivic":
            return cmd_motivic_eval(args, started)
        parser.error(f"unknown command {args.command!r}")
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


def entry():  # console-script hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
