"""Command-line front end: ``weakfan <group> <command> --session FILE ...``.

Every command prints one certificate (JSON or a short summary).  Exit codes:
0 success/Certified/WeakFan, 1 Refuted/Violation/NotMHS/NotConstant, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .arithgroup import centralizes, coset_buckets, enumerate_gamma, group_pool, intersection_set
from .cones import NilpotentCone, conjugate, intersect_cones, make_cone
from .errors import CertificationError, InputShapeError, NoSolution, NotMHS, WeakFanError
from .fan import (
    build_weak_fan,
    cardinality_criterion,
    exceptional_ray,
    make_fan,
    ray_refine,
    star_subdivide,
    weak_fan_check,
)
from .limits import (
    NotConstant,
    certify_orbit_pair,
    cone_weight_filtration,
    deligne_splitting,
    grading_element,
    is_r_split,
    rationalize_grading,
    sample_orbit_membership,
    weight_filtration,
)
from .serialize import (
    SchemaError,
    digest,
    encode_cone,
    encode_flag,
    encode_group_element,
    encode_matrix,
    encode_splitting,
    encode_weight,
    load_session,
)

HEIGHTS = (1, 2, 10, 100)
EXIT_OK, EXIT_REFUTED, EXIT_INPUT = 0, 1, 2


class Outcome:
    def __init__(self, verdict: str, witnesses: dict, code: int = EXIT_OK):
        self.verdict = verdict
        self.witnesses = witnesses
        self.code = code


def _cone(session, name) -> NilpotentCone:
    return session.lookup("cones", name)


def _flag(session, name):
    return session.lookup("flags", name)


def _encode_fan(fan) -> dict:
    return {
        "pool_size": len(fan.pool),
        "reps": [{"cone": encode_cone(c), "dim": c.dim, "flag": encode_flag(f)} for c, f in fan.items()],
    }


def _encode_report(r) -> dict:
    return {
        "certified": all(ok for _, ok in r.certified),
        "input_orbits": r.input_orbits,
        "output_orbits": r.output_orbits,
        "removed_rays": [{"cone": encode_cone(c), "rays": [encode_cone(x) for x in rays]} for c, rays in r.removed_rays],
        "stage": r.stage,
    }


def _session_fan(session):
    spec = session.fan
    if spec is None:
        raise SchemaError("$.fan", "this command needs a fan section")
    entries = [(session.cones[e["cone"]], session.flags[e["flag"]]) for e in spec.get("cones", [])]
    gens = [session.gamma_generators[g] for g in spec.get("gamma", [])]
    pool = group_pool(gens, spec.get("max_word_len", 1), session.lattice.dim)
    return make_fan(session.lattice, entries, pool)


def _fan_verdict(v) -> dict:
    d = v.detail
    if v.ok:
        return {}
    out = {}
    for key in ("i", "j", "count", "expected"):
        if key in d:
            out[key] = d[key]
    if "sigma" in d:
        out["sigma"] = encode_cone(d["sigma"])
        out["tau_gamma"] = encode_cone(d["tau_gamma"])
        out["gamma"] = encode_group_element(d["gamma"])
        out["flag"] = encode_flag(d["flag"])
        out["intersection"] = encode_cone(d["intersection"]) if d["intersection"] is not None else None
    return out


# -- commands -------------------------------------------------------------------

def cmd_orbit_check(session, args) -> Outcome:
    sigma, f = _cone(session, args.cone), _flag(session, args.flag)
    cert = certify_orbit_pair(sigma, f)
    sampled = sample_orbit_membership(sigma, f, HEIGHTS)
    w = {
        "failure": cert.failure,
        "r_split": cert.r_split,
        "sampled_heights": list(HEIGHTS),
        "sampled_membership": list(sampled),
        "splitting": encode_splitting(cert.splitting) if cert.splitting else None,
        "weight": encode_weight(cert.weight) if cert.weight else None,
    }
    return Outcome(cert.verdict, w, EXIT_OK if cert.certified else EXIT_REFUTED)


def cmd_wf_compute(session, args) -> Outcome:
    n = session.nilpotent_or_ray(args.nilpotent)
    return Outcome("Computed", {"weight": encode_weight(weight_filtration(n))})


def cmd_wf_cone(session, args) -> Outcome:
    sigma = _cone(session, args.cone)
    try:
        w = cone_weight_filtration(sigma, args.samples, args.seed)
    except NotConstant as exc:
        return Outcome("NotConstant", {
            "points": [encode_matrix(p) for p in exc.points],
            "weights": [encode_weight(x) for x in exc.filtrations],
        }, EXIT_REFUTED)
    return Outcome("Constant", {"samples": args.samples, "seed": args.seed, "weight": encode_weight(w)})


def _split(session, args):
    sigma, f = _cone(session, args.cone), _flag(session, args.flag)
    w = cone_weight_filtration(sigma)
    return sigma, f, deligne_splitting(w.shifted(f.weight), f)


def cmd_split(session, args) -> Outcome:
    try:
        _, _, s = _split(session, args)
    except NotMHS as exc:
        return Outcome("NotMHS", {"message": str(exc), "witness": exc.witness}, EXIT_REFUTED)
    except NotConstant:
        return Outcome("NotConstant", {}, EXIT_REFUTED)
    return Outcome("Split", {"r_split": is_r_split(s), "splitting": encode_splitting(s)})


def cmd_grading(session, args) -> Outcome:
    try:
        sigma, f, s = _split(session, args)
    except NotMHS as exc:
        return Outcome("NotMHS", {"message": str(exc), "witness": exc.witness}, EXIT_REFUTED)
    except NotConstant:
        return Outcome("NotConstant", {}, EXIT_REFUTED)
    y = grading_element(s).Y
    w = {"Y": encode_matrix(y), "rational": y.is_real}
    try:
        yr = rationalize_grading(y, [sigma], session.lattice).Y
        w["Y_rational"] = encode_matrix(yr)
        w["ad_check"] = all(((g @ yr) - (yr @ g)) == g.scale(2) for g in sigma.generators)
    except NoSolution as exc:
        w["Y_rational"] = None
        w["rationalize_error"] = str(exc)
    return Outcome("Computed", w)


def cmd_cones_intersect(session, args) -> Outcome:
    left, right = _cone(session, args.left), _cone(session, args.right)
    w = {}
    if args.gamma:
        g = session.lookup("gamma_generators", args.gamma)
        right = conjugate(g.matrix, right)
        w["gamma"] = encode_group_element(g)
    c = intersect_cones(left, right)
    w["intersection"] = encode_cone(c) if c is not None else None
    return Outcome("Empty" if c is None else "Nonempty", w)


def cmd_gamma_enumerate(session, args) -> Outcome:
    left, right = _cone(session, args.left), _cone(session, args.right)
    flags = [session.flags[k] for k in (args.flag or sorted(session.flags))]
    gens = session.generator_list()
    ws = enumerate_gamma(left, right, gens, args.max_word_len, flags, flags)
    inter = intersection_set(ws)
    pool = group_pool(gens, args.max_word_len, session.lattice.dim)
    zs = [g for g in pool if centralizes(g, left)]
    zts = [g for g in pool if centralizes(g, right)]
    buckets = coset_buckets(ws, zs, zts, search_len=1)
    return Outcome("Enumerated", {
        "bucket_sizes": [len(b) for b in buckets.buckets],
        "elements": [encode_group_element(g) for g in ws.elements],
        "intersection_set": [encode_cone(c) for c in inter],
        "intersection_size": len(inter),
        "max_word_len": args.max_word_len,
        "relations": [r for _, _, r in buckets.relations],
    })


def cmd_fan_check(session, args) -> Outcome:
    fan = _session_fan(session)
    v = weak_fan_check(fan)
    c = cardinality_criterion(fan)
    w = {"cardinality": c.verdict, "fan": _encode_fan(fan), "violation": _fan_verdict(v)}
    if not c.ok:
        w["cardinality_failure"] = _fan_verdict(c)
    return Outcome(v.verdict, w, EXIT_OK if v.ok else EXIT_REFUTED)


def cmd_fan_build(session, args) -> Outcome:
    fan = _session_fan(session)
    try:
        out, reports = build_weak_fan(fan)
    except CertificationError as exc:
        return Outcome("Violation", {"message": str(exc)}, EXIT_REFUTED)
    return Outcome("WeakFan", {
        "cardinality": cardinality_criterion(out).verdict,
        "fan": _encode_fan(out),
        "reports": [_encode_report(r) for r in reports],
    })


def cmd_fan_ray_refine(session, args) -> Outcome:
    fan = _session_fan(session)
    ray = session.nilpotent_or_ray(args.ray)
    out, report = ray_refine(fan, ray)
    return Outcome(cardinality_criterion(out).verdict, {"fan": _encode_fan(out), "report": _encode_report(report)})


def cmd_fan_star(session, args) -> Outcome:
    fan = _session_fan(session)
    ni, nj = session.nilpotent_or_ray(args.i), session.nilpotent_or_ray(args.j)
    out, report = star_subdivide(fan, ni, nj)
    e = exceptional_ray(fan, ni, nj)
    return Outcome(cardinality_criterion(out).verdict, {
        "exceptional_ray": encode_cone(e),
        "fan": _encode_fan(out),
        "report": _encode_report(report),
    })


# -- plumbing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--session", "-s", required=True, help="session JSON file")
    common.add_argument("--output", choices=("json", "summary"), default="json")

    p = argparse.ArgumentParser(prog="weakfan", description="Exact certificates for nilpotent orbits and weak fans.")
    p.add_argument("--version", action="version", version=f"weakfan {__version__}")
    groups = p.add_subparsers(dest="group", required=True)

    def leaf(sub, name, fn, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.set_defaults(func=fn)
        return q

    orbit = groups.add_parser("orbit").add_subparsers(dest="command", required=True)
    q = leaf(orbit, "check", cmd_orbit_check, "certify a nilpotent orbit pair")
    q.add_argument("--cone", required=True)
    q.add_argument("--flag", required=True)

    wf = groups.add_parser("wf").add_subparsers(dest="command", required=True)
    q = leaf(wf, "compute", cmd_wf_compute, "weight filtration of one nilpotent")
    q.add_argument("--nilpotent", required=True)
    q = leaf(wf, "cone", cmd_wf_cone, "weight filtration of a cone")
    q.add_argument("--cone", required=True)
    q.add_argument("--samples", type=int, default=0)
    q.add_argument("--seed", type=int, default=0)

    q = leaf(groups, "split", cmd_split, "Deligne splitting of the limit MHS")
    q.add_argument("--cone", required=True)
    q.add_argument("--flag", required=True)
    q = leaf(groups, "grading", cmd_grading, "grading element of the limit MHS")
    q.add_argument("--cone", required=True)
    q.add_argument("--flag", required=True)

    cones = groups.add_parser("cones").add_subparsers(dest="command", required=True)
    q = leaf(cones, "intersect", cmd_cones_intersect, "intersect two open cones")
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--gamma")

    gamma = groups.add_parser("gamma").add_subparsers(dest="command", required=True)
    q = leaf(gamma, "enumerate", cmd_gamma_enumerate, "bounded search for Gamma_{sigma,tau}")
    q.add_argument("--left", required=True)
    q.add_argument("--right", required=True)
    q.add_argument("--max-word-len", type=int, required=True)
    q.add_argument("--flag", action="append")

    fan = groups.add_parser("fan").add_subparsers(dest="command", required=True)
    leaf(fan, "check", cmd_fan_check, "weak-fan test on the session fan")
    leaf(fan, "build", cmd_fan_build, "subdivide the session fan into a weak fan")
    q = leaf(fan, "ray-refine", cmd_fan_ray_refine, "refine along a ray")
    q.add_argument("--ray", required=True)
    q = leaf(fan, "star", cmd_fan_star, "star subdivision at two rays")
    q.add_argument("--i", required=True)
    q.add_argument("--j", required=True)
    return p


def _command_echo(args) -> list:
    skip = {"func", "session", "output", "group", "command"}
    words = [args.group] + ([args.command] if getattr(args, "command", None) else [])
    for key in sorted(vars(args)):
        if key in skip or getattr(args, key) is None:
            continue
        words.append(f"--{key.replace('_', '-')}={getattr(args, key)}")
    return words


def certificate(args, raw_session, outcome: Outcome) -> dict:
    return {
        "command": _command_echo(args),
        "input_digest": digest(raw_session),
        "tool_version": __version__,
        "verdict": outcome.verdict,
        "witnesses": outcome.witnesses,
    }


def _summary(cert: dict) -> str:
    lines = [f"{' '.join(cert['command'])}: {cert['verdict']}"]
    for key, val in sorted(cert["witnesses"].items()):
        if isinstance(val, (bool, int, str)) or val is None:
            lines.append(f"  {key}: {val}")
        elif isinstance(val, list) and all(isinstance(x, (bool, int, str)) for x in val):
            lines.append(f"  {key}: {val}")
        elif key in ("failure", "witness", "violation") and isinstance(val, dict):
            lines.append(f"  {key}: {json.dumps(val, sort_keys=True)[:200]}")
    return "\n".join(lines) + "\n"


def render(cert: dict, mode: str) -> str:
    if mode == "summary":
        return _summary(cert)
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        session, raw = load_session(args.session)
        outcome = args.func(session, args)
    except (SchemaError, InputShapeError, ValueError, WeakFanError) as exc:
        stderr.write(f"weakfan: error: {exc}\n")
        return EXIT_INPUT
    stdout.write(render(certificate(args, raw, outcome), args.output))
    return outcome.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
