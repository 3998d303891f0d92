"""Command-line front end: catalog queries, pair verification,
classification, thresholds, and regeneration of the golden tables.

Every subcommand is deterministic: identical input produces byte-identical
JSON (sorted keys, exact 'p/q' rationals).  Exit codes: 0 on success, 2
when `verify` reaches a mathematically valid negative or indeterminate
verdict, 1 on malformed input."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .lattice import POSITIVE, rat, rat_str
from .surface import pair_from_json, validate_configuration
from .verifier import is_minimal, minimal_model, verify
from .classify import (
    BETH,
    catalog,
    conic_bundle,
    match_minimal_family,
    parse_family_id,
    positivity_class,
)
from . import thresholds


class UsageError(Exception):
    pass


def _emit(payload, fmt="json"):
    if fmt == "table":
        print(_as_table(payload))
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _as_table(payload, prefix=""):
    lines = []
    if isinstance(payload, dict):
        for key in sorted(payload):
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append("%s%s:" % (prefix, key))
                lines.append(_as_table(value, prefix + "  "))
            else:
                lines.append("%s%-18s %s" % (prefix, key, value))
    elif isinstance(payload, list):
        for value in payload:
            if isinstance(value, (dict, list)):
                lines.append(_as_table(value, prefix + "  "))
                lines.append("")
            else:
                lines.append("%s- %s" % (prefix, value))
    else:
        lines.append("%s%s" % (prefix, payload))
    return "\n".join(line for line in lines if line is not None)


def _load_pair(args):
    if args.pair_json:
        try:
            data = json.loads(Path(args.pair_json).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("cannot read pair description: %s" % exc)
        try:
            return pair_from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise UsageError("bad pair description: %s" % exc)
    if args.family:
        try:
            entry, n_inline, m_inline = parse_family_id(args.family)
            n = args.n if args.n is not None else n_inline
            m = args.m if args.m is not None else m_inline
            return entry.instantiate(n=n, m=m)
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc))
    raise UsageError("need --family or --pair-json")


def _parse_betas(text, r):
    if text is None:
        return None
    try:
        parts = [rat(p.strip()) for p in text.split(",")]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError("bad --beta value: %s" % exc)
    if len(parts) == 1:
        parts = parts * r
    if len(parts) != r:
        raise UsageError("expected %d angle values" % r)
    if any(not 0 < b <= 1 for b in parts):
        raise UsageError("angles must lie in (0, 1]")
    return parts


def _pair_header(pair):
    out = {"pair": pair.to_json(), "rank": pair.basis.rank, "components": pair.r}
    return out


def cmd_catalog_list(args):
    payload = []
    for entry in catalog():
        item = entry.to_json()
        item["kee_status"] = _flatten_rules(entry, "kee")
        item["aut_groups"] = _flatten_rules(entry, "aut")
        payload.append(item)
    _emit(payload, args.format)
    return 0


def cmd_catalog_show(args):
    try:
        entry, n_inline, m_inline = parse_family_id(args.family)
    except KeyError as exc:
        raise UsageError(str(exc))
    payload = entry.to_json()
    n = args.n if args.n is not None else n_inline
    m = args.m if args.m is not None else m_inline
    if n is None and entry.has_n:
        n = 0
    if m is None and entry.m_domain is not None:
        m = entry.m_domain[0]
    try:
        pair = entry.instantiate(n=n, m=m)
    except ValueError as exc:
        raise UsageError(str(exc))
    group, reductive = entry.aut(n, m)
    payload.update(
        {
            "instantiated": {"n": n, "m": m},
            "pair": pair.to_json(),
            "aut_identity_component": group,
            "reductive": reductive,
            "kee_status": entry.kee(n, m),
        }
    )
    _emit(payload, args.format)
    return 0


def cmd_verify(args):
    pair = _load_pair(args)
    verdict = verify(pair)
    payload = _pair_header(pair)
    payload["verdict"] = verdict.to_json()
    payload["diagnostics"] = [
        {"level": d.level, "message": d.message} for d in validate_configuration(pair)
    ]
    betas = _parse_betas(args.beta, pair.r)
    if betas is not None:
        from .verifier import ampleness_checks

        values = []
        ample = True
        for check in ampleness_checks(pair):
            v = check.polynomial.evaluate(betas)
            ok = v > 0 if check.strict else v >= 0
            ample = ample and ok
            values.append({"inequality": check.label, "value": rat_str(v), "ok": ok})
        payload["at_beta"] = {"beta": [rat_str(b) for b in betas], "ample": ample, "checks": values}
    _emit(payload, args.format)
    return 0 if verdict.strong.value == POSITIVE else 2


def cmd_classify(args):
    pair = _load_pair(args)
    payload = _pair_header(pair)
    payload["positivity_class"] = positivity_class(pair)
    _emit(payload, args.format)
    return 0


def cmd_minimal_model(args):
    pair = _load_pair(args)
    minimal, steps = minimal_model(pair)
    flag, offender = is_minimal(pair)
    payload = _pair_header(pair)
    try:
        family, params = match_minimal_family(minimal)
        matched = {"family": family, "params": params}
    except KeyError:
        matched = None
    payload.update(
        {
            "already_minimal": flag,
            "offending_curve": offender.label if offender else None,
            "steps": [
                {"contracted": s.label, "class": s.contracted_class.to_json(), "kind": s.kind}
                for s in steps
            ],
            "minimal_pair": minimal.to_json(),
            "minimal_family": matched,
        }
    )
    _emit(payload, args.format)
    return 0


def cmd_conic_bundle(args):
    pair = _load_pair(args)
    if positivity_class(pair) != BETH:
        raise UsageError("conic bundle structure exists only in class Beth")
    payload = _pair_header(pair)
    payload["conic_bundle"] = conic_bundle(pair).to_json()
    _emit(payload, args.format)
    return 0


def cmd_alpha(args):
    chosen = [
        bool(args.limit),
        args.toric is not None,
        args.berman_dim is not None,
        args.upper_big is not None,
        bool(args.eckardt),
    ]
    if sum(chosen) != 1:
        raise UsageError("pick exactly one of --limit/--toric/--berman-dim/--upper-big/--eckardt")
    if args.limit:
        if args.positivity:
            value = thresholds.alpha_limit(args.positivity)
            source = {"class": args.positivity}
        else:
            pair = _load_pair(args)
            cls = positivity_class(pair)
            value = thresholds.alpha_limit(cls)
            source = {"class": cls, "pair": pair.to_json()}
        payload = {
            "alpha": value.to_json(),
            "limit_of": source,
            "formula": "small-angle limit by positivity class: 1, 1/2, 0, 0",
        }
    elif args.toric is not None:
        betas = [rat(b) for b in args.toric]
        value = thresholds.alpha_toric_three_lines(betas)
        payload = {
            "alpha": value.to_json(),
            "beta": [rat_str(b) for b in betas],
            "formula": "max(b1, b2, b3)/(b1 + b2 + b3)",
        }
    elif args.berman_dim is not None:
        beta = _require_beta(args)
        value = thresholds.anticanonical_alpha_bound(args.berman_dim, beta)
        payload = {
            "alpha": value.to_json(),
            "beta": rat_str(beta),
            "formula": "min(1, 1/(%d*b))" % (9 if args.berman_dim == 2 else 64),
            "kee_angle_threshold": rat_str(thresholds.kee_angle_threshold(args.berman_dim)),
        }
    elif args.upper_big is not None:
        beta = _require_beta(args)
        value = thresholds.alpha_upper_bound_big(rat(args.upper_big), beta)
        payload = {"alpha": value.to_json(), "beta": rat_str(beta), "formula": "b/(eps + b)"}
    else:
        if args.beta:
            value = thresholds.alpha_cubic_eckardt(rat(args.beta))
            payload = {"alpha": value.to_json(), "beta": args.beta, "formula": "(1+b)/(2+b)"}
        else:
            value = thresholds.alpha_cubic_eckardt()
            payload = {"alpha": value.to_json(), "formula": "(1+b)/(2+b)"}
    _emit(payload, args.format)
    return 0


def _require_beta(args):
    if not args.beta:
        raise UsageError("this computation needs --beta")
    try:
        return rat(args.beta)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError("bad --beta value: %s" % exc)


PRESET_CONFIGS = {
    "eckardt": thresholds.eckardt_configuration,
    "nodal-fiber": thresholds.nodal_fiber_configuration,
    "tangent-fiber": thresholds.tangent_fiber_configuration,
}


def cmd_lct(args):
    if args.preset:
        cfg = PRESET_CONFIGS[args.preset]()
        source = {"preset": args.preset}
    elif args.config:
        try:
            data = json.loads(Path(args.config).read_text())
            cfg = _config_from_json(data)
        except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise UsageError("bad singularity configuration: %s" % exc)
        source = {"config": args.config}
    else:
        raise UsageError("need --preset or --config")
    beta = rat(args.beta) if args.beta else None
    try:
        value = thresholds.lct_local(cfg, beta)
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {"lct": value.to_json(), "source": source}
    if beta is not None:
        payload["beta"] = rat_str(beta)
    _emit(payload, args.format)
    return 0


def _config_from_json(data):
    def poly(raw):
        if isinstance(raw, (int, str)):
            return rat(raw)
        # {"const": "p/q", "beta": "p/q"} meaning const + beta-coefficient * b
        from .lattice import BetaPolynomial

        const = rat(str(raw.get("const", 0)))
        lin = rat(str(raw.get("beta", 0)))
        return BetaPolynomial(1, {(0,): const, (1,): lin})

    branches = [
        thresholds.Branch(b.get("label", "B%d" % (i + 1)), poly(b.get("background", 0)), poly(b.get("scale", 0)))
        for i, b in enumerate(data["branches"])
    ]
    return thresholds.LocalSingularityConfig(tuple(branches), int(data.get("contact", 1)))


def cmd_regen_tables(args):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    classes = {}
    for entry in catalog():
        seen = set()
        for n in entry.n_values(args.max_n):
            for m in entry.m_values(min(args.max_m, 6)):
                seen.add(positivity_class(entry.instantiate(n=n, m=m)))
        if len(seen) != 1:
            raise RuntimeError(
                "positivity class of %s is not uniform over its domain: %s"
                % (entry.family_id, sorted(seen))
            )
        classes[entry.family_id] = seen.pop()
    kee = {entry.family_id: _flatten_rules(entry, "kee") for entry in catalog()}
    aut = {entry.family_id: _flatten_rules(entry, "aut") for entry in catalog()}
    written = []
    for name, payload in (
        ("theorem_4cases.json", classes),
        ("kee_status.json", kee),
        ("aut_groups.json", aut),
    ):
        path = out_dir / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        written.append(str(path))
    _emit({"written": written}, args.format)
    return 0


def _condition_text(rule):
    n_lo, n_hi, m_lo, m_hi, _ = rule
    parts = []
    for name, lo, hi in (("n", n_lo, n_hi), ("m", m_lo, m_hi)):
        if lo is None and hi is None:
            continue
        if lo is not None and lo == hi:
            parts.append("%s=%d" % (name, lo))
        elif hi is None:
            parts.append("%s>=%d" % (name, lo))
        elif lo is None:
            parts.append("%s<=%d" % (name, hi))
        else:
            parts.append("%d<=%s<=%d" % (lo, name, hi))
    return ",".join(parts) or "always"


def _flatten_rules(entry, which):
    if which == "kee":
        rules = [
            {"when": _condition_text(rule), "status": rule[4]} for rule in entry.kee_rules
        ]
        rules.append({"when": "otherwise", "status": entry.kee(None, None) if not entry.kee_rules else "Open"})
        if len(rules) == 2 and rules[0]["when"] == "always":
            return rules[0]["status"]
        if len(rules) == 1:
            return rules[0]["status"]
        return rules
    rules = [
        {"when": _condition_text(rule), "group": rule[4][0], "reductive": rule[4][1]}
        for rule in entry.aut_rules
    ]
    if not rules:
        return None
    if len(rules) == 1 and rules[0]["when"] == "always":
        return {"group": rules[0]["group"], "reductive": rules[0]["reductive"]}
    return rules


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aldp",
        description="exact small-angle positivity for log del Pezzo surface pairs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pair_input=True):
        p.add_argument("--format", choices=("json", "table"), default="json")
        if pair_input:
            p.add_argument("--family", help="catalog family id, e.g. I.9B.3 or I.7.n.m")
            p.add_argument("--n", type=int, default=None)
            p.add_argument("--m", type=int, default=None)
            p.add_argument("--pair-json", help="path to a pair description file")

    common(sub.add_parser("catalog-list", help="list every catalog family"), pair_input=False)
    p = sub.add_parser("catalog-show", help="show one family and a sample member")
    common(p, pair_input=False)
    p.add_argument("--family", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("verify", help="decide the strong/diagonal small-angle verdict")
    common(p)
    p.add_argument("--beta", help="rational angle(s) 'p/q' or 'p/q,p/q,...' for a point check")

    common(sub.add_parser("classify", help="positivity class of the adjoint anticanonical divisor"))
    common(sub.add_parser("minimal-model", help="contract -1-curves down to rank <= 2"))
    common(sub.add_parser("conic-bundle", help="fibration structure of a class Beth pair"))

    p = sub.add_parser("alpha", help="alpha invariant formulas, limits and bounds")
    common(p)
    p.add_argument("--limit", action="store_true", help="small-angle limit by positivity class")
    p.add_argument("--positivity", choices=("Aleph", "Beth", "Gimel", "Daleth"))
    p.add_argument("--toric", nargs=3, metavar="B", help="three angles for the line triangle")
    p.add_argument("--berman-dim", type=int, choices=(2, 3))
    p.add_argument("--upper-big", metavar="EPS", help="epsilon for the bigness upper bound")
    p.add_argument("--eckardt", action="store_true", help="cubic-surface boundary line value")
    p.add_argument("--beta")

    p = sub.add_parser("lct", help="local log canonical thresholds")
    common(p, pair_input=False)
    p.add_argument("--preset", choices=sorted(PRESET_CONFIGS))
    p.add_argument("--config", help="path to a branches/contact JSON description")
    p.add_argument("--beta")

    p = sub.add_parser("regen-tables", help="write the golden classification tables")
    common(p, pair_input=False)
    p.add_argument("--out-dir", default="tables")
    p.add_argument("--max-m", type=int, default=12)
    p.add_argument("--max-n", type=int, default=3)
    return parser


COMMANDS = {
    "catalog-list": cmd_catalog_list,
    "catalog-show": cmd_catalog_show,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "minimal-model": cmd_minimal_model,
    "conic-bundle": cmd_conic_bundle,
    "alpha": cmd_alpha,
    "lct": cmd_lct,
    "regen-tables": cmd_regen_tables,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
