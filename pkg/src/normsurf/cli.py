"""``normsurf`` command line front end.

Every subcommand builds a payload with the keys ``command``, ``verdict``,
``witness``, ``trace`` and ``assumptions``.  ``--json`` prints it as sorted
JSON; otherwise a plain text rendering of the same data is printed.

Exit codes: 0 success, 1 negative or Unknown verdict, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import cones, contract, models, mumford
from .errors import NoDecomposition, NormsurfError, NoSeed, ParseError
from .exactmath import Constraint, LPCertificate, format_rat
from .surface import Divisor, Level, NormalSurfaceModel, load_model, validate

MODEL_RELATIVE = "verdict is relative to the declared curves of the model"


class Result:
    def __init__(self, command, verdict, witness=None, trace=(), assumptions=(), code=0):
        self.code = code
        self.as_json = False
        self.payload = {
            "command": command,
            "verdict": verdict,
            "witness": witness if witness is not None else {},
            "trace": list(trace),
            "assumptions": list(assumptions),
        }


def _json_value(x):
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return format_rat(Fraction(x))
    if isinstance(x, Divisor):
        return {k: format_rat(v) for k, v in x.coeffs.items()}
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _lp_json(lp: LPCertificate, constraints: Sequence[Constraint], variables: Sequence[str]):
    return {
        "status": lp.status.value,
        "method": lp.method,
        "vector": list(lp.witness),
        "variables": list(variables),
        "constraints": [
            {"row": list(c.row), "relation": c.rel.value, "bound": c.bound} for c in constraints
        ],
    }


def _pairings(model, d: Divisor, names: Sequence[str]):
    return {n: mumford.pair(model, d, model.curve(n)) for n in names}


def _trace_json(lines):
    return [
        {
            "rule": t.rule,
            "fired": t.fired,
            "description": t.description,
            "hypotheses": [
                {"name": h.name, "holds": h.holds, "provenance": h.provenance, "detail": h.detail}
                for h in t.hypotheses
            ],
        }
        for t in lines
    ]


# --------------------------------------------------------------------------
# argument helpers


def _divisors(args, model: NormalSurfaceModel) -> list[tuple[str | None, Divisor]]:
    out: list[tuple[str | None, Divisor]] = []
    if args.div_file:
        try:
            with open(args.div_file, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read divisor file: {exc}", field="div-file") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"divisor file is not JSON: {exc.msg}", field="div-file", line=exc.lineno) from exc
        if not isinstance(doc, dict):
            raise ParseError("divisor file must map labels to divisors", field="div-file")
        for label, spec in doc.items():
            if isinstance(spec, dict):
                spec = ",".join(f"{k}={v}" for k, v in spec.items())
            if not isinstance(spec, str):
                raise ParseError(f"divisor {label!r} must be a string or an object", field="div-file")
            out.append((label, spec))
    for item in args.div or []:
        if len(item) > 2:
            raise ParseError("--div takes a spec or a label and a spec", field="div")
        out.append((item[0], item[1]) if len(item) == 2 else (None, item[0]))
    result = []
    for label, spec in out:
        level = Level.DOWNSTAIRS
        d = Divisor.parse(spec, level)
        if any(n in model.exceptional for n in d.support):
            d = d.with_level(Level.UPSTAIRS)
        model.check_divisor(d)
        result.append((label, d))
    return result


def _pick(divs, labels: Sequence[str], command: str, optional: Sequence[str] = ()):
    """Assign divisors to ``labels``; unlabeled ones fill remaining slots in order."""
    named = {lab: d for lab, d in divs if lab is not None}
    unnamed = [d for lab, d in divs if lab is None]
    unknown = set(named) - set(labels) - set(optional)
    if unknown:
        raise ParseError(f"{command} does not take divisor {sorted(unknown)[0]!r}", field="div")
    out = {}
    for lab in list(labels) + list(optional):
        if lab in named:
            out[lab] = named[lab]
        elif unnamed:
            out[lab] = unnamed.pop(0)
        elif lab in labels:
            raise ParseError(f"{command} needs divisor {lab}", field="div")
    if unnamed:
        raise ParseError(f"too many divisors for {command}", field="div")
    return out


def _downstairs(d: Divisor, label: str) -> Divisor:
    if d.level is not Level.DOWNSTAIRS:
        raise ParseError(f"divisor {label} must avoid exceptional curves", field="div")
    return d


def _curves(args) -> list[str]:
    names = []
    for item in args.curve or []:
        names.extend(x.strip() for x in item.split(",") if x.strip())
    if not names:
        raise ParseError("at least one --curve is required", field="curve")
    return names


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(model, args):
    report = validate(model)
    witness = {
        "errors": [{"code": i.code, "message": i.message} for i in report.errors],
        "warnings": [{"code": i.code, "message": i.message} for i in report.warnings],
    }
    return Result("validate", "valid" if report.ok else "invalid", witness, code=0 if report.ok else 2)


def cmd_pair(model, args):
    d = _pick(_divisors(args, model), ("A", "B"), "pair")
    value = mumford.pair(model, d["A"], d["B"])
    witness = {"A": d["A"], "B": d["B"], "pairing": value}
    assumptions = []
    if args.length is not None:
        witness["length"] = args.length
        witness["normal_pairing"] = value
        value = mumford.unibranched_pair(model, args.length, d["A"], d["B"])
        witness["pairing"] = value
        assumptions.append(f"length {args.length} of the generic local ring is caller-supplied")
    return Result("pair", format_rat(value), witness, assumptions=assumptions)


def cmd_pullback(model, args):
    d = _downstairs(_pick(_divisors(args, model), ("D",), "pullback")["D"], "D")
    res = mumford.pullback(model, d)
    witness = {
        "D": d,
        "pullback": res.upstairs,
        "per_point": {
            p.id: dict(zip(p.exceptional, res.per_point[p.id])) for p in model.singular_points
        },
    }
    return Result("pullback", "computed", witness)


def cmd_cartier(model, args):
    d = _downstairs(_pick(_divisors(args, model), ("D",), "cartier-index")["D"], "D")
    rep = mumford.cartier_index(model, d)
    witness = {
        "D": d,
        "index": rep.index,
        "certified": rep.certified,
        "local_index": dict(rep.local_index),
        "pullback": mumford.pullback(model, d).upstairs,
    }
    verdict = "certified" if rep.certified else "uncertified"
    return Result("cartier-index", verdict, witness, assumptions=rep.trail,
                  code=0 if rep.certified else 1)


def cmd_negdef(model, args):
    r = cones._curve_set(model, _curves(args))
    inertia = cones.restricted_inertia(model, r)
    ok = inertia.is_negative_definite()
    witness = {"curves": list(r), "gram": mumford.mumford_gram(model, r), "inertia": list(inertia)}
    return Result("negdef", "negative_definite" if ok else "not_negative_definite", witness,
                  code=0 if ok else 1)


def cmd_anti_ample(model, args):
    r = cones._curve_set(model, _curves(args))
    d = contract.anti_ample_on(model, r)
    witness = {"D": d, "pairings": _pairings(model, d, r)}
    return Result("anti-ample", "found", witness)


def cmd_ample_on_itself(model, args):
    c = cones._curve_set(model, _curves(args))
    try:
        a = contract.ample_on_itself(model, c)
    except NoSeed as exc:
        inertia = cones.restricted_inertia(model, c)
        return Result("ample-on-itself", "no_seed", {"inertia": list(inertia)}, [str(exc)], code=1)
    witness = {"A": a, "pairings": _pairings(model, a, c)}
    return Result("ample-on-itself", "found", witness)


def cmd_almost_affine(model, args):
    c = _curves(args)
    ok = contract.is_almost_affine_complement(model, c)
    c = cones._curve_set(model, c)
    witness = {
        "curves": list(c),
        "connected": contract.is_connected(model, c),
        "inertia": list(cones.restricted_inertia(model, c)),
    }
    return Result("almost-affine", "almost_affine" if ok else "not_almost_affine", witness,
                  code=0 if ok else 1)


def _conditions_json(rep: contract.ConditionReport):
    return {
        "cartier_near_R": rep.cartier_near_r.value,
        "positivity": rep.positivity.value,
        "trivial_on_thickenings": rep.trivial_on_thickenings.value,
        "details": list(rep.details),
    }


def cmd_contract(model, args):
    r = _curves(args)
    v = contract.contraction_certificate(model, r)
    witness = {"curves": list(v.curves)}
    if v.certificate is not None:
        witness["A"] = v.certificate
        witness["pairings"] = _pairings(model, v.certificate, model.downstairs)
    if v.rule is not None:
        witness["rule"] = v.rule
    witness["lp"] = _lp_json(v.lp, v.lp_constraints, v.lp_variables)
    divs = _divisors(args, model)
    if divs:
        a = _downstairs(_pick(divs, ("A",), "contract")["A"], "A")
        witness["conditions"] = _conditions_json(
            contract.check_complementary_conditions(model, v.curves, a)
        )
        witness["conditions_divisor"] = a
    code = 1 if v.status is contract.Status.UNKNOWN else 0
    return Result("contract", v.status.value, witness, _trace_json(v.rule_trace), [MODEL_RELATIVE], code)


def cmd_criteria(model, args):
    v = contract.criteria_engine(model, _curves(args))
    witness = {"curves": list(v.curves)}
    if v.rule is not None:
        witness["rule"] = v.rule
    code = 1 if v.status is contract.Status.UNKNOWN else 0
    return Result("criteria", v.status.value, witness, _trace_json(v.rule_trace), [MODEL_RELATIVE], code)


def cmd_extremal(model, args):
    rep = cones.is_extremal_negdef_face(model, _curves(args))
    witness = {"curves": list(rep.curves), "inertia": list(rep.inertia), "notes": list(rep.notes)}
    if rep.support is not None:
        witness["support_function"] = rep.support_function
        witness["support_lp"] = _lp_json(rep.support.lp, rep.support.constraints, rep.support.variables)
    if rep.finiteness_check is not None:
        witness["finiteness_lp"] = _lp_json(rep.finiteness_check, rep.finiteness_constraints, ())
    code = 1 if rep.kind is cones.FaceKind.NOT_EXTREMAL else 0
    return Result("extremal", rep.kind.value, witness, assumptions=[MODEL_RELATIVE], code=code)


def cmd_support_function(model, args):
    res = cones.support_function(model, _curves(args))
    witness = {"lp": _lp_json(res.lp, res.constraints, res.variables)}
    if res.feasible:
        witness["A"] = res.divisor
        witness["pairings"] = _pairings(model, res.divisor, model.downstairs)
    return Result("support-function", "found" if res.feasible else "infeasible", witness,
                  assumptions=[MODEL_RELATIVE], code=0 if res.feasible else 1)


def cmd_hodge(model, args):
    rep = cones.hodge_check(model)
    witness = {"curves": list(model.downstairs), "inertia": list(rep.inertia)}
    return Result("hodge", "consistent" if rep.consistent else "inconsistent", witness,
                  code=0 if rep.consistent else 1)


def cmd_zariski(model, args):
    d = _downstairs(_pick(_divisors(args, model), ("D",), "zariski")["D"], "D")
    try:
        z = models.zariski_decompose(model, d)
    except NoDecomposition as exc:
        return Result("zariski", "no_decomposition", {"D": d}, [str(exc)], [MODEL_RELATIVE], code=1)
    witness = {
        "D": d,
        "P": z.positive,
        "N": z.negative,
        "support": list(z.support),
        "P_pairings": _pairings(model, z.positive, model.downstairs),
    }
    return Result("zariski", "decomposed", witness, assumptions=[MODEL_RELATIVE])


def cmd_classify(model, args):
    picked = _pick(_divisors(args, model), ("M", "F"), "classify-model", optional=("D",))
    m, f = _downstairs(picked["M"], "M"), _downstairs(picked["F"], "F")
    d = _downstairs(picked["D"], "D") if "D" in picked else None
    data = models.MovableFixedData(m, f, d, sections_vanish=args.sections_vanish)
    cls = models.classify_model(model, data)
    witness = {"M": m, "F": f, "kind": cls.kind.value,
               "proper": cls.proper.value if cls.proper else None}
    if cls.m_squared is not None:
        witness["M_squared"] = cls.m_squared
        witness["M_dot_F"] = cls.m_dot_f
    if cls.cartier is not None:
        witness["cartier_index"] = cls.cartier.index
    return Result("classify-model", cls.kind.value, witness, assumptions=cls.assumptions)


COMMANDS: dict[str, tuple[Callable, str]] = {
    "validate": (cmd_validate, "check the model invariants"),
    "pair": (cmd_pair, "Mumford pairing of two divisors"),
    "pullback": (cmd_pullback, "pull a divisor back to the resolution"),
    "cartier-index": (cmd_cartier, "Cartier index of an integral divisor"),
    "negdef": (cmd_negdef, "test negative definiteness of curves"),
    "anti-ample": (cmd_anti_ample, "effective divisor negative on each curve"),
    "ample-on-itself": (cmd_ample_on_itself, "effective divisor positive on each of its curves"),
    "almost-affine": (cmd_almost_affine, "test whether curves bound an almost affine complement"),
    "contract": (cmd_contract, "contractibility certificate or rule verdict"),
    "criteria": (cmd_criteria, "run the sufficient contractibility criteria"),
    "extremal": (cmd_extremal, "classify the face spanned by curves"),
    "support-function": (cmd_support_function, "divisor vanishing on curves, positive elsewhere"),
    "hodge": (cmd_hodge, "signature of the pairing on all curves"),
    "zariski": (cmd_zariski, "Zariski-type decomposition over declared curves"),
    "classify-model": (cmd_classify, "dimension and properness of the divisorial model"),
}

_USES_DIV = {"pair", "pullback", "cartier-index", "contract", "zariski", "classify-model"}
_USES_CURVE = {"negdef", "anti-ample", "ample-on-itself", "almost-affine", "contract", "criteria",
               "extremal", "support-function"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normsurf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--model", required=True, help="model JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if name in _USES_DIV:
            p.add_argument("--div", action="append", nargs="+", metavar="LABEL SPEC",
                           help='divisor "name=coeff,..." optionally preceded by a label')
            p.add_argument("--div-file", help="JSON object mapping labels to divisors")
        if name in _USES_CURVE:
            p.add_argument("--curve", action="append", help="curve name (repeatable, or comma list)")
        if name == "pair":
            p.add_argument("--length", type=int, help="length of the generic local ring (unibranched)")
        if name == "classify-model":
            p.add_argument("--sections-vanish", action="store_true",
                           help="assert that nD has no nonzero section for every n > 0")
    return parser


def render_text(payload) -> str:
    lines = [f"{payload['command']}: {payload['verdict']}"]

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict) and value and all(isinstance(v, str) for v in value.values()):
            body = ", ".join(f"{k}={v}" for k, v in sorted(value.items()))
            lines.append(f"{pad}{key}: {body}")
        elif isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k in sorted(value):
                emit(k, value[k], indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for v in value:
                lines.append(f"{pad}  -")
                for k in sorted(v):
                    emit(k, v[k], indent + 2)
        elif isinstance(value, str):
            lines.append(f"{pad}{key}: {value}")
        else:
            lines.append(f"{pad}{key}: {json.dumps(value, sort_keys=True)}")

    for k in sorted(payload["witness"]):
        emit(k, payload["witness"][k], 1)
    for t in payload["trace"]:
        mark = "fired" if t["fired"] else "not fired"
        lines.append(f"  rule {t['rule']} ({mark}): {t['description']}")
        for h in t["hypotheses"]:
            extra = f" [{h['detail']}]" if h["detail"] else ""
            lines.append(f"    {h['name']} = {h['holds']} ({h['provenance']}){extra}")
    for a in payload["assumptions"]:
        lines.append(f"  assumption: {a}")
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None) -> Result:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return Result("", "usage_error", code=2 if exc.code else 0)
    func = COMMANDS[args.command][0]
    try:
        model = load_model(args.model)
        if args.command != "validate":
            model.require_valid()
        result = func(model, args)
    except (NormsurfError, ValueError, KeyError, OSError) as exc:
        message = str(exc) if isinstance(exc, NormsurfError) or not isinstance(exc, KeyError) else f"unknown key {exc}"
        witness = {"error": type(exc).__name__, "message": message}
        report = getattr(exc, "report", None)
        if report is not None:
            witness["errors"] = [{"code": i.code, "message": i.message} for i in report.errors]
        result = Result(args.command, "input_error", witness, code=2)
    result.as_json = args.json
    result.payload = _json_value(result.payload)
    return result


def main(argv: Sequence[str] | None = None) -> int:
    result = run(argv)
    if not result.payload["command"]:
        return result.code
    payload = result.payload
    out = sys.stdout if result.code != 2 else sys.stderr
    if result.as_json:
        print(json.dumps(payload, sort_keys=True, indent=2), file=out)
    else:
        print(render_text(payload), file=out)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
