"""``pfaffian`` command-line interface.

Exit codes: 0 success, 2 parse or validation error, 3 indeterminate verdict.
Diagnostics go to stderr; reports (text or JSON) to stdout or ``--output``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Sequence

from pfaffian import __version__
from pfaffian.catalog import catalog, get_example, lookup
from pfaffian.expr import Expr, add, mul
from pfaffian.forms import Chart, DiffForm, VectorField
from pfaffian.mech import (
    CotangentChart, hamiltonian_vector_field, lie_bracket, non_hamiltonian_field,
    omega_bracket, poisson_bracket,
)
from pfaffian.parse import ParseError, parse_assignment, parse_chart, parse_expression, parse_form
from pfaffian.pfaff import DECOMPOSITION_KINDS, cartan_class, frobenius_test, verify_decomposition
from pfaffian.physics import (
    DragKind, Metric, ThermoPotential, drag_domain, drag_report, gauge_analysis,
    gravity_drag_report, legendrian_section_check, thermo_contact_form, vorticity_analysis,
)
from pfaffian.zerotest import Domain, IndeterminateError, ZeroConfig, is_zero, weakest

SCHEMA = "pfaffian-report/1"
EXIT_OK, EXIT_INVALID, EXIT_INDETERMINATE = 0, 2, 3


class Context:
    def __init__(self, args: argparse.Namespace):
        if args.probes < 1:
            raise ValueError("--probes must be positive")
        if args.tol <= 0:
            raise ValueError("--tol must be positive")
        if args.seed < 0:
            raise ValueError("--seed must be non-negative")
        self.config = ZeroConfig(probes=args.probes, tol=args.tol, seed=args.seed)
        self.overrides = dict(parse_assignment(a) for a in (args.domain or []))
        self.domain = Domain(self.overrides)

    def echo(self) -> dict:
        return {"seed": self.config.seed, "probes": self.config.probes, "tol": self.config.tol,
                "domain": {k: list(v) for k, v in sorted(self.overrides.items())}}


def _params(args) -> list[str]:
    return [p for p in (getattr(args, "params", None) or "").replace(",", " ").split() if p]


def _chart_form(args) -> tuple[Chart, DiffForm]:
    chart = parse_chart(args.chart)
    return chart, parse_form(args.form, chart, _params(args))


def _cotangent(n: int) -> CotangentChart:
    if not 1 <= n <= 4:
        raise ValueError("--n must be between 1 and 4")
    return CotangentChart.standard(n)


def _expr_on(text: str, names) -> Expr:
    return parse_expression(text, names)


# ---------------------------------------------------------------- commands

def cmd_analyze(args, ctx: Context) -> dict:
    _, form = _chart_form(args)
    return cartan_class(form, ctx.domain, ctx.config).to_json()


def cmd_frobenius(args, ctx: Context) -> dict:
    _, form = _chart_form(args)
    return frobenius_test(form, ctx.domain, ctx.config).to_json()


def cmd_decompose(args, ctx: Context) -> dict:
    chart, form = _chart_form(args)
    names = set(chart.names) | set(_params(args))
    funcs = {}
    for item in args.fn or []:
        key, sep, text = item.partition("=")
        if not sep:
            raise ValueError(f"--fn expects name=expression, got {item!r}")
        funcs[key.strip()] = _expr_on(text, names)
    return verify_decomposition(form, args.kind, funcs, ctx.domain, ctx.config).to_json()


def _vf_json(X: VectorField) -> str:
    return X.render()


def cmd_bracket(args, ctx: Context) -> dict:
    c = _cotangent(args.n)
    names = c.chart.names
    f, g = _expr_on(args.f, names), _expr_on(args.g, names)
    pb = poisson_bracket(f, g, c)
    ob = omega_bracket(f, g, c)
    lhs = lie_bracket(hamiltonian_vector_field(f, c), hamiltonian_vector_field(g, c))
    rhs = hamiltonian_vector_field(ob, c)
    hom = weakest(is_zero(a - b, ctx.domain, ctx.config) for a, b in zip(lhs.components, rhs.components))
    return {"chart": list(names), "f": str(f), "g": str(g), "poisson_bracket": str(pb),
            "omega_bracket": str(ob), "hamiltonian_f": _vf_json(hamiltonian_vector_field(f, c)),
            "hamiltonian_g": _vf_json(hamiltonian_vector_field(g, c)),
            "homomorphism": hom.to_json()}


def cmd_mech(args, ctx: Context) -> dict:
    c = _cotangent(args.n)
    names = c.chart.names
    H = _expr_on(args.hamiltonian, names)
    pairs = []
    for item in args.pair or []:
        mu, sep, v = item.partition(":")
        if not sep:
            raise ValueError(f"--pair expects mu:v, got {item!r}")
        pairs.append((_expr_on(mu, names), _expr_on(v, names)))
    nh = non_hamiltonian_field(H, pairs, c)
    rate = nh.field.apply(H)
    expected = add(*(mul(mu, omega_bracket(v, H, c)) for mu, v in pairs))
    return {
        "chart": list(names), "hamiltonian": str(H),
        "vector_field": nh.field.render(), "one_form": nh.one_form.render(),
        "equations": {name: str(rhs) for name, rhs in nh.rhs},
        "energy_rate": str(rate),
        "conservation": is_zero(rate, ctx.domain, ctx.config).to_json() if not pairs else None,
        "drift_identity": is_zero(rate - expected, ctx.domain, ctx.config).to_json(),
    }


def cmd_thermo(args, ctx: Context) -> dict:
    p = ThermoPotential(args.potential)
    fn = _expr_on(args.function, p.natural)
    p = ThermoPotential(args.potential, fn)
    conj = None
    if args.conjugates:
        parts = [s for s in args.conjugates.split(",")]
        if len(parts) != 2:
            raise ValueError("--conjugates expects two comma-separated expressions")
        conj = [_expr_on(s, p.natural) for s in parts]
    theta = thermo_contact_form(p)
    return {"contact_form": theta.render(), "chart": list(p.slot_labels()),
            "pfaff": cartan_class(theta, ctx.domain, ctx.config).to_json(),
            "section": legendrian_section_check(p, conj, ctx.domain, ctx.config).to_json()}


def cmd_drag(args, ctx: Context) -> dict:
    kind = DragKind.from_name(args.kind)
    domain = drag_domain(kind, ctx.domain)
    out = drag_report(kind, domain, ctx.config).to_json()
    if args.gravity:
        out["gravity"] = gravity_drag_report(domain=domain, config=ctx.config).to_json()
    return out


def cmd_vorticity(args, ctx: Context) -> dict:
    chart, form = _chart_form(args)
    metric = None
    if args.metric == "minkowski":
        metric = Metric.minkowski(chart)
    elif args.metric == "euclidean":
        metric = Metric.euclidean(chart)
    return vorticity_analysis(form, metric, None, ctx.domain, ctx.config).to_json()


def cmd_gauge(args, ctx: Context) -> dict:
    chart, form = _chart_form(args)
    lam = None
    if args.shift:
        lam = _expr_on(args.shift, set(chart.names) | set(_params(args)))
    return gauge_analysis(form, lam, ctx.domain, ctx.config).to_json()


def _run_example(name: str, ctx_args: list[str]) -> dict:
    ex = get_example(name)
    args = build_parser().parse_args(list(ex.argv) + ctx_args)
    return COMMANDS[args.command](args, Context(args))


def _verify(ex, result: dict) -> list[str]:
    problems = []
    for path, want in sorted(ex.expected.items()):
        try:
            got = lookup(result, path)
        except KeyError:
            problems.append(f"{path}: missing")
            continue
        if got != want:
            problems.append(f"{path}: expected {want!r}, got {got!r}")
    return problems


def cmd_examples(args, ctx: Context) -> dict:
    passthrough = ["--seed", str(args.seed), "--probes", str(args.probes), "--tol", repr(args.tol)]
    for d in args.domain or []:
        passthrough += ["--domain", d]
    if args.verify_all:
        entries = {}
        for ex in catalog():
            problems = _verify(ex, _run_example(ex.name, passthrough))
            entries[ex.name] = {"ok": not problems, "problems": problems}
        failed = sorted(n for n, e in entries.items() if not e["ok"])
        if failed:
            raise VerificationFailed(f"catalog entries disagree with stored reports: {', '.join(failed)}",
                                     {"entries": entries})
        return {"verified": len(entries), "entries": entries}
    if args.name:
        ex = get_example(args.name)
        result = _run_example(ex.name, passthrough)
        return {"name": ex.name, "description": ex.description,
                "invocation": list(ex.argv), "report": result,
                "matches_stored": not _verify(ex, result)}
    return {"examples": [{"name": e.name, "description": e.description,
                          "invocation": list(e.argv)} for e in catalog()]}


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, result: dict):
        super().__init__(message)
        self.result = result


COMMANDS: dict[str, Callable[[argparse.Namespace, Context], dict]] = {
    "analyze": cmd_analyze, "frobenius": cmd_frobenius, "decompose-verify": cmd_decompose,
    "bracket": cmd_bracket, "mech": cmd_mech, "thermo": cmd_thermo, "drag": cmd_drag,
    "vorticity": cmd_vorticity, "gauge": cmd_gauge, "examples": cmd_examples,
}


# ---------------------------------------------------------------- parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("verdict options")
    g.add_argument("--seed", type=int, default=0, help="random seed for probes (default 0)")
    g.add_argument("--probes", type=int, default=32, help="probe count K (default 32)")
    g.add_argument("--tol", type=float, default=1e-9, help="relative zero tolerance (default 1e-9)")
    g.add_argument("--domain", action="append", metavar="VAR=LO:HI",
                   help="sampling interval override, repeatable")
    o = p.add_argument_group("output options")
    o.add_argument("--format", choices=("text", "json"), default="text")
    o.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    return p


def _form_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--chart", required=True, help="coordinates, e.g. x,y,theta,psi")
    p.add_argument("--form", required=True, help='e.g. "sin(psi)*dx + cos(psi)*dy"')
    p.add_argument("--params", default="", help="extra parameter names allowed in coefficients")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfaffian", description="Classify Pfaffian forms and run the built-in physics checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common()

    p = sub.add_parser("analyze", parents=[common], help="integrability sequence and class of a 1-form")
    _form_args(p)
    p = sub.add_parser("frobenius", parents=[common], help="Frobenius 3-form and integrability verdict")
    _form_args(p)
    p = sub.add_parser("decompose-verify", parents=[common], help="check a supplied normal form")
    _form_args(p)
    p.add_argument("--kind", required=True, choices=sorted(DECOMPOSITION_KINDS))
    p.add_argument("--fn", action="append", metavar="NAME=EXPR",
                   help="candidate function (lambda, mu, nu, mu1, nu1, mu2, nu2)")

    p = sub.add_parser("bracket", parents=[common], help="Poisson bracket on a cotangent chart")
    p.add_argument("--n", type=int, default=1, help="base dimension (coordinates x, p or x1.., p1..)")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)

    p = sub.add_parser("mech", parents=[common], help="Hamiltonian and non-Hamiltonian vector fields")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--pair", action="append", metavar="MU:V", help="non-Hamiltonian term mu dv, repeatable")

    p = sub.add_parser("thermo", parents=[common], help="thermodynamic contact form and Maxwell identity")
    p.add_argument("--potential", required=True, choices=("U", "F", "H", "G"))
    p.add_argument("--function", required=True, help="potential as a function of its natural variables")
    p.add_argument("--conjugates", help="explicit conjugate variables 'c1,c2' instead of derived ones")

    p = sub.add_parser("drag", parents=[common], help="friction and drag forms")
    p.add_argument("--kind", required=True, choices=("kinetic", "linear", "nonlinear"))
    p.add_argument("--gravity", action="store_true", help="also check the gravity plus linear drag form")

    p = sub.add_parser("vorticity", parents=[common], help="vorticity and flow classification")
    _form_args(p)
    p.add_argument("--metric", choices=("euclidean", "minkowski"), default=None)

    p = sub.add_parser("gauge", parents=[common], help="field strength, rank and Chern integrands")
    _form_args(p)
    p.add_argument("--shift", metavar="LAMBDA", help="gauge function for the invariance check")

    p = sub.add_parser("examples", parents=[common], help="built-in catalog")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--name")
    g.add_argument("--list", action="store_true")
    g.add_argument("--verify-all", action="store_true")
    return parser


# ---------------------------------------------------------------- output

def _text(node: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(node, dict):
        for k in sorted(node):
            v = node[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(node, list):
        for item in node:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(node)}")
    return lines


def _scalar(v: Any) -> str:
    if v is None:
        return "-"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def render_document(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    head = f"pfaffian {doc['command']}  (seed {doc['config']['seed']}, probes {doc['config']['probes']})"
    return "\n".join([head, *_text(doc["result"])]) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _request_echo(args: argparse.Namespace) -> dict:
    skip = {"command", "seed", "probes", "tol", "domain", "format", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False, "")}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        ctx = Context(args)
        result = COMMANDS[args.command](args, ctx)
    except ParseError as exc:
        print(f"pfaffian: parse error: {exc}\n{exc.pointer()}", file=sys.stderr)
        return EXIT_INVALID
    except IndeterminateError as exc:
        print(f"pfaffian: indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except VerificationFailed as exc:
        print(f"pfaffian: {exc}", file=sys.stderr)
        for name, entry in sorted(exc.result["entries"].items()):
            for problem in entry["problems"]:
                print(f"  {name}: {problem}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pfaffian: error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    doc = {"schema": SCHEMA, "command": args.command, "request": _request_echo(args),
           "config": ctx.echo(), "result": result}
    try:
        _emit(render_document(doc, args.format), args.output)
    except OSError as exc:
        print(f"pfaffian: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
