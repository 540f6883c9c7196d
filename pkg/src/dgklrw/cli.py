"""Command-line entry point: `dgklrw <subcommand> [flags]`.

Exit status: 0 on success, 1 when a verification fails, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import product
from typing import Any, Sequence, TextIO

from .basis import enumerate_basis, graded_dimension
from .config import DEFAULT_SEED, ConfigError, JobConfig
from .confluence import BranchingBounds, default_weights, enumerate_critical_branchings
from .dg import build_standard_complex, euler_vs_shapovalov, oracle_kclass
from .diagrams import DiagramError, Element, Weight, parse_weights
from .identities import IdentityBounds, run_identity_suite
from .oracle import WeightVector, expand_tilde_in_v, shapovalov_pair
from .polyaction import verify_relations
from .rewriting import FIRST, KEEP, LAST, ZERO, BudgetExceeded, DescentViolation, RewriteSystem
from .sampling import random_monomial
from .scalars import GradingVector, LaurentQL, QLSeries, series_expand

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# --- flag parsing ---------------------------------------------------------------


def _weights(text: str) -> tuple[Weight, ...]:
    try:
        mu = parse_weights(text)
    except DiagramError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not mu:
        raise argparse.ArgumentTypeError("expected at least one weight")
    return mu


def _composition(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad composition {text!r}") from exc
    if not parts:
        raise argparse.ArgumentTypeError("expected at least one part")
    return parts


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="output", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=1)

    parser = _Parser(prog="dgklrw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", parents=[common], help="normal form of a diagram or element")
    p.add_argument("--mu", type=_weights)
    p.add_argument("--rho", type=_composition)
    p.add_argument("--input", default="-", help="JSON file, or - for stdin")
    p.add_argument("--delta", choices=(KEEP, ZERO), default=KEEP)
    p.add_argument("--strategy", choices=(FIRST, LAST), default=FIRST)

    p = sub.add_parser("basis", parents=[common], help="basis keys of 1_kappa T 1_rho")
    p.add_argument("--mu", type=_weights, required=True)
    p.add_argument("--kappa", type=_composition, required=True)
    p.add_argument("--rho", type=_composition, required=True)
    p.add_argument("--qmax", type=int, default=8)

    p = sub.add_parser("graded-dim", parents=[common], help="graded dimension of 1_kappa T 1_rho")
    p.add_argument("--mu", type=_weights, required=True)
    p.add_argument("--kappa", type=_composition, required=True)
    p.add_argument("--rho", type=_composition, required=True)
    p.add_argument("--qmax", type=int, default=8)
    p.add_argument("--mode", choices=("poincare", "euler"), default="poincare")

    p = sub.add_parser("verify-relations", parents=[common], help="relations on the polynomial representation")
    p.add_argument("--mu", type=_weights, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--cap", type=int, default=4)
    p.add_argument("--delta", choices=(KEEP, ZERO), default=KEEP)

    p = sub.add_parser("confluence", parents=[common], help="critical branchings and strategy sampling")
    p.add_argument("--black", type=int, default=3)
    p.add_argument("--colored", type=int, default=2)
    p.add_argument("--lmax", type=int, default=2)
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--no-loop-rules", action="store_true")
    p.add_argument("--sample", type=int, default=0, help="random monomials compared across strategies")
    p.add_argument("--sites", type=int, default=6, help="sites per sampled monomial")

    p = sub.add_parser("euler-vs-shapovalov", parents=[common], help="Euler characteristics against the form")
    p.add_argument("--mu", type=_weights, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--qmax", type=int, default=10)

    p = sub.add_parser("standard-module", parents=[common], help="standard complex and its class")
    p.add_argument("--mu", type=_weights, required=True)
    p.add_argument("--rho", type=_composition, required=True)

    p = sub.add_parser("oracle", parents=[common], help="quantum sl2 computations")
    osub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    q = osub.add_parser("expand", parents=[common], help="tilde-v_rho in the v basis")
    q.add_argument("--mu", type=_weights, required=True)
    q.add_argument("--rho", type=_composition, required=True)
    q = osub.add_parser("shapovalov", parents=[common], help="(v_kappa, v_rho)")
    q.add_argument("--mu", type=_weights, required=True)
    q.add_argument("--kappa", type=_composition, required=True)
    q.add_argument("--rho", type=_composition, required=True)
    q.add_argument("--qmax", type=int, default=10)

    p = sub.add_parser("identities", parents=[common], help="regression identity suite")
    p.add_argument("--lmax", type=int, default=2)
    p.add_argument("--pmax", type=int, default=3)
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--bmax", type=int, default=4)
    return parser


def _config(args) -> JobConfig:
    bounds = {k: getattr(args, k) for k in ("black", "colored", "lmax", "pmax", "nmax", "kmax", "bmax",
                                            "cap", "sample", "sites")
              if hasattr(args, k)}
    return JobConfig(
        mu=getattr(args, "mu", None) or (),
        b=getattr(args, "b", None),
        kappa=getattr(args, "kappa", None),
        rho=getattr(args, "rho", None),
        qcap=getattr(args, "qmax", 8),
        delta_mode=getattr(args, "delta", KEEP),
        bounds=bounds,
        output=args.output,
        seed=args.seed,
        threads=args.threads,
    )


# --- formatting -----------------------------------------------------------------


def _monomial_text(c: int, g: GradingVector) -> str:
    return f"{c} q^{g.q} λ^{g.l} h^{g.h}"


def _element_lines(e: Element) -> list[str]:
    if e.is_zero():
        return ["0"]
    return [f"{m!r}: ({c}) q^{m.degree().q} λ^{m.degree().l} h^{m.degree().h}" for m, c in e]


def _laurent_terms(p: LaurentQL) -> list[list[int]]:
    return [[qe, le, c] for (qe, le), c in sorted(p.items())]


def _series_json(s: QLSeries) -> dict:
    return {"order": s.order, "terms": _laurent_terms(s.poly)}


def _series_lines(s: QLSeries, h: int | None = None) -> list[str]:
    tail = "" if h is None else f" h^{h}"
    lines = [f"q^{qe} λ^{le}{tail}: {c}" for (qe, le), c in sorted(s.poly.items())]
    return lines + [f"O(q^{s.order})"]


class Output:
    def __init__(self, fmt: str, stream: TextIO):
        self.fmt = fmt
        self.stream = stream

    def emit(self, payload: dict[str, Any], lines: Sequence[str]):
        if self.fmt == "json":
            self.stream.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            self.stream.write("\n".join(lines) + "\n")


# --- subcommands ------------------------------------------------------------------


def _read_input(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ConfigError(f"--input: {exc.strerror}: {path}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"--input: invalid JSON ({exc.msg})") from exc


def cmd_normalize(args, cfg: JobConfig, out: Output) -> int:
    data = _read_input(args.input)
    mu = cfg.mu or None
    if mu is None and "mu" not in data:
        raise ConfigError("--mu is required when the input has no \"mu\" field")
    if mu is None:
        mu = tuple(Weight.from_json(w) for w in data["mu"])
    if "terms" not in data and "rho" not in data:
        if cfg.rho is None:
            raise ConfigError("--rho is required when the input has no \"rho\" field")
        data = dict(data, rho=list(cfg.rho))
    try:
        e = Element.from_json(data, mu)
    except (DiagramError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"--input: {exc}") from exc
    rw = RewriteSystem(delta_mode=cfg.delta_mode, strategy=args.strategy)
    nf = rw.normal_form(e)
    out.emit(nf.to_json(mu), _element_lines(nf))
    return OK


def cmd_basis(args, cfg: JobConfig, out: Output) -> int:
    entries = enumerate_basis(cfg.mu, cfg.kappa, cfg.rho, cfg.qcap)
    payload = {
        "count": len(entries),
        "basis": [{"key": e.key.to_json(), "degree": {"h": e.degree.h, "q": e.degree.q, "l": e.degree.l},
                   "monomial": e.monomial.to_json()} for e in entries],
    }
    lines = [f"{json.dumps(e.key.to_json(), sort_keys=True)}: {_monomial_text(1, e.degree)}" for e in entries]
    out.emit(payload, lines + [f"count: {len(entries)}"])
    return OK


def cmd_graded_dim(args, cfg: JobConfig, out: Output) -> int:
    series = graded_dimension(cfg.mu, cfg.kappa, cfg.rho, cfg.qcap, args.mode)
    if args.mode == "euler":
        out.emit({"mode": "euler", "series": _series_json(series)}, _series_lines(series))
        return OK
    payload = {"mode": "poincare", "order": series.order,
               "by_h": {str(h): _laurent_terms(s.poly) for h, s in sorted(series.by_h.items())}}
    lines = [line for h, s in sorted(series.by_h.items()) for line in _series_lines(s, h)[:-1]]
    out.emit(payload, lines + [f"O(q^{series.order})"])
    return OK


def cmd_verify_relations(args, cfg: JobConfig, out: Output) -> int:
    report = verify_relations(cfg.mu, cfg.b, args.cap, cfg.delta_mode)
    witnesses = [{"rho": list(rho), "relation": label, "lhs": [list(s) for s in lhs], "vector": repr(f)}
                 for rho, label, lhs, f in report.failures]
    payload = {"ok": report.ok, "relations": report.checked, "vectors": report.vectors, "failures": witnesses}
    lines = [f"relations checked: {report.checked}", f"test vectors applied: {report.vectors}"]
    lines += [f"FAIL {w['relation']} at rho={w['rho']} on {w['vector']}" for w in witnesses]
    lines.append("all relations hold" if report.ok else f"{len(witnesses)} relation(s) violated")
    out.emit(payload, lines)
    return OK if report.ok else FAILED


def _sample_strategies(args, cfg: JobConfig) -> dict:
    rng = random.Random(cfg.seed)
    bounds = BranchingBounds(args.black, args.colored, args.lmax, args.pmax)
    weights = default_weights(bounds)
    first = RewriteSystem(strategy=FIRST, check_descent=True)
    last = RewriteSystem(strategy=LAST, check_descent=True)
    shapes = [(r, b) for r in range(1, args.colored + 1) for b in range(1, args.black + 1)]
    mismatches = []
    for i in range(args.sample):
        r, b = rng.choice(shapes)
        mu = tuple(rng.choice(weights) for _ in range(r))
        rho = tuple(rng.choice([c for c in product(range(b + 1), repeat=r) if sum(c) == b]))
        m = random_monomial(mu, rho, args.sites, rng)
        try:
            if first.normal_form(m) != last.normal_form(m):
                mismatches.append(repr(m))
        except (DescentViolation, BudgetExceeded) as exc:
            mismatches.append(f"{m!r}: {exc}")
    return {"sampled": args.sample, "mismatches": mismatches}


def cmd_confluence(args, cfg: JobConfig, out: Output) -> int:
    bounds = BranchingBounds(args.black, args.colored, args.lmax, args.pmax)
    report = enumerate_critical_branchings(bounds, loop_rules=not args.no_loop_rules, workers=cfg.threads)
    summary = report.summary()
    bad = [{"source": repr(b.source), "rules": list(b.rules),
            "verdict": "budget exhausted" if b.joinable is None else "not joinable"}
           for b in report.branchings if not b.joinable]
    payload = dict(summary, loop_rules=report.loop_rules, failures=bad)
    lines = [f"{k}: {v}" for k, v in summary.items()]
    lines += [f"FAIL {w['rules'][0]}/{w['rules'][1]} at {w['source']}: {w['verdict']}" for w in bad]
    ok = report.ok
    if args.sample:
        sampled = _sample_strategies(args, cfg)
        payload["sampling"] = sampled
        lines.append(f"sampled monomials: {sampled['sampled']}, strategy mismatches: {len(sampled['mismatches'])}")
        lines += [f"MISMATCH {m}" for m in sampled["mismatches"]]
        ok = ok and not sampled["mismatches"]
    lines.append("all branchings joinable" if report.ok else "some branchings are not joinable")
    out.emit(payload, lines)
    return OK if ok else FAILED


def cmd_euler_vs_shapovalov(args, cfg: JobConfig, out: Output) -> int:
    report = euler_vs_shapovalov(cfg.mu, cfg.b, cfg.qcap)
    rows = [{"kappa": list(r.kappa), "rho": list(r.rho), "euler": _series_json(r.euler),
             "shapovalov": str(r.shapovalov), "matches": r.matches} for r in report.rows]
    units = sorted(report.units)
    payload = {"ok": report.ok, "units": [list(u) for u in units], "rows": rows}
    lines = [f"{list(r.kappa)} {list(r.rho)}: {'match' if r.matches else 'MISMATCH'}  "
             f"shapovalov = {r.shapovalov}" for r in report.rows]
    lines.append(f"unit monomials (sign, q, λ): {units}")
    lines.append("euler characteristics match" if report.ok else "mismatch")
    out.emit(payload, lines)
    return OK if report.ok else FAILED


def cmd_standard_module(args, cfg: JobConfig, out: Output) -> int:
    try:
        cx = build_standard_complex(cfg.mu, cfg.rho)
    except ArithmeticError as exc:
        out.emit({"ok": False, "error": str(exc)}, [f"FAIL {exc}"])
        return FAILED
    kclass = cx.kclass()
    expected = oracle_kclass(cfg.mu, cfg.rho)
    keys = set(kclass) | set(expected)
    ok = all(kclass.get(k, LaurentQL(0)) == expected.get(k, LaurentQL(0)) for k in keys)
    summands = [{"j": [list(x) for x in j], "rho_j": list(rj), "h": len(j), "q": g.q, "l": g.l}
                for j, (rj, g) in sorted(cx.summands.items())]
    payload = {"ok": ok, "summands": summands,
               "kclass": {",".join(map(str, k)): _laurent_terms(v) for k, v in sorted(kclass.items())}}
    lines = [f"P{list(s['rho_j'])}: 1 q^{s['q']} λ^{s['l']} h^{s['h']}" for s in summands]
    lines += [f"[P{list(k)}]: {v}" for k, v in sorted(kclass.items())]
    lines.append("class matches the tilde-basis expansion" if ok else "class MISMATCH")
    out.emit(payload, lines)
    return OK if ok else FAILED


def cmd_oracle(args, cfg: JobConfig, out: Output) -> int:
    if args.oracle_command == "expand":
        w = expand_tilde_in_v(cfg.mu, cfg.rho)
        lines = [f"v{list(rho)}: {c}" for rho, c in sorted(w.coeffs.items())]
        out.emit(w.to_json(), lines or ["0"])
        return OK
    value = shapovalov_pair(WeightVector.basis_vector(cfg.mu, cfg.kappa),
                            WeightVector.basis_vector(cfg.mu, cfg.rho))
    series = series_expand(value, cfg.qcap)
    out.emit({"value": str(value), "series": _series_json(series)},
             [f"value: {value}"] + _series_lines(series))
    return OK


def cmd_identities(args, cfg: JobConfig, out: Output) -> int:
    bounds = IdentityBounds(max_gap=args.lmax, max_dots=args.pmax, max_slide_dots=args.nmax,
                            max_crossings=args.kmax, max_black=args.bmax)
    report = run_identity_suite(bounds)
    fails = [{"name": f.case.name, "params": f.case.params,
              "left": f.left_nf.to_json(), "right": f.right_nf.to_json()} for f in report.failures]
    payload = {"ok": report.ok, "checked": report.checked, "by_family": report.by_family, "failures": fails}
    lines = [f"{name}: {n} cases" for name, n in report.by_family.items()]
    lines += [f"FAIL {f['name']} {json.dumps(f['params'], sort_keys=True)}" for f in fails]
    lines.append("all identities hold" if report.ok else f"{len(fails)} identities fail")
    out.emit(payload, lines)
    return OK if report.ok else FAILED


COMMANDS = {
    "normalize": cmd_normalize,
    "basis": cmd_basis,
    "graded-dim": cmd_graded_dim,
    "verify-relations": cmd_verify_relations,
    "confluence": cmd_confluence,
    "euler-vs-shapovalov": cmd_euler_vs_shapovalov,
    "standard-module": cmd_standard_module,
    "oracle": cmd_oracle,
    "identities": cmd_identities,
}


def run_command(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, Output(cfg.output, stdout))
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return USAGE
    except (ConfigError, DiagramError) as exc:
        stderr.write(f"dgklrw: error: {exc}\n")
        return USAGE


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
