"""Command-line front end.

Every analysis is a subcommand over the text formats; outputs are
byte-deterministic for fixed inputs (sets sorted by encoding, searches return
lexicographic-first witnesses).  Exit codes: 0 = success / property holds,
1 = property fails, 2 = usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import Bits, fixed_points, nullclin
from .bifurcation import (
    ParamFamily,
    bifurcation_diagram,
    families_equivalent,
    fixed_point_diagram,
)
from .conjugacy import check_conjugacy, find_equivalence
from .formats import (
    ParseError,
    parse_bijection,
    parse_family,
    parse_rho,
    parse_truth_table,
    parse_witness,
    render_bijection,
)
from .graph import accessible, export_portrait, is_transitive_exists, is_transitive_forall
from .omega import enumerate_omega, is_in_omega
from .runs import as_time, continuous_run, detect_period, eval_signal, final_value

USAGE_EXIT = 2


def _emit(payload: dict, fmt: str, text_lines) -> None:
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _read(path: str) -> str:
    return Path(path).read_text()


def _bits_arg(raw: str, what: str) -> Bits:
    try:
        return Bits.from_string(raw)
    except ValueError:
        raise SystemExit(_usage(f"bad {what} {raw!r}: expected a bit string"))


def _usage(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE_EXIT


def cmd_fixed_points(args) -> int:
    phi = parse_truth_table(_read(args.table))
    fps = sorted(fixed_points(phi))
    _emit({"fixed_points": [s.to01() for s in fps]}, args.format,
          [s.to01() for s in fps])
    return 0


def cmd_nullclins(args) -> int:
    phi = parse_truth_table(_read(args.table))
    payload = {}
    lines = []
    for i in range(1, phi.width + 1):
        members = sorted(nullclin(phi, i))
        payload[f"NC{i}"] = [s.to01() for s in members]
        lines.append(f"NC{i}: " + " ".join(s.to01() for s in members))
    _emit(payload, args.format, lines)
    return 0


def cmd_portrait(args) -> int:
    phi = parse_truth_table(_read(args.table))
    dot = export_portrait(phi, include_self_loops=args.self_loops)
    if args.format == "json":
        print(json.dumps({"dot": dot}, sort_keys=True, indent=2))
    else:
        sys.stdout.write(dot)
    return 0


def cmd_run(args) -> int:
    phi = parse_truth_table(_read(args.table))
    rho = parse_rho(_read(args.rho_file))
    mu = _bits_arg(args.mu, "--mu")
    x = continuous_run(phi, rho, mu)
    if args.at is not None:
        value = eval_signal(x, as_time(args.at))
        _emit({"at": str(args.at), "value": value.to01()}, args.format, [value.to01()])
        return 0
    # Trace mode: initial value, each breakpoint, then the tail.
    lines = [f"initial {x.initial.to01()}"]
    payload = {"initial": x.initial.to01(), "breakpoints": [], "tail": None}
    for t, v in x.breakpoints:
        payload["breakpoints"].append({"time": str(t), "value": v.to01()})
        lines.append(f"{t} -> {v.to01()}")
    fv = final_value(x)
    if fv is not None:
        payload["tail"] = {"kind": "constant", "value": fv.to01()}
        lines.append(f"final {fv.to01()}")
    else:
        period = detect_period(x)
        assert period is not None
        t0, witness = period
        pattern = [{"time": str(t), "value": v.to01()} for t, v in x.tail.pattern]
        payload["tail"] = {
            "kind": "periodic",
            "period": str(t0),
            "from": str(witness),
            "pattern": pattern,
        }
        lines.append(f"periodic period={t0} from={witness} pattern="
                     + " ".join(f"{t}:{v.to01()}" for t, v in x.tail.pattern))
    _emit(payload, args.format, lines)
    return 0


def cmd_reach(args) -> int:
    phi = parse_truth_table(_read(args.table))
    src = _bits_arg(args.source, "--from")
    dst = _bits_arg(args.target, "--to")
    ok = accessible(phi, src, dst)
    _emit({"accessible": ok}, args.format, ["accessible" if ok else "not accessible"])
    return 0 if ok else 1


def cmd_transitive(args) -> int:
    phi = parse_truth_table(_read(args.table))
    decide = is_transitive_exists if args.mode == "exists" else is_transitive_forall
    ok = decide(phi)
    _emit({"mode": args.mode, "transitive": ok}, args.format,
          ["transitive" if ok else "not transitive"])
    return 0 if ok else 1


def cmd_omega(args) -> int:
    if args.enumerate_width is not None:
        members = enumerate_omega(args.enumerate_width)
        tables = [[x.value for x in h.forward] for h in members]
        lines = [" ".join(x.to01() for x in h.forward) for h in members]
        _emit({"width": args.enumerate_width, "count": len(members), "members": tables},
              args.format, lines + [f"count {len(members)}"])
        return 0
    if args.bijection is None:
        raise SystemExit(_usage("omega needs a bijection file or --enumerate"))
    h = parse_bijection(_read(args.bijection))
    verdict = is_in_omega(h)
    payload = {"member": verdict.verdict}
    lines = ["member" if verdict.verdict else "not a member"]
    if verdict.witness is not None:
        witness = [s.to01() for s in sorted(verdict.witness)]
        payload["witness"] = witness
        lines.append("witness " + " ".join(witness))
    _emit(payload, args.format, lines)
    return 0 if verdict.verdict else 1


def cmd_conjugate(args) -> int:
    phi = parse_truth_table(_read(args.phi))
    psi = parse_truth_table(_read(args.psi))
    if args.witness is None and not args.search:
        raise SystemExit(_usage("conjugate needs --witness FILE or --search"))
    if args.witness is not None:
        w = parse_witness(_read(args.witness))
        verdict = check_conjugacy(phi, psi, w)
    else:
        verdict = find_equivalence(phi, psi)
    payload = {"equivalent": verdict.equivalent}
    lines = ["equivalent" if verdict.equivalent else "not equivalent"]
    if verdict.witness is not None:
        payload["h"] = render_bijection(verdict.witness.h)
        payload["h_prime"] = render_bijection(verdict.witness.h_prime)
        lines.append("h: " + " ".join(x.to01() for x in verdict.witness.h.forward))
        lines.append("h': " + " ".join(x.to01() for x in verdict.witness.h_prime.forward))
    if verdict.counterexample is not None:
        nu, mu = verdict.counterexample
        payload["counterexample"] = {"mask": nu.to01(), "state": mu.to01()}
        lines.append(f"counterexample mask={nu.to01()} state={mu.to01()}")
    _emit(payload, args.format, lines)
    return 0 if verdict.equivalent else 1


def _pairwise_equivalences(family: ParamFamily, jobs: int) -> dict:
    """find_equivalence over all member pairs in parallel; the search is
    deterministic, so feeding the results to the diagram construction leaves
    its output unchanged."""
    pairs = []
    seen = set()
    for i, table_a in enumerate(family.tables):
        for j in range(i + 1, len(family.tables)):
            key = (table_a, family.tables[j])
            if key not in seen:
                seen.add(key)
                pairs.append(key)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_pair_worker, pairs))
    return dict(zip(pairs, results))


def _pair_worker(pair):
    return find_equivalence(*pair)


def cmd_bifurcation(args) -> int:
    family = parse_family(_read(args.family))
    if args.fixed_points:
        diagram = fixed_point_diagram(family)
        note = None
        if diagram.uninformative:
            note = ("family bifurcates but has no fixed points anywhere; "
                    "this diagram form shows nothing for it")
        elif all(not fps for _, fps in diagram.entries):
            note = "no fixed points at any parameter; this diagram form is empty"
        payload = {
            "fixed_points": {lam.to01(): [s.to01() for s in fps]
                             for lam, fps in diagram.entries},
            "uninformative": diagram.uninformative,
            "note": note,
        }
        lines = [f"{lam.to01()}: " + (" ".join(s.to01() for s in fps) if fps else "-")
                 for lam, fps in diagram.entries]
        if note is not None:
            lines.append(f"note: {note}")
        _emit(payload, args.format, lines)
        return 0
    precomputed = _pairwise_equivalences(family, args.jobs) if args.jobs > 1 else None
    diagram = bifurcation_diagram(family, precomputed=precomputed)
    payload = {
        "classes": [[lam.to01() for lam in members] for members in diagram.classes],
        "representatives": [lam.to01() for lam in diagram.representatives],
        "stable": diagram.class_count == 1,
    }
    lines = []
    for idx, members in enumerate(diagram.classes):
        lines.append(f"class {idx}: " + " ".join(lam.to01() for lam in members))
    lines.append("stable" if diagram.class_count == 1 else "bifurcation")
    if args.out_dir is not None:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for rep, dot in zip(diagram.representatives, diagram.portraits):
            (out / f"class-{rep.to01()}.dot").write_text(dot)
        payload["portraits"] = [f"class-{rep.to01()}.dot" for rep in diagram.representatives]
    else:
        payload["portraits"] = dict(
            (rep.to01(), dot) for rep, dot in zip(diagram.representatives, diagram.portraits))
    _emit(payload, args.format, lines)
    return 0


def cmd_family_equiv(args) -> int:
    f = parse_family(_read(args.family_f))
    g = parse_family(_read(args.family_g))
    relabelling = families_equivalent(f, g)
    if relabelling is None:
        _emit({"equivalent": False}, args.format, ["not equivalent"])
        return 1
    table = [x.to01() for x in relabelling.forward]
    _emit({"equivalent": True, "h_double_prime": table}, args.format,
          ["equivalent", "h'': " + " ".join(table)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boolsys",
        description="Analysis of asynchronous Boolean dynamical systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for pairwise analyses")
        return p

    p = add("fixed-points", cmd_fixed_points, help="list the rest states of a table")
    p.add_argument("table")

    p = add("nullclins", cmd_nullclins, help="stable-coordinate sets per coordinate")
    p.add_argument("table")

    p = add("portrait", cmd_portrait, help="state portrait as Graphviz DOT")
    p.add_argument("table")
    p.add_argument("--self-loops", action="store_true",
                   help="draw self-arrows at rest states")

    p = add("run", cmd_run, help="simulate one run exactly")
    p.add_argument("table")
    p.add_argument("--mu", required=True, help="start state bits")
    p.add_argument("--rho-file", required=True, help="schedule file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--at", help="evaluate at one rational instant")
    group.add_argument("--trace", action="store_true", help="print the whole signal")

    p = add("reach", cmd_reach, help="accessibility between two states")
    p.add_argument("table")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)

    p = add("transitive", cmd_transitive, help="decide a transitivity property")
    p.add_argument("table")
    p.add_argument("--mode", choices=("exists", "forall"), required=True)

    p = add("omega", cmd_omega, help="mask-recoding group membership/enumeration")
    p.add_argument("bijection", nargs="?")
    p.add_argument("--enumerate", dest="enumerate_width", type=int, metavar="N")

    p = add("conjugate", cmd_conjugate, help="check or search a change of coordinates")
    p.add_argument("phi")
    p.add_argument("psi")
    p.add_argument("--witness", help="witness file (h and h' blocks)")
    p.add_argument("--search", action="store_true")

    p = add("bifurcation", cmd_bifurcation, help="family diagrams")
    p.add_argument("family")
    p.add_argument("--fixed-points", action="store_true",
                   help="emit the fixed-points-per-parameter diagram instead")
    p.add_argument("--out-dir", help="write one DOT file per class representative")

    p = add("family-equiv", cmd_family_equiv, help="parameter relabelling search")
    p.add_argument("family_f")
    p.add_argument("family_g")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FileNotFoundError as exc:
        print(f"error: cannot read {exc.filename}", file=sys.stderr)
        return USAGE_EXIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
