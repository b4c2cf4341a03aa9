"""Command-line front end.

Exit codes: 0 success, 1 logical failure (check, equality, clique
difference), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import tempfile
from pathlib import Path

from .counting import count_general, count_sequent, derived_p, derived_t, di_invariant_holds, sc_invariant_holds
from .di_kernel import DiCheckError, TraceSyntaxError, check_di, di_metrics, parse_di, render_di
from .fuzz import FuzzConfig, GenerationStuck, fuzz_di, fuzz_sc
from .sc_kernel import DerivationSyntaxError, ScCheckError, check_sc, height, parse_sc, render_sc, sc_metrics
from .semantics import (
    SemanticsError, default_valuation, has_diagonal_product_structure, interpret_di,
    interpret_formula, interpret_sc, is_clique, parse_valuation, render_clique,
)
from .syntax import (
    FormulaSyntaxError, MllError, NnfViolation, PathError, looks_like_sequent,
    parse_formula, parse_sequent, render_formula, render_sequent, sequent_to_formula,
)
from .translate import TranslationError, translate_with_report

log = logging.getLogger("mll")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SUFFIX = {"di": ".di", "sc": ".sc"}
DIRECTIONS = {
    "sc2di": ("sc", "di"), "di2sc": ("di", "sc"), "di2sc-naive": ("di", "sc"),
    "cutelim": ("sc", "sc"), "atomize": (None, None),
}


class UsageError(MllError):
    pass


# io helpers

def write_atomic(path: Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_text(name: str) -> str:
    if name == "-":
        return sys.stdin.read()
    try:
        return Path(name).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {name}: {e.strerror}") from None


def detect_system(name: str, text: str, hint: str = "auto") -> str:
    if hint in ("sc", "di"):
        return hint
    suffix = Path(name).suffix
    if suffix in (".di", ".trace"):
        return "di"
    if suffix == ".sc":
        return "sc"
    for line in text.splitlines():
        line = line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.split()[0] in ("axiom", "open"):
            return "di"
        if line.startswith("("):
            return "sc"
        break
    raise UsageError(f"cannot tell the proof system of {name}; pass --system")


def load(name: str, hint: str = "auto"):
    """``(system, derivation)`` parsed from a file; parse errors propagate."""
    text = read_text(name)
    system = detect_system(name, text, hint)
    return system, (parse_di(text) if system == "di" else parse_sc(text))


def conclusion(system: str, d):
    return check_di(d) if system == "di" else check_sc(d)


def conclusion_formula(system: str, d):
    c = conclusion(system, d)
    return c if system == "di" else sequent_to_formula(c)


def render_conclusion(system: str, c) -> str:
    return render_formula(c) if system == "di" else render_sequent(c)


def render(system: str, d) -> str:
    return render_di(d) if system == "di" else render_sc(d) + "\n"


def metrics(system: str, d):
    return di_metrics(d) if system == "di" else sc_metrics(d)


def load_valuation(name, limit: int):
    if name is None:
        v = default_valuation()
    else:
        try:
            v = parse_valuation(read_text(name))
        except SemanticsError as e:
            raise UsageError(str(e)) from None
    for atom, space in v.spaces.items():
        if len(space.carrier) > limit:
            raise UsageError(f"carrier of {atom} has {len(space.carrier)} points, over --limit {limit}")
    return v


def counts_report(text: str) -> dict:
    """Counting pre-check on a formula or sequent given as text."""
    if looks_like_sequent(text):
        s = parse_sequent(text)
        c, ok = count_sequent(s), sc_invariant_holds(s)
        shown = render_sequent(s)
    else:
        try:
            f = parse_formula(text.strip())
        except NnfViolation:
            f = parse_formula(text.strip(), mode="general")
        c, ok = count_general(f), di_invariant_holds(f)
        shown = render_formula(f)
    return {"input": shown, "counts": c.as_dict(), "n_t": derived_t(c), "n_p": derived_p(c),
            "necessary_condition": "PASS" if ok else "FAIL"}


# commands

def cmd_check(args) -> int:
    if args.claim is not None:
        pre = counts_report(args.claim)
        if pre["necessary_condition"] == "FAIL":
            print(f"NECESSARY-CONDITION: FAIL for claimed conclusion {pre['input']}")
            return EXIT_FAIL
    system, d = load(args.file, args.system)
    try:
        c = conclusion(system, d)
    except MllError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    shown = render_conclusion(system, c)
    if args.claim is not None and shown != pre["input"]:
        print(f"conclusion {shown} differs from claimed {pre['input']}", file=sys.stderr)
        return EXIT_FAIL
    inv = di_invariant_holds(c) if system == "di" else sc_invariant_holds(c)
    m = metrics(system, d).as_dict()
    if args.json:
        sys.stdout.write(dump_json({"system": system, "conclusion": shown, "metrics": m,
                                    "necessary_condition": "PASS" if inv else "FAIL"}))
    else:
        print(shown)
        print("metrics: " + json.dumps(m, sort_keys=True))
    return EXIT_OK


def cmd_translate(args) -> int:
    direction = args.to
    if args.naive:
        if direction not in ("di2sc", "di2sc-naive"):
            raise UsageError("--naive only applies to --to di2sc")
        direction = "di2sc-naive"
    system, d = load(args.file, args.system)
    want, out_system = DIRECTIONS[direction]
    if want is not None and system != want:
        raise UsageError(f"{direction} expects a {want} derivation, got {system}")
    out_system = out_system or system
    try:
        c = conclusion(system, d)
    except MllError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    pre = di_invariant_holds(c) if system == "di" else sc_invariant_holds(c)
    if not pre:
        print("NECESSARY-CONDITION: FAIL on the input conclusion", file=sys.stderr)
        return EXIT_FAIL
    try:
        report = translate_with_report(direction, d)
        conclusion(out_system, report.output)
    except MllError as e:
        print(f"translation failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    body = dump_json(report.to_json())
    text = render(out_system, report.output)
    if args.out:
        out = Path(args.out)
        stem = Path(args.file).stem if args.file != "-" else "stdin"
        write_atomic(out / f"{stem}.{direction}{SUFFIX[out_system]}", text)
        write_atomic(out / f"{stem}.{direction}.report.json", body)
        sys.stdout.write(body)
    else:
        sys.stdout.write(text)
        sys.stderr.write(body)
    for name, holds in report.equalities:
        if not holds:
            print(f"equality failed: {name}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_count(args) -> int:
    text = args.source if args.text else read_text(args.source)
    rep = counts_report(text)
    if args.json:
        sys.stdout.write(dump_json(rep))
    else:
        print(rep["input"])
        for k, v in rep["counts"].items():
            print(f"{k}: {v}")
        print(f"n_t: {rep['n_t']}")
        print(f"n_p: {rep['n_p']}")
        print(f"NECESSARY-CONDITION: {rep['necessary_condition']}")
    return EXIT_OK if rep["necessary_condition"] == "PASS" else EXIT_FAIL


def _interpret(system, d, v):
    return interpret_di(d, v) if system == "di" else interpret_sc(d, v)


def cmd_interpret(args) -> int:
    system, d = load(args.file, args.system)
    v = load_valuation(args.valuation, args.limit)
    try:
        f = conclusion_formula(system, d)
        clique = _interpret(system, d, v)
        ok = is_clique(interpret_formula(f, v), clique)
    except MllError as e:
        print(f"interpretation failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(render_clique(clique, f))
    print(f"# is_clique: {'PASS' if ok else 'FAIL'}")
    if args.structure:
        shaped = has_diagonal_product_structure(clique, f, v)
        print(f"# diagonal-product: {'PASS' if shaped else 'FAIL'}")
        ok = ok and shaped
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compare(args) -> int:
    sa, da = load(args.file_a, args.system_a or args.system)
    sb, db = load(args.file_b, args.system_b or args.system)
    v = load_valuation(args.valuation, args.limit)
    try:
        fa, fb = conclusion_formula(sa, da), conclusion_formula(sb, db)
    except MllError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    if fa != fb:
        print(f"CONCLUSION-MISMATCH: {render_formula(fa)} vs {render_formula(fb)}")
        return EXIT_FAIL
    try:
        equal = _interpret(sa, da, v) == _interpret(sb, db, v)
    except MllError as e:
        print(f"interpretation failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    print("EQUAL" if equal else "DIFFER")
    return EXIT_OK if equal else EXIT_FAIL


def cmd_fuzz(args) -> int:
    weights = None
    if args.weights:
        weights = json.loads(read_text(args.weights))
    atoms = tuple(a.strip() for a in args.atoms.split(",") if a.strip())
    try:
        cfg = FuzzConfig(seed=args.seed, max_steps=args.max_steps, atoms=atoms,
                         **({"weights": weights} if weights is not None else {}))
    except MllError as e:
        raise UsageError(str(e)) from None
    log.info("fuzz seed=%d count=%d max_steps=%d", args.seed, args.count, args.max_steps)
    rng = random.Random(args.seed)
    out = Path(args.out)
    entries, stuck = [], []
    for i in range(args.count):
        kind = args.system if args.system != "both" else ("di" if i % 2 == 0 else "sc")
        for _attempt in range(args.retries):
            try:
                d = fuzz_di(rng, cfg) if kind == "di" else fuzz_sc(rng, cfg)
                text = render(kind, d)
                c = conclusion(kind, parse_di(text) if kind == "di" else parse_sc(text))
                break
            except MllError as e:
                log.warning("item %d: %s", i, e)
        else:
            stuck.append(i)
            log.error("item %d: %s", i, GenerationStuck(f"no valid derivation after {args.retries} tries"))
            continue
        name = f"{i:04d}{SUFFIX[kind]}"
        write_atomic(out / name, text)
        entries.append({"file": name, "system": kind, "conclusion": render_conclusion(kind, c)})
    manifest = {"seed": args.seed, "count": args.count, "max_steps": args.max_steps,
                "atoms": list(atoms), "weights": cfg.weights, "system": args.system,
                "files": entries, "stuck": stuck}
    write_atomic(out / "manifest.json", dump_json(manifest))
    print(f"wrote {len(entries)} derivations to {out}" + (f", {len(stuck)} stuck" if stuck else ""))
    return EXIT_OK if not stuck else EXIT_FAIL


def cmd_metrics(args) -> int:
    system, d = load(args.file, args.system)
    try:
        c = conclusion(system, d)
    except MllError as e:
        print(f"check failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    counts = count_general(c) if system == "di" else count_sequent(c)
    size = len(d.steps) + 1 if system == "di" else height(d)
    sys.stdout.write(dump_json({
        "system": system, "conclusion": render_conclusion(system, c),
        "rules": metrics(system, d).as_dict(), "counts": counts.as_dict(),
        "n_t": derived_t(counts), "n_p": derived_p(counts),
        ("length" if system == "di" else "height"): size,
    }))
    return EXIT_OK


# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mll", description="Unit-free MLL in sequent calculus and deep inference.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def with_system(q):
        q.add_argument("--system", choices=("auto", "sc", "di"), default="auto",
                       help="proof system of the input (default: from suffix or content)")

    def with_semantics(q):
        q.add_argument("--valuation", help="valuation file: 'atom: carrier=[..]; coherent=[(x,y),..]' per line")
        q.add_argument("--limit", type=int, default=10, help="largest carrier allowed per atom (default 10)")

    q = sub.add_parser("check", help="check a derivation and print its conclusion and rule counts")
    q.add_argument("file")
    with_system(q)
    q.add_argument("--claim", help="expected conclusion; its counting pre-check runs before checking")
    q.add_argument("--json", action="store_true")
    q.set_defaults(fn=cmd_check)

    q = sub.add_parser("translate", help="translate between systems, eliminate cuts or atomize")
    q.add_argument("file")
    q.add_argument("--to", required=True, choices=sorted(DIRECTIONS))
    q.add_argument("--naive", action="store_true", help="with --to di2sc, use the cut-based translation")
    with_system(q)
    q.add_argument("--out", help="directory for the output derivation and report")
    q.set_defaults(fn=cmd_translate)

    q = sub.add_parser("count", help="connective counts and the derivability pre-check")
    q.add_argument("source", help="file holding a formula or '|- ...' sequent, or the text itself with --text")
    q.add_argument("--text", action="store_true", help="treat SOURCE as formula text")
    q.add_argument("--json", action="store_true")
    q.set_defaults(fn=cmd_count)

    q = sub.add_parser("interpret", help="print the clique of a derivation")
    q.add_argument("file")
    with_system(q)
    with_semantics(q)
    q.add_argument("--structure", action="store_true", help="also run the diagonal-product check")
    q.set_defaults(fn=cmd_interpret)

    q = sub.add_parser("compare", help="compare the cliques of two derivations of one conclusion")
    q.add_argument("file_a")
    q.add_argument("file_b")
    with_system(q)
    q.add_argument("--system-a", choices=("sc", "di"))
    q.add_argument("--system-b", choices=("sc", "di"))
    with_semantics(q)
    q.set_defaults(fn=cmd_compare)

    q = sub.add_parser("fuzz", help="write a seeded corpus of random valid derivations")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=10)
    q.add_argument("--max-steps", type=int, default=10)
    q.add_argument("--atoms", default="a,b,c", help="comma-separated atom pool")
    q.add_argument("--weights", help="JSON file of per-rule weights")
    q.add_argument("--system", choices=("both", "sc", "di"), default="both")
    q.add_argument("--retries", type=int, default=3)
    q.add_argument("--out", required=True, help="corpus directory")
    q.set_defaults(fn=cmd_fuzz)

    q = sub.add_parser("metrics", help="rule and connective counts as JSON")
    q.add_argument("file")
    with_system(q)
    q.set_defaults(fn=cmd_metrics)
    return p


PARSE_ERRORS = (FormulaSyntaxError, TraceSyntaxError, DerivationSyntaxError, PathError, UsageError,
                json.JSONDecodeError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return args.fn(args)
    except PARSE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DiCheckError, ScCheckError, TranslationError, SemanticsError, MllError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
