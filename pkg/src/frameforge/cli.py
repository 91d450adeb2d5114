"""Command-line interface.

Exit codes: 0 the checked property holds (or a compute command succeeded),
1 it fails and the report carries a witness, 2 usage or input error,
3 a budget or cap was hit and the answer is inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import claims
from .cep import decide_cep
from .clone import (
    additive_equivalence,
    additive_members,
    discriminator_term,
    find_switching_term,
    unary_clone,
    verify_discriminator,
)
from .config import override
from .congruence import (
    _difference_spread,
    congruence_generators,
    generator_blocks,
    is_congruential,
    minimal_nontrivial,
    principal_congruence,
    quotient,
)
from .core import (
    CONSTRAINTS,
    _check_atoms,
    BooleanFrame,
    builtin_frame,
    frame_to_dict,
    is_isomorphic,
    load_frame,
    product,
    random_frame,
)
from .errors import BudgetExceeded, FrameError, RetryExhausted, TermSyntaxError, TooLarge
from .report import Report, term_text
from .structure import all_subalgebras, hs_classes, hs_equals_sh, relative_frame, sh_classes
from .terms import PROPERTIES, check_quasi_identity, format_quasi_identity, parse_quasi_identity

HOLDS, FAILS, USAGE, INCONCLUSIVE = 0, 1, 2, 3

CEP_METHODS = {"direct": "direct", "two-gen": "two_generated", "pcep": "pcep"}


class _Source(argparse.Action):
    """Collect --builtin and --input in command-line order."""

    def __call__(self, parser, namespace, value, option_string=None):
        sources = list(getattr(namespace, "sources", None) or [])
        sources.append((self.dest, value))
        namespace.sources = sources


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--builtin", action=_Source, metavar="SPEC",
                        help="example1, example-sh, two:id|zero|one|swap, cycle:N, wheel:N")
    common.add_argument("--input", action=_Source, metavar="PATH", help="frame or Kripke JSON file")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--json", dest="format", action="store_const", const="json")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--max-atoms", type=int)
    common.add_argument("--clone-cap", type=int)
    common.add_argument("--eval-budget", type=int)
    common.add_argument("--timing", action="store_true", help="record wall time in elapsed_ms")

    parser = argparse.ArgumentParser(prog="frameforge", description="Boolean algebras with one unary operation.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(sources=[])
        return p

    p = cmd("check", "check a quasi-identity or a named property")
    p.add_argument("formula", nargs="?")
    p.add_argument("--property", choices=sorted(PROPERTIES))
    p.add_argument("--mode", choices=("auto", "exhaustive", "sample"), default="auto")
    p.add_argument("--seed", type=int, default=None)

    p = cmd("con", "congruence generators")
    p.add_argument("--principal", type=int, nargs="+", metavar="X",
                   help="also report the principal congruence of X (and Y)")
    cmd("sub", "subalgebras")
    p = cmd("cep", "decide the congruence extension property")
    p.add_argument("--method", choices=(*CEP_METHODS, "all"), default="all")
    p = cmd("clone", "unary term clone")
    p.add_argument("--cap", type=int)
    p.add_argument("--list", action="store_true", help="list every member with a derivation")
    p = cmd("additive-equiv", "look for a term-equivalent additive operation")
    p.add_argument("--cap", type=int)
    cmd("hs-sh", "compare HS and SH")
    p = cmd("switching", "look for a switching term")
    p.add_argument("--cap", type=int)
    p = cmd("product", "direct product of two frames")
    p.add_argument("--emit", metavar="PATH", help="write the product frame JSON")
    p = cmd("quotient", "quotient by a congruence generator")
    p.add_argument("--gen", type=int, required=True)
    p.add_argument("--emit", metavar="PATH", help="write the quotient frame JSON")
    cmd("iso", "isomorphism test for two frames")
    p = cmd("random", "seeded random frames")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--constraint", choices=CONSTRAINTS, default="none")
    p.add_argument("--count", type=int, default=1)
    p = cmd("verify-paper", "run the claim regression suite")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--no-corpus", action="store_true", help="skip the seeded corpus claims")
    p.add_argument("--override", action="append", default=[], metavar="NAME=PATH",
                   help="replace a builtin frame by a JSON file (mutation testing)")
    p = cmd("corpus", "run the seeded property suites")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--suite", choices=("all", *CORPUS_SUITES), default="all")
    p.add_argument("--random-count", type=int, default=200)
    return parser


CORPUS_SUITES = ("oracle", "cep", "joins", "implications", "independence", "products", "parser")


def _load(kind: str, value: str) -> BooleanFrame:
    frame = builtin_frame(value) if kind == "builtin" else load_frame(value)
    _check_atoms(frame.atoms)  # builtins bypass make_frame, so --max-atoms is enforced here
    return frame


def _frames(args, n: int) -> list:
    sources = args.sources or []
    if len(sources) != n:
        raise _Usage(f"{args.command} needs exactly {n} frame(s) from --builtin/--input, got {len(sources)}")
    return [_load(kind, value) for kind, value in sources]


class _Usage(Exception):
    pass


def _seed(value: Optional[int]) -> int:
    return claims.default_seed() if value is None else value


# commands; each fills the report and returns an exit code


def _check(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    if (args.formula is None) == (args.property is None):
        raise _Usage("give either a formula or --property")
    q = parse_quasi_identity(PROPERTIES[args.property] if args.property else args.formula)
    seed = _seed(args.seed)
    report.params.update(formula=format_quasi_identity(q), mode=args.mode, seed=seed)
    v = check_quasi_identity(frame, q, mode=args.mode, seed=seed)
    report.add(args.property or format_quasi_identity(q), v.holds, v.status, "", v.counterexample)
    report.results = {"checked": v.checked}
    if not v.holds:
        return FAILS
    return HOLDS if v.status == "exhaustive" else INCONCLUSIVE


def _con(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    gens = congruence_generators(frame)
    results = {
        "generators": list(gens),
        "count": len(gens),
        "minimal_nontrivial": minimal_nontrivial(frame),
        "simple": gens == (0, frame.top) if frame.atoms else None,
        "blocks": {str(a): generator_blocks(frame, a) for a in gens} if frame.size <= 16 else None,
    }
    if args.principal:
        x, y = (args.principal + [0])[:2]
        results["principal"] = {"x": x, "y": y, "generator": principal_congruence(frame, x, y).generator}
    report.results = results
    return HOLDS


def _sub(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    subs = []
    for s in all_subalgebras(frame):
        rel, _ = relative_frame(frame, s)
        subs.append({"elements": list(s.elements), "relative_atoms": s.relative_atoms(), "f": list(rel.f)})
    report.results = {"count": len(subs), "subalgebras": subs}
    return HOLDS


def _cep(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    methods = list(CEP_METHODS) if args.method == "all" else [args.method]
    report.params["method"] = args.method
    verdicts = []
    for m in methods:
        v = decide_cep(frame, CEP_METHODS[m])
        witness = None if v.holds else {"subalgebra": list(v.witness[0]), "generator": v.witness[1]}
        report.add(f"cep ({m})", v.holds, "exhaustive", "congruence extension property", witness)
        verdicts.append(v.holds)
    if len(set(verdicts)) > 1:
        report.add("methods agree", False, "exhaustive", "equivalent CEP deciders", dict(zip(methods, verdicts)))
        return FAILS
    return HOLDS if verdicts[0] else FAILS


def _clone(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    result = unary_clone(frame, args.cap)
    report.params["cap"] = result.cap
    out = {"complete": result.complete, "size": result.size,
           "additive": sorted(list(m.table) for m in additive_members(result))
           if result.complete else None}
    if args.list or result.size <= 64:
        out["members"] = [{"table": list(m.table), "term": term_text(m.derivation)} for m in result.members]
    report.results = out
    return HOLDS if result.complete else INCONCLUSIVE


def _additive_equiv(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    eq = additive_equivalence(frame, args.cap)
    witness = None
    if eq.status == "equivalent":
        witness = {"g": list(eq.g), "f_from_g": term_text(eq.f_from_g), "g_from_f": term_text(eq.g_from_f)}
    holds = {"equivalent": True, "not_equivalent": False, "inconclusive": None}[eq.status]
    status = "inconclusive" if holds is None else "exhaustive"
    report.add("term-equivalent to an additive operation", holds, status,
               "per-algebra term equivalence", witness)
    report.results = {"status": eq.status}
    return {True: HOLDS, False: FAILS, None: INCONCLUSIVE}[holds]


def _hs_sh(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    v = hs_equals_sh(frame)
    report.add("HS = SH", v.holds, "exhaustive", "isomorphism classes compared", v.counterexample)
    report.results = {
        "hs": [list(c.f) for c in hs_classes(frame).canonical()],
        "sh": [list(c.f) for c in sh_classes(frame).canonical()],
    }
    return HOLDS if v.holds else FAILS


def _switching(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    r = find_switching_term(frame, args.cap)
    if r.status == "found":
        report.add("switching term", True, "exhaustive", "d(0) = 0, d(x) = 1 otherwise",
                   {"term": term_text(r.term.derivation)})
        ok = verify_discriminator(frame, r.term)
        report.add("discriminator", ok, "exhaustive", "t(x,y,z) built from d",
                   {"term": term_text(discriminator_term(r.term.derivation))})
        return HOLDS if ok else FAILS
    holds = False if r.status == "absent" else None
    report.add("switching term", holds, "exhaustive" if holds is False else "inconclusive",
               "d(0) = 0, d(x) = 1 otherwise")
    return FAILS if holds is False else INCONCLUSIVE


def _emit(path: Optional[str], frame: BooleanFrame) -> None:
    if path:
        Path(path).write_text(json.dumps(frame_to_dict(frame), sort_keys=True) + "\n", encoding="utf-8")


def _product(args, report: Report):
    a, b = _frames(args, 2)
    prod = product(a, b)
    report.frame = [frame_to_dict(a), frame_to_dict(b)]
    report.results = {"frame": frame_to_dict(prod)}
    _emit(args.emit, prod)
    return HOLDS


def _quotient(args, report: Report):
    (frame,) = _frames(args, 1)
    report.frame = frame_to_dict(frame)
    report.params["gen"] = args.gen
    if not 0 <= args.gen < frame.size:
        raise _Usage(f"--gen {args.gen} is not an element of the frame")
    if not is_congruential(frame, args.gen):
        report.add("generator is congruential", False, "exhaustive", "congruence generator",
                   {"gen": args.gen, "spread": _difference_spread(frame, args.gen)})
        return FAILS
    image, element_map = quotient(frame, args.gen)
    report.results = {"frame": frame_to_dict(image), "element_map": list(element_map)}
    _emit(args.emit, image)
    return HOLDS


def _iso(args, report: Report):
    a, b = _frames(args, 2)
    report.frame = [frame_to_dict(a), frame_to_dict(b)]
    perm = is_isomorphic(a, b)
    report.add("isomorphic", perm is not None, "exhaustive", "atom permutation",
               None if perm is None else {"images": list(perm.images)})
    return HOLDS if perm is not None else FAILS


def _random(args, report: Report):
    seed = _seed(args.seed)
    report.params.update(atoms=args.atoms, seed=seed, constraint=args.constraint, count=args.count)
    frames = [random_frame(args.atoms, seed + i, args.constraint) for i in range(args.count)]
    report.results = {"frames": [frame_to_dict(f) for f in frames]}
    return HOLDS


def _verify_paper(args, report: Report):
    overrides = {}
    for item in args.override:
        name, sep, path = item.partition("=")
        if not sep:
            raise _Usage(f"--override expects NAME=PATH, got {item!r}")
        overrides[name] = load_frame(path).renamed(name)
    seed = _seed(args.seed)
    result = claims.verify_paper(overrides, seed=seed, corpus=not args.no_corpus)
    report.params.update(result.params)
    report.params["overrides"] = sorted(overrides)
    report.frame = result.frame
    report.checks = result.checks
    report.open_questions = result.open_questions
    return HOLDS if report.all_hold else FAILS


def _corpus(args, report: Report):
    seed = _seed(args.seed)
    report.params.update(seed=seed, suite=args.suite, random_count=args.random_count)
    suites = CORPUS_SUITES if args.suite == "all" else (args.suite,)
    frames = claims.oracle_corpus(seed, args.random_count)
    runs = {
        "oracle": lambda: claims.check_oracle_bijection(frames),
        "cep": lambda: claims.check_cep_agreement(frames),
        "joins": lambda: claims.check_principal_joins(frames),
        "implications": lambda: claims.check_implications(
            frames + claims.additive_corpus(seed) + claims.star_corpus(seed)),
        "independence": lambda: claims.check_independence_normal(frames),
        "products": lambda: claims.check_fraser_horn(claims.product_pairs(seed))
        + claims.check_product_hs_sh(claims.hs_sh_pairs(seed)),
        "parser": lambda: claims.check_round_trip(claims.PARSER_FIXTURES),
    }
    for name in suites:
        bad = runs[name]()
        report.add(name, not bad, "exhaustive", "seeded corpus", [claims._describe(b) for b in bad[:5]] or None)
    return HOLDS if report.all_hold else FAILS


COMMANDS = {
    "check": _check, "con": _con, "sub": _sub, "cep": _cep, "clone": _clone,
    "additive-equiv": _additive_equiv, "hs-sh": _hs_sh, "switching": _switching,
    "product": _product, "quotient": _quotient, "iso": _iso, "random": _random,
    "verify-paper": _verify_paper, "corpus": _corpus,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    report = Report(args.command, timing=args.timing)
    caps = {"max_atoms": args.max_atoms, "clone_cap": args.clone_cap, "eval_budget": args.eval_budget}
    report.params.update({k: v for k, v in caps.items() if v is not None})
    if getattr(args, "cap", None) is not None and args.cap < 3:
        return _fail(f"--cap must be at least 3, got {args.cap}", USAGE)
    try:
        with override(**caps):
            code = COMMANDS[args.command](args, report)
    except TermSyntaxError as exc:
        return _fail(f"parse error: {exc}", USAGE)
    except (BudgetExceeded, RetryExhausted, TooLarge) as exc:
        return _fail(f"{type(exc).__name__}: {exc}", INCONCLUSIVE)
    except (FrameError, _Usage, OSError, json.JSONDecodeError, ValueError) as exc:
        return _fail(f"{type(exc).__name__}: {exc}", USAGE)
    text = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")
    return code


def _fail(message: str, code: int) -> int:
    sys.stderr.write(f"frameforge: {message}\n")
    return code


run = main


def entry() -> None:
    sys.exit(main())
