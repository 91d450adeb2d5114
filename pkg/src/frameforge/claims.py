"""Regression suite for the published claims, plus the seeded corpus checks.

:func:`verify_paper` evaluates every claim on the builtin frames (optionally
replaced through ``overrides`` so a corrupted table can be fed in) and returns a
:class:`~frameforge.report.Report`. The corpus runners return a list of
exceptions; an empty list means the property held everywhere.
"""

from __future__ import annotations

import os
import random
from typing import Callable, Iterable, Optional

from .cep import cep_direct, cep_two_generated, pcep, verify_witness
from .clone import additive_equivalence, additive_members, hs_two_element_check, unary_clone
from .congruence import (
    congruence_generators,
    is_simple,
    join_generators,
    minimal_nontrivial,
    partition_of_generator,
    partition_oracle,
    principal_congruence,
    quotient,
)
from .core import (
    BooleanFrame,
    additive_extension,
    all_frames,
    builtin_frame,
    frame_to_dict,
    product,
    random_frame,
)
from .errors import RetryExhausted
from .report import Report
from .structure import (
    all_subalgebras,
    fraser_horn_check,
    generated_subalgebra,
    hs_classes,
    hs_equals_sh,
    relative_frame,
    sh_classes,
)
from .terms import (
    builtin_property,
    check_quasi_identity,
    eval_term,
    format_quasi_identity,
    parse_quasi_identity,
    parse_term,
)

INDEPENDENCE_NORMAL = "(x & -f(0)) | (y & f(0)) = x"
INDEPENDENCE_CYCLE = "(x & -f(0)) | (y & f(0)) = y"


def default_seed() -> int:
    return int(os.environ.get("FRAMEFORGE_SEED", "0"))


# corpora


def oracle_corpus(seed: int = 0, random_count: int = 200) -> list:
    """All frames on two atoms followed by seeded random frames on three."""
    frames = list(all_frames(2))
    frames += [random_frame(3, seed * 100_000 + i) for i in range(random_count)]
    return frames


def additive_corpus(seed: int = 0, count: int = 100) -> list:
    return [random_frame(1 + i % 3, seed * 100_000 + i, "additive") for i in range(count)]


def star_corpus(seed: int = 0, count: int = 100, three_atom: int = 5) -> list:
    """Up to ``count`` star frames; three-atom draws that exhaust the budget are skipped."""
    frames = []
    for i in range(count):
        k = 3 if i < three_atom else 2
        try:
            frames.append(random_frame(k, seed * 100_000 + i, "star"))
        except RetryExhausted:
            pass
    return frames


def product_pairs(seed: int = 0, count: int = 50) -> list:
    rng = random.Random(f"pairs/{seed}")
    pairs = []
    for i in range(count):
        ka, kb = rng.randint(1, 2), rng.randint(1, 2)
        pairs.append((random_frame(ka, rng.randrange(10**9)), random_frame(kb, rng.randrange(10**9))))
    return pairs


def hs_sh_pairs(seed: int = 0, count: int = 25, max_draws: int = 5000) -> list:
    """Seeded pairs of small frames whose factors both satisfy HS = SH."""
    rng = random.Random(f"hs-pairs/{seed}")
    pool = []
    pairs = []
    for _ in range(max_draws):
        if len(pairs) == count:
            break
        frame = random_frame(rng.randint(1, 2), rng.randrange(10**9))
        if hs_equals_sh(frame).holds:
            pool.append(frame)
            if len(pool) >= 2:
                pairs.append((pool[-2], pool[-1]))
    return pairs


# corpus checks; each returns a list of offending (frame, detail)


def check_oracle_bijection(frames: Iterable[BooleanFrame]) -> list:
    bad = []
    for frame in frames:
        gens = congruence_generators(frame)
        mapped = {partition_of_generator(frame, a) for a in gens}
        if len(mapped) != len(gens) or mapped != partition_oracle(frame):
            bad.append((frame, "generators and partitions disagree"))
    return bad


def check_cep_agreement(frames: Iterable[BooleanFrame]) -> list:
    bad = []
    for frame in frames:
        verdicts = (cep_direct(frame).holds, cep_two_generated(frame).holds, pcep(frame).holds)
        if len(set(verdicts)) != 1:
            bad.append((frame, verdicts))
    return bad


def check_principal_joins(frames: Iterable[BooleanFrame]) -> list:
    bad = []
    for frame in frames:
        for x in range(frame.size):
            px = principal_congruence(frame, x).generator
            for y in range(frame.size):
                py = principal_congruence(frame, y).generator
                if join_generators(frame, px, py) != principal_congruence(frame, x | y).generator:
                    bad.append((frame, (x, y)))
    return bad


def check_implications(frames: Iterable[BooleanFrame]) -> list:
    """additive => star => monotone; star => CEP; CEP => HS = SH; additive => CEP."""
    bad = []
    for frame in frames:
        additive = builtin_property(frame, "additive").holds
        star = builtin_property(frame, "star").holds
        monotone = builtin_property(frame, "monotone").holds
        cep = cep_direct(frame).holds
        if additive and not star:
            bad.append((frame, "additive but not star"))
        if star and not monotone:
            bad.append((frame, "star but not monotone"))
        if star and not cep:
            bad.append((frame, "star but no CEP"))
        if additive and not cep:
            bad.append((frame, "additive but no CEP"))
        if cep and not hs_equals_sh(frame).holds:
            bad.append((frame, "CEP but HS != SH"))
    return bad


def check_fraser_horn(pairs) -> list:
    return [((a, b), "not rectangular") for a, b in pairs if not fraser_horn_check(a, b).holds]


def check_product_hs_sh(pairs) -> list:
    return [((a, b), "product breaks HS = SH") for a, b in pairs
            if not hs_equals_sh(product(a, b)).holds]


def check_independence_normal(frames: Iterable[BooleanFrame]) -> list:
    q = parse_quasi_identity(INDEPENDENCE_NORMAL)
    return [(f, "s(x,y) != x") for f in frames if f.f[0] == 0 and not check_quasi_identity(f, q).holds]


def check_round_trip(texts: Iterable[str]) -> list:
    bad = []
    for text in texts:
        q = parse_quasi_identity(text)
        if parse_quasi_identity(format_quasi_identity(q)) != q:
            bad.append((text, format_quasi_identity(q)))
    return bad


PARSER_FIXTURES = (
    "x ^ y <= z => f(x) ^ f(y) <= f(z)",
    "f(x | y) = f(x) | f(y)",
    "x <= y => f(x) <= f(y)",
    "(x & -f(0)) | (y & f(0)) = x",
    "(x & -f(0)) | (y & f(0)) = y",
    "(x & f(1)) | (y & -f(1)) = x",
    "f(0) = 0",
    "f(1) = 1",
    "x <= f(x)",
    "f(x) = x | (g(x) & g(g(x)))",
    "x -> y -> z = x -> (y -> z)",
    "(x -> y) -> z = -(-x | y) | z",
    "x = y && y = z => x = z",
    "-(x ^ y) & -0 <= 1",
    "x ⊕ y ≤ z ⟹ f(x) ⊕ f(y) ≤ f(z)",
)

SYNTAX_ERROR_FIXTURES = (
    "x <= => y",
    "x <=",
    "f(x",
    "x & & y = x",
    "h(x) = x",
    "x = y && y = z",
    "x = y z",
    "x $ y = x",
    "",
)


# the claim registry


def verify_paper(overrides: Optional[dict] = None, seed: int = 0, corpus: bool = True) -> Report:
    """Evaluate every claim. ``overrides`` maps builtin names to replacement frames."""
    overrides = overrides or {}

    def frame(name: str) -> BooleanFrame:
        return overrides.get(name) or builtin_frame(name)

    report = Report("verify-paper", params={"seed": seed, "corpus": corpus})

    def claim(name: str, anchor: str, fn: Callable) -> None:
        try:
            result = fn()
        except Exception as exc:  # a crashing claim is a failing claim
            report.add(name, False, "error", anchor, f"{type(exc).__name__}: {exc}")
            return
        holds, witness = result if isinstance(result, tuple) else (result, None)
        report.add(name, bool(holds), "exhaustive", anchor, witness)

    # warm-up example
    ex1 = frame("example1")
    g = additive_extension(3, [2, 0, 1])
    claim("example1: f({1,3}) = {1,2,3}, identity elsewhere", "definition of the warm-up operation",
          lambda: ex1.f == (0, 1, 2, 3, 4, 7, 6, 7))

    def additivity_fails():
        v = builtin_property(ex1, "additive")
        return (not v.holds and v.counterexample == {"x": 1, "y": 4}), v.counterexample

    claim("example1: additivity fails at {1},{3}", "f({1} u {3}) != f({1}) u f({3})", additivity_fails)

    def star_holds():
        v = builtin_property(ex1, "star")
        return v.holds, v.counterexample

    claim("example1: star quasi-equation holds", "x^y <= z => f(x)^f(y) <= f(z)", star_holds)
    claim("example1: f is extensive", "x <= f(x)", lambda: builtin_property(ex1, "extensive").holds)
    for decide in (cep_direct, cep_two_generated, pcep):
        claim(f"example1: CEP holds ({decide.__name__})", "warm-up algebra has the CEP",
              lambda decide=decide: decide(ex1).holds)

    def clone16():
        r = unary_clone(ex1)
        return r.complete and r.size == 16, r.size

    claim("example1: unary clone has exactly 16 members", "clone size of the warm-up algebra", clone16)

    def additive_three():
        tables = {m.table for m in additive_members(unary_clone(ex1))}
        expected = {tuple([0] * 8), tuple([7] * 8), tuple(range(8))}
        return tables == expected, sorted(tables)

    claim("example1: additive clone members are 0, 1, x", "additive unary term operations",
          additive_three)
    claim("example1: not term-equivalent to an additive operation", "no additive term-equivalent operation",
          lambda: additive_equivalence(ex1).status == "not_equivalent")

    def g_identity():
        t = parse_term("x | (g(x) & g(g(x)))")
        return all(eval_term(ex1, t, {"x": x}, companion=g) == ex1.f[x] for x in range(8))

    claim("example1: f(x) = x | (g(x) & g(g(x)))", "f recovered from the additive g", g_identity)
    claim("example1: Con(A, g) is contained in Con(A, f)", "Con(A,g) <= Con(A,f)",
          lambda: set(congruence_generators(g)) <= set(congruence_generators(ex1)))

    # HS = SH without CEP
    sh = frame("example-sh")
    claim("example-sh: simple", "simplicity", lambda: is_simple(sh))

    def five_subalgebras():
        subs = [s.elements for s in all_subalgebras(sh)]
        want = [(0, 7), (0, 1, 6, 7), (0, 2, 5, 7), (0, 3, 4, 7), tuple(range(8))]
        return subs == want, subs

    claim("example-sh: exactly five subalgebras", "subalgebra list", five_subalgebras)

    def a2_image():
        sub = generated_subalgebra(sh, [4])
        rel, emb = relative_frame(sh, sub)
        q, _ = quotient(rel, emb.index(3))
        return q.atoms == 1 and q.f == (0, 0), list(q.f)

    claim("example-sh: four-element subalgebra collapses onto two:zero",
          "nontrivial image of the four-element subalgebra", a2_image)

    def hs_sh_six():
        hs, shc = hs_classes(sh), sh_classes(sh)
        return hs == shc and len(hs) == 6, len(hs)

    claim("example-sh: HS = SH with 6 classes", "HS = SH on the counterexample", hs_sh_six)
    for decide in (cep_direct, cep_two_generated, pcep):
        def cep_fails(decide=decide):
            v = decide(sh)
            ok = not v.holds and v.witness == ((0, 3, 4, 7), 3) and verify_witness(sh, v.witness)
            return ok, v.witness

        claim(f"example-sh: CEP fails at {{0,3,4,7}} with generator 3 ({decide.__name__})",
              "non-extendable congruence", cep_fails)

    # cycle algebras
    for n in (3, 4):
        cyc = frame(f"cycle:{n}")
        claim(f"cycle:{n}: no proper subalgebras", "no proper subalgebras",
              lambda cyc=cyc: len(all_subalgebras(cyc)) == 1)
        claim(f"cycle:{n}: simple", "simplicity", lambda cyc=cyc: is_simple(cyc))
        claim(f"cycle:{n}: HS = {{1, A}}", "HS contains only the trivial algebra and A",
              lambda cyc=cyc: set(hs_classes(cyc).keys()) == set(
                  hs_classes(BooleanFrame(0, (0,))).keys()) | {_canon(cyc)})
        claim(f"cycle:{n}: no two-element frame in HS", "two-element algebras absent from HS",
              lambda cyc=cyc: hs_two_element_check(cyc) == set())
        claim(f"cycle:{n}: CEP holds", "cycle algebras have the CEP", lambda cyc=cyc: cep_direct(cyc).holds)
        claim(f"cycle:{n}: s(x,y) = y", "independence term on non-normal algebras",
              lambda cyc=cyc: check_quasi_identity(cyc, INDEPENDENCE_CYCLE).holds)
        claim(f"cycle:{n}: not normal", "f(0) is the top",
              lambda cyc=cyc: not builtin_property(cyc, "normal").holds)

    # wheel
    w5 = frame("wheel:5")
    claim("wheel:5: 64 elements", "wheel complex algebra size", lambda: w5.size == 64)
    for prop in ("additive", "normal", "monotone", "star"):
        claim(f"wheel:5: {prop}", "wheel complex algebra identities",
              lambda prop=prop: builtin_property(w5, prop).holds)
    claim("wheel:5: CEP holds", "wheel complex algebra has the CEP", lambda: cep_direct(w5).holds)
    claim("wheel:5: unique minimal nontrivial congruence", "wheel complex algebra is subdirectly irreducible",
          lambda: (len(minimal_nontrivial(w5)) == 1, minimal_nontrivial(w5)))

    if corpus:
        frames = oracle_corpus(seed)
        claim("corpus: congruence generators match the partition oracle", "congruences as generator elements",
              lambda: _empty(check_oracle_bijection(frames)))
        claim("corpus: direct = two-generated = principal CEP", "equivalent CEP deciders",
              lambda: _empty(check_cep_agreement(frames)))
        claim("corpus: Theta(x,0) v Theta(y,0) = Theta(x|y,0)", "principal congruence joins",
              lambda: _empty(check_principal_joins(frames)))
        implication_frames = frames + additive_corpus(seed) + star_corpus(seed)
        claim("corpus: additive => star => monotone, star => CEP, CEP => HS=SH",
              "implications between the properties", lambda: _empty(check_implications(implication_frames)))
        claim("corpus: s(x,y) = x on normal frames", "independence term on normal algebras",
              lambda: _empty(check_independence_normal(frames)))
        claim("products: congruences are rectangular", "rectangular product congruences",
              lambda: _empty(check_fraser_horn(product_pairs(seed))))
        claim("products: HS = SH is preserved", "HS = SH for products",
              lambda: _empty(check_product_hs_sh(hs_sh_pairs(seed))))
        claim("example-sh: HS = SH without CEP", "HS = SH is weaker than CEP",
              lambda: hs_equals_sh(sh).holds and not cep_direct(sh).holds)

    claim("parser: print/parse round trip", "formula syntax",
          lambda: _empty(check_round_trip(PARSER_FIXTURES)))

    c2 = builtin_frame("cycle:2")
    report.open_questions.append({
        "frame": "cycle:2",
        "simple": is_simple(c2),
        "congruence_generators": list(congruence_generators(c2)),
        "note": "the two-atom cycle algebra has the proper congruence generated by 2",
    })
    report.frame = {name: frame_to_dict(f) for name, f in overrides.items()} or None
    return report


def _canon(frame: BooleanFrame):
    from .structure import canonical_form

    return canonical_form(frame)


def _empty(bad: list):
    return (not bad), [_describe(b) for b in bad[:5]]


def _describe(item):
    subject, detail = item
    if isinstance(subject, BooleanFrame):
        subject = frame_to_dict(subject)
    elif isinstance(subject, tuple) and all(isinstance(s, BooleanFrame) for s in subject):
        subject = [frame_to_dict(s) for s in subject]
    return {"subject": subject, "detail": detail}
