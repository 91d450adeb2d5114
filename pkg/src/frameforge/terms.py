"""Terms, quasi-identities, the text syntax for them, and exhaustive checking.

Syntax, loosest binding first::

    quasi := atom ("&&" atom)* "=>" atom | atom
    atom  := term ("=" | "<=") term
    term  := or ("->" term)?          # right associative
    or    := xor ("|" xor)*
    xor   := and ("^" and)*
    and   := unary ("&" unary)*
    unary := "-" unary | "0" | "1" | NAME | ("f" | "g") "(" term ")" | "(" term ")"

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .config import limits
from .core import BooleanFrame
from .errors import BudgetExceeded, TermSyntaxError, UnboundVariable

# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int  # 0 or 1


@dataclass(frozen=True)
class Not:
    arg: "Term"


@dataclass(frozen=True)
class App:
    fn: str  # "f" or "g"
    arg: "Term"


@dataclass(frozen=True)
class Bin:
    op: str  # "&", "|", "^", "->"
    left: "Term"
    right: "Term"


Term = Union[Var, Const, Not, App, Bin]


@dataclass(frozen=True)
class Atom:
    lhs: Term
    rel: str  # "=" or "<="
    rhs: Term


@dataclass(frozen=True)
class QuasiIdentity:
    premises: tuple
    conclusion: Atom

    @property
    def variables(self) -> tuple:
        """Variable names in order of first occurrence."""
        seen: dict = {}
        for atom in (*self.premises, self.conclusion):
            for side in (atom.lhs, atom.rhs):
                for name in term_variables(side):
                    seen.setdefault(name, None)
        return tuple(seen)


def term_variables(term: Term) -> tuple:
    out: dict = {}

    def walk(t):
        if isinstance(t, Var):
            out.setdefault(t.name, None)
        elif isinstance(t, (Not, App)):
            walk(t.arg)
        elif isinstance(t, Bin):
            walk(t.left)
            walk(t.right)

    walk(term)
    return tuple(out)


# shorthand constructors used by other modules


def x_var() -> Var:
    return Var("x")


def meet(a: Term, b: Term) -> Term:
    return Bin("&", a, b)


def join(a: Term, b: Term) -> Term:
    return Bin("|", a, b)


# lexer

_ALIASES = {"⊓": "&", "⊔": "|", "⊕": "^", "≤": "<=", "⟹": "=>", "→": "->", "∧": "&&"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<op>=>|&&|<=|->|[=|^&\-()]|[⊓⊔⊕≤⟹→∧])
  | (?P<const>[01](?![0-9A-Za-z_]))
  | (?P<name>[a-zA-Z][a-zA-Z0-9_]*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # "op", "const", "name", "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise TermSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind in ("op", "const", "name"):
            tok = m.group()
            toks.append(_Tok(kind, _ALIASES.get(tok, tok), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


_TERM_START = ("-", "(", "0", "1", "NAME")


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, expected) -> TermSyntaxError:
        tok = self.tok
        what = "end of input" if tok.kind == "eof" else repr(tok.text)
        return TermSyntaxError(f"unexpected {what}", tok.line, tok.col, expected)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error([text])

    def quasi(self) -> QuasiIdentity:
        atoms = [self.atom()]
        while self.accept("&&"):
            atoms.append(self.atom())
        if self.accept("=>"):
            q = QuasiIdentity(tuple(atoms), self.atom())
        elif len(atoms) == 1:
            q = QuasiIdentity((), atoms[0])
        else:
            raise self.error(["=>", "&&"])
        if self.tok.kind != "eof":
            raise self.error(["&&", "=>", "end of input"] if not q.premises else ["end of input"])
        return q

    def atom(self) -> Atom:
        lhs = self.term()
        for rel in ("=", "<="):
            if self.accept(rel):
                return Atom(lhs, rel, self.term())
        raise self.error(["=", "<=", "->", "|", "^", "&"])

    def term(self) -> Term:
        left = self.binary(0)
        if self.accept("->"):
            return Bin("->", left, self.term())
        return left

    _LEVELS = ("|", "^", "&")

    def binary(self, level: int) -> Term:
        if level == len(self._LEVELS):
            return self.unary()
        op = self._LEVELS[level]
        left = self.binary(level + 1)
        while self.accept(op):
            left = Bin(op, left, self.binary(level + 1))
        return left

    def unary(self) -> Term:
        tok = self.tok
        if self.accept("-"):
            return Not(self.unary())
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        if tok.kind == "const":
            self.i += 1
            return Const(int(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self.tok.kind == "op" and self.tok.text == "(":
                if tok.text not in ("f", "g"):
                    raise TermSyntaxError(
                        f"unknown operation {tok.text!r}", tok.line, tok.col, ["f", "g"]
                    )
                self.i += 1
                inner = self.term()
                self.expect(")")
                return App(tok.text, inner)
            return Var(tok.text)
        raise self.error(_TERM_START)


def parse_quasi_identity(text: str) -> QuasiIdentity:
    return _Parser(text).quasi()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    term = p.term()
    if p.tok.kind != "eof":
        raise p.error(["end of input"])
    return term


# printer

_PREC = {"->": 1, "|": 2, "^": 3, "&": 4}


def _prec(t: Term) -> int:
    return _PREC[t.op] if isinstance(t, Bin) else 5


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, App):
        return f"{t.fn}({format_term(t.arg)})"
    if isinstance(t, Not):
        inner = format_term(t.arg)
        return f"-({inner})" if isinstance(t.arg, Bin) else f"-{inner}"
    p = _PREC[t.op]
    left, right = format_term(t.left), format_term(t.right)
    # "->" groups to the right, the rest to the left
    if _prec(t.left) < p or (t.op == "->" and _prec(t.left) == p):
        left = f"({left})"
    if _prec(t.right) < p or (t.op != "->" and _prec(t.right) == p):
        right = f"({right})"
    return f"{left} {t.op} {right}"


def format_atom(a: Atom) -> str:
    return f"{format_term(a.lhs)} {a.rel} {format_term(a.rhs)}"


def format_quasi_identity(q: QuasiIdentity) -> str:
    if not q.premises:
        return format_atom(q.conclusion)
    return " && ".join(map(format_atom, q.premises)) + " => " + format_atom(q.conclusion)


# evaluation


def _table_of(companion) -> Optional[Sequence[int]]:
    if companion is None:
        return None
    return companion.f if isinstance(companion, BooleanFrame) else companion


def eval_term(frame: BooleanFrame, term: Term, assignment: Mapping[str, int],
              companion=None) -> int:
    """Value of ``term`` in ``frame``; ``companion`` supplies a table for ``g``."""
    top = frame.top
    g = _table_of(companion)

    def ev(t):
        if isinstance(t, Var):
            try:
                return assignment[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, Const):
            return top if t.value else 0
        if isinstance(t, Not):
            return ev(t.arg) ^ top
        if isinstance(t, App):
            v = ev(t.arg)
            if t.fn == "f":
                return frame.f[v]
            if g is None:
                raise ValueError("term uses g but no companion table was given")
            return g[v]
        a, b = ev(t.left), ev(t.right)
        if t.op == "&":
            return a & b
        if t.op == "|":
            return a | b
        if t.op == "^":
            return a ^ b
        return (a ^ top) | b

    return ev(term)


def eval_term_array(frame: BooleanFrame, term: Term, env: Mapping[str, np.ndarray],
                    companion=None) -> np.ndarray:
    """Vectorised :func:`eval_term`: variables are bound to integer arrays."""
    top = frame.top
    ftab = frame.table
    g = _table_of(companion)
    gtab = None if g is None else np.asarray(g, dtype=np.int64)

    def ev(t):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise UnboundVariable(t.name) from None
        if isinstance(t, Const):
            return np.int64(top if t.value else 0)
        if isinstance(t, Not):
            return ev(t.arg) ^ top
        if isinstance(t, App):
            v = ev(t.arg)
            if t.fn == "f":
                return ftab[v]
            if gtab is None:
                raise ValueError("term uses g but no companion table was given")
            return gtab[v]
        a, b = ev(t.left), ev(t.right)
        if t.op == "&":
            return a & b
        if t.op == "|":
            return a | b
        if t.op == "^":
            return a ^ b
        return (a ^ top) | b

    return ev(term)


def _atom_holds(frame, atom: Atom, env, companion=None):
    lhs = eval_term_array(frame, atom.lhs, env, companion)
    rhs = eval_term_array(frame, atom.rhs, env, companion)
    if atom.rel == "=":
        return lhs == rhs
    return (lhs & ~rhs) == 0


def atom_holds(frame, atom: Atom, assignment, companion=None) -> bool:
    lhs = eval_term(frame, atom.lhs, assignment, companion)
    rhs = eval_term(frame, atom.rhs, assignment, companion)
    return lhs == rhs if atom.rel == "=" else lhs & ~rhs == 0


def holds_at(frame, q: QuasiIdentity, assignment, companion=None) -> bool:
    """Whether one assignment satisfies the quasi-identity."""
    if all(atom_holds(frame, p, assignment, companion) for p in q.premises):
        return atom_holds(frame, q.conclusion, assignment, companion)
    return True


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Optional[dict] = None
    status: str = "exhaustive"
    checked: int = 0

    def __bool__(self):
        return self.holds


_CHUNK = 1 << 20


def check_quasi_identity(frame: BooleanFrame, q: Union[QuasiIdentity, str], *,
                         mode: str = "auto", budget: Optional[int] = None,
                         samples: Optional[int] = None, seed: int = 0,
                         companion=None) -> Verdict:
    """Search all assignments (or a seeded sample) for a violation of ``q``.

    ``mode`` is ``"auto"``, ``"exhaustive"`` or ``"sample"``. In auto mode the
    check is exhaustive when ``size ** nvars`` fits the evaluation budget. The
    reported counterexample is the least violating assignment, ordering
    assignments lexicographically by variables in order of first occurrence.
    """
    if isinstance(q, str):
        q = parse_quasi_identity(q)
    budget = limits().eval_budget if budget is None else budget
    names = q.variables
    nv = len(names)
    size = frame.size
    total = size**nv
    if mode == "exhaustive" and total > budget:
        raise BudgetExceeded(f"{total} assignments exceed the budget of {budget}")
    if mode not in ("auto", "exhaustive", "sample"):
        raise ValueError(f"unknown mode {mode!r}")
    exhaustive = mode == "exhaustive" or (mode == "auto" and total <= budget)

    def violations(idx: np.ndarray):
        env = {}
        for j, name in enumerate(names):
            env[name] = (idx // size ** (nv - 1 - j)) % size
        ok = np.ones(idx.shape, dtype=bool)
        for p in q.premises:
            ok &= np.broadcast_to(_atom_holds(frame, p, env, companion), idx.shape)
        concl = np.broadcast_to(_atom_holds(frame, q.conclusion, env, companion), idx.shape)
        return idx[ok & ~concl]

    def decode(index: int) -> dict:
        out = {}
        for j, name in enumerate(names):
            out[name] = int(index // size ** (nv - 1 - j) % size)
        return out

    bad = None
    if exhaustive:
        for start in range(0, total, _CHUNK):
            hits = violations(np.arange(start, min(total, start + _CHUNK), dtype=np.int64))
            if hits.size:
                bad = int(hits.min())
                break
        checked = total if bad is None else bad + 1
        status = "exhaustive"
    else:
        n = limits().sample_count if samples is None else samples
        rng = np.random.default_rng(seed)
        idx = np.zeros(n, dtype=np.int64)
        for _ in range(nv):
            idx = idx * size + rng.integers(0, size, n, dtype=np.int64)
        hits = violations(idx)
        if hits.size:
            bad = int(hits.min())
        checked = n
        status = "sampled"
    if bad is None:
        return Verdict(True, None, status, checked)
    witness = decode(bad)
    if holds_at(frame, q, witness, companion):
        raise AssertionError(f"counterexample {witness} does not re-verify")
    return Verdict(False, witness, status, checked)


PROPERTIES = {
    "additive": "f(x | y) = f(x) | f(y)",
    "monotone": "x <= y => f(x) <= f(y)",
    "normal": "f(0) = 0",
    "conormal": "f(1) = 1",
    "extensive": "x <= f(x)",
    "star": "x ^ y <= z => f(x) ^ f(y) <= f(z)",
}


@lru_cache(maxsize=None)
def property_identity(name: str) -> QuasiIdentity:
    try:
        return parse_quasi_identity(PROPERTIES[name])
    except KeyError:
        raise ValueError(f"unknown property {name!r}; choose from {sorted(PROPERTIES)}") from None


def builtin_property(frame: BooleanFrame, name: str, **kwargs) -> Verdict:
    return check_quasi_identity(frame, property_identity(name), **kwargs)


def satisfies_star(frame: BooleanFrame) -> bool:
    """Direct check of the star quasi-equation, for rejection sampling."""
    t = frame.table
    x = np.arange(frame.size, dtype=np.int64)
    for d in range(frame.size):
        # f(x) ^ f(x ^ d) must sit below f(z) for every z above d
        bound = np.bitwise_and.reduce(t[(x & d) == d])
        if np.any((t ^ t[x ^ d]) & ~bound):
            return False
    return True


def is_additive_table(table: Sequence[int], size: int) -> bool:
    t = np.asarray(table, dtype=np.int64)
    x = np.arange(size, dtype=np.int64)
    return bool(np.all(t[x[:, None] | x[None, :]] == (t[:, None] | t[None, :])))
