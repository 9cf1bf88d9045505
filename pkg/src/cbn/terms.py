"""First-order terms over a finite signature: symbols, positions, matching, parsing.

Terms are immutable values with structural equality; positions are 1-based
integer sequences addressing subterm occurrences.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping, Optional, Union


class TermError(ValueError):
    """Malformed term input: syntax error, unknown symbol, or arity mismatch."""

    def __init__(self, message: str, position: Optional[int] = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class Decoration(Enum):
    PLAIN = "plain"
    BULLET = "bullet"
    CIRCLED = "circled"


#: ASCII spelling of the unevaluated-hole constant and of circled symbols.
BULLET_NAME = "#"
CIRCLED_SUFFIX = "@"

#: Variable names reserved for fresh variables introduced by approximations.
RESERVED_VAR = re.compile(r"_v\d+\Z")

_IDENT = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class FuncSym:
    """A function symbol with a fixed arity and an optional decoration."""

    name: str
    arity: int
    decoration: Decoration = Decoration.PLAIN

    @property
    def display(self) -> str:
        if self.decoration is Decoration.BULLET:
            return BULLET_NAME
        if self.decoration is Decoration.CIRCLED:
            return self.name + CIRCLED_SUFFIX
        return self.name

    def __repr__(self) -> str:
        return f"{self.display}/{self.arity}"


def bullet_symbol() -> FuncSym:
    return FuncSym(BULLET_NAME, 0, Decoration.BULLET)


def circled(sym: FuncSym) -> FuncSym:
    if sym.decoration is not Decoration.PLAIN:
        raise ValueError(f"cannot circle decorated symbol {sym.display}")
    return FuncSym(sym.name, sym.arity, Decoration.CIRCLED)


class Signature:
    """An immutable set of function symbols, looked up by display name."""

    def __init__(self, symbols):
        syms = tuple(sorted(set(symbols), key=lambda s: (s.name, s.decoration.value)))
        by_display: dict[str, FuncSym] = {}
        for sym in syms:
            if sym.display in by_display:
                raise ValueError(f"duplicate symbol {sym.display} in signature")
            by_display[sym.display] = sym
        bullets = [s for s in syms if s.decoration is Decoration.BULLET]
        if len(bullets) > 1:
            raise ValueError("at most one bullet symbol per signature")
        if bullets and bullets[0].arity != 0:
            raise ValueError("bullet symbol must be a constant")
        for sym in syms:
            if sym.decoration is Decoration.CIRCLED:
                partner = by_display.get(sym.name)
                if partner is not None and partner.arity != sym.arity:
                    raise ValueError(f"circled {sym.display} disagrees with {sym.name} on arity")
        if not any(s.arity == 0 for s in syms):
            raise ValueError("signature must contain at least one constant")
        self._symbols = syms
        self._by_display = by_display
        self.max_arity = max(s.arity for s in syms)

    @property
    def symbols(self) -> tuple[FuncSym, ...]:
        """All symbols in a deterministic order."""
        return self._symbols

    def lookup(self, display: str) -> Optional[FuncSym]:
        return self._by_display.get(display)

    def constants(self) -> tuple[FuncSym, ...]:
        return tuple(s for s in self._symbols if s.arity == 0)

    def plain_part(self) -> "Signature":
        """The sub-signature of undecorated symbols."""
        return Signature(s for s in self._symbols if s.decoration is Decoration.PLAIN)

    def extend(self, extra) -> "Signature":
        return Signature(self._symbols + tuple(extra))

    def __contains__(self, sym: FuncSym) -> bool:
        return self._by_display.get(sym.display) == sym

    def __eq__(self, other) -> bool:
        return isinstance(other, Signature) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return hash(self._symbols)

    def __repr__(self) -> str:
        return "{" + ", ".join(repr(s) for s in self._symbols) + "}"


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("var", self.name)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    sym: FuncSym
    args: tuple["Term", ...] = ()

    def __post_init__(self):
        if len(self.args) != self.sym.arity:
            raise TermError(f"{self.sym.display} expects {self.sym.arity} arguments, got {len(self.args)}")
        object.__setattr__(self, "_hash", hash((self.sym, self.args)))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __repr__(self) -> str:
        return format_term(self)


Term = Union[Var, App]
Position = tuple[int, ...]
Substitution = Mapping[str, Term]

EPSILON: Position = ()


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.sym.display
    return t.sym.display + "(" + ",".join(format_term(a) for a in t.args) + ")"


def size(t: Term) -> int:
    """Total number of symbol and variable occurrences."""
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def height(t: Term) -> int:
    """Number of nodes on the longest root-to-leaf path; constants have height 1."""
    if isinstance(t, Var) or not t.args:
        return 1
    return 1 + max(height(a) for a in t.args)


def variables(t: Term) -> set[str]:
    out: set[str] = set()
    _collect_vars(t, out)
    return out


def _collect_vars(t: Term, out: set[str]) -> None:
    if isinstance(t, Var):
        out.add(t.name)
    else:
        for a in t.args:
            _collect_vars(a, out)


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return all(is_ground(a) for a in t.args)


def is_linear(t: Term) -> bool:
    """True iff no variable occurs twice in t."""
    seen: set[str] = set()

    def walk(u: Term) -> bool:
        if isinstance(u, Var):
            if u.name in seen:
                return False
            seen.add(u.name)
            return True
        return all(walk(a) for a in u.args)

    return walk(t)


def positions(t: Term) -> Iterator[Position]:
    """All positions of t, root first, in lexicographic order."""
    yield EPSILON
    if isinstance(t, App):
        for i, a in enumerate(t.args, start=1):
            for p in positions(a):
                yield (i, *p)


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        if isinstance(t, Var) or not 1 <= i <= len(t.args):
            raise TermError(f"invalid position {p}")
        t = t.args[i - 1]
    return t


def replace_at(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    if isinstance(t, Var) or not 1 <= p[0] <= len(t.args):
        raise TermError(f"invalid position {p}")
    i = p[0]
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], p[1:], u)
    return App(t.sym, tuple(args))


def substitute(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.sym, tuple(substitute(a, sigma) for a in t.args))


def match_pattern(pattern: Term, subject: Term) -> Optional[dict[str, Term]]:
    """A substitution with pattern*sigma == subject, or None if none exists."""
    sigma: dict[str, Term] = {}
    if _match(pattern, subject, sigma):
        return sigma
    return None


def _match(pattern: Term, subject: Term, sigma: dict[str, Term]) -> bool:
    if isinstance(pattern, Var):
        bound = sigma.get(pattern.name)
        if bound is None:
            sigma[pattern.name] = subject
            return True
        return bound == subject
    if isinstance(subject, Var) or subject.sym != pattern.sym:
        return False
    return all(_match(pa, sa, sigma) for pa, sa in zip(pattern.args, subject.args))


def rename_canonical(t: Term) -> Term:
    """Rename variables to _v0, _v1, ... in left-to-right order of first occurrence.

    Two terms that differ by a variable renaming get the same canonical form,
    which is what identifies pattern states of the marking automaton.
    """
    mapping: dict[str, str] = {}

    def walk(u: Term) -> Term:
        if isinstance(u, Var):
            if u.name not in mapping:
                mapping[u.name] = f"_v{len(mapping)}"
            return Var(mapping[u.name])
        return App(u.sym, tuple(walk(a) for a in u.args))

    return walk(t)


class _TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise TermError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise TermError("expected identifier", self.pos)
        self.pos = m.end()
        return m.group()


def parse_term(
    text: str,
    declared_vars: set[str],
    sig: Signature,
    allow_decorated: bool = False,
) -> Term:
    """Parse the concrete term syntax against a signature.

    Identifiers must be declared variables or signature symbols with the
    correct arity.  Decorated spellings ("#", "f@") are accepted only when
    allow_decorated is set; user-facing inputs never contain them.
    """
    stream = _TokenStream(text)
    t = _parse(stream, declared_vars, sig, allow_decorated)
    stream.skip_ws()
    if stream.pos != len(text):
        raise TermError("trailing input", stream.pos)
    return t


def _parse(stream: _TokenStream, declared_vars: set[str], sig: Signature, allow_decorated: bool) -> Term:
    start = stream.pos
    if allow_decorated and stream.peek() == BULLET_NAME:
        stream.expect(BULLET_NAME)
        sym = sig.lookup(BULLET_NAME)
        if sym is None:
            raise TermError("bullet symbol not in signature", start)
        return App(sym)
    name = stream.ident()
    if allow_decorated and stream.peek() == CIRCLED_SUFFIX:
        stream.expect(CIRCLED_SUFFIX)
        name += CIRCLED_SUFFIX
    if stream.peek() == "(":
        stream.expect("(")
        args = [_parse(stream, declared_vars, sig, allow_decorated)]
        while stream.peek() == ",":
            stream.expect(",")
            args.append(_parse(stream, declared_vars, sig, allow_decorated))
        stream.expect(")")
        sym = sig.lookup(name)
        if sym is None:
            raise TermError(f"unknown symbol {name}", start)
        if sym.arity != len(args):
            raise TermError(f"{name} expects {sym.arity} arguments, got {len(args)}", start)
        return App(sym, tuple(args))
    if name in declared_vars:
        return Var(name)
    sym = sig.lookup(name)
    if sym is None:
        raise TermError(f"unknown symbol or undeclared variable {name}", start)
    if sym.arity != 0:
        raise TermError(f"{name} expects {sym.arity} arguments, got 0", start)
    return App(sym)
