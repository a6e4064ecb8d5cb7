"""BNF grammar parsing and indexed access to rules and productions.

A grammar file is UTF-8 text with one rule per logical line::

    <name> := alternative | alternative | ...

A line containing ``:=`` (or ``::=``) starts a new rule; any following line
without a separator continues the current rule, so long alternatives may
wrap.  An optional numeric prefix (``1.``) before the lhs and optional
trailing index annotations (``(0)``, ``(1)``) after an alternative are
accepted; annotations are validated against the alternative's position.

Inside an alternative, ``<...>`` spans are nonterminals and everything else
is split on whitespace into terminal tokens, so punctuation stays attached
(``move();`` is a single terminal).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, UndefinedNonterminal, UnknownNonterminal

TERMINAL = "terminal"
NONTERMINAL = "nonterminal"

_NT_NAME_RE = re.compile(r"^[^\s<>]+$")
_LHS_PREFIX_RE = re.compile(r"^\s*\d+\.\s*")
_INDEX_ANNOTATION_RE = re.compile(r"^\((\d+)\)$")


@dataclass(frozen=True)
class Symbol:
    """One grammar symbol: a terminal lexeme or a nonterminal name."""

    kind: str
    text: str

    def __post_init__(self):
        if self.kind not in (TERMINAL, NONTERMINAL):
            raise ValueError(f"bad symbol kind {self.kind!r}")
        if self.kind == NONTERMINAL and not _NT_NAME_RE.match(self.text):
            raise ValueError(f"bad nonterminal name {self.text!r}")

    @property
    def is_terminal(self) -> bool:
        return self.kind == TERMINAL


def terminal(text: str) -> Symbol:
    return Symbol(TERMINAL, text)


def nonterminal(name: str) -> Symbol:
    return Symbol(NONTERMINAL, name)


Production = tuple[Symbol, ...]


@dataclass(frozen=True)
class Rule:
    """All alternatives for one nonterminal, in source order."""

    lhs: str
    productions: tuple[Production, ...]

    def __post_init__(self):
        if not self.productions:
            raise ValueError(f"rule <{self.lhs}> has no productions")


@dataclass(frozen=True)
class Grammar:
    """An immutable context-free grammar; safe to share across threads."""

    rules: dict[str, Rule]
    start: str
    _order: tuple[str, ...] = field(default=(), repr=False)

    def rule(self, name: str) -> Rule:
        try:
            return self.rules[name]
        except KeyError:
            raise UnknownNonterminal(name) from None

    @property
    def nonterminals(self) -> tuple[str, ...]:
        return self._order if self._order else tuple(self.rules)


def production_count(grammar: Grammar, nt: str) -> int:
    """Number of alternatives for ``nt`` (the divisor of the MOD rule)."""
    return len(grammar.rule(nt).productions)


def _tokenize_alternative(text: str, lineno: int) -> list[Symbol]:
    symbols: list[Symbol] = []
    pos = 0
    while pos < len(text):
        lt = text.find("<", pos)
        if lt == -1:
            chunk, pos = text[pos:], len(text)
        else:
            chunk, pos = text[pos:lt], lt
        symbols.extend(terminal(tok) for tok in chunk.split())
        if lt == -1:
            break
        gt = text.find(">", lt)
        if gt == -1:
            raise ParseError(f"line {lineno}: unclosed '<' in alternative {text!r}")
        name = text[lt + 1 : gt]
        if not _NT_NAME_RE.match(name):
            raise ParseError(f"line {lineno}: bad nonterminal name <{name}>")
        symbols.append(nonterminal(name))
        pos = gt + 1
    return symbols


def _strip_index_annotation(symbols: list[Symbol], position: int, lineno: int) -> list[Symbol]:
    if len(symbols) < 2 or not symbols[-1].is_terminal:
        return symbols
    m = _INDEX_ANNOTATION_RE.match(symbols[-1].text)
    if not m:
        return symbols
    if int(m.group(1)) != position:
        raise ParseError(
            f"line {lineno}: index annotation {symbols[-1].text} does not match "
            f"alternative position {position}"
        )
    return symbols[:-1]


def parse_bnf(source: str) -> Grammar:
    """Parse grammar text into a validated :class:`Grammar`.

    Raises :class:`ParseError` on malformed syntax, duplicate lhs or empty
    alternatives, and :class:`UndefinedNonterminal` when a production
    references a nonterminal with no rule.
    """
    if not source or not source.strip():
        raise ParseError("empty grammar text")

    # Gather (lhs, rhs_text, lineno) with continuation lines folded in.
    raw_rules: list[tuple[str, str, int]] = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        if not line.strip():
            continue
        body = _LHS_PREFIX_RE.sub("", line)
        sep = "::=" if "::=" in body else ":=" if ":=" in body else None
        if sep is None:
            if not raw_rules:
                raise ParseError(f"line {lineno}: expected '<name> := ...', got {line!r}")
            lhs, rhs, start_line = raw_rules[-1]
            raw_rules[-1] = (lhs, rhs + " " + body.strip(), start_line)
            continue
        lhs_text, rhs_text = body.split(sep, 1)
        lhs_text = lhs_text.strip()
        if not (lhs_text.startswith("<") and lhs_text.endswith(">")):
            raise ParseError(f"line {lineno}: rule lhs must be <name>, got {lhs_text!r}")
        name = lhs_text[1:-1]
        if not _NT_NAME_RE.match(name):
            raise ParseError(f"line {lineno}: bad nonterminal name {lhs_text!r}")
        raw_rules.append((name, rhs_text.strip(), lineno))

    rules: dict[str, Rule] = {}
    for name, rhs_text, lineno in raw_rules:
        if name in rules:
            raise ParseError(f"line {lineno}: duplicate rule for <{name}>")
        productions = []
        for position, alt in enumerate(rhs_text.split("|")):
            if not alt.strip():
                raise ParseError(f"line {lineno}: empty alternative in rule <{name}>")
            symbols = _tokenize_alternative(alt, lineno)
            symbols = _strip_index_annotation(symbols, position, lineno)
            if not symbols:
                raise ParseError(f"line {lineno}: empty alternative in rule <{name}>")
            productions.append(tuple(symbols))
        rules[name] = Rule(name, tuple(productions))

    for rule in rules.values():
        for prod in rule.productions:
            for sym in prod:
                if not sym.is_terminal and sym.text not in rules:
                    raise UndefinedNonterminal(sym.text)

    order = tuple(rules)
    return Grammar(rules=rules, start=order[0], _order=order)


def render_grammar(grammar: Grammar) -> str:
    """Canonical text form; ``parse_bnf(render_grammar(g))`` equals ``g``."""
    lines = []
    for name in grammar.nonterminals:
        rule = grammar.rules[name]
        alts = [
            " ".join(s.text if s.is_terminal else f"<{s.text}>" for s in prod)
            for prod in rule.productions
        ]
        lines.append(f"<{name}> := " + " | ".join(alts))
    return "\n".join(lines) + "\n"
