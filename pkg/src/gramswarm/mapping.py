"""Genotype-to-phenotype mapping.

A genotype is a fixed-length vector of integer codons in [0, 255].  Mapping
performs the leftmost derivation from the grammar's start symbol; at each
expansion the next codon selects a production by ``codon MOD k`` where ``k``
is the production count of the nonterminal being expanded.  When the codon
vector is exhausted the cursor wraps to the start, at most ``wrap_limit``
times; a derivation that still holds nonterminals after the wrap budget is
an Invalid phenotype (a value, not an error).

By default every expansion consumes a codon, including nonterminals with a
single production; ``skip_unit_rules=True`` switches to the lazy convention
where such expansions are free.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import kernels
from . import opcodes as oc
from .errors import DerivationLoopError
from .grammar import Grammar


@dataclass(frozen=True)
class AstLeaf:
    """A terminal leaf of a derivation tree."""

    text: str


@dataclass(frozen=True)
class AstNode:
    """A nonterminal expansion: which production was chosen and its children."""

    nonterminal: str
    choice: int
    children: tuple


Ast = Union[AstLeaf, AstNode]


@dataclass(frozen=True)
class Phenotype:
    """Outcome of mapping a genotype: a program or the Invalid marker."""

    valid: bool
    ast: Ast | None
    text: str | None
    codons_used: int
    wraps_used: int

    @classmethod
    def invalid(cls, codons_used: int, wraps_used: int) -> "Phenotype":
        return cls(False, None, None, codons_used, wraps_used)


class TraceStep(NamedTuple):
    """One expansion of the derivation: which codon picked which production."""

    step: int
    nonterminal: str
    codon: int | None
    production_count: int
    choice: int


class CompiledGrammar:
    """Grammar flattened into integer tables consumed by the kernels.

    Symbol codes: ``>= 0`` is a terminal id into ``term_strings``; ``< 0``
    encodes nonterminal id ``-(code + 1)``.
    """

    def __init__(self, grammar: Grammar):
        self.grammar = grammar
        self.nt_names: tuple[str, ...] = grammar.nonterminals
        nt_index = {name: i for i, name in enumerate(self.nt_names)}
        self.start_id = nt_index[grammar.start]

        term_index: dict[str, int] = {}
        num_prods: list[int] = []
        prod_start: list[int] = []
        sym_start: list[int] = []
        sym_len: list[int] = []
        syms: list[int] = []
        prod_rev: list[list[int]] = []
        for name in self.nt_names:
            rule = grammar.rules[name]
            prod_start.append(len(sym_start))
            num_prods.append(len(rule.productions))
            for prod in rule.productions:
                codes = []
                for sym in prod:
                    if sym.is_terminal:
                        code = term_index.setdefault(sym.text, len(term_index))
                    else:
                        code = -(nt_index[sym.text] + 1)
                    codes.append(code)
                sym_start.append(len(syms))
                sym_len.append(len(codes))
                syms.extend(codes)
                prod_rev.append(codes[::-1])

        self.term_strings: tuple[str, ...] = tuple(term_index)
        self.max_prod_len = max(sym_len) if sym_len else 0

        self.nt_num_prods = np.asarray(num_prods, dtype=np.int32)
        self.nt_prod_start = np.asarray(prod_start, dtype=np.int32)
        self.prod_sym_start = np.asarray(sym_start, dtype=np.int32)
        self.prod_sym_len = np.asarray(sym_len, dtype=np.int32)
        self.syms = np.asarray(syms, dtype=np.int32)

        # list mirrors for the pure-Python backend
        self.py_num_prods = num_prods
        self.py_prod_start = prod_start
        self.py_prod_rev = prod_rev


def compile_grammar(grammar: Grammar) -> CompiledGrammar:
    return CompiledGrammar(grammar)


def random_genotype(dim: int, rng) -> np.ndarray:
    """Codon vector with each entry ``round(255 * u)``, u uniform on [0, 1).

    Rounding is half-away-from-zero, so u = 0.5 yields codon 128.
    """
    if dim < 1:
        raise ValueError("genotype dimension must be >= 1")
    u = rng.random(dim)
    return np.floor(255.0 * u + 0.5).astype(np.int32)


def _as_codon_array(codons) -> np.ndarray:
    arr = np.asarray(codons)
    if arr.ndim != 1:
        raise ValueError("codons must be a 1-d sequence")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(arr == np.floor(arr)):
            raise ValueError("codons must be integers")
    arr = arr.astype(np.int32)
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ValueError("codons must lie in [0, 255]")
    return arr


def _build_ast(
    compiled: CompiledGrammar,
    codons,
    choices,
    skip_unit_rules: bool,
    want_trace: bool,
):
    """Rebuild the derivation tree by replaying the recorded choices.

    Choices arrive in leftmost-derivation order, which is exactly a preorder
    walk of the tree.  With tracing on, codon consumption is replayed too and
    each chosen index is checked against ``codon MOD k``.
    """
    grammar = compiled.grammar
    d = len(codons)
    trace: list[TraceStep] | None = [] if want_trace else None
    pos = 0
    cursor = 0

    def open_frame(name: str) -> list:
        nonlocal pos, cursor
        rule = grammar.rules[name]
        k = len(rule.productions)
        choice = int(choices[pos])
        pos += 1
        if trace is not None:
            if skip_unit_rules and k == 1:
                codon_val = None
            else:
                codon_val = int(codons[cursor % d])
                cursor += 1
                if codon_val % k != choice:
                    raise AssertionError("choice replay diverged from MOD rule")
            trace.append(TraceStep(len(trace), name, codon_val, k, choice))
        return [name, choice, rule.productions[choice], 0, []]

    stack = [open_frame(grammar.start)]
    root = None
    while stack:
        frame = stack[-1]
        name, choice, prod, idx, children = frame
        if idx == len(prod):
            stack.pop()
            node = AstNode(name, choice, tuple(children))
            if stack:
                stack[-1][4].append(node)
            else:
                root = node
            continue
        frame[3] += 1
        sym = prod[idx]
        if sym.is_terminal:
            children.append(AstLeaf(sym.text))
        else:
            stack.append(open_frame(sym.text))
    return root, trace


def render(ast: Ast) -> str:
    """Left-to-right terminal leaves joined by single spaces."""
    out: list[str] = []
    stack: list[Ast] = [ast]
    while stack:
        node = stack.pop()
        if isinstance(node, AstLeaf):
            out.append(node.text)
        else:
            stack.extend(reversed(node.children))
    return " ".join(out)


def map_genotype(
    grammar: Grammar | CompiledGrammar,
    codons,
    wrap_limit: int,
    *,
    skip_unit_rules: bool = False,
) -> Phenotype:
    """Map a codon vector to a phenotype.  Pure: same inputs, same output."""
    phenotype, _ = _map(grammar, codons, wrap_limit, skip_unit_rules, False)
    return phenotype


def map_with_trace(
    grammar: Grammar | CompiledGrammar,
    codons,
    wrap_limit: int,
    *,
    skip_unit_rules: bool = False,
) -> tuple[Phenotype, list[TraceStep]]:
    """Like :func:`map_genotype` but also returns the expansion trace."""
    phenotype, trace = _map(grammar, codons, wrap_limit, skip_unit_rules, True)
    return phenotype, trace or []


def _map(grammar, codons, wrap_limit, skip_unit_rules, want_trace):
    compiled = grammar if isinstance(grammar, CompiledGrammar) else compile_grammar(grammar)
    arr = _as_codon_array(codons)
    deriver = kernels.Deriver(compiled, wrap_limit, skip_unit_rules)
    status, terms, choices, used, wraps = deriver.derive(arr)
    if status == oc.DERIVE_RUNAWAY:
        raise DerivationLoopError(
            "derivation exceeded the expansion bound; the grammar has a cycle "
            "of single-production rules that never consumes a codon"
        )
    if status == oc.DERIVE_INVALID:
        return Phenotype.invalid(used, wraps), None
    ast, trace = _build_ast(compiled, arr, choices, skip_unit_rules, want_trace)
    text = " ".join(compiled.term_strings[t] for t in terms)
    return Phenotype(True, ast, text, used, wraps), trace


def format_trace(trace: list[TraceStep]) -> str:
    """One ``step, nonterminal, codon, k, index`` line per expansion."""
    lines = ["step, nonterminal, codon, k, index"]
    for st in trace:
        codon = "-" if st.codon is None else str(st.codon)
        lines.append(f"{st.step}, <{st.nonterminal}>, {codon}, {st.production_count}, {st.choice}")
    return "\n".join(lines)
