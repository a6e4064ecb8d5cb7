"""Grammar-based program synthesis with swarm search engines.

Integer-codon genotypes are mapped through a BNF grammar into programs and
scored by benchmark problems (ant trail navigation, symbolic regression,
boolean multiplexer); moth-flame and whale optimization engines search the
codon space under a fixed budget of fitness evaluations.
"""

from .errors import (
    AntSyntaxError,
    ConfigError,
    DerivationLoopError,
    EmptyRecords,
    ExprSyntaxError,
    GramswarmError,
    ParseError,
    UndefinedNonterminal,
    UnknownNonterminal,
)
from .grammar import Grammar, Rule, Symbol, parse_bnf, production_count, render_grammar
from .mapping import (
    AstLeaf,
    AstNode,
    Phenotype,
    compile_grammar,
    map_genotype,
    map_with_trace,
    random_genotype,
    render,
)

__version__ = "0.1.0"

__all__ = [
    "AntSyntaxError",
    "AstLeaf",
    "AstNode",
    "ConfigError",
    "DerivationLoopError",
    "EmptyRecords",
    "ExprSyntaxError",
    "Grammar",
    "GramswarmError",
    "ParseError",
    "Phenotype",
    "Rule",
    "Symbol",
    "UndefinedNonterminal",
    "UnknownNonterminal",
    "compile_grammar",
    "map_genotype",
    "map_with_trace",
    "parse_bnf",
    "production_count",
    "random_genotype",
    "render",
    "render_grammar",
    "__version__",
]
