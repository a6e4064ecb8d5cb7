"""Exception types shared across the package."""


class GramswarmError(Exception):
    """Base class for all package errors."""


class ParseError(GramswarmError):
    """Malformed grammar text: bad rule syntax, duplicate lhs, empty alternative."""


class UndefinedNonterminal(GramswarmError):
    """A production references a nonterminal that no rule defines."""

    def __init__(self, name: str):
        super().__init__(f"nonterminal <{name}> is referenced but never defined")
        self.name = name


class UnknownNonterminal(GramswarmError):
    """Lookup of a nonterminal that is not part of the grammar."""

    def __init__(self, name: str):
        super().__init__(f"grammar has no rule for <{name}>")
        self.name = name


class DerivationLoopError(GramswarmError):
    """Derivation expanded without consuming codons past any sane bound.

    Only reachable when single-production rules are expanded for free and the
    grammar contains a cycle of such rules.
    """


class AntSyntaxError(GramswarmError):
    """Ant program text with unbalanced if/else/end or unknown tokens."""


class ExprSyntaxError(GramswarmError):
    """Malformed prefix expression (arithmetic or boolean)."""


class ConfigError(GramswarmError):
    """Invalid engine or experiment configuration."""


class EmptyRecords(GramswarmError):
    """Statistics requested over an empty run list."""
