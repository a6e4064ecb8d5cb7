"""Exhaustive check of the mapper against the independent brute-force oracle.

The oracle lives in ``mapping_oracle.py``: a recursive-descent expander
written separately from the table-driven kernel.
"""

import itertools

import pytest
from mapping_oracle import oracle_map

from gramswarm import map_genotype


def _all_genotypes(max_len, alphabet):
    for length in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=length)


@pytest.mark.parametrize("wrap_limit", [0, 1, 2])
def test_mapper_matches_oracle_exhaustively(expr_grammar, wrap_limit):
    checked = 0
    for codons in _all_genotypes(4, range(8)):
        expected = oracle_map(expr_grammar, codons, wrap_limit)
        phenotype = map_genotype(expr_grammar, list(codons), wrap_limit)
        actual = (phenotype.valid, phenotype.text, phenotype.codons_used, phenotype.wraps_used)
        assert actual == expected, f"codons={codons} wrap_limit={wrap_limit}"
        checked += 1
    assert checked == 4681  # sum of 8^L for L in 0..4


def test_mapper_matches_oracle_with_unit_rules(ant_grammar):
    # the ant grammar has a single-production rule; check both consumption modes
    for skip in (False, True):
        for codons in itertools.product(range(4), repeat=4):
            expected = oracle_map(ant_grammar, codons, 1, skip_unit_rules=skip)
            phenotype = map_genotype(ant_grammar, list(codons), 1, skip_unit_rules=skip)
            actual = (phenotype.valid, phenotype.text, phenotype.codons_used,
                      phenotype.wraps_used)
            assert actual == expected, f"codons={codons} skip={skip}"


def test_oracle_sanity(expr_grammar):
    # spot values derived by hand with the MOD rule
    assert oracle_map(expr_grammar, [0, 1, 0, 2, 1, 1], 2) == (True, "( x1 * x2 )", 6, 0)
    assert oracle_map(expr_grammar, [1, 0], 2) == (True, "x1", 2, 0)
    assert oracle_map(expr_grammar, [0, 0], 0)[0] is False
