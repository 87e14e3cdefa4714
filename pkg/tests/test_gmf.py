import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permlab import Matrix
from permlab.errors import DimensionError, DomainError, ParseError
from permlab.gmf import (
    Character,
    Partition,
    Permutation,
    all_subgroups,
    character_inner_product,
    character_value,
    gmf,
    hook_length_degree,
    immanant,
    irreducible_character,
    linear_characters,
    normalized_gmf,
    parse_generators,
    partitions,
    sign_character,
    subgroup_from_generators,
    symmetric_group,
    trivial_character,
    trivial_group,
)
from permlab.matrix import det
from permlab.numeric import cyclo_make
from permlab.permanent import permanent

from strategies import psd, square


def test_cycle_notation_and_composition():
    a = Permutation.from_cycles("(1 2)", 3)
    b = Permutation.from_cycles("(2 3)", 3)
    ab = a * b  # apply b first
    assert ab(1) == 2 and ab(2) == 0 and ab(0) == 1
    assert Permutation.from_cycles("(1 2)(2 3)", 3) == ab
    assert ab.order() == 3 and ab.sign() == 1 and a.sign() == -1
    assert ab * ab.inverse() == Permutation.identity(3)
    assert Permutation.from_cycles(ab.to_cycles(), 3) == ab


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_sign_is_multiplicative(p, q):
    a, b = Permutation(p), Permutation(q)
    assert (a * b).sign() == a.sign() * b.sign()
    assert sum(a.cycle_type()) == 5


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 3), (4, 5), (5, 7), (6, 11), (8, 22)])
def test_partition_counts(n, count):
    assert len(list(partitions(n))) == count


@pytest.mark.parametrize("n", range(1, 7))
def test_degrees_square_sum(n):
    assert sum(hook_length_degree(l) ** 2 for l in partitions(n)) == math.factorial(n)


# character table of S4; classes by cycle type
S4_TABLE = {
    (4,): {(1, 1, 1, 1): 1, (2, 1, 1): 1, (2, 2): 1, (3, 1): 1, (4,): 1},
    (3, 1): {(1, 1, 1, 1): 3, (2, 1, 1): 1, (2, 2): -1, (3, 1): 0, (4,): -1},
    (2, 2): {(1, 1, 1, 1): 2, (2, 1, 1): 0, (2, 2): 2, (3, 1): -1, (4,): 0},
    (2, 1, 1): {(1, 1, 1, 1): 3, (2, 1, 1): -1, (2, 2): -1, (3, 1): 0, (4,): 1},
    (1, 1, 1, 1): {(1, 1, 1, 1): 1, (2, 1, 1): -1, (2, 2): 1, (3, 1): 1, (4,): -1},
}


@pytest.mark.parametrize("lam", sorted(S4_TABLE))
def test_s4_character_table(lam):
    for mu, v in S4_TABLE[lam].items():
        assert character_value(Partition(lam), mu) == v


@pytest.mark.parametrize("n", [3, 4, 5])
def test_row_orthogonality(n):
    chars = [irreducible_character(l) for l in partitions(n)]
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            assert character_inner_product(a, b) == (1 if i == j else 0)


def test_partition_parse():
    assert Partition.parse("2,1,1") == (2, 1, 1)
    assert Partition.parse(" 3 ,2") == (3, 2)
    for bad in ("2,x", "1,2", "0"):
        with pytest.raises(ParseError):
            Partition.parse(bad)


@given(square(max_n=4))
def test_extreme_immanants(A):
    n = A.n
    assert immanant(A, [n]) == permanent(A)
    assert immanant(A, [1] * n) == det(A)


def test_known_immanant():
    A = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 10]], "rational")
    assert immanant(A, [2, 1]) == -80


@given(square(max_n=4))
def test_immanants_sum_with_degrees(A):
    # sum_lam chi_lam(e) d_lam(A) = n! * prod a_ii (regular character)
    n = A.n
    total = sum((hook_length_degree(l) * immanant(A, l) for l in partitions(n)), Fraction(0))
    diag = Fraction(1)
    for i in range(n):
        diag = diag * A[i, i]
    assert total == math.factorial(n) * diag


def test_trivial_group_gives_diagonal_product():
    A = Matrix([[2, 1], [1, 3]], "rational")
    H = trivial_group(2)
    assert gmf(A, H, trivial_character(H)) == 6


def test_subgroup_closure():
    H = subgroup_from_generators(4, parse_generators("(1 2)(3 4); (1 3)(2 4)", 4))
    assert len(H) == 4 and H.is_closed()
    D4 = subgroup_from_generators(4, parse_generators("(1 2 3 4); (1 3)", 4))
    assert len(D4) == 8
    assert len(symmetric_group(4)) == 24


def test_all_subgroups_s3_s4():
    assert len(all_subgroups(3)) == 6
    assert len(all_subgroups(4)) == 30


def test_linear_characters_cyclic():
    C4 = subgroup_from_generators(4, parse_generators("(1 2 3 4)", 4))
    chars = linear_characters(C4)
    assert len(chars) == 4
    for i, a in enumerate(chars):
        for j, b in enumerate(chars):
            assert character_inner_product(a, b) == (1 if i == j else 0)
    vals = {c(C4.elements[1]) for c in chars}
    assert cyclo_make(4, 1) in vals or cyclo_make(4, 3) in vals


def test_linear_character_counts_s3_subgroups():
    counts = sorted(len(linear_characters(H)) for H in all_subgroups(3))
    assert counts == [1, 2, 2, 2, 2, 3]


def test_character_validation():
    G = symmetric_group(3)
    with pytest.raises(DomainError):
        Character(G, list(range(6)))
    with pytest.raises(DomainError):
        Character(G, [Fraction(1, 2)] * 6)


def test_gmf_dimension_and_group_checks():
    A = Matrix.identity(3)
    with pytest.raises(DimensionError):
        gmf(A, symmetric_group(2), trivial_character(symmetric_group(2)))
    H = trivial_group(3)
    with pytest.raises(DomainError):
        gmf(A, symmetric_group(3), trivial_character(H))


@given(psd(max_n=4, field="rational"))
def test_normalized_gmf_sign_character_is_det(A):
    G = symmetric_group(A.n)
    assert normalized_gmf(A, G, sign_character(G)) == det(A)
