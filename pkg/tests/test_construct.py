import pytest

from src.errors import DomainError
from src.services.complementary import SeqMatrix, are_mates, is_companion_pair, is_golay_pair, is_mo_collection
from src.services.construct import (
    BuildRecipe,
    ExtensionMode,
    MOMatrix,
    build,
    golay_seed,
    length_extend,
    mate_of,
    rset,
    rset_pair,
    size_extend,
)
from src.utils.seqio import parse_seq

RECIPES = [
    BuildRecipe.uniform(0, 0),
    BuildRecipe.uniform(1, 0),
    BuildRecipe.uniform(0, 1),
    BuildRecipe.uniform(1, 1, ExtensionMode.INTERLEAVE, ExtensionMode.INTERLEAVE),
    BuildRecipe((ExtensionMode.CONCAT, ExtensionMode.INTERLEAVE), (ExtensionMode.INTERLEAVE,)),
    BuildRecipe((), (ExtensionMode.CONCAT, ExtensionMode.INTERLEAVE)),
]


@pytest.mark.parametrize("q", [0, 1, 2, 3])
def test_golay_seed_pairs(q) -> None:
    h00, h01, h10, h11 = golay_seed(q)
    assert len(h00) == 2 ** (q + 1)
    assert is_golay_pair(h00, h01)
    assert is_golay_pair(h10, h11)


def test_golay_seed_small_values() -> None:
    h00, h01, h10, h11 = golay_seed(1)
    assert h00.elems == parse_seq("++-+").elems
    assert h10.elems == parse_seq("+-++").elems
    assert is_companion_pair(h00, h10) is not None
    with pytest.raises(DomainError):
        golay_seed(-1)


def test_recipe_dims_and_validation() -> None:
    recipe = BuildRecipe.uniform(2, 1)
    assert (recipe.p, recipe.t) == (2, 1)
    assert recipe.dims(4) == {"rows": 8, "columns": 64, "sets": 4, "set_columns": 16}
    assert recipe.to_dict()["length_modes"] == ["concat", "concat"]
    with pytest.raises(DomainError):
        BuildRecipe.uniform(-1, 0)
    with pytest.raises(ValueError):
        BuildRecipe(("zigzag",), ())


@pytest.mark.parametrize("v", [0, 1, 2, 3])
def test_rset_sizes(v) -> None:
    c, d = parse_seq("++-+"), parse_seq("+-++")
    assert len(rset(c, v)) == 2 ** (v + 1)
    assert len(rset_pair(c, d, v)) == 2 ** (v + 2)
    assert all(len(s) == 4 * 2 ** v for s in rset(c, v))
    with pytest.raises(DomainError):
        rset(c, -1)


def test_rset_recursion_layout() -> None:
    members = rset(parse_seq("+-"), 1)
    assert parse_seq("+-+-") in members
    assert parse_seq("+--+") in members
    assert parse_seq("-+-+") in members
    assert parse_seq("++--") not in members


def test_mate_of_twice_negates(quad_pair) -> None:
    companion = is_companion_pair(*quad_pair)
    C = length_extend(companion.matrix(), ExtensionMode.CONCAT, companion.pairing)
    D = mate_of(C, companion.pairing)
    assert are_mates(C, D)
    assert mate_of(D, companion.pairing).rows == (-C).rows


def test_mate_of_rejects_bad_pairs() -> None:
    C = SeqMatrix((parse_seq("++"), parse_seq("++")))
    with pytest.raises(DomainError):
        mate_of(C)
    with pytest.raises(DomainError):
        mate_of(SeqMatrix((parse_seq("++"),)))


@pytest.mark.parametrize("recipe", RECIPES, ids=lambda r: f"p{r.p}t{r.t}")
def test_build_shape_and_mo(quad_pair, recipe) -> None:
    mo = build(*quad_pair, recipe)
    dims = recipe.dims(4)
    assert mo.m == dims["rows"]
    assert mo.matrix.n == dims["columns"]
    assert mo.k == dims["sets"]
    assert mo.set_width == dims["set_columns"]
    assert is_mo_collection(mo.sets())


def test_build_columns_stay_in_rset(random_companions) -> None:
    for c0, c1 in random_companions:
        for recipe in (BuildRecipe.uniform(1, 0), BuildRecipe.uniform(0, 2, size_mode=ExtensionMode.INTERLEAVE)):
            mo = build(c0, c1, recipe)
            members = rset_pair(c0, c1, recipe.t)
            assert all(col in members for col in mo.columns())


def test_build_random_companions_are_mo(random_companions) -> None:
    for c0, c1 in random_companions[::5]:
        mo = build(c0, c1, BuildRecipe.uniform(1, 1))
        assert is_mo_collection(mo.sets())


def test_build_rejects_non_companion() -> None:
    with pytest.raises(DomainError):
        build(parse_seq("++++"), parse_seq("++++"), BuildRecipe())


def test_size_extend_requires_mo() -> None:
    M = SeqMatrix((parse_seq("++"), parse_seq("++")))
    with pytest.raises(DomainError):
        size_extend(MOMatrix.from_blocks([M, M]))


def test_size_extend_set_layout(quad_pair) -> None:
    base = build(*quad_pair, BuildRecipe())
    concat = size_extend(base, ExtensionMode.CONCAT)
    assert concat.set_columns == ((0, 1, 4, 5), (2, 3, 6, 7), (8, 9, 12, 13), (10, 11, 14, 15))
    interleaved = size_extend(base, ExtensionMode.INTERLEAVE)
    assert interleaved.set_columns == ((0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11), (12, 13, 14, 15))
    assert is_mo_collection(concat.sets())
    assert is_mo_collection(interleaved.sets())


def test_mo_matrix_validates_partition() -> None:
    M = SeqMatrix((parse_seq("++--"), parse_seq("+-+-")))
    with pytest.raises(DomainError):
        MOMatrix(M, ((0, 1), (1, 2)))
    with pytest.raises(DomainError):
        MOMatrix(M, ((0,), (1, 2, 3)))
    assert MOMatrix(M, ((0, 2), (1, 3))).sets()[0].rows[0].elems == parse_seq("+-").elems
