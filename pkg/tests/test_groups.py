import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horoboundary import GroupSpec, make_group, parse_group, symmetrize_generators
from horoboundary.errors import IdentityGenerator, InvalidSpec, MixedGroups
from horoboundary.groups import GrowthWarning, inverse_word

SANOV = "Mat[[1,2],[0,1]];[[1,0],[2,1]]"
FAMILIES = ["Z", "Z^2", "Z^3", "Dinf", "Heis", "F2", "F3", "Z x C3", "Z^2 x C2", "Dinf x C2"]


def group(text):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GrowthWarning)
        return make_group(parse_group(text))


def words(rank, max_size=12):
    letters = "".join(c + c.upper() for c in "abcdefgh"[:rank])
    return st.text(alphabet=letters, max_size=max_size)


@pytest.mark.parametrize("name", FAMILIES + [SANOV])
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_group_axioms(name, data):
    G = group(name)
    w = words(G.rank, 8 if name == SANOV else 12)
    x, y, z = (G.evaluate(data.draw(w)) for _ in range(3))
    e = G.identity()
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, e) == x == G.mul(e, x)
    assert G.mul(x, G.inv(x)) == e == G.mul(G.inv(x), x)
    assert G.inv(G.inv(x)) == x


@pytest.mark.parametrize("name", FAMILIES)
@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_word_inverse_evaluates_to_inverse(name, data):
    G = group(name)
    word = data.draw(words(G.rank))
    assert G.evaluate(inverse_word(word)) == G.inv(G.evaluate(word))
    assert G.evaluate(word + inverse_word(word)) == G.identity()


def test_known_values():
    assert group("Z^2").evaluate("abAB") == (0, 0)
    assert group("Heis").evaluate("abAB") == (0, 0, 1)
    D = group("Dinf")
    assert D.evaluate("aa") == D.identity() == D.evaluate("bb")
    assert D.evaluate("ab") == (1, -1)
    assert group("F2").evaluate("abBA") == ()
    assert group("F2").evaluate("aBa") == (1, -2, 1)
    assert group("Z x C3").evaluate("bbb") == ((0,), 0)


def test_free_group_reduction_is_canonical():
    F = group("F2")
    assert F.evaluate("aAbaAB") == F.evaluate("bB") == ()
    assert F.evaluate("abBbA") == (1, 2, -1)
    assert F.evaluate("ab") != F.evaluate("ba")


def test_heisenberg_is_not_abelian():
    H = group("Heis")
    a, b = H.base_generators()
    assert H.mul(a, b) != H.mul(b, a)


def test_element_wrapper():
    Z = group("Z")
    a = Z.element((1,))
    assert (a * a).value == (2,)
    assert (a ** 3).value == (3,)
    assert (a ** -2).value == (-2,)
    assert (~a).value == (-1,)
    assert (a * ~a).is_identity()
    assert a < a * a


def test_mixed_groups_raise():
    a = group("Z").element((1,))
    b = group("Z^2").element((1, 0))
    with pytest.raises(MixedGroups):
        a * b
    with pytest.raises(MixedGroups):
        a < b


@pytest.mark.parametrize("text", ["Q", "Z^", "Fx", "Mat[[1,2],[0", "Z x C1", "Mat[[2,0],[0,1]]"])
def test_bad_group_text(text):
    with pytest.raises(InvalidSpec):
        group(text)


def test_unknown_family_and_bad_letter():
    with pytest.raises(InvalidSpec):
        GroupSpec("Quaternion")
    with pytest.raises(InvalidSpec):
        group("Z").evaluate("b")


def test_symmetrize_standard_first():
    G = group("Z")
    S = symmetrize_generators(G, ["aa"])
    assert S.labels == ("a", "A", "aa", "AA")
    assert S.members == ((1,), (-1,), (2,), (-2,))
    assert S.is_symmetric()
    assert [S.members[j] for j in S.inverse_index()] == [(-1,), (1,), (-2,), (2,)]


def test_symmetrize_drops_duplicates():
    S = symmetrize_generators(group("Z"), ["A", "aA" + "a"])
    assert S.labels == ("a", "A")


def test_symmetrize_rejects_identity():
    with pytest.raises(IdentityGenerator):
        symmetrize_generators(group("Z^2"), ["abAB"])
    with pytest.raises(IdentityGenerator):
        symmetrize_generators(group("Dinf"), ["aa"])


def test_dihedral_generators_are_involutions():
    S = symmetrize_generators(group("Dinf"))
    assert len(S) == 2 and S.labels == ("a", "b")


def test_matrix_group_warns_and_inverts():
    with pytest.warns(GrowthWarning):
        M = make_group(parse_group(SANOV))
    a, b = M.base_generators()
    assert M.inv(a) == ((1, -2), (0, 1))
    assert M.mul(a, M.inv(a)) == M.identity()


@settings(max_examples=300, deadline=None)
@given(w=words(2, 10))
def test_sanov_subgroup_is_free(w):
    # [[1,2],[0,1]] and [[1,0],[2,1]] generate a free group: reduced words never collide
    F = group("F2")
    M = group(SANOV)
    reduced = F.evaluate(w)
    spelled = "".join("abAB"[(abs(x) - 1) + (2 if x < 0 else 0)] for x in reduced)
    assert (M.evaluate(spelled) == M.identity()) == (reduced == ())
