import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fkmm.abelian import (
    AbelianGroup,
    IntMatrix,
    direct_sum,
    group_from_presentation,
    smith_normal_form,
)


def snf_diag(entries):
    _, d, _ = smith_normal_form(IntMatrix(entries))
    return d.diagonal_entries()


class TestSmithNormalForm:
    def test_coprime_pair(self):
        assert snf_diag([[2, 0], [0, 3]]) == [1, 6]

    def test_zero_matrix(self):
        u, d, v = smith_normal_form(IntMatrix([[0, 0], [0, 0]]))
        assert d.diagonal_entries() == [0, 0]
        assert u == IntMatrix.identity(2)
        assert v == IntMatrix.identity(2)

    def test_hand_worked_2x2(self):
        # gcd of entries is 2, |det| = |16 - 24| = 8, so factors are (2, 4).
        assert snf_diag([[2, 4], [6, 8]]) == [2, 4]

    def test_empty_matrices(self):
        for shape in [(0, 0), (0, 3), (3, 0)]:
            a = IntMatrix.zeros(*shape)
            u, d, v = smith_normal_form(a)
            assert (d.rows, d.cols) == shape
            assert u @ a @ v == d

    def test_deterministic(self):
        a = IntMatrix([[4, -6, 10], [2, 8, -4]])
        first = smith_normal_form(a)
        second = smith_normal_form(a)
        assert first[0] == second[0] and first[1] == second[1] and first[2] == second[2]


@st.composite
def small_matrices(draw):
    rows = draw(st.integers(0, 5))
    cols = draw(st.integers(0, 5))
    entries = [
        [draw(st.integers(-9, 9)) for _ in range(cols)] for _ in range(rows)
    ]
    return IntMatrix(entries)


@given(small_matrices())
@settings(max_examples=200, deadline=None)
def test_snf_properties(a):
    u, d, v = smith_normal_form(a)
    assert u @ a @ v == d
    assert abs(u.det()) == 1
    assert abs(v.det()) == 1
    diag = d.diagonal_entries()
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d[i, j] == 0
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        if x == 0:
            assert y == 0
        else:
            assert y % x == 0


class TestGroupFromPresentation:
    def test_free(self):
        g = group_from_presentation(IntMatrix.zeros(0, 2), 2)
        assert g == AbelianGroup(2)

    def test_single_relation(self):
        g = group_from_presentation(IntMatrix([[2]]), 1)
        assert g == AbelianGroup.cyclic(2)

    def test_mixed(self):
        g = group_from_presentation(IntMatrix([[2, 0], [0, 0]]), 2)
        assert g == AbelianGroup(1, (2,))

    @given(small_matrices(), st.randoms(use_true_random=False))
    @settings(max_examples=100, deadline=None)
    def test_invariant_under_permutation(self, a, rng):
        rows = [a._data[i][:] for i in range(a.rows)]
        rng.shuffle(rows)
        cols = list(range(a.cols))
        rng.shuffle(cols)
        shuffled = IntMatrix([[row[j] for j in cols] for row in rows]) if a.rows else a
        assert group_from_presentation(a, a.cols) == group_from_presentation(
            shuffled, a.cols
        )


class TestDirectSum:
    def test_torsion_merge(self):
        assert direct_sum(AbelianGroup.cyclic(2), AbelianGroup.cyclic(2)) == AbelianGroup(
            0, (2, 2)
        )

    def test_identity_element(self):
        assert direct_sum(AbelianGroup.free(1), AbelianGroup.trivial()) == AbelianGroup.free(1)

    def test_chain_normalization(self):
        # Invariant factors of diag(2, 4) stay (2, 4).
        assert direct_sum(AbelianGroup.cyclic(2), AbelianGroup.cyclic(4)) == AbelianGroup(
            0, (2, 4)
        )
        # Coprime orders merge into one factor.
        assert direct_sum(AbelianGroup.cyclic(2), AbelianGroup.cyclic(3)) == AbelianGroup(
            0, (6,)
        )

    groups = st.builds(
        AbelianGroup,
        st.integers(0, 3),
        st.lists(st.sampled_from([2, 4, 8, 12, 24]), max_size=3).map(
            lambda xs: tuple(sorted(xs))
        ).filter(
            lambda xs: all(y % x == 0 for x, y in zip(xs, xs[1:]))
        ),
    )

    @given(groups, groups, groups)
    @settings(max_examples=100, deadline=None)
    def test_commutative_associative(self, g, h, k):
        assert direct_sum(g, h) == direct_sum(h, g)
        assert direct_sum(direct_sum(g, h), k) == direct_sum(g, direct_sum(h, k))


class TestAbelianGroup:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            AbelianGroup(0, (3, 2))
        with pytest.raises(ValueError):
            AbelianGroup(0, (1,))
        with pytest.raises(ValueError):
            AbelianGroup(-1)

    def test_equality_includes_embedding(self):
        plain = AbelianGroup.free(1)
        scaled = AbelianGroup.free(1, scale=2)
        assert plain != scaled
        assert plain.is_isomorphic_to(scaled)

    @pytest.mark.parametrize(
        "group,text",
        [
            (AbelianGroup.trivial(), "0"),
            (AbelianGroup.free(1), "Z"),
            (AbelianGroup.free(3), "Z^3"),
            (AbelianGroup.cyclic(2), "Z_2"),
            (AbelianGroup(2, (2, 2, 2, 2)), "Z_2^4 (+) Z^2"),
            (AbelianGroup.free(1, scale=2), "2Z"),
            (AbelianGroup.free(2, scale=2), "(2Z)^2"),
            (AbelianGroup(2, (2,), 2), "Z_2 (+) (2Z)^2"),
            (AbelianGroup(0, (2, 4)), "Z_2 (+) Z_4"),
        ],
    )
    def test_render(self, group, text):
        assert group.render() == text
