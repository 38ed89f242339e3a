import pytest

from fkmm.abelian import AbelianGroup
from fkmm.cohomology import (
    classify,
    cohomology,
    free_sphere_cohomology,
    point_cohomology,
    relative_h2,
    torus_cohomology,
    tr_sphere_cohomology,
)
from fkmm.errors import UnsupportedSpace
from fkmm.spaces import Sphere, Torus, parse_space

Z = AbelianGroup.free(1)
Z2 = AbelianGroup.cyclic(2)
O = AbelianGroup.trivial()


def G(text):
    """Shorthand: build groups from rendered strings used in the tables."""
    if text == "0":
        return O
    parts = text.split(" (+) ")
    free = 0
    torsion = []
    scale = None
    for part in parts:
        if part.startswith("Z_"):
            body = part[2:]
            if "^" in body:
                t, _, count = body.partition("^")
                torsion += [int(t)] * int(count)
            else:
                torsion.append(int(body))
        else:
            if part.startswith("(2Z)"):
                scale = 2
                free += int(part.split("^")[1]) if "^" in part else 1
            elif part == "2Z":
                scale = 2
                free += 1
            elif part.startswith("Z^"):
                free += int(part[2:])
            elif part == "Z":
                free += 1
            else:
                raise ValueError(part)
    return AbelianGroup(free, tuple(torsion), scale)


class TestPointCohomology:
    @pytest.mark.parametrize(
        "k,j,expected",
        [
            (0, 0, Z),
            (2, 0, Z2),
            (4, 0, Z2),
            (1, 0, O),
            (3, 0, O),
            (1, 1, Z2),
            (3, 1, Z2),
            (0, 1, O),
            (2, 1, O),
            (-1, 0, O),
        ],
    )
    def test_values(self, k, j, expected):
        assert point_cohomology(k, j) == expected


class TestFreeSphere:
    # Twisted groups for the antipodal sphere, dimensions 1..5, degrees 0..6.
    TABLE = {
        1: ["0", "Z_2", "0", "0", "0", "0", "0"],
        2: ["0", "Z_2", "Z", "0", "0", "0", "0"],
        3: ["0", "Z_2", "0", "Z_2", "0", "0", "0"],
        4: ["0", "Z_2", "0", "Z_2", "Z", "0", "0"],
        5: ["0", "Z_2", "0", "Z_2", "0", "Z_2", "0"],
    }

    def test_twisted_low_dimension_table(self):
        for d, row in self.TABLE.items():
            for k, cell in enumerate(row):
                assert free_sphere_cohomology(d, k, 1) == G(cell), (d, k)

    @pytest.mark.parametrize(
        "d,k,expected",
        [
            (1, 0, Z),
            (1, 1, Z),  # orbit space of the free circle is a circle
            (2, 0, Z),
            (2, 1, O),
            (2, 2, Z2),
            (3, 3, Z),
            (4, 2, Z2),
            (4, 4, Z2),
            (4, 5, O),
        ],
    )
    def test_untwisted_projective_space(self, d, k, expected):
        assert free_sphere_cohomology(d, k, 0) == expected

    def test_connected_free_space_has_no_twisted_h0(self):
        assert free_sphere_cohomology(1, 0, 1) == O


class TestTrSphere:
    @pytest.mark.parametrize(
        "d,k,expected",
        [
            (3, 3, G("Z_2 (+) Z")),
            (3, 1, Z2),
            (1, 3, G("Z_2^2")),
            (2, 1, Z2),
            (2, 3, G("Z_2^2")),
            (1, 1, G("Z_2 (+) Z")),
            (3, 5, G("Z_2^2")),
        ],
    )
    def test_twisted_odd_degrees(self, d, k, expected):
        assert tr_sphere_cohomology(d, k, 1) == expected

    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("k", [0, 2, 4])
    def test_twisted_even_degrees_vanish(self, d, k):
        assert tr_sphere_cohomology(d, k, 1) == O


class TestTorusCohomology:
    def test_structure_formula_degree2(self):
        # H^2 with twisted coefficients of the free torus T^{a,b,1} is
        # (Z_2)^a + Z^{(a+1)b}.
        for a in range(3):
            for b in range(3):
                got = torus_cohomology(Torus(a, b, 1), 2, 1)
                want = AbelianGroup((a + 1) * b, (2,) * a)
                assert got == want, (a, b)

    @pytest.mark.parametrize(
        "abc,expected",
        [
            ((0, 1, 1), "Z"),
            ((1, 1, 1), "Z_2 (+) Z^2"),
            ((0, 2, 1), "Z^2"),
            ((1, 0, 1), "Z_2"),
            ((2, 0, 1), "Z_2^2"),
        ],
    )
    def test_free_torus_cells(self, abc, expected):
        assert torus_cohomology(Torus(*abc), 2, 1) == G(expected)

    @pytest.mark.parametrize(
        "abc,expected",
        [
            ((1, 1, 0), "Z_2 (+) Z"),
            ((2, 1, 0), "Z_2^2 (+) Z^2"),
            ((1, 2, 0), "Z_2 (+) Z^2"),
            ((0, 2, 0), "0"),
            ((0, 1, 0), "0"),
        ],
    )
    def test_fixed_point_tori_degree2(self, abc, expected):
        assert torus_cohomology(Torus(*abc), 2, 1) == G(expected)

    def test_normalization_consistency(self):
        # A descriptor with c >= 2 must agree with its normalized form in
        # every degree and twist.
        for a in range(3):
            for b in range(3):
                for c in range(2, 5):
                    if a + b + c > 4:
                        continue
                    raw = Torus(a, b, c)
                    norm = Torus(a + c - 1, b, 1)
                    assert raw == norm
                    for k in range(5):
                        for j in (0, 1):
                            assert torus_cohomology(raw, k, j) == torus_cohomology(
                                norm, k, j
                            )

    @pytest.mark.parametrize(
        "abc,k,j,expected",
        [
            # untwisted and degree-3 groups of the free tori
            ((0, 1, 1), 2, 0, "Z_2"),
            ((0, 1, 1), 3, 1, "0"),
            ((0, 2, 1), 2, 0, "Z_2^2 (+) Z"),
            ((0, 2, 1), 3, 1, "Z_2"),
        ],
    )
    def test_higher_degree_and_untwisted_values(self, abc, k, j, expected):
        assert torus_cohomology(Torus(*abc), k, j) == G(expected)

    def test_one_dimensional_factors_match_spheres(self):
        # T^{0,1,0} is the circle with reflection, i.e. the TR 1-sphere.
        for k in range(5):
            for j in (0, 1):
                assert torus_cohomology(Torus(0, 1, 0), k, j) == tr_sphere_cohomology(
                    1, k, j
                )
                assert torus_cohomology(Torus(0, 0, 1), k, j) == free_sphere_cohomology(
                    1, k, j
                )


class TestRelativeH2:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("S:1,0", "0"),
            ("S:1,1", "0"),
            ("S:1,2", "Z_2"),
            ("S:1,3", "Z_2"),
            ("S:2,1", "2Z"),
            ("S:2,2", "0"),
            ("S:3,1", "0"),
            ("S:2,0", "0"),
            ("S:3,0", "0"),
            ("S:4,0", "0"),
            ("T:0,1,0", "0"),
            ("T:1,0,0", "0"),
            ("T:3,0,0", "0"),
            ("T:0,2,0", "Z_2"),
            ("T:0,3,0", "Z_2^4"),
            ("T:1,1,0", "2Z"),
            ("T:2,1,0", "(2Z)^2"),
            ("T:1,2,0", "Z_2 (+) (2Z)^2"),
        ],
    )
    def test_catalog(self, text, expected):
        assert relative_h2(parse_space(text)) == G(expected)

    def test_rejects_free_spaces(self):
        with pytest.raises(UnsupportedSpace):
            relative_h2(Sphere(0, 3))
        with pytest.raises(UnsupportedSpace):
            relative_h2(Torus(1, 1, 1))

    def test_rejects_high_dimension(self):
        with pytest.raises(UnsupportedSpace):
            relative_h2(Sphere(1, 4))
        with pytest.raises(UnsupportedSpace):
            relative_h2(Torus(0, 4, 0))


# Classification tables.  Keys are (space, rank parity), values the cell text.
SPHERE_TABLE_ODD = {
    "S:0,0": "EMPTY",
    "S:0,1": "0",
    "S:0,2": "0",
    "S:0,3": "2Z+1",
    "S:0,4": "EMPTY",
}

SPHERE_TABLE_EVEN = {
    "S:0,0": "EMPTY",
    "S:0,1": "0",
    "S:0,2": "0",
    "S:0,3": "2Z",
    "S:0,4": "0",
    "S:1,0": "0",
    "S:1,1": "0",
    "S:1,2": "Z_2",
    "S:1,3": "Z_2",
    "S:2,0": "0",
    "S:2,1": "2Z",
    "S:2,2": "0",
    "S:3,0": "0",
    "S:3,1": "0",
    "S:4,0": "0",
}

TORUS_FIXED_TABLE_EVEN = {
    "T:0,0,0": "EMPTY",
    "T:1,0,0": "0",
    "T:2,0,0": "0",
    "T:3,0,0": "0",
    "T:0,1,0": "0",
    "T:1,1,0": "2Z",
    "T:2,1,0": "(2Z)^2",
    "T:0,2,0": "Z_2",
    "T:1,2,0": "Z_2 (+) (2Z)^2",
    "T:0,3,0": "Z_2^4",
}

TORUS_FREE_TABLE_ANY_RANK = {
    "T:0,0,1": "0",
    "T:1,0,1": "Z_2",
    "T:2,0,1": "Z_2^2",
    "T:0,1,1": "2Z",
    "T:1,1,1": "Z_2 (+) (2Z)^2",
    "T:0,2,1": "(2Z)^2",
}


class TestClassification:
    @pytest.mark.parametrize("text,cell", sorted(SPHERE_TABLE_EVEN.items()))
    def test_spheres_even_rank(self, text, cell):
        assert classify(parse_space(text), 2).cell() == cell

    @pytest.mark.parametrize("text,cell", sorted(SPHERE_TABLE_ODD.items()))
    def test_spheres_odd_rank(self, text, cell):
        assert classify(parse_space(text), 3).cell() == cell

    def test_spheres_odd_rank_forbidden_with_fixed_points(self):
        for text in ["S:1,1", "S:1,2", "S:2,1", "S:3,1", "S:1,0"]:
            assert classify(parse_space(text), 3).status == "empty"

    @pytest.mark.parametrize("text,cell", sorted(TORUS_FIXED_TABLE_EVEN.items()))
    def test_fixed_point_tori(self, text, cell):
        assert classify(parse_space(text), 2).cell() == cell
        if text != "T:0,0,0":
            assert classify(parse_space(text), 3).cell() == "EMPTY"

    @pytest.mark.parametrize("text,cell", sorted(TORUS_FREE_TABLE_ANY_RANK.items()))
    @pytest.mark.parametrize("rank", [1, 2, 3, 4])
    def test_free_tori_all_ranks(self, text, cell, rank):
        assert classify(parse_space(text), rank).cell() == cell

    @pytest.mark.parametrize("rank", [2, 4, 6, 8, 20])
    def test_stable_rank_independence(self, rank):
        from dataclasses import replace

        for text in list(SPHERE_TABLE_EVEN) + list(TORUS_FIXED_TABLE_EVEN):
            space = parse_space(text)
            assert replace(classify(space, rank), rank=2) == classify(space, 2)

    def test_unique_annotations(self):
        assert "trivial" in classify(Sphere(1, 1), 2).note
        assert classify(Sphere(0, 2), 3).note == "not a product bundle"
        assert classify(Sphere(0, 4), 2).note == "trivial product bundle"

    def test_invariant_labels(self):
        assert classify(Sphere(0, 3), 2).invariant_name == "c1"
        assert classify(Torus(0, 3, 0), 2).invariant_name == "FKMM"
        assert classify(Torus(1, 2, 0), 2).invariant_name == "FKMM+c1"

    def test_render_line(self):
        line = classify(Sphere(0, 3), 2).render()
        assert line.startswith("S:0,3 rank=2m -> 2Z via c1")
        assert classify(Sphere(1, 1), 2).render() == "S:1,1 rank=2m -> 0 (unique, trivial product bundle)"

    def test_rejects_out_of_catalog(self):
        with pytest.raises(UnsupportedSpace):
            classify(Sphere(1, 4), 2)
        with pytest.raises(UnsupportedSpace):
            classify(Torus(2, 2, 0), 2)


class TestGenericCohomologyFrontend:
    def test_dispatch(self):
        assert cohomology(parse_space("T:1,1,1"), 2, 1) == G("Z_2 (+) Z^2")
        assert cohomology(parse_space("S:0,3"), 2, 1) == Z
        assert cohomology(parse_space("S:2,1"), 2, 1) == Z
