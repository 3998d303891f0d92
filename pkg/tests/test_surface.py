from fractions import Fraction

import pytest

from aldp.lattice import DivisorClass, arithmetic_genus, exceptional
from aldp.surface import (
    IncidencePoint,
    blow_up,
    has_errors,
    make_fn,
    make_p2,
    pair_from_json,
    test_curves,
    validate_configuration,
)

P = IncidencePoint
F = Fraction


def labels(curve_set):
    return [t.label for t in curve_set.explicit]


def by_label(curve_set, label):
    for t in curve_set.explicit:
        if t.label == label:
            return t.divisor
    raise KeyError(label)


def test_make_p2():
    pair = make_p2([3])
    assert pair.boundary[0] == DivisorClass(pair.basis, [3])
    pair = make_p2([2, 1])
    assert pair.r == 2
    assert pair.adjacency()[0][1] == 2
    with pytest.raises(ValueError):
        make_p2([0])


def test_make_fn_irreducibility():
    pair = make_fn(2, [(1, 0)])
    assert pair.boundary[0].coords == (F(1), F(0))
    make_fn(1, [(2, 2)])
    make_fn(2, [(2, 4)])  # constructible; the verifier rejects it later
    with pytest.raises(ValueError):
        make_fn(1, [(2, 0)])  # only the section itself has a = 1, b = 0
    with pytest.raises(ValueError):
        make_fn(0, [(2, 0)])  # two rulings, not an irreducible curve
    with pytest.raises(ValueError):
        make_fn(2, [(2, 3)])  # below the irreducibility slope
    with pytest.raises(ValueError):
        make_fn(1, [(0, 2)])  # a pair of fibers


def test_blow_up_proper_transforms():
    base = make_p2([2])
    pair = blow_up(base, [P((0,))])
    assert pair.boundary[0] == DivisorClass(pair.basis, [2, -1])
    assert pair.boundary[0].square() == base.boundary[0].square() - 1
    assert arithmetic_genus(pair.boundary[0]) == arithmetic_genus(base.boundary[0])

    with pytest.raises(ValueError):
        blow_up(base, [P((1,))])  # unknown component
    with pytest.raises(ValueError):
        P((0, 1, 2))  # too many components through one point
    disjoint = make_fn(2, [(1, 0), (1, 2)])
    with pytest.raises(ValueError):
        blow_up(disjoint, [P((0, 1))])  # components do not meet


def test_blow_up_crossing_allowed_but_flagged():
    pair = blow_up(make_fn(1, [(1, 0), (0, 1)]), [P((0, 1))])
    # the crossing point sits on both proper transforms
    assert pair.boundary[0].coords == (F(1), F(0), F(-1))
    assert pair.boundary[1].coords == (F(0), F(1), F(-1))
    diags = validate_configuration(pair)
    assert any("crossing" in d.message for d in diags)
    assert not has_errors(diags)


def test_fiber_transform_properties():
    pair = blow_up(make_fn(0, [(2, 1)]), [P((0,)), P((0,))])
    curves = test_curves(pair)
    for k in (1, 2):
        f = by_label(curves, "fiber through P%d" % k)
        assert f.square() == -1
        assert f.dot(exceptional(pair.basis, k)) == 1
        assert arithmetic_genus(f) == 0


def test_test_curves_section_pair():
    pair = make_fn(3, [(1, 0)])
    curves = test_curves(pair)
    divisors = set(curves.divisors())
    assert divisors == {
        DivisorClass(pair.basis, [1, 0]),
        DivisorClass(pair.basis, [0, 1]),
    }
    assert len(curves.certificates) == 1
    cert = curves.certificates[0]
    assert "a >= 1" in cert.family
    assert "mult" in cert.multiplicity_bound


def test_test_curves_lines_on_blown_plane():
    # collinear points on a line boundary: no extra pair lines, only
    # single-point lines
    pair = blow_up(make_p2([1]), [P((0,)), P((0,)), P((0,))])
    names = labels(test_curves(pair))
    assert "line through P1" in names
    assert not any("," in n for n in names if n.startswith("line through P"))

    # on a conic the line through two points is a genuine extra curve
    pair = blow_up(make_p2([2]), [P((0,)), P((0,))])
    curves = test_curves(pair)
    line = by_label(curves, "line through P1,P2")
    assert line.square() == -1
    assert line.dot(pair.boundary[0]) == 0


def test_test_curves_grouped_fibers():
    pair = blow_up(make_fn(0, [(2, 1)]), [P((0,), 0), P((0,), 0), P((0,))])
    curves = test_curves(pair)
    grouped = by_label(curves, "fiber through group 0")
    assert grouped.square() == -2
    names = labels(curves)
    assert "fiber through P1" not in names
    assert "fiber through P3" in names


def test_validate_configuration_catalog_pairs_are_clean():
    for pair in (
        make_p2([1, 1, 1]),
        make_fn(2, [(1, 0), (1, 3)]),
        blow_up(make_p2([1, 1, 1]), [P((0,)), P((1,)), P((2,))]),
        blow_up(make_fn(0, [(2, 1)]), [P((0,)), P((0,))]),
    ):
        assert validate_configuration(pair) == []


def test_validate_configuration_flags():
    # 3-valent vertex: three lines through... a star needs four lines
    pair = make_p2([2, 1, 1, 1])
    diags = validate_configuration(pair)
    assert any("meets 3 others" in d.message for d in diags)

    # impossible fiber declaration: two points of the section on one fiber
    pair = blow_up(make_fn(2, [(1, 0)]), [P((0,), 0), P((0,), 0)])
    diags = validate_configuration(pair)
    assert has_errors(diags)

    # genericity warning for a legitimate shared fiber
    pair = blow_up(make_fn(1, [(1, 0), (1, 2)]), [P((0,), 0), P((1,), 0)])
    diags = validate_configuration(pair)
    assert any(d.level == "warning" and "share one curve" in d.message for d in diags)
    assert not has_errors(diags)

    # two components meeting twice without anticanonical boundary
    pair = make_fn(0, [(2, 2), (0, 1)])
    assert any("meet twice" in d.message for d in validate_configuration(pair))
    # and three times is over the top regardless
    pair = make_fn(0, [(2, 1), (1, 1)])
    assert any("meet 3 times" in d.message for d in validate_configuration(pair))


def test_pair_json_round_trip():
    pair = blow_up(
        make_fn(1, [(1, 0), (1, 2)]),
        [P((0,)), P((1,), 4)],
    )
    data = pair.to_json()
    again = pair_from_json(data)
    assert again.basis == pair.basis
    assert again.boundary == pair.boundary
    assert again.incidence == pair.incidence
    assert data["model"] == {"Fn": 1}
    assert data["blowups"][1] == {"on": [1], "fiber_group": 4}


def test_inventory_squares_on_clean_configurations():
    # away from declared degenerations, only boundary components may dip
    # below self-intersection -1
    samples = [
        blow_up(make_p2([3]), [P((0,))] * 5),
        blow_up(make_fn(0, [(2, 1)]), [P((0,))] * 4),
        blow_up(make_fn(3, [(1, 0), (1, 4)]), [P((0,)), P((1,))]),
        make_fn(4, [(1, 0), (0, 1), (1, 4)]),
    ]
    for pair in samples:
        boundary = set(pair.boundary)
        for t in test_curves(pair).explicit:
            if t.divisor not in boundary:
                assert t.divisor.square() >= -1, t.label


def test_boundary_sum_and_graph():
    pair = make_fn(0, [(1, 0), (1, 0), (0, 1), (0, 1)])
    total = pair.boundary_sum()
    assert total == DivisorClass(pair.basis, [2, 2])
    adj = pair.adjacency()
    assert adj[0][1] == 0 and adj[0][2] == 1 and adj[2][3] == 0
