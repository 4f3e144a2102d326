import networkx as nx
import pytest

from racgdiv import gamma_d
from racgdiv.covering import (
    CellMap,
    build_chamber,
    build_presentation_complex,
    build_q2,
    census_by_counting,
    census_small_squares,
    check_covering_map,
    condition_star_violations,
    negative_controls,
    obstruction_check,
    parse_cell_list,
    square_subdivision,
    verify_d2_cover,
    whitehead_link,
)
from racgdiv.covering.complex import CellListError, format_cell_list
from racgdiv.covering.obstruction import assignment_violations
from racgdiv.covering.presentation import census_kinds, whitehead_link_matches_gamma
from racgdiv.covering.witness import _midpoint_types, load_data

TORUS = """\
vertex v
edge x v v
edge y v v
square T x y x^-1 y^-1
"""


# -- cell lists and complexes -------------------------------------------------------


def test_parse_torus():
    c, _, _ = parse_cell_list(TORUS)
    assert c.counts() == (1, 2, 1)
    assert c.euler_characteristic() == 0
    assert not condition_star_violations(c)
    again, _, _ = parse_cell_list(format_cell_list(c))
    assert again.counts() == c.counts()


def test_parse_rejects_open_boundary():
    with pytest.raises(CellListError):
        parse_cell_list("vertex p\nvertex q\nedge x p q\nsquare S x x x x\n")


def test_identity_is_one_sheeted():
    X = build_presentation_complex(3)
    rep = check_covering_map(CellMap.identity(X))
    assert rep.ok and rep.sheets == 1


def test_subdivision_counts():
    X = build_presentation_complex(2)
    Z, kinds = square_subdivision(X)
    # V + E + F vertices, 2E + 4F edges, 4F squares
    assert Z.counts() == (1 + 3 + 2, 2 * 3 + 4 * 2, 4 * 2)
    assert sorted(set(kinds.values())) == ["E", "F", "V"]


# -- presentation complex and census ------------------------------------------------------


@pytest.mark.parametrize("d", range(2, 7))
def test_census_matches_counting(d):
    counted = census_by_counting(d)
    assert counted == {k: census_small_squares(d, k) for k in census_kinds(d)}
    assert counted["V"] == 4 * d and counted["F"] == 4
    assert counted["E:a0"] == 2 * (d + 1) and counted[f"E:a{d}"] == 4


@pytest.mark.parametrize("d", range(2, 7))
def test_whitehead_link_is_gamma_d(d):
    link = whitehead_link(d)
    assert link.number_of_nodes() == 2 * (d + 1) and link.number_of_edges() == 4 * d
    assert whitehead_link_matches_gamma(d)
    assert nx.is_isomorphic(nx.Graph(link), gamma_d(d).to_networkx())


def test_census_rejects_unknown_kind():
    with pytest.raises(ValueError, match="unknown vertex kind"):
        census_small_squares(2, "E:a7")


# -- chambers ---------------------------------------------------------------------------------


@pytest.mark.parametrize("d", range(2, 6))
def test_chamber_counts(d):
    K, types = build_chamber(gamma_d(d))
    assert K.counts() == (6 * d + 3, 10 * d + 2, 4 * d)
    assert not types.problems(K, gamma_d(d))


# -- the d = 2 cover ---------------------------------------------------------------------------


def test_q2_covers_x2():
    Q, psi = build_q2()
    rep = check_covering_map(psi)
    assert rep.ok and rep.sheets == 8
    assert Q.counts() == (8, 24, 16)


def test_verify_d2_cover():
    rep = verify_d2_cover()
    assert rep.ok, rep.lines()
    assert rep.sheets == 8 and rep.chambers == 8
    assert "stage: type Y: ok: cells 48 112 64" in rep.lines()


def test_negative_controls():
    controls = negative_controls()
    assert len(controls) == 3
    for name, expected, got in controls:
        assert expected in got, name


def test_real_cover_satisfies_local_model():
    """Each vertex of Q gives an assignment of edge ends that the d = 2 search must accept."""
    Q, psi = build_q2()
    mids = _midpoint_types(Q, load_data("q2_types.txt"))
    found = obstruction_check(2).satisfying
    for q in Q.vertices:
        a = {}
        for e in Q.edges:
            if e.initial == q:
                a[(psi.edge_map[e.name], "i")] = mids[e.name]
            if e.terminal == q:
                a[(psi.edge_map[e.name], "t")] = mids[e.name]
        assert assignment_violations(2, a) == [], q
        assert a in found


# -- obstruction ---------------------------------------------------------------------------------


def test_obstruction_d2_consistent():
    res = obstruction_check(2)
    assert res.consistent and not res.red_flags
    assert res.link_compatible == 8 and len(res.satisfying) == 8


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_obstruction_higher_d(d):
    res = obstruction_check(d)
    assert not res.consistent and not res.red_flags
    assert res.link_compatible == 4
    assert list(res.failure_sites) == [f"R{d} = a{d}^-1 a0 a{d} a{d - 1}^-1"]
    trace = "\n".join(res.trace)
    assert f"type {{a0,a{d}}}" in trace
    assert f"lies over a{d - 1}" in trace and "contradiction" in trace


def test_obstruction_rejects_small_d():
    with pytest.raises(ValueError):
        obstruction_check(1)


def test_q2_vertex_corners():
    # 16 squares x 4 corners over 8 vertices: 4d = 8 corners each, matching the link of X_2
    Q, _ = build_q2()
    assert {len(Q.corners(v)) for v in Q.vertices} == {8}
