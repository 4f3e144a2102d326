import pytest

from racgdiv import DefiningGraph, cycle_graph, gamma_d
from racgdiv.classify import DivergenceTag, InvalidGraphError, classify, gamma_degree
from racgdiv.graph import complete_bipartite, is_cfs


def test_table(g1, g2, c5, chord):
    assert classify(g1).tag is DivergenceTag.LINEAR
    assert classify(g2).tag is DivergenceTag.QUADRATIC
    assert classify(c5).tag is DivergenceTag.EXPONENTIAL
    assert classify(chord).tag is DivergenceTag.AT_LEAST_CUBIC


@pytest.mark.parametrize("d", range(3, 7))
def test_gamma_d_degree(d):
    res = classify(gamma_d(d))
    assert res.tag is DivergenceTag.AT_LEAST_CUBIC
    assert res.degree == d
    assert f"degree: {d}" in res.lines()


def test_witnesses(g1, g2, chord):
    lin = classify(g1)
    assert lin.witness_kind == "bipartition"
    quad = classify(g2)
    assert quad.witness_kind == "cfs-component"
    assert quad.witness.split() == [c.label(g2) for c in is_cfs(g2)]
    cub = classify(chord)
    assert cub.witness_kind == "gamma-word"
    assert any("separate" in w for w in cub.warnings)


def test_join_beats_cfs(k23):
    assert classify(k23).tag is DivergenceTag.LINEAR


def test_degree_only_for_literal_gamma_d():
    g = gamma_d(3)
    relabelled = DefiningGraph.from_edges(g.vertices, [tuple(e) for e in g.edges])
    assert gamma_degree(g) == 3
    assert gamma_degree(relabelled) == 3
    assert gamma_degree(cycle_graph(6)) is None
    assert classify(cycle_graph(6)).degree is None


def test_invalid_graph_rejected():
    with pytest.raises(InvalidGraphError) as exc:
        classify(cycle_graph(3))
    assert not exc.value.report.is_valid


def test_report_format(c5):
    text = classify(c5).report()
    assert text.splitlines()[0] == "class: Exponential"
    assert all(": " in line for line in text.splitlines() if line)


def test_larger_bipartite_linear():
    assert classify(complete_bipartite(3, 4)).tag is DivergenceTag.LINEAR
