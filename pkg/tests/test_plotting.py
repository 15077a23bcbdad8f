from fractions import Fraction

from mixedramsey.extremal import LowerBoundSpec, build_construction_1
from mixedramsey.graphcore import GREEN, MultiColouredGraph
from mixedramsey.plotting import draw_colouring, draw_densities
from mixedramsey.regularity import ClusterPartition, build_reduced_graph

from conftest import complete_pairs


def _is_png(path):
    return path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_draw_colouring(tmp_path):
    g = build_construction_1(LowerBoundSpec(4, 4, 3))
    path = tmp_path / "c.png"
    draw_colouring(g, path, highlight=[0, 1, 2], groups={0: 1, 1: 1}, title="lb1")
    assert _is_png(path)


def test_draw_densities(tmp_path):
    g = MultiColouredGraph.from_edges(12, complete_pairs(12), GREEN)
    part = ClusterPartition([], [range(0, 3), range(3, 6), range(6, 9), range(9, 12)])
    reduced = build_reduced_graph(g, part, Fraction(1, 2), Fraction(1, 3))
    path = tmp_path / "d.svg"
    draw_densities(reduced, path)
    assert path.read_text().lstrip().startswith("<?xml")
