import pytest

from wlrad.coloring import wl_refine
from wlrad.graph_core import GraphSample
from wlrad.partition import SamplePartition, make_histogram, multiplicity_diff, partition_sample

from conftest import c3, c6, p3, two_triangles


def test_wl_blind_pair_is_one_class(wl_blind_pair):
    part = partition_sample(wl_refine(wl_blind_pair)[1])
    assert part.p == 1 and part.multiplicities == (2,)
    assert part.is_uniform


def test_classes_ordered_by_key():
    hists = [((1, 2),), ((0, 1),), ((1, 2),), ((0, 1), (1, 1))]
    part = partition_sample(hists)
    assert part.class_keys == (((0, 1),), ((0, 1), (1, 1)), ((1, 2),))
    assert part.classes == ((1,), (3,), (0, 2))
    assert part.class_index() == [2, 0, 2, 1]


def test_make_histogram():
    assert make_histogram([3, 1, 3, 3]) == ((1, 1), (3, 3))
    assert make_histogram([]) == ()


def test_to_json_shape():
    doc = partition_sample([((0, 1),), ((0, 1),)]).to_json()
    assert doc == {"m": 2, "p": 1, "classes": [{"key": [[0, 1]], "members": [0, 1], "multiplicity": 2}]}


@pytest.mark.parametrize(
    "classes, m",
    [(((0,), (0, 1)), 2), (((0,),), 2), (((0, 2),), 2), ((), 0), (((),), 0)],
)
def test_invalid_partitions(classes, m):
    keys = tuple(((j, 1),) for j in range(len(classes)))
    with pytest.raises(ValueError):
        SamplePartition(classes, keys, m)


def test_from_multiplicities():
    part = SamplePartition.from_multiplicities([3, 1])
    assert part.classes == ((0, 1, 2), (3,))
    assert part.m == 4 and not part.is_uniform
    with pytest.raises(ValueError):
        SamplePartition.from_multiplicities([2, 0])


def test_diff_three_one_vs_two_two():
    a = partition_sample([((0, 1),)] * 3 + [((1, 1),)])
    b = partition_sample([((0, 1),)] * 2 + [((1, 1),)] * 2)
    diff = multiplicity_diff(a, b)
    assert diff.eps == (1, 1) and diff.total == 2
    assert diff.to_json()[0] == {"key": [[0, 1]], "mu_s": 3, "mu_s_prime": 2, "eps": 1}


def test_diff_disjoint_keys_zero_filled():
    a = partition_sample([((0, 1),), ((0, 1),)])
    b = partition_sample([((5, 1),), ((5, 1),)])
    diff = multiplicity_diff(a, b)
    assert [(e.mu_a, e.mu_b) for e in diff.entries] == [(2, 0), (0, 2)]
    assert diff.total == 4


def test_diff_identical_is_zero():
    a = partition_sample([((0, 1),), ((1, 1),)])
    assert multiplicity_diff(a, a).total == 0


def test_diff_size_mismatch():
    with pytest.raises(ValueError, match="sample sizes differ"):
        multiplicity_diff(SamplePartition.from_multiplicities([2]), SamplePartition.from_multiplicities([3]))


def test_diff_from_joint_refinement():
    # one run over both samples keeps color ids comparable
    s, s2 = (p3(), c3(), c6()), (c3(), c3(), two_triangles())
    hists = wl_refine(GraphSample(s + s2))[1]
    diff = multiplicity_diff(partition_sample(hists[:3]), partition_sample(hists[3:]))
    # P3 vs C3 moves one graph; C6 and 2xC3 share a key
    assert sorted(diff.eps) == [0, 1, 1]
