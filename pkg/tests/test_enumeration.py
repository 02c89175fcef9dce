import os

import pytest

from abelquot import config
from abelquot.blocks import is_transitive
from abelquot.certifier import verify_many
from abelquot.enumeration import (
    ClassRegistry,
    are_conjugate,
    brute_force_transitive_groups,
    conjugator,
    cross_check,
    cycle_type_histogram,
    export_catalog,
    fixtures,
    import_catalog,
    transitive_groups,
)
from abelquot.errors import UnsupportedDegreeError
from abelquot.named_groups import cyclic
from abelquot.permutation import GroupSpec, conjugate
from abelquot.report_writer import read_catalog_index
from abelquot.stabchain import chain_of

from . import c4, d4

CATALOG_SIZES = {2: 1, 3: 2, 4: 5, 5: 5, 6: 16, 7: 7}


def _orders(catalog):
    return sorted(chain_of(group).order for group in catalog)


@pytest.mark.parametrize("n, size", sorted(CATALOG_SIZES.items()))
def test_catalog_sizes(n, size):
    catalog = transitive_groups(n, use_cache=False)
    assert len(catalog) == size
    assert catalog.method == "exhaustive"
    assert all(is_transitive(group) for group in catalog)
    assert [group.label for group in catalog] == [
        f"E{n}.{k}" for k in range(1, size + 1)
    ]


def test_known_orders():
    assert _orders(transitive_groups(4, use_cache=False)) == [4, 4, 8, 12, 24]
    assert _orders(transitive_groups(5, use_cache=False)) == [
        5,
        10,
        20,
        60,
        120,
    ]
    assert _orders(transitive_groups(7, use_cache=False)) == [
        7,
        14,
        21,
        42,
        168,
        2520,
        5040,
    ]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_matches_brute_force(n):
    exhaustive = transitive_groups(n, use_cache=False)
    naive = brute_force_transitive_groups(n)
    assert len(exhaustive) == len(naive)
    assert _orders(exhaustive) == _orders(naive)
    for group in naive:
        assert sum(are_conjugate(group, other) for other in exhaustive) == 1
    assert cross_check(exhaustive)


def test_parallel_enumeration():
    serial = transitive_groups(6, use_cache=False)
    parallel = transitive_groups(6, use_cache=False, jobs=2)
    assert parallel.groups == serial.groups
    assert [g.label for g in parallel] == [g.label for g in serial]


@pytest.mark.parametrize("n", sorted(CATALOG_SIZES))
def test_theorem_on_catalog(n):
    reports = verify_many(transitive_groups(n, use_cache=False))
    assert all(report.holds for report in reports)
    assert all(report.kp_holds for report in reports)
    assert all(report.certificate_sound for report in reports)
    assert all(report.block_bounds_hold for report in reports)


@pytest.mark.parametrize("n", [8, 9, 12, 16, 27, 81])
def test_theorem_on_fixtures(n):
    reports = verify_many(fixtures(n))
    assert reports
    for report in reports:
        assert report.holds, report.label
        assert report.kp_holds
        assert report.certificate_sound
        assert report.block_bounds_hold
        if report.primitive:
            assert report.primitive_bound_holds


def test_degree_limits():
    with pytest.raises(UnsupportedDegreeError):
        transitive_groups(8)
    with pytest.raises(UnsupportedDegreeError):
        transitive_groups(1)
    with pytest.raises(UnsupportedDegreeError):
        brute_force_transitive_groups(6)
    with pytest.raises(UnsupportedDegreeError):
        fixtures(82)


def test_conjugacy(c4, d4):
    other_c4 = GroupSpec.from_cycles(4, ["(1,3,2,4)"])
    s = conjugator(c4, other_c4)
    assert s is not None
    assert conjugate(c4.generators[0], s) in chain_of(other_c4)
    klein = GroupSpec.from_cycles(4, ["(1,2)(3,4)", "(1,3)(2,4)"])
    assert not are_conjugate(c4, klein)
    assert not are_conjugate(c4, d4)
    assert not are_conjugate(c4, cyclic(5))


def test_cycle_type_histogram(d4):
    histogram = dict(cycle_type_histogram(d4))
    # identity, two 4-cycles, three double transpositions, two transpositions
    assert histogram[(4, 0, 0, 0)] == 1
    assert histogram[(0, 0, 0, 1)] == 2
    assert histogram[(0, 2, 0, 0)] == 3
    assert histogram[(2, 1, 0, 0)] == 2


def test_class_registry(c4):
    registry = ClassRegistry()
    assert registry.add(c4)
    assert not registry.add(GroupSpec.from_cycles(4, ["(1,3,2,4)"]))
    assert registry.add(GroupSpec.from_cycles(4, ["(1,2)(3,4)", "(1,3)(2,4)"]))
    assert len(registry.representatives) == 2


@pytest.mark.parametrize("n", [2, 4, 6, 8, 9, 12, 27])
def test_fixtures(n):
    catalog = fixtures(n)
    assert catalog.method == "fixture"
    assert len(catalog) >= 1
    assert all(group.degree == n and is_transitive(group) for group in catalog)
    orders = [chain_of(group).order for group in catalog]
    assert n in orders


def test_fixture_families():
    labels = [group.label for group in fixtures(7)]
    assert "AGL(1,7)" in labels
    assert "D7" in labels
    assert "S7" in labels
    labels = [group.label for group in fixtures(27)]
    assert "C3 wr C3 wr C3" in labels
    assert all(g.label != "S27" for g in fixtures(27))


def test_export_import(tmp_path):
    catalog = transitive_groups(4, use_cache=False)
    index_path = export_catalog(catalog, str(tmp_path))
    index = read_catalog_index(index_path)
    assert list(index["order"].astype(int)) == [
        chain_of(g).order for g in catalog
    ]
    assert os.path.isfile(tmp_path / "degree4-001.grp")
    imported = import_catalog(str(tmp_path))[4]
    assert imported.groups == catalog.groups
    assert [g.label for g in imported] == [g.label for g in catalog]


def test_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(config.CACHE_ENV_VAR, str(tmp_path))
    first = transitive_groups(3)
    assert os.path.isfile(tmp_path / "degree-3" / "index.csv")
    second = transitive_groups(3)
    assert second.groups == first.groups


def test_fixture_dihedral_duplicates():
    # D4 and C2 wr C2 are the same group up to conjugacy
    labels = [group.label for group in fixtures(4)]
    assert "D4" in labels
    assert "C2 wr C2" not in labels
    assert len(fixtures(4)) == 4
