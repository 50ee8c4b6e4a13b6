"""Every audit suite runs clean on seeded masses, and pair files work."""

import pytest

from endokat import audits, jsonio
from endokat.endogeny import Endogeny, NegligibilityBound
from endokat.groups import Homomorphism, canonicalize_group, subgroup_from_generators


@pytest.mark.parametrize("suite", audits.SUITES)
def test_suite_runs_clean(suite):
    descs = audits.make_descriptors(suite, 12, 1234)
    rep = audits.run_suite(suite, descs, workers=1)
    assert rep["instances_run"] == 12
    assert rep["violations"] == []
    assert rep["checks"] > 0


def test_suite_with_oracle():
    descs = audits.make_descriptors("prering", 6, 77)
    rep = audits.run_suite("prering", descs, use_oracle=True, workers=1)
    assert rep["violations"] == []


def test_sharp_pair_file_records_verdict():
    """A non-commuting fixture pair is recorded, not failed."""
    g = canonicalize_group([2, 2])
    f = subgroup_from_generators(g, [(1, 0)])
    nb = NegligibilityBound(g, f)
    zf = Endogeny.blur(f, nb)
    swap = Endogeny.from_morphism(Homomorphism(g, g, [[0, 1], [1, 0]]), nb)
    desc = {"pair": [jsonio.endogeny_to_json(zf), jsonio.endogeny_to_json(swap)]}
    rep = audits.run_suite("sharp", [desc], workers=1)
    assert rep["violations"] == []
    assert rep["notes"] == [{"sharp_commutes": False}]
    # and a commuting pair gets its closure laws checked
    one = Endogeny.identity(g, nb)
    desc2 = {"pair": [jsonio.endogeny_to_json(zf), jsonio.endogeny_to_json(one)]}
    rep2 = audits.run_suite("sharp", [desc2], workers=1)
    assert rep2["violations"] == []
    assert rep2["notes"] == [{"sharp_commutes": True}]
    assert rep2["checks"] == 3


def test_parallel_merge_deterministic():
    descs = audits.make_descriptors("prering", 8, 5)
    r1 = audits.run_suite("prering", descs, workers=1)
    r2 = audits.run_suite("prering", descs, workers=3)
    for rep in (r1, r2):
        rep.pop("runtime_ms")
    assert r1 == r2
