import numpy as np
import pytest

from oracle.sampler import EDSampler
from trap.basis import HarmonicTrap


@pytest.fixture
def sampler():
    return EDSampler(HarmonicTrap(), 2, e_infinity=2.0)


def test_eigen_count_reaches_past_the_multiplet(sampler):
    sampler.prepare([6])
    # six product states have unperturbed energy <= 3
    assert sampler.eigen_count(sampler.hamiltonians[6]) == 16


def test_collect_layout(sampler):
    result = sampler.collect([1.0, 4.0], [6, 8])
    assert set(result["data"]) == {6, 8}
    assert set(result["data"][8]) == {1.0, 4.0}
    point = result["data"][6][4.0]
    assert point["status"] == "success"
    assert point["eigenvectors"].shape == (36, len(point["eigenvalues"]))
    assert result["summary"]["points"] == 4
    assert result["summary"]["dimensions"] == {6: 36, 8: 64}


def test_assembly_happens_once(sampler):
    sampler.prepare([6])
    first = sampler.hamiltonians[6]
    sampler.collect([2.0], [6], vectors=False)
    assert sampler.hamiltonians[6] is first


def test_without_vectors(sampler):
    point = sampler.collect([2.0], [6], vectors=False)["data"][6][2.0]
    assert point["eigenvectors"] is None


@pytest.mark.asyncio
async def test_async_matches_sync():
    g_values, cutoffs = [1.0, 3.0, 9.0], [6, 7]
    expected = EDSampler(HarmonicTrap(), 2, 2.0).collect(g_values, cutoffs, vectors=False)
    result = await EDSampler(HarmonicTrap(), 2, 2.0, threads=3).collect_all(g_values, cutoffs, vectors=False)
    for m in cutoffs:
        for g in g_values:
            np.testing.assert_allclose(result["data"][m][g]["eigenvalues"], expected["data"][m][g]["eigenvalues"], atol=1e-12)


def test_threaded_collect_keeps_order():
    result = EDSampler(HarmonicTrap(), 2, 2.0, threads=4).collect([1.0, 2.0, 5.0], [6], vectors=False)
    grounds = [result["data"][6][g]["eigenvalues"][0] for g in (1.0, 2.0, 5.0)]
    assert grounds == sorted(grounds)
