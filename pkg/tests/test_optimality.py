import numpy as np
import pytest

from telewit.linalg import span_rank
from telewit.optimality import (
    NOT_CERTIFIED,
    OPTIMAL_CERTIFIED,
    certify,
    expectation_on_product,
    reference_kernel_vectors,
    search_kernel_vectors,
)
from telewit.states import ProductVector, PureState, product_vector, random_product_pure
from telewit.witness import entanglement_witness, evaluate, teleportation_witness


def test_expectation_examples():
    w2 = teleportation_witness(2)
    assert abs(expectation_on_product(w2, product_vector([1, 0], [1, 0]))) < 1e-15
    w3 = teleportation_witness(3)
    uniform = product_vector([1, 1, 1], [1, 1, 1])
    assert abs(expectation_on_product(w3, uniform)) < 1e-14
    crossed = product_vector([1, 1], [1, -1])
    assert abs(expectation_on_product(w2, crossed) - 0.5) < 1e-14


def test_expectation_matches_density_evaluation():
    for d in (2, 3):
        w = teleportation_witness(d)
        vectors = reference_kernel_vectors(d) + [random_product_pure(d, seed=i) for i in range(5)]
        for v in vectors:
            assert abs(expectation_on_product(w, v) - evaluate(w, v.density())) < 1e-12


def test_expectation_dimension_mismatch():
    with pytest.raises(ValueError):
        expectation_on_product(teleportation_witness(3), product_vector([1, 0], [0, 1]))


def test_reference_kernel_vectors():
    v2 = reference_kernel_vectors(2)
    assert len(v2) == 4
    assert span_rank([v.embedded for v in v2]) == 4
    v3 = reference_kernel_vectors(3)
    assert len(v3) == 9
    assert span_rank([v.embedded for v in v3]) == 9
    w2, w3 = teleportation_witness(2), teleportation_witness(3)
    for v in v2:
        assert abs(expectation_on_product(w2, v)) < 1e-12
    for v in v3:
        assert abs(expectation_on_product(w3, v)) < 1e-12
    with pytest.raises(ValueError):
        reference_kernel_vectors(4)


@pytest.mark.parametrize("d", [2, 3])
def test_certify_reference_sets(d):
    cert = certify(teleportation_witness(d), reference_kernel_vectors(d))
    assert cert.verdict == OPTIMAL_CERTIFIED
    assert cert.span_rank == d * d == cert.required_rank
    assert cert.note is None


def test_certify_insufficient_set():
    vectors = reference_kernel_vectors(3)[:2]
    cert = certify(teleportation_witness(3), vectors)
    assert cert.verdict == NOT_CERTIFIED
    assert cert.span_rank == 2
    assert "incomplete" in cert.note


def test_certify_rejects_empty():
    with pytest.raises(ValueError):
        certify(teleportation_witness(2), [])


def test_certify_invariant_under_reorder_and_duplication():
    w = teleportation_witness(2)
    base = reference_kernel_vectors(2)
    shuffled = [base[2], base[0], base[3], base[1], base[0], base[2]]
    assert certify(w, shuffled).verdict == certify(w, base).verdict == OPTIMAL_CERTIFIED


def test_certify_invariant_under_phases():
    w = teleportation_witness(3)
    phased = []
    rng = np.random.default_rng(17)
    for v in reference_kernel_vectors(3):
        theta, mu = rng.uniform(0, 2 * np.pi, 2)
        phased.append(
            ProductVector(
                PureState(3, np.exp(1j * theta) * v.e.amplitudes),
                PureState(3, np.exp(1j * mu) * v.f.amplitudes),
            )
        )
    assert certify(w, phased).verdict == OPTIMAL_CERTIFIED


def test_search_recovers_full_span_qubits():
    w = teleportation_witness(2)
    found = search_kernel_vectors(w, attempts=50, seed=19)
    assert span_rank([v.embedded for v in found]) == 4
    assert certify(w, found).verdict == OPTIMAL_CERTIFIED


def test_search_recovers_full_span_qutrits():
    w = teleportation_witness(3)
    found = search_kernel_vectors(w, attempts=200, seed=23)
    assert span_rank([v.embedded for v in found]) == 9
    assert certify(w, found).verdict == OPTIMAL_CERTIFIED


def test_search_on_entanglement_witness_d4():
    # exploratory: the partial-transpose witness admits zero-expectation
    # product vectors; whatever rank the search reaches is only reported
    w = entanglement_witness(4)
    found = search_kernel_vectors(w, attempts=60, seed=29)
    assert found, "search should find at least one kernel vector"
    for v in found:
        assert abs(expectation_on_product(w, v)) <= 1e-9
    assert span_rank([v.embedded for v in found]) == len(found)


def test_search_deterministic():
    w = teleportation_witness(2)
    a = search_kernel_vectors(w, attempts=30, seed=31)
    b = search_kernel_vectors(w, attempts=30, seed=31)
    assert len(a) == len(b)
    for va, vb in zip(a, b):
        assert np.array_equal(va.embedded, vb.embedded)


def test_search_rejects_bad_attempts():
    with pytest.raises(ValueError):
        search_kernel_vectors(teleportation_witness(2), attempts=0, seed=0)
