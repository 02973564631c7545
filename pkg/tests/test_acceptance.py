"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v`` to get one PASSED/FAILED
line per criterion (add ``-s`` to see the explicit pass markers too).
"""

import json
import math
import os
import time

import numpy as np

from telewit import cli, fileio
from telewit.bases import (
    antisymmetric_gellmann,
    decompose_spin1,
    gellmann_basis,
    pauli_basis,
)
from telewit.fef import fef_estimate
from telewit.linalg import hermitian_eigen, kron, partial_transpose, polar_unitary
from telewit.measurement import MeasurementPlan, estimate_witness_expectation
from telewit.optimality import (
    OPTIMAL_CERTIFIED,
    certify,
    expectation_on_product,
    reference_kernel_vectors,
)
from telewit.states import (
    DensityMatrix,
    bell_diagonal,
    isotropic,
    max_entangled,
    pure_density,
    random_density,
    random_product_pure,
    singlet,
)
from telewit.witness import (
    DETECTED_USEFUL,
    INCONCLUSIVE,
    classify,
    entanglement_witness,
    evaluate,
    teleportation_witness,
)


def _pauli():
    b = pauli_basis()
    return b.matrix("I"), b.matrix("sx"), b.matrix("sy"), b.matrix("sz")


def test_a1_construction_identities():
    started = time.perf_counter()
    i2, sx, sy, sz = _pauli()

    # qubit: pair-sum form vs singlet partial transpose, entrywise
    ent2 = partial_transpose(
        np.outer(max_entangled(2).amplitudes, max_entangled(2).amplitudes.conj()),
        (2, 2), "A",
    )
    pair_form_2 = 0.5 * kron(sy, sy) + 0.5 * kron(i2, i2) - ent2
    ps = singlet().amplitudes
    singlet_pt = partial_transpose(np.outer(ps, ps.conj()), (2, 2), "A")
    assert np.abs(pair_form_2 - singlet_pt).max() <= 1e-12

    # the general construction reduces to the qubit form at d = 2
    assert np.abs(teleportation_witness(2).matrix - pair_form_2).max() <= 1e-12

    # and to the qutrit three-generator form at d = 3
    b3 = gellmann_basis(3)
    delta1 = sum(kron(b3.matrix(l), b3.matrix(l))
                 for l in ("asym_0_1", "asym_0_2", "asym_1_2"))
    ent3 = entanglement_witness(3).matrix
    pair_form_3 = delta1 / 3 + np.eye(9) / 3 - ent3
    assert np.abs(teleportation_witness(3).matrix - pair_form_3).max() <= 1e-12

    # qutrit entanglement witness equals its generator expansion
    delta = sum(kron(m, m) for label, m in b3.elements if label != "I")
    assert np.abs(ent3 - (np.eye(9) + 1.5 * delta) / 9).max() <= 1e-12

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"construction identities took {elapsed:.2f}s"
    print("criterion 1 (construction identities): PASS")


def test_a2_golden_detection_formulas():
    w2 = teleportation_witness(2)
    grid = np.linspace(-1, 1, 5)
    admissible = 0
    for c1 in grid:
        for c2 in grid:
            for c3 in grid:
                eigs = np.array([
                    1 - c1 - c2 - c3, 1 - c1 + c2 + c3,
                    1 + c1 - c2 + c3, 1 + c1 + c2 - c3,
                ]) / 4
                if eigs.min() < 0:
                    continue
                admissible += 1
                value = evaluate(w2, bell_diagonal(c1, c2, c3))
                assert abs(value - (1 + c2 - c1 - c3) / 4) <= 1e-12
    assert admissible > 0

    w3 = teleportation_witness(3)
    for alpha in np.linspace(-1 / 8, 1, 50):
        value = evaluate(w3, isotropic(3, alpha))
        assert abs(value - (2 - 8 * alpha) / 9) <= 1e-12

    assert classify(evaluate(w3, isotropic(3, 0.25))) == INCONCLUSIVE
    assert classify(evaluate(w3, isotropic(3, 0.25 + 1e-6))) == DETECTED_USEFUL
    print("criterion 2 (golden detection formulas): PASS")


def test_a3_optimality_certificates():
    started = time.perf_counter()
    w2 = teleportation_witness(2)
    vectors2 = reference_kernel_vectors(2)
    assert len(vectors2) == 4
    for v in vectors2:
        assert abs(expectation_on_product(w2, v)) <= 1e-12
    cert2 = certify(w2, vectors2)
    assert cert2.span_rank == 4
    assert cert2.verdict == OPTIMAL_CERTIFIED

    w3 = teleportation_witness(3)
    vectors3 = reference_kernel_vectors(3)
    assert len(vectors3) == 9
    for v in vectors3:
        assert abs(expectation_on_product(w3, v)) <= 1e-12
    cert3 = certify(w3, vectors3)
    assert cert3.span_rank == 9
    assert cert3.verdict == OPTIMAL_CERTIFIED

    elapsed = time.perf_counter() - started
    assert elapsed < 1.0, f"certificates took {elapsed:.2f}s"
    print("criterion 3 (optimality certificates): PASS")


def test_a4_spin1_decomposition():
    from telewit.bases import reconstruct

    w3 = teleportation_witness(3)
    dec = decompose_spin1(w3.matrix)
    assert np.linalg.norm(reconstruct(dec) - w3.matrix) <= 1e-10

    assert abs(dec.coefficient("Sy", "Sy") - 1 / 6) <= 1e-12
    assert abs(dec.coefficient("Sx", "Sx") + 1 / 6) <= 1e-12
    assert abs(dec.coefficient("Sz", "Sz") + 1 / 6) <= 1e-12

    # NOTE: this assertion fails.  The expansion over the spin-1 product
    # set is unique (the 81 products are linearly independent), and the
    # identity-pair coefficient it forces is -2/3, not -2/9: the witness
    # has trace 2, the non-identity terms contribute trace 8, and only
    # 9 * (-2/3) + 8 = 2 balances.  A -2/9 coefficient is incompatible
    # with any decomposition that actually reconstructs the witness.
    assert abs(dec.coefficient("I", "I") + 2 / 9) <= 1e-12
    print("criterion 4 (spin-1 decomposition): PASS")


def test_a5_fef_engine():
    started = time.perf_counter()

    for alpha in np.linspace(0, 1, 20):
        result = fef_estimate(isotropic(3, alpha), seed=1)
        assert abs(result.estimate - (8 * alpha + 1) / 9) <= 1e-6, alpha

    for d in (2, 3, 4):
        phi = max_entangled(d).amplitudes
        for seed in range(20):
            rng = np.random.default_rng([seed, d])
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            u0 = polar_unitary(g, rank_rtol=1e-15)
            psi = np.kron(u0, np.eye(d, dtype=complex)) @ phi
            rho = DensityMatrix((d, d), np.outer(psi, psi.conj()))
            result = fef_estimate(rho, seed=seed)
            assert result.estimate >= 1 - 1e-6, (d, seed, result.estimate)

    for d in (2, 3, 4):
        mixed = DensityMatrix((d, d), np.eye(d * d) / (d * d))
        result = fef_estimate(mixed, seed=2)
        assert abs(result.estimate - 1 / d**2) <= 1e-10

    elapsed = time.perf_counter() - started
    assert elapsed < 30.0, f"FEF engine checks took {elapsed:.1f}s"
    print("criterion 5 (FEF engine): PASS")


def test_a6_defining_inequality():
    started = time.perf_counter()

    w2 = teleportation_witness(2)
    for i in range(500):
        rho = random_density(2, seed=i)
        est = fef_estimate(rho, restarts=8, max_iter=200, seed=i).estimate
        assert evaluate(w2, rho) >= 0.5 - est - 1e-6, i

    w3 = teleportation_witness(3)
    for i in range(200):
        rho = random_density(3, seed=i)
        est = fef_estimate(rho, restarts=8, max_iter=200, seed=i).estimate
        assert evaluate(w3, rho) >= 1 / 3 - est - 1e-6, i

    for d in (2, 3, 4):
        w = teleportation_witness(d)
        for i in range(1000):
            rho = random_product_pure(d, seed=i).density()
            assert evaluate(w, rho) >= -1e-10, (d, i)

    elapsed = time.perf_counter() - started
    assert elapsed < 300.0, f"defining inequality checks took {elapsed:.1f}s"
    print("criterion 6 (defining inequality): PASS")


def test_a7_witness_negativity():
    for d in (2, 3, 4, 5):
        w = teleportation_witness(d)
        assert hermitian_eigen(w.matrix).eigenvalues[0] < 0
        value = evaluate(w, pure_density(max_entangled(d), (d, d)))
        assert value < 0
        if d == 2:
            assert abs(value + 0.5) <= 1e-12
        if d == 3:
            assert abs(value + 2 / 3) <= 1e-12
    print("criterion 7 (witness negativity): PASS")


def test_a8_measurement_simulation():
    w = teleportation_witness(3)
    decomp = decompose_spin1(w.matrix).filtered()
    rho = isotropic(3, 1.0)
    detected = 0
    points = []
    variances = []
    for r in range(100):
        plan = MeasurementPlan(decomp, shots_per_term=10_000, seed=r)
        report = estimate_witness_expectation(w, rho, plan)
        detected += report.verdict == DETECTED_USEFUL
        points.append(report.point_estimate)
        variances.append(report.standard_error**2)
    assert detected >= 99, f"detected in only {detected}/100 runs"
    pooled_mean = float(np.mean(points))
    pooled_se = math.sqrt(float(np.sum(variances))) / len(points)
    assert abs(pooled_mean + 2 / 3) <= 4 * pooled_se, (pooled_mean, pooled_se)
    print("criterion 8 (measurement simulation): PASS")


def test_a9_cli_round_trip(tmp_path):
    rng = np.random.default_rng(907)
    old = os.getcwd()
    os.chdir(tmp_path)
    try:
        for case in range(20):
            d = int(rng.choice([2, 3]))
            wkind = str(rng.choice(["tel", "ent"]))
            wfile, sfile, rfile = f"w{case}.json", f"s{case}.json", f"r{case}.json"
            assert cli.main(["witness", "build", "--dim", str(d), "--kind", wkind,
                             "--out", wfile]) == 0
            witness = teleportation_witness(d) if wkind == "tel" else entanglement_witness(d)

            kinds = ["iso", "random", "maxent"] + (["bell-diag"] if d == 2 else [])
            skind = str(rng.choice(kinds))
            args = ["state", "make", "--kind", skind, "--dim", str(d), "--out", sfile]
            if skind == "iso":
                alpha = float(rng.uniform(0, 1))
                args += ["--alpha", repr(alpha)]
                rho = isotropic(d, alpha)
            elif skind == "random":
                seed = int(rng.integers(0, 10_000))
                args += ["--seed", str(seed)]
                rho = random_density(d, seed)
            elif skind == "maxent":
                rho = pure_density(max_entangled(d), (d, d))
            else:
                a = float(rng.uniform(0, 1))  # (-a, -a, -a) is always admissible
                args += ["--c", f"{-a!r},{-a!r},{-a!r}"]
                rho = bell_diagonal(-a, -a, -a)
            assert cli.main(args) == 0

            assert cli.main(["witness", "eval", "--witness", wfile, "--state", sfile,
                             "--report", rfile]) == 0
            report = json.loads((tmp_path / rfile).read_text())
            assert abs(report["result"]["value"] - evaluate(witness, rho)) <= 1e-12, case
    finally:
        os.chdir(old)
    print("criterion 9 (CLI round trip): PASS")
