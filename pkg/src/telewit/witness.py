"""Construction, evaluation, and validation of teleportation witnesses.

The entanglement witness for local dimension d is the partial transpose of
the maximally entangled projector.  The teleportation witness is built from
it by adding the pair sum of antisymmetric Gell-Mann generators:

    W = (1/d) sum_{j<k} A_jk (x) A_jk + (1/d) I - (|Phi><Phi|)^{T_A}

A state rho is flagged as useful for teleportation when Tr(W rho) < 0; a
non-negative value is always inconclusive, because the witness only bounds
the fully entangled fraction from one side.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import seeding
from .bases import antisymmetric_gellmann
from .linalg import hermitian_eigen, is_hermitian, kron, partial_transpose, trace_product
from .states import DensityMatrix, max_entangled, random_density, random_separable

DETECTED_USEFUL = "detected_useful"
INCONCLUSIVE = "inconclusive"

NEGATIVITY_TOL = 1e-10
CLASSIFY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    """Hermitian operator with at least one negative eigenvalue."""

    kind: str  # "entanglement" | "teleportation"
    d: int
    matrix: np.ndarray
    provenance: str
    min_eigenvalue: float = field(init=False)

    def __post_init__(self):
        if self.kind not in ("entanglement", "teleportation"):
            raise ValueError(f"unknown witness kind {self.kind!r}")
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.d**2, self.d**2):
            raise ValueError(f"matrix shape {m.shape} does not match d={self.d}")
        if not is_hermitian(m):
            raise ValueError("witness is not Hermitian")
        lo = float(np.linalg.eigvalsh(m)[0])
        if lo >= -NEGATIVITY_TOL:
            raise ValueError(f"witness has no negative eigenvalue (min {lo:.3e})")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "min_eigenvalue", lo)


def entanglement_witness(d):
    """Partial transpose of the maximally entangled projector on C^d (x) C^d."""
    phi = max_entangled(d).amplitudes
    w = partial_transpose(np.outer(phi, phi.conj()), (d, d), "A")
    return WitnessOperator(
        "entanglement", d, w, "partial transpose of maximally entangled projector"
    )


def teleportation_witness(d):
    """Teleportation witness from the antisymmetric-generator construction."""
    if d < 2:
        raise ValueError("teleportation_witness requires d >= 2")
    ident = np.eye(d * d, dtype=np.complex128)
    pair_sum = sum(kron(a, a) for a in antisymmetric_gellmann(d))
    w = pair_sum / d + ident / d - entanglement_witness(d).matrix
    return WitnessOperator(
        "teleportation", d, w, "antisymmetric Gell-Mann pair sum construction"
    )


def evaluate(w, rho):
    """Tr(W rho); the imaginary part must vanish to 1e-10."""
    if rho.matrix.shape != w.matrix.shape:
        raise ValueError(
            f"dimension mismatch: witness {w.matrix.shape}, state {rho.matrix.shape}"
        )
    val = trace_product(w.matrix, rho.matrix)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"non-real witness expectation: {val}")
    return float(val.real)


def classify(value, tol=CLASSIFY_TOL):
    """Verdict for a witness expectation: strictly negative detects usefulness.

    Values within +-tol of zero are inconclusive so boundary states are
    never falsely certified; a non-negative value never certifies
    uselessness either.
    """
    return DETECTED_USEFUL if value < -tol else INCONCLUSIVE


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the probabilistic witness validity checks.

    Every sampled state's derived seed is recorded so a failure can be
    replayed exactly.
    """

    kind: str
    d: int
    samples: int
    master_seed: int
    tol: float
    hermitian: bool
    min_eigenvalue: float
    has_negative_eigenvalue: bool
    fef_bound_failures: Tuple[dict, ...]
    separable_failures: Tuple[dict, ...]
    state_seeds: Tuple[int, ...]
    separable_seeds: Tuple[int, ...]
    passed: bool
    caveat: Optional[str] = None


def _default_fef_bound(rho, seed):
    from .fef import fef_estimate

    return fef_estimate(rho, restarts=8, max_iter=200, tol=1e-10, seed=seed).estimate


def validate(w, samples=200, seed=0, tol=1e-6, fef_bound=None):
    """Check the witness contract on random states.

    Four checks: (a) Hermiticity, (b) a negative eigenvalue, (c) on random
    full-rank states, Tr(W rho) >= 1/d - F_est(rho) - tol where F_est is a
    fully-entangled-fraction lower bound, and (d) on random separable
    states, Tr(W sigma) >= -tol.  ``fef_bound`` may override the default
    engine; it receives (rho, derived_seed) and returns the bound.
    """
    if fef_bound is None:
        fef_bound = _default_fef_bound
    d = w.d
    hermitian = is_hermitian(w.matrix)
    if hermitian:
        min_eig = float(hermitian_eigen(w.matrix).eigenvalues[0])
    else:
        min_eig = float(np.linalg.eigvalsh((w.matrix + w.matrix.conj().T) / 2)[0])
    negative = min_eig < -NEGATIVITY_TOL

    state_seeds = tuple(seeding.derive_int(seed, 0, i) for i in range(samples))
    sep_seeds = tuple(seeding.derive_int(seed, 1, i) for i in range(samples))

    fef_failures = []
    sep_failures = []
    if hermitian:
        for s in state_seeds:
            rho = random_density(d, s)
            value = evaluate(w, rho)
            bound = fef_bound(rho, s)
            if value < 1.0 / d - bound - tol:
                fef_failures.append({"seed": s, "value": value, "fef_bound": bound})
        for s in sep_seeds:
            sigma = random_separable(d, terms=4, seed=s)
            value = evaluate(w, sigma)
            if value < -tol:
                sep_failures.append({"seed": s, "value": value})

    passed = hermitian and negative and not fef_failures and not sep_failures
    caveat = None
    if w.kind == "teleportation" and d > 3:
        caveat = (
            "validity for d > 3 is numerically supported by sampling, not proven"
        )
    return ValidationReport(
        kind=w.kind,
        d=d,
        samples=samples,
        master_seed=seed,
        tol=tol,
        hermitian=hermitian,
        min_eigenvalue=min_eig,
        has_negative_eigenvalue=negative,
        fef_bound_failures=tuple(fef_failures),
        separable_failures=tuple(sep_failures),
        state_seeds=state_seeds,
        separable_seeds=sep_seeds,
        passed=passed,
        caveat=caveat,
    )
