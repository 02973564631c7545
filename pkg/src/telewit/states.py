"""Reference states and seeded random test states as validated density matrices."""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from . import seeding
from .bases import pauli_basis
from .linalg import as_matrix, is_hermitian, kron, partial_transpose
from .linalg import partial_trace as _partial_trace_matrix

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm complex state vector."""

    dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amp.size != self.dim:
            raise ValueError(f"amplitude length {amp.size} does not match dim {self.dim}")
        if not (np.all(np.isfinite(amp.real)) and np.all(np.isfinite(amp.imag))):
            raise ValueError("amplitudes contain NaN or Inf")
        if abs(np.linalg.norm(amp) - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(np.linalg.norm(amp) - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", amp)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Trace-one positive-semidefinite operator with recorded local dimensions."""

    dims: Tuple[int, int]
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        da, db = self.dims
        if m.shape != (da * db, da * db):
            raise ValueError(f"matrix shape {m.shape} does not match dims {self.dims}")
        if not is_hermitian(m, HERMITICITY_TOL):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr} is not 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def local_dim(self):
        da, db = self.dims
        if da != db:
            raise ValueError(f"dims {self.dims} are not of d x d form")
        return da


@dataclass(frozen=True, eq=False)
class ProductVector:
    """Pair of local pure states together with their tensor-product embedding."""

    e: PureState
    f: PureState
    embedded: np.ndarray = field(default=None)
    normalized: bool = True

    def __post_init__(self):
        emb = np.kron(self.e.amplitudes, self.f.amplitudes)
        if self.embedded is None:
            object.__setattr__(self, "embedded", emb)
        else:
            given = np.asarray(self.embedded, dtype=np.complex128).reshape(-1)
            if np.linalg.norm(given - emb) > NORM_TOL:
                raise ValueError("embedded vector is not the tensor product of e and f")
            object.__setattr__(self, "embedded", given)

    @property
    def local_dim(self):
        return self.e.dim

    def density(self):
        v = self.embedded
        d = self.local_dim
        return DensityMatrix((d, d), np.outer(v, v.conj()))


def product_vector(e_amplitudes, f_amplitudes):
    """Normalize two local vectors and embed their product."""
    e = np.asarray(e_amplitudes, dtype=np.complex128).reshape(-1)
    f = np.asarray(f_amplitudes, dtype=np.complex128).reshape(-1)
    return ProductVector(
        PureState(e.size, e / np.linalg.norm(e)),
        PureState(f.size, f / np.linalg.norm(f)),
    )


def max_entangled(d):
    """(1/sqrt(d)) sum_k |kk> on C^d (x) C^d."""
    if d < 2:
        raise ValueError("max_entangled requires d >= 2")
    amp = np.zeros(d * d, dtype=np.complex128)
    amp[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return PureState(d * d, amp)


def singlet():
    """(|01> - |10>) / sqrt(2)."""
    amp = np.zeros(4, dtype=np.complex128)
    amp[1] = 1.0 / np.sqrt(2.0)
    amp[2] = -1.0 / np.sqrt(2.0)
    return PureState(4, amp)


def pure_density(psi, dims):
    """Projector onto a pure state as a DensityMatrix."""
    v = psi.amplitudes
    return DensityMatrix(dims, np.outer(v, v.conj()))


def bell_diagonal(c1, c2, c3):
    """Two-qubit state (1/4)(I (x) I + sum_i c_i sigma_i (x) sigma_i).

    Positivity requires the four values (1 -+ c1 -+ c2 -+ c3)/4 with an even
    number of minus signs to be non-negative; violations are rejected with
    the offending eigenvalue.
    """
    eigs = np.array([
        1 - c1 - c2 - c3,
        1 - c1 + c2 + c3,
        1 + c1 - c2 + c3,
        1 + c1 + c2 - c3,
    ]) / 4.0
    if eigs.min() < -PSD_TOL:
        raise ValueError(
            f"coefficients ({c1}, {c2}, {c3}) give negative eigenvalue {eigs.min():.6g}"
        )
    basis = pauli_basis()
    i2 = basis.matrix("I")
    m = kron(i2, i2).astype(np.complex128)
    for c, label in zip((c1, c2, c3), ("sx", "sy", "sz")):
        s = basis.matrix(label)
        m += c * kron(s, s)
    return DensityMatrix((2, 2), m / 4.0)


def isotropic(d, alpha):
    """Mixture alpha |Phi><Phi| + (1 - alpha)/d^2 I; alpha in [-1/(d^2-1), 1]."""
    lo = -1.0 / (d * d - 1)
    if alpha < lo - 1e-12 or alpha > 1.0 + 1e-12:
        raise ValueError(f"alpha {alpha} outside [{lo:.6g}, 1]")
    phi = max_entangled(d).amplitudes
    m = alpha * np.outer(phi, phi.conj()) + (1.0 - alpha) / (d * d) * np.eye(d * d)
    return DensityMatrix((d, d), m)


def random_density(d, seed):
    """Full-rank random state on C^d (x) C^d: G G^dag / Tr(G G^dag), Ginibre G."""
    if d < 2:
        raise ValueError("random_density requires d >= 2")
    rng = seeding.stream(seed)
    n = d * d
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return DensityMatrix((d, d), m / np.trace(m).real)


def _random_unit_vector(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_product_pure(d, seed):
    """Product of two independent random unit vectors on C^d."""
    if d < 2:
        raise ValueError("random_product_pure requires d >= 2")
    rng = seeding.stream(seed)
    e = _random_unit_vector(rng, d)
    f = _random_unit_vector(rng, d)
    return ProductVector(PureState(d, e), PureState(d, f))


def random_separable(d, terms, seed):
    """Uniform mixture of random product projectors (separable by construction)."""
    if terms < 1:
        raise ValueError("random_separable requires terms >= 1")
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for k in range(terms):
        v = random_product_pure(d, seeding.derive_int(seed, k)).embedded
        m += np.outer(v, v.conj())
    return DensityMatrix((d, d), m / terms)


def partial_trace(rho, keep="A"):
    """Reduced state of one subsystem of a DensityMatrix."""
    return _partial_trace_matrix(rho.matrix, rho.dims, keep=keep)


def ppt_min_eigenvalue(rho):
    """Smallest eigenvalue of the partial transpose (PPT check helper)."""
    return float(np.linalg.eigvalsh(partial_transpose(rho.matrix, rho.dims, "A"))[0])
