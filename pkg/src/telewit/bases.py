"""Local observable families and product-basis decompositions.

Provides the Pauli matrices, the generalized Gell-Mann matrices for any
dimension, and the spin-1 observable set, together with routines that
expand a bipartite Hermitian operator over products of local observables
and rebuild it from the expansion.

Gell-Mann ordering
------------------
``gellmann_basis(d)`` lists the identity first, then the symmetric
off-diagonal generators ``sym_j_k = |j><k| + |k><j|``, the antisymmetric
generators ``asym_j_k = -i|j><k| + i|k><j|`` (both in lexicographic
``(j, k)`` order, ``0 <= j < k <= d-1``), and finally the ``d - 1``
diagonal generators ``diag_l``.  For ``d = 3`` the conventional
interleaved numbering lambda^1..lambda^8 is recovered by the permutation
``GELLMANN3_CONVENTIONAL_ORDER``.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .linalg import as_matrix, is_hermitian, kron, trace_product

ORTHOGONALITY_TOL = 1e-10
TRACELESS_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10

#: ids of gellmann_basis(3) elements in the conventional lambda^1..lambda^8 order
GELLMANN3_CONVENTIONAL_ORDER = (
    "sym_0_1", "asym_0_1", "diag_1", "sym_0_2",
    "asym_0_2", "sym_1_2", "asym_1_2", "diag_2",
)

#: spin-1 observable id -> power of hbar carried by the operator
SPIN1_HBAR_POWER = {
    "I": 0, "Sx": 1, "Sy": 1, "Sz": 1,
    "Sx2": 2, "Sy2": 2, "{Sx,Sy}": 2, "{Sy,Sz}": 2, "{Sz,Sx}": 2,
}


@dataclass(frozen=True, eq=False)
class LocalBasis:
    """Complete Hermitian operator basis for one local system.

    Elements are (id, matrix) pairs; the non-identity elements are
    traceless and pairwise orthogonal under Tr(B_i B_j).
    """

    dimension: int
    elements: Tuple[Tuple[str, np.ndarray], ...]
    includes_identity: bool
    basis_id: str

    def __post_init__(self):
        d = self.dimension
        if len(self.elements) != d * d:
            raise ValueError(f"a complete basis for d={d} needs {d * d} elements")
        mats = [m for _, m in self.elements]
        for label, m in self.elements:
            if not is_hermitian(m):
                raise ValueError(f"basis element {label} is not Hermitian")
            if label != "I" and abs(np.trace(m)) > TRACELESS_TOL:
                raise ValueError(f"basis element {label} is not traceless")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if abs(trace_product(mats[i], mats[j])) > ORTHOGONALITY_TOL:
                    raise ValueError(
                        f"elements {self.elements[i][0]} and {self.elements[j][0]} "
                        "are not orthogonal"
                    )

    @property
    def ids(self):
        return tuple(label for label, _ in self.elements)

    def matrix(self, label):
        for lab, m in self.elements:
            if lab == label:
                return m
        raise KeyError(label)


@dataclass(frozen=True)
class LocalBasisDecomposition:
    """Expansion of a bipartite operator over products of local observables.

    ``terms`` holds (coefficient, left id, right id) triples; coefficients
    are real because the source operator is Hermitian and every local
    observable is Hermitian.
    """

    basis_id: str
    terms: Tuple[Tuple[float, str, str], ...]

    def coefficient(self, left_id, right_id):
        for c, a, b in self.terms:
            if a == left_id and b == right_id:
                return c
        raise KeyError((left_id, right_id))

    def nonzero_terms(self, tol=1e-12):
        return tuple(t for t in self.terms if abs(t[0]) > tol)

    def filtered(self, tol=1e-13):
        """Copy with coefficients of magnitude <= tol dropped."""
        return LocalBasisDecomposition(self.basis_id, self.nonzero_terms(tol))


def pauli_basis():
    """Identity plus the three Pauli matrices."""
    i2 = np.eye(2, dtype=np.complex128)
    sx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    sz = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return LocalBasis(2, (("I", i2), ("sx", sx), ("sy", sy), ("sz", sz)), True, "pauli")


def _symmetric(j, k, d):
    m = np.zeros((d, d), dtype=np.complex128)
    m[j, k] = 1
    m[k, j] = 1
    return m


def _antisymmetric(j, k, d):
    m = np.zeros((d, d), dtype=np.complex128)
    m[j, k] = -1j
    m[k, j] = 1j
    return m


def _diagonal(l, d):
    m = np.zeros((d, d), dtype=np.complex128)
    m[np.arange(l), np.arange(l)] = 1
    m[l, l] = -l
    return np.sqrt(2.0 / (l * (l + 1))) * m


def gellmann_basis(d):
    """Generalized Gell-Mann basis for local dimension d (identity included)."""
    if d < 2:
        raise ValueError("gellmann_basis requires d >= 2")
    elements = [("I", np.eye(d, dtype=np.complex128))]
    elements += [(f"sym_{j}_{k}", _symmetric(j, k, d)) for j in range(d) for k in range(j + 1, d)]
    elements += [(f"asym_{j}_{k}", _antisymmetric(j, k, d)) for j in range(d) for k in range(j + 1, d)]
    elements += [(f"diag_{l}", _diagonal(l, d)) for l in range(1, d)]
    return LocalBasis(d, tuple(elements), True, f"gellmann{d}")


def antisymmetric_gellmann(d):
    """The d(d-1)/2 antisymmetric generators in lexicographic (j, k) order."""
    if d < 2:
        raise ValueError("antisymmetric_gellmann requires d >= 2")
    return [_antisymmetric(j, k, d) for j in range(d) for k in range(j + 1, d)]


def spin1_operators():
    """Spin-1 observable set: I, Sx, Sy, Sz, Sx^2, Sy^2 and the anticommutators.

    hbar = 1 internally; ``SPIN1_HBAR_POWER`` records the power of hbar each
    observable carries so reports can display symbolic units.  The nine
    operators are linearly independent and span the 3x3 Hermitian space, but
    they are not mutually orthogonal, so expansions over them are computed by
    a linear solve rather than by trace inner products.
    """
    s = 1.0 / np.sqrt(2.0)
    sx = s * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.complex128)
    sy = s * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=np.complex128)
    sz = np.diag([1.0, 0.0, -1.0]).astype(np.complex128)

    def anti(a, b):
        return a @ b + b @ a

    return [
        ("I", np.eye(3, dtype=np.complex128)),
        ("Sx", sx), ("Sy", sy), ("Sz", sz),
        ("Sx2", sx @ sx), ("Sy2", sy @ sy),
        ("{Sx,Sy}", anti(sx, sy)), ("{Sy,Sz}", anti(sy, sz)), ("{Sz,Sx}", anti(sz, sx)),
    ]


def _basis_elements(basis_id):
    """Resolve a basis id to its (id, matrix) list."""
    if basis_id == "pauli":
        return list(pauli_basis().elements)
    if basis_id == "spin1":
        return spin1_operators()
    if basis_id.startswith("gellmann"):
        return list(gellmann_basis(int(basis_id[len("gellmann"):])).elements)
    raise ValueError(f"unknown basis id {basis_id!r}")


def reconstruct(decomposition):
    """Rebuild the bipartite matrix encoded by a decomposition."""
    lookup = dict(_basis_elements(decomposition.basis_id))
    d = lookup["I"].shape[0]
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for c, left, right in decomposition.terms:
        out += c * kron(lookup[left], lookup[right])
    return out


def _check_reconstruction(decomp, op):
    err = np.linalg.norm(reconstruct(decomp) - op)
    if err > RECONSTRUCTION_TOL:
        raise ValueError(f"decomposition does not reconstruct the operator (residual {err:.3e})")


def decompose_bipartite(op, basis):
    """Expand a Hermitian bipartite operator over an orthogonal product basis.

    Coefficients are c_ij = Tr(op (B_i (x) B_j)) / (Tr B_i^2 Tr B_j^2); the
    expansion is verified to rebuild ``op`` before it is returned.
    """
    op = as_matrix(op)
    d = basis.dimension
    if op.shape != (d * d, d * d):
        raise ValueError(f"operator shape {op.shape} does not match basis dimension {d}")
    if not is_hermitian(op):
        raise ValueError("operator is not Hermitian")
    norms = {label: trace_product(m, m).real for label, m in basis.elements}
    terms = []
    for li, lm in basis.elements:
        for ri, rm in basis.elements:
            c = trace_product(op, kron(lm, rm)) / (norms[li] * norms[ri])
            if abs(c.imag) > 1e-10:
                raise ValueError(f"non-real coefficient on ({li}, {ri}): {c}")
            terms.append((float(c.real), li, ri))
    decomp = LocalBasisDecomposition(basis.basis_id, tuple(terms))
    _check_reconstruction(decomp, op)
    return decomp


def decompose_spin1(op):
    """Expand a 9x9 Hermitian operator over the 81 spin-1 observable products.

    The spin-1 set is linearly independent but not orthogonal, so the
    coefficients come from a least-squares solve (exact at this size; the
    minimum-norm solution guards the degenerate case, which cannot occur for
    the fixed spanning set).
    """
    op = as_matrix(op)
    if op.shape != (9, 9):
        raise ValueError(f"spin-1 decomposition needs a 9x9 operator, got {op.shape}")
    if not is_hermitian(op):
        raise ValueError("operator is not Hermitian")
    ops = spin1_operators()
    labels = [(li, ri) for li, _ in ops for ri, _ in ops]
    columns = np.stack(
        [kron(lm, rm).reshape(-1) for _, lm in ops for _, rm in ops], axis=1
    )
    coef, _, rank, _ = np.linalg.lstsq(columns, op.reshape(-1), rcond=None)
    if rank < len(labels):
        raise ValueError(f"spin-1 product system is singular (rank {rank})")
    if np.abs(coef.imag).max() > 1e-10:
        raise ValueError("non-real coefficient in spin-1 expansion")
    terms = tuple(
        (float(c), li, ri) for c, (li, ri) in zip(coef.real, labels)
    )
    decomp = LocalBasisDecomposition("spin1", terms)
    _check_reconstruction(decomp, op)
    return decomp


def spin1_term_hbar_power(left_id, right_id):
    """Power of hbar carried by a spin-1 product term (for display only)."""
    return SPIN1_HBAR_POWER[left_id] + SPIN1_HBAR_POWER[right_id]
