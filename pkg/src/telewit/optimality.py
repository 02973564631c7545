"""Optimality certificates via spanning sets of zero-expectation product vectors.

A witness is certified optimal when the product vectors on which its
expectation vanishes span the whole composite space: no finer witness can
then exist.  The criterion is sufficient, not necessary, so a failed search
is reported as incomplete rather than as evidence of non-optimality.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import seeding
from .linalg import span_rank
from .states import ProductVector, PureState, product_vector

ZERO_EXPECTATION_TOL = 1e-9
SPAN_RANK_RTOL = 1e-8

OPTIMAL_CERTIFIED = "optimal_certified"
NOT_CERTIFIED = "not_certified"

SEARCH_INCOMPLETE_NOTE = "search incomplete - not evidence of non-optimality"


def expectation_on_product(w, v):
    """<e,f| W |e,f> for a product vector; real to 1e-10."""
    emb = v.embedded
    if emb.size != w.matrix.shape[0]:
        raise ValueError(
            f"dimension mismatch: witness {w.matrix.shape}, vector length {emb.size}"
        )
    val = emb.conj() @ w.matrix @ emb
    if abs(val.imag) > 1e-10:
        raise ValueError(f"non-real product expectation: {val}")
    return float(val.real)


def reference_kernel_vectors(d):
    """The published spanning sets of zero-expectation product vectors.

    Known in closed form for d = 2 and d = 3 only; other dimensions must be
    searched numerically.
    """
    if d == 2:
        raw = [
            ([1, 1j], [1, -1j]),
            ([1, 1], [1, 1]),
            ([1, 0], [1, 0]),
            ([0, 1], [0, 1]),
        ]
    elif d == 3:
        raw = [
            ([1, 0, 0], [1, 0, 0]),
            ([0, 1, 0], [0, 1, 0]),
            ([0, 0, 1], [0, 0, 1]),
            ([1, 1, 1], [1, 1, 1]),
            ([1, 1j, 0], [1, -1j, 0]),
            ([1, 0, 1j], [1, 0, -1j]),
            ([0, 1, 1j], [0, 1, -1j]),
            ([1, -1, -1], [1, -1, -1]),
            ([1, 1, -1], [1, 1, -1]),
        ]
    else:
        raise ValueError(f"no built-in kernel vectors for d = {d}")
    return [product_vector(e, f) for e, f in raw]


@dataclass(frozen=True, eq=False)
class OptimalityCertificate:
    witness_kind: str
    d: int
    vectors: Tuple[ProductVector, ...]
    expectations: Tuple[float, ...]
    span_rank: int
    required_rank: int
    verdict: str
    zero_tol: float
    rank_tol: float
    note: Optional[str] = None


def certify(w, vectors, tol=ZERO_EXPECTATION_TOL, rank_tol=SPAN_RANK_RTOL):
    """Certificate from a candidate set of product vectors.

    ``optimal_certified`` requires every expectation to vanish within
    ``tol`` and the embedded vectors to span the d^2-dimensional composite
    space; anything less is ``not_certified`` (with no claim either way).
    """
    if not vectors:
        raise ValueError("certify requires a nonempty vector list")
    d = w.d
    expectations = tuple(expectation_on_product(w, v) for v in vectors)
    rank = span_rank([v.embedded for v in vectors], tol=rank_tol)
    ok = max(abs(x) for x in expectations) <= tol and rank == d * d
    return OptimalityCertificate(
        witness_kind=w.kind,
        d=d,
        vectors=tuple(vectors),
        expectations=expectations,
        span_rank=rank,
        required_rank=d * d,
        verdict=OPTIMAL_CERTIFIED if ok else NOT_CERTIFIED,
        zero_tol=tol,
        rank_tol=rank_tol,
        note=None if ok else SEARCH_INCOMPLETE_NOTE,
    )


def _contract_left(w4, e):
    """d x d operator <e, .| W |e, .> acting on the right factor."""
    return np.einsum("i,ijkl,k->jl", e.conj(), w4, e)


def _contract_right(w4, f):
    """d x d operator <., f| W |., f> acting on the left factor."""
    return np.einsum("j,ijkl,l->ik", f.conj(), w4, f)


def _min_eigvec(h):
    vals, vecs = np.linalg.eigh(h)
    return vecs[:, 0], float(vals[0])


def search_kernel_vectors(w, attempts=100, seed=0, tol=ZERO_EXPECTATION_TOL,
                          max_sweeps=200):
    """Hunt for zero-expectation product vectors by alternating descent.

    With one factor fixed, the expectation is a quadratic form whose exact
    minimizer is the bottom eigenvector of the partially contracted witness,
    so each half-step is an exact minimization and the descent is monotone.
    Vectors are kept only when they vanish within ``tol`` and strictly grow
    the running span; the search stops early once the span is complete.
    Returning fewer than d^2 vectors means the search was incomplete, not
    that no spanning set exists.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    d = w.d
    w4 = w.matrix.reshape(d, d, d, d)
    kept = []
    kept_embedded = []
    for attempt in range(attempts):
        rng = seeding.stream(seed, attempt)
        e = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        e /= np.linalg.norm(e)
        f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        f /= np.linalg.norm(f)
        val = float((np.kron(e, f).conj() @ w.matrix @ np.kron(e, f)).real)
        for _ in range(max_sweeps):
            e, val_e = _min_eigvec(_contract_right(w4, f))
            assert val_e <= val + 1e-12, "alternating descent lost monotonicity"
            f, val_f = _min_eigvec(_contract_left(w4, e))
            assert val_f <= val_e + 1e-12, "alternating descent lost monotonicity"
            if val - val_f < 1e-14:
                val = val_f
                break
            val = val_f
        if abs(val) > tol:
            continue
        candidate = ProductVector(PureState(d, e), PureState(d, f))
        if span_rank(kept_embedded + [candidate.embedded]) > len(kept_embedded):
            kept.append(candidate)
            kept_embedded.append(candidate.embedded)
        if len(kept) == d * d:
            break
    return kept
