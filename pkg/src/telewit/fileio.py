"""File formats and report serialization.

Matrix files are JSON with separate real and imaginary 2-D arrays, decimal
floats at full double precision (shortest round-trip form, value-identical
after parse/serialize), and a metadata map.  Composite indices are
row-major with subsystem A as the first (slow) tensor factor; the header
records this convention because it is the most common interop pitfall.

Reports are JSON documents carrying the command, input paths with SHA-256
hashes, every seed needed for exact replay, the result payload, and the
wall time.
"""

import hashlib
import json
import time
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .bases import spin1_term_hbar_power
from .states import DensityMatrix
from .witness import WitnessOperator

SCHEMA_VERSION = "1"
INDEX_CONVENTION = "row-major; first tensor factor is subsystem A"


@dataclass(frozen=True, eq=False)
class MatrixFile:
    schema_version: str
    kind: str  # "state" | "witness" | "operator"
    dims: Tuple[int, ...]
    matrix: np.ndarray
    metadata: dict

    def as_density(self):
        if self.kind != "state":
            raise ValueError(f"file holds a {self.kind}, not a state")
        if len(self.dims) != 2:
            raise ValueError(f"state file needs bipartite dims, got {self.dims}")
        return DensityMatrix((self.dims[0], self.dims[1]), self.matrix)

    def as_witness(self):
        if self.kind != "witness":
            raise ValueError(f"file holds a {self.kind}, not a witness")
        da, db = self.dims
        if da != db:
            raise ValueError(f"witness dims {self.dims} are not of d x d form")
        return WitnessOperator(
            self.metadata.get("witness_kind", "teleportation"),
            da,
            self.matrix,
            self.metadata.get("provenance", "loaded from file"),
        )


def save_matrix(path, matrix, dims, kind, metadata=None):
    m = np.asarray(matrix, dtype=np.complex128)
    meta = {"index_convention": INDEX_CONVENTION}
    if metadata:
        meta.update(metadata)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "dims": list(int(x) for x in dims),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
        "metadata": meta,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_matrix(path):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    re = np.asarray(doc["re"], dtype=np.float64)
    im = np.asarray(doc["im"], dtype=np.float64)
    if re.shape != im.shape:
        raise ValueError(f"re/im shapes differ: {re.shape} vs {im.shape}")
    dims = tuple(int(x) for x in doc["dims"])
    n = int(np.prod(dims)) if len(dims) > 1 else dims[0]
    if re.shape != (n, n):
        raise ValueError(f"matrix shape {re.shape} does not match dims {dims}")
    return MatrixFile(
        schema_version=doc["schema_version"],
        kind=doc["kind"],
        dims=dims,
        matrix=re + 1j * im,
        metadata=doc.get("metadata", {}),
    )


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _complex_vector(v):
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    return {"re": v.real.tolist(), "im": v.imag.tolist()}


def evaluation_payload(value, verdict, tol):
    return {"value": value, "verdict": verdict, "tolerance": tol}


def fef_payload(result):
    return {
        "d": result.d,
        "singlet_fraction": result.lower_bound,
        "estimate": result.estimate,
        "estimate_is_lower_bound": True,
        "maximizer": _complex_vector(result.maximizer.reshape(-1)),
        "restarts_used": result.restarts_used,
        "converged": result.converged,
    }


def validation_payload(report):
    return {
        "kind": report.kind,
        "d": report.d,
        "samples": report.samples,
        "master_seed": report.master_seed,
        "tolerance": report.tol,
        "hermitian": report.hermitian,
        "min_eigenvalue": report.min_eigenvalue,
        "has_negative_eigenvalue": report.has_negative_eigenvalue,
        "fef_bound_failures": list(report.fef_bound_failures),
        "separable_failures": list(report.separable_failures),
        "state_seeds": list(report.state_seeds),
        "separable_seeds": list(report.separable_seeds),
        "passed": report.passed,
        "caveat": report.caveat,
        "noise_model": "shot noise only",
    }


def certificate_payload(cert):
    return {
        "witness_kind": cert.witness_kind,
        "d": cert.d,
        "verdict": cert.verdict,
        "span_rank": cert.span_rank,
        "required_rank": cert.required_rank,
        "zero_tolerance": cert.zero_tol,
        "rank_tolerance": cert.rank_tol,
        "expectations": list(cert.expectations),
        "note": cert.note,
        "vectors": [
            {"e": _complex_vector(v.e.amplitudes), "f": _complex_vector(v.f.amplitudes)}
            for v in cert.vectors
        ],
    }


def decomposition_payload(decomp, drop_tol=1e-13):
    terms = []
    for c, left, right in decomp.nonzero_terms(drop_tol):
        term = {"coefficient": c, "left": left, "right": right}
        if decomp.basis_id == "spin1":
            term["hbar_power"] = spin1_term_hbar_power(left, right)
        terms.append(term)
    return {"basis": decomp.basis_id, "terms": terms, "drop_tolerance": drop_tol}


def estimate_payload(report):
    return {
        "point_estimate": report.point_estimate,
        "standard_error": report.standard_error,
        "verdict": report.verdict,
        "confidence_z": report.confidence_z,
        "seed": report.seed,
        "noise_model": "shot noise only",
        "per_term": [
            {
                "left": t.left_id,
                "right": t.right_id,
                "coefficient": t.coefficient,
                "mean": t.mean,
                "variance": t.variance,
                "shots": t.shots,
            }
            for t in report.per_term
        ],
    }


def make_report(command, input_paths, payload_kind, payload, started_at):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": [
            {"path": str(p), "sha256": file_sha256(p)} for p in input_paths
        ],
        "result_kind": payload_kind,
        "result": payload,
        "wall_time_s": time.perf_counter() - started_at,
    }


def write_report(path, report):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=1)
        fh.write("\n")
