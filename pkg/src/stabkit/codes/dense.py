"""Dense code-space vectors and the Knill-Laflamme conditions."""
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ResourceLimitError
from ..pauli import apply_to_state

KL_TOL = 1e-10


def dense_limit():
    return int(os.environ.get("STABKIT_DENSE_LIMIT", "16"))


def _project(ops, psi):
    for g in ops:
        psi = 0.5 * (psi + apply_to_state(g, psi))
    return psi


def _fix_phase(psi):
    i = np.argmax(np.abs(psi) > 1e-9)
    return psi * (abs(psi[i]) / psi[i])


def codeword_basis(code):
    """Logical computational basis |j> of the code space as dense vectors.

    |0...0> is the projection of the first computational basis state that
    survives the stabilizer and logical-Z projectors; the rest follow by
    applying logical X operators.  Index j uses logical qubit 0 as MSB.
    """
    n = code.n
    if n > dense_limit():
        raise ResourceLimitError(f"dense simulation limited to {dense_limit()} qubits")
    ops = list(code.generators) + list(code.logical_z)
    for b in range(1 << n):
        psi = np.zeros(1 << n, complex)
        psi[b] = 1.0
        psi = _project(ops, psi)
        nrm = np.linalg.norm(psi)
        if nrm > 1e-6:
            break
    zero = _fix_phase(psi / nrm)
    k = code.k
    basis = []
    for j in range(1 << k):
        v = zero
        for i in range(k):
            if (j >> (k - 1 - i)) & 1:
                v = apply_to_state(code.logical_x[i], v)
        basis.append(v)
    return basis


def code_projector_apply(code, psi):
    return _project(code.generators, psi)


@dataclass
class KLReport:
    c_matrix: np.ndarray
    is_code: bool
    is_degenerate: bool
    max_offdiag: float
    max_diag_spread: float


def verify_knill_laflamme(code, errors, tol=KL_TOL):
    """Check <psi_i|E_a^dag E_b|psi_j> = C_ab delta_ij over the code basis."""
    basis = codeword_basis(code)
    m = len(errors)
    if m == 0:
        return KLReport(np.zeros((0, 0), complex), True, False, 0.0, 0.0)
    psi = np.array(basis)                                   # (K, N)
    ev = np.array([[apply_to_state(e, v) for v in basis] for e in errors])  # (m, K, N)
    g = np.einsum("aiN,bjN->abij", ev.conj(), ev)          # (m, m, K, K)
    kdim = psi.shape[0]
    off = g.copy()
    for i in range(kdim):
        off[:, :, i, i] = 0
    max_off = float(np.abs(off).max()) if kdim > 1 else 0.0
    diag = np.stack([g[:, :, i, i] for i in range(kdim)])
    spread = float(np.abs(diag - diag[0]).max())
    c = g[:, :, 0, 0]
    is_code = max_off <= tol and spread <= tol
    sv = np.linalg.svd(c, compute_uv=False)
    rank = int(np.count_nonzero(sv > tol))
    return KLReport(c, is_code, rank < m, max_off, spread)
