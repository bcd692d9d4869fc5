"""Dense complex Hermitian-operator primitives.

All entropic quantities are in bits (base-2 logarithms). The incoherent
basis is fixed to the computational basis |0>, ..., |d-1| throughout; any
diagonal/off-diagonal language below refers to it.

Relative entropy convention: no (tr Y - tr X) correction term is added for
subnormalized operators. Per-element values can therefore be negative, but
in every complete-POVM sum computed by this package the corrections cancel
exactly, and the split identity
D(X || dephase(Y)) = S(dephase(X)) - S(X) + D(dephase(X) || dephase(Y))
holds verbatim.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPsd

HERM_TOL = 1e-10    # max-abs deviation allowed from X = X^dagger
PSD_TOL = 1e-9      # eigenvalues below -PSD_TOL fail positivity checks
EIG_CLIP = 1e-12    # eigenvalues at or below this are treated as zero
SUPPORT_TOL = 1e-9  # mass tolerated outside the support of the reference


class HermitianOperator:
    """Immutable square complex matrix, validated Hermitian on construction."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] < 1:
            raise DimensionMismatch("dimension must be at least 1")
        deviation = float(np.max(np.abs(m - m.conj().T)))
        if deviation > HERM_TOL:
            raise NotHermitian(
                f"max deviation from Hermiticity {deviation:.3e} exceeds {HERM_TOL}"
            )
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


def identity(dim: int) -> HermitianOperator:
    return HermitianOperator(np.eye(dim))


def basis_projector(index: int, dim: int) -> HermitianOperator:
    """|i><i| in the incoherent basis."""
    if not 0 <= index < dim:
        raise DimensionMismatch(f"basis index {index} out of range for dim {dim}")
    m = np.zeros((dim, dim), dtype=complex)
    m[index, index] = 1.0
    return HermitianOperator(m)


def projector(vector) -> HermitianOperator:
    """|v><v| for an arbitrary (not necessarily normalized) vector."""
    v = np.asarray(vector, dtype=complex).reshape(-1)
    return HermitianOperator(np.outer(v, v.conj()))


def diagonal_operator(values) -> HermitianOperator:
    return HermitianOperator(np.diag(np.asarray(values, dtype=float)))


def _check_psd_spectrum(eigenvalues: np.ndarray, what: str) -> None:
    if eigenvalues.size and eigenvalues[0] < -PSD_TOL:
        raise NotPsd(f"{what}: minimum eigenvalue {eigenvalues[0]:.3e} below -{PSD_TOL}")


def von_neumann_entropy(x: HermitianOperator) -> float:
    """-sum_k lambda_k log2 lambda_k over eigenvalues above EIG_CLIP.

    The operator need not have unit trace (POVM elements are typically
    subnormalized), so the result can be negative. 0 log 0 := 0.
    """
    eig = np.linalg.eigvalsh(x.matrix)
    _check_psd_spectrum(eig, "entropy argument")
    lam = eig[eig > EIG_CLIP]
    if lam.size == 0:
        return 0.0
    return float(-np.sum(lam * np.log2(lam)))


def relative_entropy(x: HermitianOperator, y: HermitianOperator) -> float:
    """tr[X log2 X] - tr[X log2 Y] in bits, or +inf on support mismatch.

    Support inclusion is decided by projecting X onto the null space of Y
    (eigenvectors with eigenvalue <= EIG_CLIP): more than SUPPORT_TOL of
    projected mass means +inf. See the module docstring for the
    subnormalized-operator convention.
    """
    if x.dim != y.dim:
        raise DimensionMismatch(f"operand dims {x.dim} and {y.dim} differ")
    x_eig = np.linalg.eigvalsh(x.matrix)
    _check_psd_spectrum(x_eig, "first argument")
    y_eig, y_vec = np.linalg.eigh(y.matrix)
    _check_psd_spectrum(y_eig, "second argument")

    # <v_j| X |v_j> for each eigenvector of Y
    weights = np.einsum("ji,jk,ki->i", y_vec.conj(), x.matrix, y_vec).real
    null = y_eig <= EIG_CLIP
    if float(np.sum(weights[null])) > SUPPORT_TOL:
        return math.inf

    lam = x_eig[x_eig > EIG_CLIP]
    tr_x_log_x = float(np.sum(lam * np.log2(lam))) if lam.size else 0.0
    support = ~null
    tr_x_log_y = float(np.sum(weights[support] * np.log2(y_eig[support])))
    return tr_x_log_x - tr_x_log_y


def tensor_product(x: HermitianOperator, y: HermitianOperator) -> HermitianOperator:
    """Kronecker product; |i>_A (x) |j>_B maps to index i*d_B + j."""
    return HermitianOperator(np.kron(x.matrix, y.matrix))


def partial_trace(x: HermitianOperator, dims: tuple[int, int], keep: str) -> HermitianOperator:
    """Trace out one factor of a bipartite operator.

    dims is (d_A, d_B) under the tensor_product index ordering; keep is
    "A" or "B" and names the factor that survives.
    """
    d_a, d_b = dims
    if x.dim != d_a * d_b:
        raise DimensionMismatch(f"dim {x.dim} is not {d_a} * {d_b}")
    t = x.matrix.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        out = np.einsum("ijkj->ik", t)
    elif keep == "B":
        out = np.einsum("ijil->jl", t)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return HermitianOperator(out)


def dephase(x: HermitianOperator) -> HermitianOperator:
    """Zero all off-diagonal entries (incoherent-basis dephasing)."""
    return HermitianOperator(np.diag(np.diag(x.matrix)))


def is_psd(x: HermitianOperator, tol: float = PSD_TOL) -> bool:
    eig = np.linalg.eigvalsh(x.matrix)
    return bool(eig.size == 0 or eig[0] >= -tol)
