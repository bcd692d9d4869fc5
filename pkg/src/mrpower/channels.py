"""Quantum channels (Kraus/Choi), POVMs, stochastic post-processing, and
channel-class predicates.

Channels are canonically Kraus lists; the Choi matrix is a derived cache
computed eagerly at construction, so instances are immutable and safe to
share across workers. Channel equality means max-abs Choi distance at most
CHANNEL_EQ_TOL, which is representation independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidPovm,
    InvalidStochasticMatrix,
    NotTracePreserving,
    NotUnital,
)
from .operators import (
    EIG_CLIP,
    PSD_TOL,
    HermitianOperator,
    basis_projector,
    dephase,
    identity,
)

TP_TOL = 1e-9           # max-abs deviation of sum_k K_k^dag K_k from I
COMPLETENESS_TOL = 1e-9  # max-abs deviation of sum_x M_x from I
CHANNEL_EQ_TOL = 1e-9    # max-abs Choi distance defining channel equality
STOCHASTIC_TOL = 1e-10   # column-sum deviation allowed in p(x|i)

# Kraus operators with squared Frobenius norm below this are dropped when
# composing; the total effect on the channel stays far below TP_TOL.
_PRUNE_TOL = 1e-24

# Above this Kraus-product count, compose() assembles the composed Choi
# matrix directly and re-extracts a minimal Kraus list (rank <= d_in*d_out)
# instead of materializing the full product set.
_MAX_PRODUCT_RANK = 4096


class QuantumChannel:
    """Completely positive trace-preserving map in Kraus form.

    The cached Choi matrix is sum_ij E(|i><j|) (x) |i><j| (unnormalized,
    output factor first, input factor second). Complete positivity is
    automatic for any Kraus list, so construction validates trace
    preservation only.
    """

    __slots__ = ("_kraus", "_choi")

    def __init__(self, kraus) -> None:
        arr = np.array([np.asarray(k, dtype=complex) for k in kraus])
        if arr.ndim != 3 or arr.shape[0] == 0:
            raise DimensionMismatch("kraus must be a non-empty list of equal-shape matrices")
        gram = np.tensordot(arr.conj(), arr, axes=([0, 1], [0, 1]))
        residual = float(np.max(np.abs(gram - np.eye(arr.shape[2]))))
        if residual > TP_TOL:
            raise NotTracePreserving(
                f"sum of K^dag K deviates from identity by {residual:.3e}"
            )
        arr.setflags(write=False)
        self._kraus = arr
        vecs = arr.reshape(arr.shape[0], -1)
        self._choi = HermitianOperator(vecs.T @ vecs.conj())

    @property
    def kraus(self) -> np.ndarray:
        """Stacked Kraus operators, shape (rank, dim_out, dim_in)."""
        return self._kraus

    @property
    def dim_in(self) -> int:
        return self._kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self._kraus.shape[1]

    @property
    def choi(self) -> HermitianOperator:
        return self._choi

    def apply(self, x: HermitianOperator) -> HermitianOperator:
        """sum_k K_k X K_k^dag."""
        if x.dim != self.dim_in:
            raise DimensionMismatch(f"operator dim {x.dim} != channel input dim {self.dim_in}")
        return HermitianOperator(_apply_kraus(self._kraus, x.matrix))

    def adjoint_apply(self, x: HermitianOperator) -> HermitianOperator:
        """sum_k K_k^dag X K_k; maps the identity to the identity."""
        if x.dim != self.dim_out:
            raise DimensionMismatch(f"operator dim {x.dim} != channel output dim {self.dim_out}")
        dagger = self._kraus.conj().transpose(0, 2, 1)
        return HermitianOperator(((dagger @ x.matrix) @ self._kraus).sum(axis=0))

    def __repr__(self) -> str:
        return (
            f"QuantumChannel(dim_in={self.dim_in}, dim_out={self.dim_out},"
            f" rank={self._kraus.shape[0]})"
        )


def _apply_kraus(kraus: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    return ((kraus @ matrix) @ kraus.conj().transpose(0, 2, 1)).sum(axis=0)


def compose(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    """Channel applying `first` then `second` (Kraus products K2 K1)."""
    if second.dim_in != first.dim_out:
        raise DimensionMismatch(
            f"cannot compose: inner dims {second.dim_in} and {first.dim_out} differ"
        )
    if second.kraus.shape[0] * first.kraus.shape[0] > _MAX_PRODUCT_RANK:
        return _compose_via_choi(second, first)
    prod = second.kraus[:, None, :, :] @ first.kraus[None, :, :, :]
    prod = prod.reshape(-1, second.dim_out, first.dim_in)
    norms = (np.abs(prod) ** 2).sum(axis=(1, 2))
    return QuantumChannel(prod[norms > _PRUNE_TOL])


def _compose_via_choi(second: QuantumChannel, first: QuantumChannel) -> QuantumChannel:
    d_in, d_out = first.dim_in, second.dim_out
    choi = np.zeros((d_out * d_in, d_out * d_in), dtype=complex)
    unit = np.zeros((d_in, d_in), dtype=complex)
    for i in range(d_in):
        for j in range(d_in):
            unit[i, j] = 1.0
            image = _apply_kraus(second.kraus, _apply_kraus(first.kraus, unit))
            choi += np.kron(image, unit)
            unit[i, j] = 0.0
    return channel_from_choi(HermitianOperator(choi), d_in, d_out)


def extend_with_identity(channel: QuantumChannel, d_anc: int, side: str) -> QuantumChannel:
    """Tensor an identity channel onto one side (Kraus set {K (x) I} or {I (x) K})."""
    if d_anc < 1:
        raise DimensionMismatch("ancilla dimension must be at least 1")
    eye = np.eye(d_anc)
    if side == "right":
        kraus = [np.kron(k, eye) for k in channel.kraus]
    elif side == "left":
        kraus = [np.kron(eye, k) for k in channel.kraus]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return QuantumChannel(kraus)


def unitary_channel(unitary) -> QuantumChannel:
    return QuantumChannel([np.asarray(unitary, dtype=complex)])


def identity_channel(dim: int) -> QuantumChannel:
    return unitary_channel(np.eye(dim))


def dephasing_channel(dim: int) -> QuantumChannel:
    """Kraus set {|i><i|}; acts as `operators.dephase`."""
    return QuantumChannel([basis_projector(i, dim).matrix for i in range(dim)])


def permutation_channel(perm) -> QuantumChannel:
    """Unitary channel of the basis permutation |i> -> |perm[i]>."""
    perm = np.asarray(perm, dtype=int)
    u = np.zeros((perm.size, perm.size), dtype=complex)
    u[perm, np.arange(perm.size)] = 1.0
    return unitary_channel(u)


def adjoint_channel(channel: QuantumChannel) -> QuantumChannel:
    """Channel with Kraus set {K^dag}; trace preserving iff the input is unital."""
    if channel.dim_in != channel.dim_out:
        raise DimensionMismatch("adjoint channel requires a square channel")
    try:
        return QuantumChannel([k.conj().T for k in channel.kraus])
    except NotTracePreserving as exc:
        raise NotUnital(f"channel is not unital: {exc}") from exc


def mix_channels(a: QuantumChannel, b: QuantumChannel, p: float) -> QuantumChannel:
    """Convex mixture p*a + (1-p)*b via Kraus sets {sqrt(p) K} u {sqrt(1-p) K'}."""
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionMismatch("mixture requires channels of equal dims")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixture weight {p} outside [0, 1]")
    kraus = [np.sqrt(p) * k for k in a.kraus] + [np.sqrt(1.0 - p) * k for k in b.kraus]
    return QuantumChannel(kraus)


def channel_from_choi(choi: HermitianOperator, dim_in: int, dim_out: int) -> QuantumChannel:
    """Rebuild a Kraus list from a Choi eigendecomposition."""
    if choi.dim != dim_in * dim_out:
        raise DimensionMismatch(f"choi dim {choi.dim} is not {dim_out} * {dim_in}")
    eig, vec = np.linalg.eigh(choi.matrix)
    kraus = [
        np.sqrt(eig[k]) * vec[:, k].reshape(dim_out, dim_in)
        for k in range(eig.size)
        if eig[k] > EIG_CLIP
    ]
    return QuantumChannel(kraus)


def choi_distance(a: QuantumChannel, b: QuantumChannel) -> float:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        raise DimensionMismatch("channels act on different spaces")
    return float(np.max(np.abs(a.choi.matrix - b.choi.matrix)))


def channels_equal(a: QuantumChannel, b: QuantumChannel, tol: float = CHANNEL_EQ_TOL) -> bool:
    return choi_distance(a, b) <= tol


@dataclass(frozen=True)
class ChannelClass:
    """Membership flags for the standard channel classes.

    dio, mio and unital are reported False for non-square channels, where
    the defining equations do not apply.
    """

    cptp: bool
    unital: bool
    dio: bool
    mio: bool


def classify_channel(channel: QuantumChannel, tol: float = CHANNEL_EQ_TOL) -> ChannelClass:
    """Test CPTP, unitality, the dephasing-commutation identity defining the
    detection-incoherent class, and preservation of incoherent basis states."""
    gram = np.tensordot(channel.kraus.conj(), channel.kraus, axes=([0, 1], [0, 1]))
    tp_ok = float(np.max(np.abs(gram - np.eye(channel.dim_in)))) <= tol
    choi_eig = np.linalg.eigvalsh(channel.choi.matrix)
    cptp = tp_ok and bool(choi_eig[0] >= -PSD_TOL)

    if channel.dim_in != channel.dim_out:
        return ChannelClass(cptp=cptp, unital=False, dio=False, mio=False)

    d = channel.dim_in
    unital = (
        float(np.max(np.abs(channel.apply(identity(d)).matrix - np.eye(d)))) <= tol
    )

    delta = dephasing_channel(d)
    dephased = compose(delta, channel)
    dio = choi_distance(dephased, compose(dephased, delta)) <= tol

    mio = True
    for i in range(d):
        out = channel.apply(basis_projector(i, d))
        if float(np.max(np.abs(out.matrix - dephase(out).matrix))) > tol:
            mio = False
            break
    return ChannelClass(cptp=cptp, unital=unital, dio=dio, mio=mio)


class Povm:
    """Finite POVM: PSD elements summing to the identity."""

    __slots__ = ("_elements",)

    def __init__(self, elements) -> None:
        ops = tuple(
            el if isinstance(el, HermitianOperator) else HermitianOperator(el)
            for el in elements
        )
        if not ops:
            raise InvalidPovm("a POVM needs at least one element")
        dim = ops[0].dim
        if any(el.dim != dim for el in ops):
            raise DimensionMismatch("POVM elements have mixed dimensions")
        for x, el in enumerate(ops):
            eig = np.linalg.eigvalsh(el.matrix)
            if eig[0] < -PSD_TOL:
                raise InvalidPovm(
                    f"element {x} is not PSD (min eigenvalue {eig[0]:.3e})"
                )
        total = sum(el.matrix for el in ops)
        residual = float(np.max(np.abs(total - np.eye(dim))))
        if residual > COMPLETENESS_TOL:
            raise InvalidPovm(f"elements sum to identity only within {residual:.3e}")
        self._elements = ops

    @property
    def elements(self) -> tuple[HermitianOperator, ...]:
        return self._elements

    @property
    def dim(self) -> int:
        return self._elements[0].dim

    @property
    def n(self) -> int:
        """Number of outcomes."""
        return len(self._elements)

    def __repr__(self) -> str:
        return f"Povm(dim={self.dim}, n={self.n})"


class StochasticMatrix:
    """Column-stochastic conditional distribution p(x|i).

    Rows index outcomes x, columns index inputs i; every column sums to one
    within STOCHASTIC_TOL. Entries down to -STOCHASTIC_TOL are clamped to
    zero (eigenvalue noise from PSD diagonals), anything lower is rejected.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries) -> None:
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2:
            raise InvalidStochasticMatrix(f"expected a 2-d array, got shape {arr.shape}")
        if float(arr.min(initial=0.0)) < -STOCHASTIC_TOL:
            raise InvalidStochasticMatrix(f"negative entry {arr.min():.3e}")
        arr = np.clip(arr, 0.0, None)
        col_dev = float(np.max(np.abs(arr.sum(axis=0) - 1.0)))
        if col_dev > STOCHASTIC_TOL:
            raise InvalidStochasticMatrix(f"column sums deviate from 1 by {col_dev:.3e}")
        arr.setflags(write=False)
        self._entries = arr

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def rows(self) -> int:
        return self._entries.shape[0]

    @property
    def cols(self) -> int:
        return self._entries.shape[1]

    @classmethod
    def identity(cls, n: int) -> "StochasticMatrix":
        return cls(np.eye(n))

    def __repr__(self) -> str:
        return f"StochasticMatrix(rows={self.rows}, cols={self.cols})"


def basis_measurement(dim: int) -> Povm:
    """The incoherent-basis measurement {|i><i|}."""
    return Povm([basis_projector(i, dim) for i in range(dim)])


def measurement_as_channel(povm: Povm) -> QuantumChannel:
    """The channel rho -> sum_x tr(M_x rho) |x><x| with classical outputs.

    Kraus operators are {|x><phi_xk| sqrt(lambda_xk)} from the element
    eigendecompositions; output dimension equals the outcome count, and the
    output is always diagonal.
    """
    n, d = povm.n, povm.dim
    kraus = []
    for x, el in enumerate(povm.elements):
        eig, vec = np.linalg.eigh(el.matrix)
        for k in range(eig.size):
            if eig[k] > EIG_CLIP:
                op = np.zeros((n, d), dtype=complex)
                op[x, :] = np.sqrt(eig[k]) * vec[:, k].conj()
                kraus.append(op)
    return QuantumChannel(kraus)


def classical_postprocess(povm: Povm, post: StochasticMatrix) -> Povm:
    """Relabel outcomes: M'_y = sum_x p(y|x) M_x."""
    if post.cols != povm.n:
        raise DimensionMismatch(
            f"post-processing expects {post.cols} outcomes, POVM has {povm.n}"
        )
    stack = np.stack([el.matrix for el in povm.elements])
    merged = np.einsum("yx,xij->yij", post.entries, stack)
    return Povm(list(merged))


def pullback_povm(channel: QuantumChannel, povm: Povm) -> Povm:
    """POVM of the measurement `povm` preceded by `channel`: {E^dag(M_x)}."""
    if povm.dim != channel.dim_out:
        raise DimensionMismatch(
            f"POVM dim {povm.dim} != channel output dim {channel.dim_out}"
        )
    return Povm([channel.adjoint_apply(el) for el in povm.elements])


def tensor_povm(a: Povm, b: Povm) -> Povm:
    """Product measurement {M_x (x) N_y}, x-major outcome ordering."""
    return Povm(
        [
            np.kron(ax.matrix, by.matrix)
            for ax in a.elements
            for by in b.elements
        ]
    )


def mix_povm(a: Povm, b: Povm, p: float) -> Povm:
    """Outcome-wise convex mixture {p M_x + (1-p) N_x}."""
    if a.dim != b.dim or a.n != b.n:
        raise DimensionMismatch("mixture requires POVMs of equal dim and outcome count")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixture weight {p} outside [0, 1]")
    return Povm(
        [p * ax.matrix + (1.0 - p) * bx.matrix for ax, bx in zip(a.elements, b.elements)]
    )


def pad_povm(povm: Povm, n_total: int) -> Povm:
    """Append zero elements (zero-probability outcomes) up to n_total."""
    if n_total < povm.n:
        raise DimensionMismatch(f"cannot pad {povm.n} outcomes down to {n_total}")
    zero = np.zeros((povm.dim, povm.dim))
    return Povm(list(povm.elements) + [zero] * (n_total - povm.n))
