"""Static resource quantifiers.

Covers the relative entropy of coherence of states, the averaged relative
entropy between measurements, measurement-coherence (closed form plus a
small-scale variational oracle), the stochastic-matrix structure of
incoherent measurements, and an entanglement lower bound for PSD operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import (
    Povm,
    StochasticMatrix,
    basis_measurement,
    classical_postprocess,
)
from .errors import (
    DimensionMismatch,
    NotDensity,
    NotIncoherent,
    UnsupportedScale,
)
from .operators import (
    PSD_TOL,
    HermitianOperator,
    dephase,
    is_psd,
    partial_trace,
    relative_entropy,
    von_neumann_entropy,
)

DENSITY_TRACE_TOL = 1e-9


def relative_entropy_of_coherence(rho: HermitianOperator) -> float:
    """S(dephase(rho)) - S(rho), the coherence of a density operator in bits."""
    trace = float(np.trace(rho.matrix).real)
    if abs(trace - 1.0) > DENSITY_TRACE_TOL:
        raise NotDensity(f"trace {trace} is not 1 within {DENSITY_TRACE_TOL}")
    if not is_psd(rho):
        raise NotDensity("operator has an eigenvalue below the PSD tolerance")
    return von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho)


def measurement_relative_entropy(m: Povm, n: Povm) -> float:
    """(1/d) sum_x D(M_x || N_x) in bits; +inf propagates from any outcome.

    The 1/d prefactor uses the measured (input) dimension; this is the
    unique normalization under which the quantity adds over tensor products
    of measurements.
    """
    if m.dim != n.dim or m.n != n.n:
        raise DimensionMismatch(
            f"POVMs differ in dim ({m.dim} vs {n.dim}) or outcomes ({m.n} vs {n.n})"
        )
    total = 0.0
    for mx, nx in zip(m.elements, n.elements):
        term = relative_entropy(mx, nx)
        if math.isinf(term):
            return math.inf
        total += term
    return total / m.dim


def measurement_coherence(m: Povm) -> float:
    """(1/d) sum_x [S(dephase(M_x)) - S(M_x)] in bits.

    This is the minimum averaged relative entropy to any incoherent
    measurement; the minimizer is the element-wise dephasing of m.
    """
    total = sum(
        von_neumann_entropy(dephase(el)) - von_neumann_entropy(el) for el in m.elements
    )
    return total / m.dim


def is_incoherent_measurement(m: Povm, tol: float) -> bool:
    """True iff every element is diagonal within max-abs tolerance."""
    for el in m.elements:
        off = el.matrix - np.diag(np.diag(el.matrix))
        if float(np.max(np.abs(off))) > tol:
            return False
    return True


def measurement_coherence_bruteforce(m: Povm, grid_steps: int) -> float:
    """Variational measurement-coherence for a qubit two-outcome POVM.

    Minimizes the averaged relative entropy over all incoherent two-outcome
    POVMs, exhaustively parametrized as F_0 = diag(a, b), F_1 = I - F_0 with
    a, b on a grid_steps x grid_steps grid over [0, 1]^2, followed by one
    local refinement pass around the best cell. Exists to certify the closed
    form at small scale, not for production use.
    """
    if m.dim != 2 or m.n != 2:
        raise UnsupportedScale(
            f"oracle supports d = 2, n = 2 only (got d = {m.dim}, n = {m.n})"
        )
    if grid_steps < 100:
        raise ValueError(f"grid_steps must be at least 100, got {grid_steps}")

    # D(M_x || diag) splits into independent terms for the two diagonal slots.
    mass = np.array([np.diag(el.matrix).real for el in m.elements])  # (2, 2)
    mass = np.clip(mass, 0.0, None)
    base = -sum(von_neumann_entropy(el) for el in m.elements)

    def slot_cost(axis_values: np.ndarray, slot: int) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            c0 = np.where(
                mass[0, slot] > 0.0, -mass[0, slot] * np.log2(axis_values), 0.0
            )
            c1 = np.where(
                mass[1, slot] > 0.0, -mass[1, slot] * np.log2(1.0 - axis_values), 0.0
            )
        return c0 + c1

    def grid_minimum(a_lo, a_hi, b_lo, b_hi):
        a = np.linspace(a_lo, a_hi, grid_steps)
        b = np.linspace(b_lo, b_hi, grid_steps)
        grid = slot_cost(a, 0)[:, None] + slot_cost(b, 1)[None, :]
        flat = int(np.argmin(grid))
        ia, ib = divmod(flat, grid_steps)
        return float(grid[ia, ib]), float(a[ia]), float(b[ib]), (a[1] - a[0]), (b[1] - b[0])

    best, a_star, b_star, ha, hb = grid_minimum(0.0, 1.0, 0.0, 1.0)
    refined, _, _, _, _ = grid_minimum(
        max(0.0, a_star - ha),
        min(1.0, a_star + ha),
        max(0.0, b_star - hb),
        min(1.0, b_star + hb),
    )
    return 0.5 * (base + min(best, refined))


@dataclass(frozen=True)
class IncoherentDecomposition:
    """Classical post-processing realizing an incoherent measurement on top
    of the basis measurement, with the max-abs reconstruction error."""

    post: StochasticMatrix
    residual: float


def decompose_incoherent(m: Povm, tol: float = 1e-9) -> IncoherentDecomposition:
    """Extract p(x|i) = <i|M_x|i> and verify it reconstructs the POVM."""
    if not is_incoherent_measurement(m, tol):
        raise NotIncoherent(f"POVM has off-diagonal entries above {tol}")
    probs = np.array([np.diag(el.matrix).real for el in m.elements])
    probs = np.clip(probs, 0.0, None)  # PSD diagonals can carry -1e-16 noise
    post = StochasticMatrix(probs)
    recon = classical_postprocess(basis_measurement(m.dim), post)
    residual = max(
        float(np.max(np.abs(rx.matrix - mx.matrix)))
        for rx, mx in zip(recon.elements, m.elements)
    )
    return IncoherentDecomposition(post=post, residual=residual)


def ere_lower_bound(x: HermitianOperator, dims: tuple[int, int]) -> float:
    """max{S(X_A) - S(X_AB), S(X_B) - S(X_AB)} in bits.

    Lower-bounds the relative entropy of entanglement of a PSD bipartite
    operator over the (d_A, d_B) split. Returned raw: negative values are
    valid lower bounds and clamping would weaken equality certificates built
    on top of this quantity.
    """
    joint = von_neumann_entropy(x)  # raises NotPsd where applicable
    s_a = von_neumann_entropy(partial_trace(x, dims, "A"))
    s_b = von_neumann_entropy(partial_trace(x, dims, "B"))
    return max(s_a - joint, s_b - joint)
