"""Langevin noise bookkeeping for the amplifying/absorbing stack.

Each dissipative layer injects quantum noise whose strength is fixed by the
canonical commutators of the output operators. The per-layer commutator
matrix K has the closed form (u = n'' w l / c, v = n' w l / c)

    K = scale * [[1 - e^{-2u}, q], [conj(q), e^{2u} - 1]],
    q = -2 (n''/n') sin(v) e^{+iv}   for the first slab (z in [-l, 0]),
        -2 (n''/n') sin(v) e^{-iv}   for the second slab (z in [0, l]),

with scale = n'/|n| in full_complex mode and 1 in paper_real_part mode. The
coupling of layer noise into the outputs is a 2x2 matrix D built from the
partial transfer products, and the exact sum rule

    sum_layers D K D^dagger = 1 - S S^dagger

closes to machine precision in full_complex mode. In paper_real_part mode the
rule holds only to O(n''/n') by construction, so the optional consistency
check is restricted to full_complex mode.

Observable noise fluxes weight each layer by its thermal occupation: N_th for
an absorbing layer and -(N_th + 1) for an amplifying one.
"""

from __future__ import annotations

import math

import numpy as np

from .media import C_VACUUM, HBAR, K_BOLTZMANN, Bilayer
from .scattering import (MODE_FULL, MODE_PAPER, canonical_mode, layer_indices,
                         scattering_from_transfer, transfer_chain)


class SumRuleViolation(Exception):
    """Commutator sum rule residual exceeded tolerance with checks enabled."""


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation; exactly 0 at zero temperature."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if temperature < 0:
        raise ValueError("temperature must be nonnegative")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (K_BOLTZMANN * temperature)
    if x > 700.0:  # expm1 would overflow; the tail underflows cleanly
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def c_commutator_coefficients(n: complex, omega: float, thickness: float,
                              layer: int = 2, mode: str = MODE_FULL) -> dict:
    """Scalar pieces of the layer commutator matrix.

    same_side is the co-propagating entry 1 - e^{-2u} (equal to
    2 e^{-u} sinh u); cross_side is the counter-propagating coupling q. The
    layer index is 2 for the first slab and 3 for the second, matching the
    four-region stack labeling (1 and 4 are the vacuum half-spaces).
    """
    canonical_mode(mode)
    if layer not in (2, 3):
        raise ValueError("layer must be 2 (first slab) or 3 (second slab)")
    n = complex(n)
    k = omega / C_VACUUM
    u = n.imag * k * thickness
    v = n.real * k * thickness
    phase = np.exp(1j * v) if layer == 2 else np.exp(-1j * v)
    if n.real == 0.0:
        # evanescent limit of (n''/n') sin(n' k l): n'' k l
        q = -2.0 * n.imag * k * thickness * phase
    else:
        q = -2.0 * (n.imag / n.real) * np.sin(v) * phase
    return {"same_side": 2.0 * math.exp(-u) * math.sinh(u), "cross_side": complex(q)}


def layer_commutator(n: complex, omega: float, thickness: float,
                     layer: int = 2, mode: str = MODE_FULL) -> np.ndarray:
    """Full 2x2 commutator matrix of one layer (Hermitian)."""
    mode = canonical_mode(mode)
    n = complex(n)
    coef = c_commutator_coefficients(n, omega, thickness, layer, mode)
    k = omega / C_VACUUM
    u = n.imag * k * thickness
    scale = n.real / abs(n) if mode == MODE_FULL else 1.0
    q = coef["cross_side"]
    return scale * np.array([[1.0 - math.exp(-2 * u), q],
                             [np.conj(q), math.exp(2 * u) - 1.0]])


def _coupling(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    a12, a22 = A[0, 1], A[1, 1]
    b11, b12, b21, b22 = B[0, 0], B[0, 1], B[1, 0], B[1, 1]
    return (1.0 / a22) * np.array(
        [[-b21, -b22],
         [b11 * a22 - a12 * b21, b12 * a22 - a12 * b22]])


def noise_couplings(bilayer: Bilayer, omega: float,
                    mode: str = MODE_FULL) -> dict:
    """Output coupling matrices of the two layer noise sources.

    Row 0 of each matrix feeds the left output, row 1 the right output.
    """
    mode = canonical_mode(mode)
    chain = transfer_chain(bilayer, omega, mode)
    return {"d_gain": _coupling(chain.total, chain.from_gain),
            "d_loss": _coupling(chain.total, chain.from_loss)}


def sum_rule_residual(bilayer: Bilayer, omega: float,
                      mode: str = MODE_FULL) -> float:
    """Max-entry residual of sum_layers D K D^dagger = 1 - S S^dagger."""
    mode = canonical_mode(mode)
    chain = transfer_chain(bilayer, omega, mode)
    ng, nl = layer_indices(bilayer, omega)
    l = bilayer.layer_thickness
    d2 = _coupling(chain.total, chain.from_gain)
    d3 = _coupling(chain.total, chain.from_loss)
    k2 = layer_commutator(ng, omega, l, 2, mode)
    k3 = layer_commutator(nl, omega, l, 3, mode)
    s = scattering_from_transfer(chain).matrix()
    lhs = d2 @ k2 @ d2.conj().T + d3 @ k3 @ d3.conj().T
    rhs = np.eye(2) - s @ s.conj().T
    return float(np.max(np.abs(lhs - rhs)))


def noise_flux(bilayer: Bilayer, omega: float, mode: str = MODE_FULL,
               temperature: float = 0.0, check_sum_rule: bool = False,
               sum_rule_tol: float = 1e-10) -> dict:
    """Noise photon flux into each output, {"s_left", "s_right"}.

    With check_sum_rule the commutator sum rule is validated at this
    configuration first; that requires full_complex mode (the approximate
    paper_real_part bookkeeping does not close the rule).
    """
    mode = canonical_mode(mode)
    if check_sum_rule:
        if mode != MODE_FULL:
            raise ValueError("sum rule check requires full_complex mode")
        res = sum_rule_residual(bilayer, omega, mode)
        if not (res <= sum_rule_tol):
            raise SumRuleViolation(
                f"sum rule residual {res:.3e} exceeds {sum_rule_tol:.1e}")

    chain = transfer_chain(bilayer, omega, mode)
    ng, nl = layer_indices(bilayer, omega)
    l = bilayer.layer_thickness
    nth = thermal_occupation(omega, temperature)
    out = np.zeros(2)
    for n, layer, partial in ((ng, 2, chain.from_gain), (nl, 3, chain.from_loss)):
        d = _coupling(chain.total, partial)
        k = layer_commutator(n, omega, l, layer, mode)
        weight = nth if n.imag >= 0 else -(nth + 1.0)
        for row in (0, 1):
            out[row] += weight * float(np.real(d[row] @ k @ d[row].conj()))
    return {"s_left": float(out[0]), "s_right": float(out[1])}


def unitarity_deficit(s) -> dict:
    """1 - T - R per side; positive for net absorption, negative for gain."""
    return {"left": 1.0 - s.T - s.R_left, "right": 1.0 - s.T - s.R_right}
