"""Quantum-optical observables at the stack outputs.

The left input carries a squeezed coherent state (squeeze strength xi, squeeze
phase phi_xi, coherent weight w = |rho|^2 normalized by sinh^2 xi units,
coherent phase phi_rho); the right input is vacuum. Homodyne detection of the
right output gives a quadrature variance; direct photocounting gives a
normalized Mandel parameter. Both depend on the stack only through the
transmission amplitude t and the right-output noise flux.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scattering import ScatteringAmplitudes

# Defaults reproduce the reference figure settings: xi = 0.2 with a 5 rad
# offset between the squeeze phase and twice the local-oscillator phase, and
# a coherent phase locked so that cos(2 phi_rho - phi_xi) = -1.
DEFAULT_XI = 0.2
DEFAULT_PHI_XI = 5.0
DEFAULT_COHERENT_WEIGHT = 25.0
DEFAULT_PHI_RHO = (5.0 - math.pi) / 2.0


class DegenerateDenominator(Exception):
    """Mean photocount vanishes; the normalized Mandel parameter is undefined."""


@dataclass(frozen=True)
class SqueezedCoherentInput:
    xi: float = DEFAULT_XI
    phi_xi: float = DEFAULT_PHI_XI
    coherent_weight: float = DEFAULT_COHERENT_WEIGHT
    phi_rho: float = DEFAULT_PHI_RHO

    def __post_init__(self):
        if self.xi < 0:
            raise ValueError("xi must be nonnegative")
        if self.coherent_weight < 0:
            raise ValueError("coherent_weight must be nonnegative")


@dataclass(frozen=True)
class HomodyneConfig:
    """Local oscillator phase; the LO frequency tracks the signal."""

    phi_lo: float = 0.0
    omega_lo: float | None = None


@dataclass(frozen=True)
class PhotocountConfig:
    """Photocount detection window center (bookkeeping only)."""

    omega_h: float | None = None


def _transmission(s) -> complex:
    if isinstance(s, ScatteringAmplitudes):
        return complex(s.t)
    return complex(s)


def homodyne_variance(s, flux_right: float, inp: SqueezedCoherentInput = None,
                      config: HomodyneConfig = None) -> float:
    """Vacuum-normalized quadrature variance of the right output.

    V = 1 + 2 f + T (2 sinh^2 xi - sinh(2 xi) cos(phi_xi - 2 phi_lo - 2 arg t))

    Values below 1 indicate surviving squeezing; the noise flux enters with
    weight 2 and is never negative in aggregate.
    """
    inp = inp or SqueezedCoherentInput()
    config = config or HomodyneConfig()
    t = _transmission(s)
    T = abs(t) ** 2
    offset = inp.phi_xi - 2.0 * config.phi_lo
    squeeze = 2.0 * math.sinh(inp.xi) ** 2 \
        - math.sinh(2.0 * inp.xi) * math.cos(offset - 2.0 * np.angle(t))
    return 1.0 + 2.0 * flux_right + T * squeeze


def mandel_q(s, flux_right: float, inp: SqueezedCoherentInput = None) -> float:
    """Normalized Mandel parameter of the right output.

    With T = |t|^2, nbar = T sinh^2 xi + f, w the coherent weight:

        num = nbar^2 + T^2 sinh^2 xi cosh^2 xi + 2 T w nbar
              + T^2 w sinh(2 xi) cos(2 phi_rho - phi_xi)
        Q   = num / (T (sinh^2 xi + w) + f)

    Negative values are sub-Poissonian. For a lossless beamsplitter
    (real t, zero flux) this reduces exactly to T times the input value.
    """
    inp = inp or SqueezedCoherentInput()
    t = _transmission(s)
    T = abs(t) ** 2
    sh2 = math.sinh(inp.xi) ** 2
    ch2 = math.cosh(inp.xi) ** 2
    w = inp.coherent_weight
    den = T * (sh2 + w) + flux_right
    if abs(den) < 1e-30:
        raise DegenerateDenominator("mean photocount vanishes")
    nbar = T * sh2 + flux_right
    num = nbar * nbar + T * T * sh2 * ch2 + 2.0 * T * w * nbar \
        + T * T * w * math.sinh(2.0 * inp.xi) * math.cos(2.0 * inp.phi_rho - inp.phi_xi)
    return num / den


def input_reference(inp: SqueezedCoherentInput = None,
                    config: HomodyneConfig = None) -> dict:
    """Observables of the input state itself (identity channel, no noise)."""
    inp = inp or SqueezedCoherentInput()
    config = config or HomodyneConfig()
    ident = ScatteringAmplitudes(r_left=0.0, t=1.0, r_right=0.0)
    return {"variance_in": homodyne_variance(ident, 0.0, inp, config),
            "q_in": mandel_q(ident, 0.0, inp)}
