"""Effective-medium description of the bilayer.

A Bloch dispersion relation over one gain/loss cell yields a single complex
effective index; the stack is then a homogeneous slab of thickness 2l with
textbook closed-form amplitudes, a round-trip amplitude eta, and an effective
noise flux built from an equal-weight mix of the two layers' dissipation.
The description is a long-wavelength theory: it holds while the cell is
optically thin and degrades as the stack approaches its lasing threshold.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .media import C_VACUUM, Bilayer, permittivity
from .noise import thermal_occupation
from .scattering import ScatteringAmplitudes, layer_indices


class BranchAmbiguity(Exception):
    """Cell phase too large for the principal Bloch branch."""


class LasingPole(Exception):
    """Effective slab is at (or numerically on top of) a lasing pole."""


def _bloch_from_indices(ng: complex, nl: complex, omega: float,
                        layer_thickness: float) -> complex:
    k = omega / C_VACUUM
    x = ng * k * layer_thickness
    y = nl * k * layer_thickness
    rhs = cmath.cos(x) * cmath.cos(y) \
        - 0.5 * (ng / nl + nl / ng) * cmath.sin(x) * cmath.sin(y)
    n = cmath.acos(rhs) / (2 * k * layer_thickness)
    if n.real < 0:
        n = -n
    if abs(n.real) < 1e-9 * abs(n) and min(ng.imag, nl.imag) < 0 and n.imag > 0:
        # evanescent tie: with gain present take the amplifying branch
        n = -n
    if abs(2 * n * k * layer_thickness) > math.pi / 2:
        raise BranchAmbiguity(
            f"cell phase {abs(2 * n * k * layer_thickness):.3f} exceeds pi/2; "
            "principal branch is not trustworthy")
    return n


def bloch_index(bilayer: Bilayer, omega: float) -> complex:
    """Effective refractive index of the gain/loss cell at omega."""
    ng, nl = layer_indices(bilayer, omega)
    return _bloch_from_indices(ng, nl, omega, bilayer.layer_thickness)


def _pole_denominator(n_eff: complex, omega: float, layer_thickness: float) -> complex:
    kl = (omega / C_VACUUM) * layer_thickness
    return (n_eff + 1) ** 2 - (n_eff - 1) ** 2 * cmath.exp(4j * n_eff * kl)


def effective_amplitudes(n_eff: complex, omega: float,
                         layer_thickness: float) -> ScatteringAmplitudes:
    """Closed-form slab amplitudes for the effective medium.

    The slab spans [-l, l] (thickness 2 * layer_thickness) with vacuum phase
    references at its faces:

        den = (n+1)^2 - (n-1)^2 e^{4 i n k l}
        t   = 4 n e^{2 i (n - 1) k l} / den
        r   = (n^2 - 1)(e^{4 i n k l} - 1) e^{-2 i k l} / den

    identical to the left/right symmetric two-port of the exact chain with
    both layers set to n_eff. Raises LasingPole when |den| < 1e-12.
    """
    n = complex(n_eff)
    kl = (omega / C_VACUUM) * layer_thickness
    den = _pole_denominator(n, omega, layer_thickness)
    if abs(den) < 1e-12:
        raise LasingPole(f"pole denominator modulus {abs(den):.3e}")
    t = 4 * n * cmath.exp(2j * (n - 1) * kl) / den
    r = (n * n - 1) * (cmath.exp(4j * n * kl) - 1) * cmath.exp(-2j * kl) / den
    return ScatteringAmplitudes(r_left=r, t=t, r_right=r)


def round_trip(n_eff: complex, omega: float, layer_thickness: float) -> complex:
    """One-round-trip amplitude eta = ((n-1)/(n+1))^2 e^{4 i n k l}.

    |eta| >= 1 with vanishing phase marks a lasing pole; |eta| < 1 is the
    linear regime. Note den = (n+1)^2 (1 - eta).
    """
    n = complex(n_eff)
    kl = (omega / C_VACUUM) * layer_thickness
    return ((n - 1) / (n + 1)) ** 2 * cmath.exp(4j * n * kl)


def _deficit(n_eff: complex, omega: float, layer_thickness: float) -> float:
    s = effective_amplitudes(n_eff, omega, layer_thickness)
    return 1.0 - s.T - s.R_right


def effective_noise(bilayer: Bilayer, omega: float, n_eff: complex = None,
                    temperature: float = 0.0) -> dict:
    """Noise flux of the effective slab, {"s_left", "s_right", "occupation"}.

    The effective occupation multiplies the unitarity deficit:
    flux = deficit * (S / (2 Im n_eff^2) - 1/2) with the pump strength
    S = (|Im eps_gain| + |Im eps_loss|) (2 N_th + 1) / 2 (equal layer
    weights). At exact balance both deficit and Im n_eff^2 vanish; the finite
    limit is taken via a central difference of the deficit with respect to
    Im n_eff^2 (guard at 1e-12 of the larger |Im eps|), where the occupation
    itself diverges and is reported as nan.
    """
    if n_eff is None:
        n_eff = bloch_index(bilayer, omega)
    l = bilayer.layer_thickness
    eg = permittivity(bilayer.gain, omega)
    el = permittivity(bilayer.loss, omega)
    nth = thermal_occupation(omega, temperature)
    pump = 0.5 * (abs(eg.imag) + abs(el.imag)) * (2.0 * nth + 1.0)
    im_eff = (n_eff * n_eff).imag
    deficit = _deficit(n_eff, omega, l)
    scale = max(abs(eg.imag), abs(el.imag), 1e-300)
    if abs(im_eff) < 1e-12 * scale:
        h = 1e-7 * scale
        dplus = _deficit(cmath.sqrt(n_eff * n_eff + 1j * h), omega, l)
        dminus = _deficit(cmath.sqrt(n_eff * n_eff - 1j * h), omega, l)
        slope = (dplus - dminus) / (2 * h)
        flux = pump * slope / 2.0 - 0.5 * deficit
        occupation = math.nan
    else:
        occupation = pump / (2.0 * im_eff) - 0.5
        flux = deficit * occupation
    # symmetric slab: both outputs see the same deficit, hence the same flux
    return {"s_left": float(flux), "s_right": float(flux),
            "occupation": float(occupation)}
