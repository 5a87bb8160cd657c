"""Dispersive gain/loss media and the balanced bilayer.

Single-resonance Lorentz media with a signed oscillator amplitude: a positive
amplitude absorbs, a negative one amplifies. A bilayer stacks a gain slab on
[-l, 0] and a loss slab on [0, l] between vacuum half-spaces. The balance
condition eps_loss(w) == conj(eps_gain(w)) (equal real parts, opposite
imaginary parts) defines the operating frequency of the stack.

Internal units are SI throughout (rad/s, meters); the CLI converts from
Trad/s and nm at its boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

C_VACUUM = 2.99792458e8       # m/s
HBAR = 1.054571817e-34        # J s
K_BOLTZMANN = 1.380649e-23    # J/K
TRAD = 1e12                   # rad/s per Trad/s
NM = 1e-9                     # m per nm

DEFAULT_LAYER_THICKNESS = 10.0 * NM


@dataclass(frozen=True)
class LorentzMedium:
    """Single-resonance dispersive medium.

    eps(w) = eps_b - alpha * w0 * gamma / (w^2 - w0^2 + i w gamma)

    alpha > 0 gives absorption (Im eps > 0), alpha < 0 gain. At resonance
    eps(w0) = eps_b + i alpha exactly.
    """

    eps_b: float
    alpha: float
    omega0: float   # rad/s
    gamma: float    # rad/s

    def __post_init__(self):
        if not (self.eps_b > 0 and math.isfinite(self.eps_b)):
            raise ValueError("eps_b must be positive and finite")
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ValueError("omega0 must be positive and finite")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError("gamma must be positive and finite")
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


@dataclass(frozen=True)
class Bilayer:
    """Gain slab on [-l, 0], loss slab on [0, l], vacuum outside."""

    gain: LorentzMedium
    loss: LorentzMedium
    layer_thickness: float = DEFAULT_LAYER_THICKNESS   # m, per layer

    def __post_init__(self):
        if not (self.layer_thickness > 0 and math.isfinite(self.layer_thickness)):
            raise ValueError("layer_thickness must be positive and finite")


def permittivity(medium: LorentzMedium, omega):
    """Complex permittivity at angular frequency omega (rad/s). Vectorizes."""
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ValueError("omega must be positive")
    eps = medium.eps_b - medium.alpha * medium.omega0 * medium.gamma / (
        w * w - medium.omega0 ** 2 + 1j * w * medium.gamma)
    return complex(eps) if np.isscalar(omega) or np.ndim(omega) == 0 else eps


def refractive_index(eps):
    """Principal square root with Re n >= 0, elementwise over arrays.

    The branch is fixed by flipping the sign whenever the principal root has
    a negative real part; eps == 0 is rejected (no propagating branch).
    """
    e = np.asarray(eps, dtype=complex)
    if np.any(e == 0):
        raise ValueError("permittivity must be nonzero")
    n = np.sqrt(e)
    n = np.where(n.real < 0, -n, n)
    return complex(n) if np.isscalar(eps) or np.ndim(eps) == 0 else n


def _lineshape(medium: LorentzMedium, omega: float) -> float:
    # Im eps per unit alpha: w0 gamma^2 w / D(w), always positive.
    w = float(omega)
    d = (w * w - medium.omega0 ** 2) ** 2 + medium.gamma ** 2 * w * w
    return medium.omega0 * medium.gamma ** 2 * w / d


def pt_balanced_gain(loss: LorentzMedium, gain: LorentzMedium, omega: float) -> float:
    """Gain amplitude that cancels the loss medium's Im eps at omega.

    Returns the (negative) alpha for the gain medium such that
    Im eps_gain(omega) = -Im eps_loss(omega). Linear in loss.alpha.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    return -loss.alpha * _lineshape(loss, omega) / _lineshape(gain, omega)


def pt_delta_epsilon(loss: LorentzMedium, gain: LorentzMedium, omega: float) -> float:
    """Real-part mismatch Re eps_loss - Re eps_gain with the gain rebalanced.

    The gain amplitude is set by pt_balanced_gain at each omega, so a root of
    this function is a frequency where the bilayer is exactly balanced.
    """
    ag = pt_balanced_gain(loss, gain, omega)
    el = permittivity(loss, omega)
    eg = permittivity(LorentzMedium(gain.eps_b, ag, gain.omega0, gain.gamma), omega)
    return el.real - eg.real


def pt_frequency(loss: LorentzMedium, gain: LorentzMedium,
                 rel_tol: float = 1e-12) -> list[float]:
    """All balance frequencies of the pair, ascending (rad/s).

    Equal backgrounds admit a closed form independent of the amplitudes:
    w^2 = (gamma_g w0l^2 + gamma_l w0g^2) / (gamma_g + gamma_l). Otherwise a
    2048-point logarithmic scan over [0.01, 100] * max(w0) brackets every sign
    change of the real-part mismatch and bisection refines each root.
    """
    if loss.alpha == 0:
        raise ValueError("loss amplitude must be nonzero")
    if loss.eps_b == gain.eps_b:
        w = math.sqrt((gain.gamma * loss.omega0 ** 2 + loss.gamma * gain.omega0 ** 2)
                      / (gain.gamma + loss.gamma))
        return [w]

    wmax = max(loss.omega0, gain.omega0)
    grid = np.logspace(math.log10(0.01 * wmax), math.log10(100 * wmax), 2048)
    vals = np.array([pt_delta_epsilon(loss, gain, w) for w in grid])
    roots = []
    for i in range(len(grid) - 1):
        if (vals[i] < 0) == (vals[i + 1] < 0):
            continue
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        while hi - lo > rel_tol * hi:
            mid = 0.5 * (lo + hi)
            fmid = pt_delta_epsilon(loss, gain, mid)
            if (fmid < 0) == (flo < 0):
                lo, flo = mid, fmid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return sorted(roots)


def verify_pt(bilayer: Bilayer, omega: float, tol: float = 1e-9) -> bool:
    """True when eps_loss(omega) == conj(eps_gain(omega)) within tol."""
    el = permittivity(bilayer.loss, omega)
    eg = permittivity(bilayer.gain, omega)
    scale = max(1.0, abs(el), abs(eg))
    return abs(el - np.conj(eg)) <= tol * scale


# Preset material families. The first family uses identical resonances for
# gain and loss, so balance holds at w0 for any amplitude. The second pairs
# dissimilar media; its gain amplitude is pinned to the balanced value at
# loss amplitude 2, the reference configuration for the family (the balance
# then holds solely at that amplitude).

_SET1_LOSS = dict(eps_b=2.0, omega0=1000 * TRAD, gamma=67 * TRAD)
_SET1_GAIN = dict(eps_b=2.0, omega0=1000 * TRAD, gamma=67 * TRAD)
_SET2_LOSS = dict(eps_b=3.22, omega0=1200 * TRAD, gamma=140 * TRAD)
_SET2_GAIN = dict(eps_b=2.0, omega0=1000 * TRAD, gamma=67 * TRAD)

PRESET_IDS = ("set1", "set2")


@lru_cache(maxsize=1)
def set2_operating_frequency() -> float:
    """Largest balance root of the second family at loss amplitude 2 (rad/s)."""
    loss = LorentzMedium(alpha=2.0, **_SET2_LOSS)
    gain = LorentzMedium(alpha=-1.0, **_SET2_GAIN)
    return pt_frequency(loss, gain)[-1]


@lru_cache(maxsize=1)
def set2_gain_alpha() -> float:
    """Fixed gain amplitude of the second family (balanced at alpha_l = 2)."""
    loss = LorentzMedium(alpha=2.0, **_SET2_LOSS)
    gain = LorentzMedium(alpha=-1.0, **_SET2_GAIN)
    return pt_balanced_gain(loss, gain, set2_operating_frequency())


def preset(set_id: str, alpha_l: float,
           layer_thickness: float = DEFAULT_LAYER_THICKNESS) -> Bilayer:
    """Bilayer from a named material family at the given loss amplitude.

    "set1": symmetric resonances, gain amplitude -alpha_l (balanced at w0 for
    every alpha_l). "set2": detuned pair with the gain amplitude held at its
    reference value for all alpha_l; only alpha_l = 2 is balanced.
    """
    if alpha_l < 0:
        raise ValueError("alpha_l must be nonnegative")
    if set_id == "set1":
        loss = LorentzMedium(alpha=alpha_l, **_SET1_LOSS)
        gain = LorentzMedium(alpha=-alpha_l, **_SET1_GAIN)
    elif set_id == "set2":
        loss = LorentzMedium(alpha=alpha_l, **_SET2_LOSS)
        gain = LorentzMedium(alpha=set2_gain_alpha(), **_SET2_GAIN)
    else:
        raise ValueError(f"unknown preset {set_id!r}; expected one of {PRESET_IDS}")
    return Bilayer(gain=gain, loss=loss, layer_thickness=layer_thickness)


def preset_default_omega(set_id: str) -> float:
    """Default operating frequency of a preset (rad/s)."""
    if set_id == "set1":
        return _SET1_GAIN["omega0"]
    if set_id == "set2":
        return set2_operating_frequency()
    raise ValueError(f"unknown preset {set_id!r}; expected one of {PRESET_IDS}")
