"""Transfer-matrix scattering for the two-slab stack.

The chain runs vacuum | gain [-l, 0] | loss [0, l] | vacuum and factors as
interface matrices times per-layer propagation. Interface matrices are
flux-normalized and carry phase factors built from the real parts of the
indices at the absolute interface positions; propagation is a decay-only
diagonal diag(e^{-n'' w l / c}, e^{+n'' w l / c}).

Two bookkeeping modes are supported. In "full_complex" (default) the Fresnel
ratios keep the complex indices and the factorization reconstructs the exact
complex propagation e^{i n w l / c}; det A = 1 identically. In
"paper_real_part" the ratios use only the real parts of the indices, a common
small-absorption approximation; phases are real-part phases in both modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .media import C_VACUUM, Bilayer, permittivity, refractive_index

MODE_FULL = "full_complex"
MODE_PAPER = "paper_real_part"

_MODE_ALIASES = {
    "full_complex": MODE_FULL, "full-complex": MODE_FULL, "full": MODE_FULL,
    "exact": MODE_FULL,
    "paper_real_part": MODE_PAPER, "paper-real-part": MODE_PAPER,
    "paper": MODE_PAPER,
}


class SingularTransfer(Exception):
    """Transfer matrix too close to singular for scattering extraction."""


class InconsistentEigenvalues(Exception):
    """Eigenvalue pair fits neither the unimodular nor the inverse-moduli pattern."""


def canonical_mode(mode: str) -> str:
    try:
        return _MODE_ALIASES[mode]
    except KeyError:
        raise ValueError(
            f"unknown mode {mode!r}; expected {MODE_FULL} or {MODE_PAPER}") from None


@dataclass(frozen=True)
class ScatteringAmplitudes:
    """Reflection/transmission amplitudes of a reciprocal two-port."""

    r_left: complex
    t: complex
    r_right: complex

    @property
    def T(self) -> float:
        return abs(self.t) ** 2

    @property
    def R_left(self) -> float:
        return abs(self.r_left) ** 2

    @property
    def R_right(self) -> float:
        return abs(self.r_right) ** 2

    def matrix(self) -> np.ndarray:
        return np.array([[self.r_left, self.t], [self.t, self.r_right]])


@dataclass(frozen=True)
class TransferChain:
    """Total transfer matrix and the partial products seen by internal sources.

    from_gain maps amplitudes at the gain layer into the outputs (the product
    of every factor to its right in the chain); from_loss likewise for the
    loss layer.
    """

    total: np.ndarray
    from_gain: np.ndarray
    from_loss: np.ndarray


def interface_matrix(n_from: complex, n_to: complex, omega: float, z: float,
                     mode: str = MODE_FULL) -> np.ndarray:
    """Flux-normalized interface matrix at absolute position z."""
    mode = canonical_mode(mode)
    k = omega / C_VACUUM
    nf, nt = complex(n_from), complex(n_to)
    a, b = (complex(nf.real), complex(nt.real)) if mode == MODE_PAPER else (nf, nt)
    ar, br = nf.real, nt.real
    pre = np.sqrt(a / b)
    t11 = pre * (b + a) / (2 * a) * np.exp(1j * (ar - br) * k * z)
    t12 = pre * (b - a) / (2 * a) * np.exp(-1j * (ar + br) * k * z)
    t21 = t12 * np.exp(2j * (ar + br) * k * z)
    t22 = t11 * np.exp(-2j * (ar - br) * k * z)
    return np.array([[t11, t12], [t21, t22]])


def propagation_matrix(n: complex, omega: float, thickness: float) -> np.ndarray:
    """Decay-only propagation over one layer (mode-independent)."""
    u = complex(n).imag * (omega / C_VACUUM) * thickness
    return np.array([[np.exp(-u), 0.0], [0.0, np.exp(u)]], dtype=complex)


def layer_indices(bilayer: Bilayer, omega: float) -> tuple[complex, complex]:
    """(n_gain, n_loss) at omega."""
    ng = refractive_index(permittivity(bilayer.gain, omega))
    nl = refractive_index(permittivity(bilayer.loss, omega))
    return ng, nl


def transfer_chain(bilayer: Bilayer, omega: float,
                   mode: str = MODE_FULL) -> TransferChain:
    """Assemble the five-factor chain and its internal partial products."""
    mode = canonical_mode(mode)
    ng, nl = layer_indices(bilayer, omega)
    l = bilayer.layer_thickness
    one = 1.0 + 0j
    t1 = interface_matrix(one, ng, omega, -l, mode)
    r2 = propagation_matrix(ng, omega, l)
    t2 = interface_matrix(ng, nl, omega, 0.0, mode)
    r3 = propagation_matrix(nl, omega, l)
    t3 = interface_matrix(nl, one, omega, l, mode)
    from_loss = t3
    from_gain = t3 @ r3 @ t2
    total = from_gain @ r2 @ t1
    return TransferChain(total=total, from_gain=from_gain, from_loss=from_loss)


def scattering_from_transfer(transfer) -> ScatteringAmplitudes:
    """Extract (r_left, t, r_right) from a total transfer matrix.

    The transmission is computed two ways, 1/A22 and det A / A22 with the
    analytic det A = 1; disagreement beyond 1e-8 relative (or |A22| below
    1e-300) raises SingularTransfer.
    """
    A = transfer.total if isinstance(transfer, TransferChain) else np.asarray(transfer)
    a22 = A[1, 1]
    if abs(a22) < 1e-300:
        raise SingularTransfer("A22 vanishes; stack is at a scattering pole")
    t = 1.0 / a22
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    t_alt = det / a22
    if abs(t - t_alt) > 1e-8 * max(abs(t), 1e-300):
        raise SingularTransfer(
            f"transmission estimates disagree: {t} vs {t_alt}")
    return ScatteringAmplitudes(r_left=-A[1, 0] / a22, t=t, r_right=A[0, 1] / a22)


def eigenvalues(transfer) -> tuple[complex, complex]:
    """Scattering-matrix eigenvalues, ordered by descending modulus.

    Ties in modulus (within 1e-12 relative) break by ascending principal
    argument. A closed form in the transfer entries,
    ((A12 - A21) +- sqrt((A12 - A21)^2 + 4 A11 A22)) / (2 A22),
    cross-checks the numerical pair to 1e-8.
    """
    A = transfer.total if isinstance(transfer, TransferChain) else np.asarray(transfer)
    s = scattering_from_transfer(A)
    lam = np.linalg.eigvals(s.matrix())

    b = A[0, 1] - A[1, 0]
    root = np.sqrt(b * b + 4 * A[0, 0] * A[1, 1])
    closed = ((b + root) / (2 * A[1, 1]), (b - root) / (2 * A[1, 1]))
    scale = max(abs(lam[0]), abs(lam[1]), 1e-300)
    mismatch = max(min(abs(l - c) for c in closed) for l in lam)
    if mismatch > 1e-8 * scale:
        raise InconsistentEigenvalues(
            "numerical and closed-form eigenvalues disagree")

    l1, l2 = lam
    m1, m2 = abs(l1), abs(l2)
    if abs(m1 - m2) <= 1e-12 * max(m1, m2, 1e-300):
        if np.angle(l1) > np.angle(l2):
            l1, l2 = l2, l1
    elif m1 < m2:
        l1, l2 = l2, l1
    return complex(l1), complex(l2)


def classify_phase(eigenpair: tuple[complex, complex], tol: float = 1e-4) -> str:
    """"exact" (both unimodular), "broken" (inverse moduli), or "exceptional".

    Coalescence within tol classifies as exceptional; otherwise unimodularity
    of both eigenvalues marks the exact phase and an inverse-moduli pair the
    broken phase. Anything else raises InconsistentEigenvalues.
    """
    l1, l2 = eigenpair
    m1, m2 = abs(l1), abs(l2)
    if abs(l1 - l2) <= tol * max(m1, m2, 1.0):
        return "exceptional"
    if abs(m1 - 1) <= tol and abs(m2 - 1) <= tol:
        return "exact"
    if abs(m1 * m2 - 1) <= tol and abs(m1 - 1) > tol:
        return "broken"
    raise InconsistentEigenvalues(
        f"moduli ({m1}, {m2}) fit neither phase at tol={tol}")


def _wrap(phi: float) -> float:
    return (phi + np.pi) % (2 * np.pi) - np.pi


def conservation_residuals(s: ScatteringAmplitudes) -> dict:
    """Residuals of the generalized conservation law and its phase relations.

    generalized: | |T - 1| - sqrt(R_L R_R) |. phase: for T < 1 the two
    reflection phases coincide; for T > 1 they differ by pi and the left
    reflection leads the transmission by -pi/2. The phase entry is None
    (not applicable) when any amplitude modulus is below 1e-14 or T is at
    unity within 1e-14.
    """
    T = s.T
    gen = abs(abs(T - 1.0) - np.sqrt(s.R_left * s.R_right))
    if min(abs(s.r_left), abs(s.r_right), abs(s.t)) < 1e-14 or abs(T - 1.0) < 1e-14:
        return {"generalized": float(gen), "phase": None}
    pl, pr, pt = np.angle(s.r_left), np.angle(s.r_right), np.angle(s.t)
    if T < 1.0:
        phase = abs(_wrap(pl - pr))
    else:
        phase = max(abs(_wrap(pl - pr + np.pi)), abs(_wrap(pl - pt + np.pi / 2)))
    return {"generalized": float(gen), "phase": float(phase)}


def scattering_amplitudes(bilayer: Bilayer, omega: float,
                          mode: str = MODE_FULL) -> ScatteringAmplitudes:
    """Convenience: chain assembly plus extraction in one call."""
    return scattering_from_transfer(transfer_chain(bilayer, omega, mode))
