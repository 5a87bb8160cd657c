"""Parameter sweeps, threshold location, theory comparison, and the CLI.

The engine evaluates observables over a grid in loss amplitude, frequency, or
temperature, emitting rectangular tables: one row per grid point in grid
order, failed points carried as data via a status column. Threshold location
is plain bisection on a scalar that changes sign inside a user bracket.

Units at this boundary: frequency in Trad/s, thickness in nm, temperature in
K; everything is converted to SI internally.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import effective, media, noise, observables, scattering
from .effective import BranchAmbiguity, LasingPole
from .media import NM, TRAD, Bilayer, LorentzMedium
from .noise import SumRuleViolation
from .observables import DegenerateDenominator, HomodyneConfig, SqueezedCoherentInput
from .scattering import InconsistentEigenvalues, SingularTransfer

__version__ = "0.1.0"

OBSERVABLE_ORDER = ("scattering", "eigenvalues", "noise", "variance", "mandel", "eta")
VARIABLES = ("alpha_l", "omega", "temperature")
THEORIES = ("exact", "effective", "both")
THRESHOLD_KINDS = ("atr", "accidental_degeneracy", "exceptional_point",
                   "eta_unity", "squeeze_crossing", "mandel_crossing")

_ROW_ERRORS = (LasingPole, BranchAmbiguity, SingularTransfer,
               DegenerateDenominator, InconsistentEigenvalues)


class ConfigError(Exception):
    """Invalid configuration (CLI exit code 2)."""


class NoSignChange(Exception):
    """Bracket does not straddle the requested threshold (CLI exit code 3)."""


@dataclass(frozen=True)
class SweepSpec:
    """Everything needed to evaluate a sweep deterministically."""

    preset: str | None = "set1"
    materials: tuple[LorentzMedium, LorentzMedium] | None = None  # (gain, loss)
    variable: str = "alpha_l"
    start: float = 1.0
    stop: float = 1000.0
    count: int = 500
    spacing: str | None = None          # "linear" | "log" | None (auto)
    fixed_omega_trad: float | None = None
    fixed_alpha_l: float = 2.0
    temperature_k: float = 0.0
    thickness_nm: float = 10.0
    theory: str = "exact"
    mode: str = scattering.MODE_FULL
    observables: tuple[str, ...] = ("scattering",)
    input_state: SqueezedCoherentInput = field(default_factory=SqueezedCoherentInput)
    phi_lo: float = 0.0
    check_sum_rule: bool = False
    reproducible: bool = False

    def validate(self) -> "SweepSpec":
        if self.preset is None and self.materials is None:
            raise ConfigError("either a preset or explicit materials is required")
        if self.preset is not None and self.preset not in media.PRESET_IDS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        if self.variable not in VARIABLES:
            raise ConfigError(f"variable must be one of {VARIABLES}")
        if not (self.count >= 2):
            raise ConfigError("count must be at least 2")
        if not (self.start < self.stop):
            raise ConfigError("start must be less than stop")
        if self.theory not in THEORIES:
            raise ConfigError(f"theory must be one of {THEORIES}")
        spacing = self.spacing
        if spacing not in (None, "linear", "log"):
            raise ConfigError("spacing must be 'linear' or 'log'")
        if spacing == "log" and self.start <= 0:
            raise ConfigError("log spacing requires start > 0")
        bad = [o for o in self.observables if o not in OBSERVABLE_ORDER]
        if bad:
            raise ConfigError(f"unknown observables {bad}; choose from {OBSERVABLE_ORDER}")
        if not self.observables:
            raise ConfigError("at least one observable is required")
        if self.check_sum_rule and scattering.canonical_mode(self.mode) != scattering.MODE_FULL:
            raise ConfigError("sum rule check requires full-complex mode")
        if self.temperature_k < 0:
            raise ConfigError("temperature must be nonnegative")
        return self


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list]
    metadata: dict

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_format_cell(c) for c in row])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        def clean(c):
            if isinstance(c, float) and math.isnan(c):
                return None
            return c
        return {"metadata": self.metadata,
                "columns": self.columns,
                "rows": [[clean(c) for c in row] for row in self.rows]}

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def _format_cell(c) -> str:
    if isinstance(c, float):
        return "nan" if math.isnan(c) else f"{c:.17g}"
    if c is None:
        return "nan"
    return str(c)


def grid_values(spec: SweepSpec) -> np.ndarray:
    spacing = spec.spacing
    if spacing is None:
        decades = (math.log10(spec.stop / spec.start)
                   if spec.variable == "alpha_l" and spec.start > 0 else 0.0)
        spacing = "log" if decades >= 2.0 else "linear"
    if spacing == "log":
        return np.logspace(math.log10(spec.start), math.log10(spec.stop), spec.count)
    return np.linspace(spec.start, spec.stop, spec.count)


def _default_omega_trad(spec: SweepSpec) -> float:
    if spec.fixed_omega_trad is not None:
        return spec.fixed_omega_trad
    if spec.preset is not None:
        return media.preset_default_omega(spec.preset) / TRAD
    return (spec.materials[0].omega0) / TRAD


def _bilayer_at(spec: SweepSpec, alpha_l: float) -> Bilayer:
    thickness = spec.thickness_nm * NM
    if spec.preset is not None:
        return media.preset(spec.preset, alpha_l, thickness)
    gain, loss = spec.materials
    return Bilayer(gain=gain, loss=replace(loss, alpha=alpha_l),
                   layer_thickness=thickness)


def _point_parameters(spec: SweepSpec, x: float) -> tuple[Bilayer, float, float]:
    """(bilayer, omega_rad_s, temperature_k) at grid value x."""
    if spec.variable == "alpha_l":
        return (_bilayer_at(spec, float(x)),
                _default_omega_trad(spec) * TRAD, spec.temperature_k)
    if spec.variable == "omega":
        return (_bilayer_at(spec, spec.fixed_alpha_l),
                float(x) * TRAD, spec.temperature_k)
    return (_bilayer_at(spec, spec.fixed_alpha_l),
            _default_omega_trad(spec) * TRAD, float(x))


def _columns_for(spec: SweepSpec) -> list[str]:
    var_col = {"alpha_l": "alpha_l", "omega": "omega_trad",
               "temperature": "temperature_k"}[spec.variable]
    cols = [var_col]
    both = spec.theory == "both"
    for obs in OBSERVABLE_ORDER:
        if obs not in spec.observables:
            continue
        if obs == "scattering":
            cols += ["T", "R_left", "R_right", "phase_t", "phase_r_left",
                     "phase_r_right", "phase_t_unwrapped",
                     "conservation_generalized", "conservation_phase"]
            if both:
                cols += ["T_effective", "R_left_effective", "R_right_effective",
                         "T_rel_dev", "R_left_rel_dev", "R_right_rel_dev"]
        elif obs == "eigenvalues":
            cols += ["lambda1_mod", "lambda1_arg", "lambda2_mod", "lambda2_arg",
                     "unimodularity_dev", "phase_class"]
        elif obs == "noise":
            cols += ["s_right", "s_left", "deficit_left", "deficit_right"]
            if both:
                cols += ["s_right_effective", "s_left_effective",
                         "s_right_rel_dev", "s_left_rel_dev"]
        elif obs == "variance":
            cols += ["variance"]
            if both:
                cols += ["variance_effective", "variance_rel_dev"]
        elif obs == "mandel":
            cols += ["mandel_q"]
            if both:
                cols += ["mandel_q_effective", "mandel_q_rel_dev"]
        elif obs == "eta":
            cols += ["n_eff_re", "n_eff_im", "eta_mod", "eta_arg"]
    cols.append("status")
    return cols


def _rel_dev(eff: float, exact: float) -> float:
    return abs(eff - exact) / max(abs(exact), 1e-300)


def _scattering_cells(s, prefix: str = "") -> dict:
    cons = scattering.conservation_residuals(s)
    return {
        prefix + "T": s.T, prefix + "R_left": s.R_left, prefix + "R_right": s.R_right,
        prefix + "phase_t": float(np.angle(s.t)),
        prefix + "phase_r_left": float(np.angle(s.r_left)),
        prefix + "phase_r_right": float(np.angle(s.r_right)),
        prefix + "conservation_generalized": cons["generalized"],
        prefix + "conservation_phase": (math.nan if cons["phase"] is None
                                        else cons["phase"]),
    }


def _evaluate_point(spec: SweepSpec, x: float) -> dict:
    """All cells this spec can produce at grid value x, plus a status."""
    cells: dict = {"status": "ok"}
    try:
        bil, omega, theta = _point_parameters(spec, x)
        wants = set(spec.observables)
        need_exact = spec.theory in ("exact", "both")
        need_eff = spec.theory in ("effective", "both") or "eta" in wants

        s_exact = flux_exact = None
        if need_exact and wants & {"scattering", "eigenvalues", "noise",
                                   "variance", "mandel"}:
            chain = scattering.transfer_chain(bil, omega, spec.mode)
            s_exact = scattering.scattering_from_transfer(chain)
            if wants & {"noise", "variance", "mandel"}:
                flux_exact = noise.noise_flux(
                    bil, omega, spec.mode, theta,
                    check_sum_rule=spec.check_sum_rule)

        n_eff = s_eff = flux_eff = None
        if need_eff:
            n_eff = effective.bloch_index(bil, omega)
            if wants & {"scattering", "eigenvalues", "noise", "variance",
                        "mandel", "eta"}:
                if "eta" in wants:
                    eta = effective.round_trip(n_eff, omega, bil.layer_thickness)
                    cells.update(n_eff_re=n_eff.real, n_eff_im=n_eff.imag,
                                 eta_mod=abs(eta), eta_arg=float(np.angle(eta)))
                if spec.theory != "exact" and wants & {"scattering", "eigenvalues",
                                                       "noise", "variance", "mandel"}:
                    s_eff = effective.effective_amplitudes(
                        n_eff, omega, bil.layer_thickness)
                    if wants & {"noise", "variance", "mandel"}:
                        flux_eff = effective.effective_noise(
                            bil, omega, n_eff, theta)

        # primary columns come from the requested theory
        s_main = s_exact if spec.theory in ("exact", "both") else s_eff
        flux_main = flux_exact if spec.theory in ("exact", "both") else flux_eff

        if "scattering" in wants and s_main is not None:
            cells.update(_scattering_cells(s_main))
            if spec.theory == "both" and s_eff is not None:
                cells.update(T_effective=s_eff.T, R_left_effective=s_eff.R_left,
                             R_right_effective=s_eff.R_right,
                             T_rel_dev=_rel_dev(s_eff.T, s_main.T),
                             R_left_rel_dev=_rel_dev(s_eff.R_left, s_main.R_left),
                             R_right_rel_dev=_rel_dev(s_eff.R_right, s_main.R_right))
        if "eigenvalues" in wants and s_main is not None:
            if spec.theory in ("exact", "both"):
                lam = scattering.eigenvalues(chain)
            else:
                raw = np.linalg.eigvals(s_main.matrix())
                lam = sorted(raw, key=abs, reverse=True)
            dev = max(abs(abs(lam[0]) - 1), abs(abs(lam[1]) - 1))
            try:
                cls = scattering.classify_phase(tuple(lam))
            except InconsistentEigenvalues:
                cls = "inconsistent"
            cells.update(lambda1_mod=abs(lam[0]), lambda1_arg=float(np.angle(lam[0])),
                         lambda2_mod=abs(lam[1]), lambda2_arg=float(np.angle(lam[1])),
                         unimodularity_dev=float(dev), phase_class=cls)
        if "noise" in wants and s_main is not None and flux_main is not None:
            deficit = noise.unitarity_deficit(s_main)
            cells.update(s_right=flux_main["s_right"], s_left=flux_main["s_left"],
                         deficit_left=deficit["left"], deficit_right=deficit["right"])
            if spec.theory == "both" and flux_eff is not None:
                cells.update(
                    s_right_effective=flux_eff["s_right"],
                    s_left_effective=flux_eff["s_left"],
                    s_right_rel_dev=_rel_dev(flux_eff["s_right"], flux_main["s_right"]),
                    s_left_rel_dev=_rel_dev(flux_eff["s_left"], flux_main["s_left"]))
        if "variance" in wants and s_main is not None and flux_main is not None:
            hom = HomodyneConfig(phi_lo=spec.phi_lo)
            v = observables.homodyne_variance(
                s_main, flux_main["s_right"], spec.input_state, hom)
            cells.update(variance=v)
            if spec.theory == "both" and s_eff is not None and flux_eff is not None:
                ve = observables.homodyne_variance(
                    s_eff, flux_eff["s_right"], spec.input_state, hom)
                cells.update(variance_effective=ve,
                             variance_rel_dev=_rel_dev(ve, v))
        if "mandel" in wants and s_main is not None and flux_main is not None:
            q = observables.mandel_q(s_main, flux_main["s_right"], spec.input_state)
            cells.update(mandel_q=q)
            if spec.theory == "both" and s_eff is not None and flux_eff is not None:
                qe = observables.mandel_q(
                    s_eff, flux_eff["s_right"], spec.input_state)
                cells.update(mandel_q_effective=qe, mandel_q_rel_dev=_rel_dev(qe, q))
    except _ROW_ERRORS as exc:
        cells["status"] = type(exc).__name__
    return cells


def run_sweep(spec: SweepSpec) -> ResultTable:
    """Evaluate the spec over its grid; failed points are rows, not errors."""
    spec = spec.validate()
    xs = grid_values(spec)
    columns = _columns_for(spec)
    var_col = columns[0]
    rows = []
    for x in xs:
        cells = _evaluate_point(spec, float(x))
        cells[var_col] = float(x)
        rows.append([cells.get(c, math.nan) for c in columns])

    if "phase_t_unwrapped" in columns:
        i_w = columns.index("phase_t_unwrapped")
        i_p = columns.index("phase_t")
        phases = np.array([(row[i_p] if isinstance(row[i_p], float) else math.nan)
                           for row in rows])
        valid = ~np.isnan(phases)
        unwrapped = phases.copy()
        unwrapped[valid] = np.unwrap(phases[valid])
        for row, val in zip(rows, unwrapped):
            row[i_w] = float(val)

    meta = {
        "version": __version__,
        "preset": spec.preset,
        "materials": None if spec.materials is None else [
            {"role": role, "eps_b": m.eps_b, "alpha": m.alpha,
             "omega0_trad": m.omega0 / TRAD, "gamma_trad": m.gamma / TRAD}
            for role, m in zip(("gain", "loss"), spec.materials)],
        "variable": spec.variable,
        "grid": {"start": spec.start, "stop": spec.stop, "count": spec.count,
                 "spacing": spec.spacing or "auto"},
        "fixed": {"omega_trad": (None if spec.variable == "omega"
                                 else _default_omega_trad(spec)),
                  "alpha_l": (None if spec.variable == "alpha_l"
                              else spec.fixed_alpha_l),
                  "temperature_k": (None if spec.variable == "temperature"
                                    else spec.temperature_k)},
        "thickness_nm": spec.thickness_nm,
        "theory": spec.theory,
        "mode": scattering.canonical_mode(spec.mode),
        "observables": list(spec.observables),
        "input_state": {"xi": spec.input_state.xi,
                        "phi_xi": spec.input_state.phi_xi,
                        "w": spec.input_state.coherent_weight,
                        "phi_rho": spec.input_state.phi_rho,
                        "phi_lo": spec.phi_lo},
        "units": "omega in Trad/s, thickness in nm, temperature in K",
    }
    if not spec.reproducible:
        meta["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return ResultTable(columns=columns, rows=rows, metadata=meta)


def compare_theories(spec: SweepSpec) -> ResultTable:
    """run_sweep with exact and effective columns side by side."""
    return run_sweep(replace(spec, theory="both"))


@dataclass(frozen=True)
class ThresholdQuery:
    kind: str
    bracket: tuple[float, float]
    tol: float = 1e-10


def _threshold_scalar(spec: SweepSpec, kind: str):
    """Scalar function of the swept variable whose zero is the threshold."""
    obs = {"atr": ("scattering",), "accidental_degeneracy": ("scattering",),
           "exceptional_point": ("eigenvalues",), "eta_unity": ("eta",),
           "squeeze_crossing": ("variance",), "mandel_crossing": ("mandel",)}[kind]
    base = replace(spec, observables=obs)

    def f(x: float) -> float:
        cells = _evaluate_point(base, x)
        if cells["status"] != "ok":
            raise ConfigError(
                f"threshold scalar failed at {x}: {cells['status']}")
        if kind == "atr":
            return cells["T"] - 1.0
        if kind == "accidental_degeneracy":
            return cells["R_right"] - cells["R_left"]
        if kind == "exceptional_point":
            return cells["unimodularity_dev"] - 1e-4
        if kind == "eta_unity":
            return cells["eta_mod"] - 1.0
        if kind == "squeeze_crossing":
            return cells["variance"] - 1.0
        return cells["mandel_q"]

    return f


def locate_threshold(query: ThresholdQuery, spec: SweepSpec) -> float:
    """Bisection for the threshold abscissa inside the query bracket.

    The swept variable and all fixed parameters come from the spec; the
    result is verified by a sign check at x +- sqrt(tol)-scaled offsets.
    """
    if query.kind not in THRESHOLD_KINDS:
        raise ConfigError(f"unknown threshold kind {query.kind!r}")
    lo, hi = query.bracket
    lo0, hi0 = lo, hi
    if not (lo < hi):
        raise ConfigError("bracket must satisfy lo < hi")
    f = _threshold_scalar(spec, query.kind)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0) == (fhi < 0):
        raise NoSignChange(
            f"{query.kind}: no sign change on [{lo}, {hi}] "
            f"(f(lo)={flo:.6g}, f(hi)={fhi:.6g})")
    while hi - lo > query.tol * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            lo = hi = mid
            break
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    # Sign check well outside the converged interval: some observables have
    # a cusp at the crossing (|eta| in particular) with ~1e-5 noise on the
    # steep side, so probing at a few*tol flaps. sqrt(tol)-relative offsets,
    # clamped to the original bracket, stay above that floor.
    delta = max(abs(x), 1.0) * math.sqrt(query.tol)
    a, b = max(x - delta, lo0), min(x + delta, hi0)
    fa, fb = f(a), f(b)
    if fa != 0.0 and fb != 0.0 and (fa < 0) == (fb < 0):
        raise ArithmeticError(
            f"bisection verification failed at {x} (f({a})={fa:.3g}, "
            f"f({b})={fb:.3g})")
    return x


# ---------------------------------------------------------------------------
# configuration ingestion


def _medium_from_config(obj: dict, label: str) -> LorentzMedium:
    try:
        return LorentzMedium(eps_b=float(obj["eps_b"]), alpha=float(obj["alpha"]),
                             omega0=float(obj["omega0_trad"]) * TRAD,
                             gamma=float(obj["gamma_trad"]) * TRAD)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad {label} material: {exc}") from exc


def spec_from_config(cfg: dict) -> SweepSpec:
    """Build a SweepSpec from the JSON config schema."""
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    known = {"preset", "materials", "thickness_nm", "sweep", "fixed",
             "input_state", "observables", "theory", "mode", "check_sum_rule"}
    unknown = set(cfg) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    preset_id = cfg.get("preset")
    materials = None
    if "materials" in cfg:
        m = cfg["materials"]
        if not (isinstance(m, dict) and set(m) == {"gain", "loss"}):
            raise ConfigError("materials must be an object with gain and loss")
        materials = (_medium_from_config(m["gain"], "gain"),
                     _medium_from_config(m["loss"], "loss"))
        preset_id = None
    if preset_id is None and materials is None:
        preset_id = "set1"

    sweep = cfg.get("sweep", {})
    fixed = cfg.get("fixed", {})
    inb = cfg.get("input_state", {})
    try:
        inp = SqueezedCoherentInput(
            xi=float(inb.get("xi", observables.DEFAULT_XI)),
            phi_xi=float(inb.get("phi_xi", observables.DEFAULT_PHI_XI)),
            coherent_weight=float(inb.get("w", observables.DEFAULT_COHERENT_WEIGHT)),
            phi_rho=float(inb.get("phi_rho", observables.DEFAULT_PHI_RHO)))
    except ValueError as exc:
        raise ConfigError(f"bad input_state: {exc}") from exc

    obs = cfg.get("observables", ["scattering"])
    if isinstance(obs, str):
        obs = [obs]

    return SweepSpec(
        preset=preset_id,
        materials=materials,
        variable=str(sweep.get("variable", "alpha_l")),
        start=float(sweep.get("start", 1.0)),
        stop=float(sweep.get("stop", 1000.0)),
        count=int(sweep.get("count", 500)),
        spacing=sweep.get("spacing"),
        fixed_omega_trad=(None if fixed.get("omega_trad") is None
                          else float(fixed["omega_trad"])),
        fixed_alpha_l=float(fixed.get("alpha_l", 2.0)),
        temperature_k=float(fixed.get("temperature_k", 0.0)),
        thickness_nm=float(cfg.get("thickness_nm", 10.0)),
        theory=str(cfg.get("theory", "exact")),
        mode=str(cfg.get("mode", scattering.MODE_FULL)),
        observables=tuple(obs),
        input_state=inp,
        phi_lo=float(inb.get("phi_lo", 0.0)),
        check_sum_rule=bool(cfg.get("check_sum_rule", False)),
    )


# ---------------------------------------------------------------------------
# CLI


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--range expects start:stop:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad --range {text!r}: {exc}") from exc


def _parse_bracket(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigError(f"--bracket expects lo:hi, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad --bracket {text!r}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--temperature-k", type=float, default=None)
    common.add_argument("--theory", choices=THEORIES, default=None)
    common.add_argument("--mode", choices=("full-complex", "paper"), default=None)
    common.add_argument("--reproducible", action="store_true",
                        help="omit the metadata timestamp")
    common.add_argument("--check", action="store_true",
                        help="validate the commutator sum rule at every point")
    common.add_argument("--preset", choices=media.PRESET_IDS, default=None)
    common.add_argument("--thickness-nm", type=float, default=None)
    common.add_argument("--omega-trad", type=float, default=None,
                        help="fixed frequency for alpha_l/temperature sweeps")
    common.add_argument("--alpha-l", type=float, default=None,
                        help="fixed loss amplitude for omega/temperature sweeps")

    parser = argparse.ArgumentParser(
        prog="ptbilayer",
        description="Gain/loss bilayer scattering, noise, and observable sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("sweep", "evaluate observables over a grid"),
                            ("compare", "sweep with exact and effective columns")):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--var", choices=VARIABLES, default=None)
        p.add_argument("--range", dest="range_", metavar="START:STOP:COUNT",
                       default=None)
        spacing = p.add_mutually_exclusive_group()
        spacing.add_argument("--log", action="store_true")
        spacing.add_argument("--linear", action="store_true")
        p.add_argument("--obs", default=None,
                       help="comma-separated subset of " + ",".join(OBSERVABLE_ORDER))

    p = sub.add_parser("locate", parents=[common],
                       help="bisect for a named threshold inside a bracket")
    p.add_argument("--kind", choices=THRESHOLD_KINDS, required=True)
    p.add_argument("--bracket", required=True, metavar="LO:HI")
    p.add_argument("--var", choices=("alpha_l", "omega"), default="alpha_l")
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("pt-solve", parents=[common],
                       help="balance frequencies and gain amplitude for a preset")

    sub.add_parser("presets", parents=[common], help="list preset materials")
    return parser


def _spec_from_args(args) -> SweepSpec:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    spec = spec_from_config(cfg)

    if args.preset is not None:
        spec = replace(spec, preset=args.preset, materials=None)
    if getattr(args, "var", None) is not None:
        spec = replace(spec, variable=args.var)
    if getattr(args, "range_", None) is not None:
        start, stop, count = _parse_range(args.range_)
        spec = replace(spec, start=start, stop=stop, count=count)
    if getattr(args, "log", False):
        spec = replace(spec, spacing="log")
    if getattr(args, "linear", False):
        spec = replace(spec, spacing="linear")
    if getattr(args, "obs", None) is not None:
        spec = replace(spec, observables=tuple(s.strip() for s in args.obs.split(",")
                                               if s.strip()))
    if args.omega_trad is not None:
        spec = replace(spec, fixed_omega_trad=args.omega_trad)
    if args.alpha_l is not None:
        spec = replace(spec, fixed_alpha_l=args.alpha_l)
    if args.temperature_k is not None:
        spec = replace(spec, temperature_k=args.temperature_k)
    if args.theory is not None:
        spec = replace(spec, theory=args.theory)
    if args.mode is not None:
        spec = replace(spec, mode=args.mode)
    if args.thickness_nm is not None:
        spec = replace(spec, thickness_nm=args.thickness_nm)
    if args.check:
        spec = replace(spec, check_sum_rule=True)
    if args.reproducible:
        spec = replace(spec, reproducible=True)
    return spec


def _emit(args, table: ResultTable) -> None:
    if args.format == "json":
        text = json.dumps(table.to_json_obj(), indent=2, sort_keys=True) + "\n"
    else:
        text = table.to_csv_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj: dict) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_pt_solve(args) -> dict:
    spec = _spec_from_args(args)
    alpha_l = args.alpha_l if args.alpha_l is not None else spec.fixed_alpha_l
    if spec.preset is not None:
        bil = media.preset(spec.preset, alpha_l)
        gain_template, loss = bil.gain, bil.loss
        loss = replace(loss, alpha=alpha_l)
    else:
        gain_template, loss = spec.materials
        loss = replace(loss, alpha=alpha_l)
    roots = media.pt_frequency(loss, gain_template)
    omega_pt = roots[-1]
    alpha_gain = media.pt_balanced_gain(loss, gain_template, omega_pt)
    return {
        "preset": spec.preset,
        "alpha_l": alpha_l,
        "balance_roots_trad": [r / TRAD for r in roots],
        "omega_pt_trad": omega_pt / TRAD,
        "omega_pt_over_omega0_gain": omega_pt / gain_template.omega0,
        "alpha_gain": alpha_gain,
        "alpha_gain_abs": abs(alpha_gain),
        "background_delta_eps": loss.eps_b - gain_template.eps_b,
        "balanced": bool(media.verify_pt(
            Bilayer(gain=replace(gain_template, alpha=alpha_gain), loss=loss),
            omega_pt)),
    }


def _cmd_presets() -> dict:
    out = {}
    for set_id in media.PRESET_IDS:
        bil = media.preset(set_id, 2.0)
        out[set_id] = {
            "loss": {"eps_b": bil.loss.eps_b, "alpha": "alpha_l",
                     "omega0_trad": bil.loss.omega0 / TRAD,
                     "gamma_trad": bil.loss.gamma / TRAD},
            "gain": {"eps_b": bil.gain.eps_b,
                     "alpha": ("-alpha_l" if set_id == "set1"
                               else bil.gain.alpha),
                     "omega0_trad": bil.gain.omega0 / TRAD,
                     "gamma_trad": bil.gain.gamma / TRAD},
            "default_omega_trad": media.preset_default_omega(set_id) / TRAD,
            "layer_thickness_nm": bil.layer_thickness / NM,
        }
    return out


def cli_main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command in ("sweep", "compare"):
            spec = _spec_from_args(args)
            if args.command == "compare":
                spec = replace(spec, theory="both")
            _emit(args, run_sweep(spec))
        elif args.command == "locate":
            spec = _spec_from_args(args)
            spec = replace(spec, variable=args.var).validate()
            query = ThresholdQuery(kind=args.kind,
                                   bracket=_parse_bracket(args.bracket),
                                   tol=args.tol)
            x = locate_threshold(query, spec)
            _emit_json(args, {"kind": args.kind, "variable": args.var,
                              "bracket": list(query.bracket), "abscissa": x})
        elif args.command == "pt-solve":
            _emit_json(args, _cmd_pt_solve(args))
        elif args.command == "presets":
            _emit_json(args, _cmd_presets())
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NoSignChange as exc:
        print(f"no sign change: {exc}", file=sys.stderr)
        return 3
    except SumRuleViolation as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4
    return 0


def main() -> None:
    sys.exit(cli_main())
