"""State machine and Monte Carlo for the seven-step readout sequence.

One spectroscopy cycle:

  (i)   decouple from the resonator, sideband-cool both axial modes
        (residual thermal occupation survives with the configured n_bar);
  (ii)  apply the spectroscopy drive near the cyclotron line, exciting
        n_c: 0 -> 1 with a probability given by the drive lineshape at the
        current detuning (thermally broadened profile, drifted by magnet
        field noise);
  (iii) sideband pi-pulse on the spectroscopy particle,
        |n_z, n_c> = |0, 1> -> |1, 0>, conditional on n_c = 1;
  (iv)  close the switches: the wire exchanges the axial quanta of the two
        particles with the swap probability from the open-system model;
  (v)   sideband pi-pulse on the logic particle, |1, 0> -> |0, 1>;
  (vi)  measure the logic particle's axial frequency; the bottle shift
        reveals n_c^L, with Gaussian frequency noise set by the averaging
        time, thresholded into a declared jump;
  (vii) bookkeeping and return to (i).

Stage failures are silent (nothing is heralded before step vi). Cycles at
distinct detuning points use independent RNG streams derived from
(seed, point index), so scans are reproducible and order independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import dynamics
from .circuit import ExchangeBudget
from .constants import G_E
from .spectroscopy import ShiftSet

__all__ = [
    "DetectionModel",
    "DriveModel",
    "ProtocolConfig",
    "ProtocolRecord",
    "Lineshape",
    "TimingBudget",
    "drive_probability",
    "readout_shift",
    "resolve_swap_probability",
    "point_rng",
    "run_cycle",
    "simulate_point",
    "lineshape_scan",
    "analytic_jump_probability",
    "fitted_center_width",
    "center_uncertainty",
    "day_scale_center_report",
    "required_averaging_time",
    "timing_budget",
    "write_records_csv",
    "write_lineshape_csv",
]

SECONDS_PER_MINUTE = 60.0

# detection-speedup model defaults: required averaging time is
# (2 z sigma_nu / delta)^2, floored by the measurement overhead
DETECTION_SNR_Z = 3.0
DETECTION_TIME_FLOOR = 0.050  # [s]


@dataclass(frozen=True)
class DetectionModel:
    """Axial-frequency estimator: white frequency noise over an averaging
    window, thresholded at `threshold` (conventionally delta_L/2)."""

    averaging_time: float  # [s]
    noise_density: float   # [rad/s per sqrt(Hz)]
    threshold: float       # [rad/s]

    def __post_init__(self) -> None:
        if self.averaging_time <= 0:
            raise ValueError("averaging_time must be positive")
        if self.noise_density < 0:
            raise ValueError("noise_density must be non-negative")

    @property
    def sigma(self) -> float:
        """Frequency-estimate standard deviation after averaging."""
        return self.noise_density / math.sqrt(self.averaging_time)


@dataclass(frozen=True)
class DriveModel:
    """Spectroscopy drive: detuning grid plus excitation lineshape.

    The thermal (Boltzmann) lineshape is exponential, nonzero only above
    the line center, with 1/e width equal to the trap's cyclotron
    broadening; "gaussian" is the symmetric alternative for sensitivity
    checks. `peak_probability` is the excitation probability exactly on
    the line center.
    """

    detunings: tuple[float, ...]  # drive detuning grid [rad/s]
    profile: str = "exponential"
    peak_probability: float = 1.0

    def __post_init__(self) -> None:
        if self.profile not in ("exponential", "gaussian"):
            raise ValueError("profile must be 'exponential' or 'gaussian'")
        if not 0.0 <= self.peak_probability <= 1.0:
            raise ValueError("peak_probability must lie in [0, 1]")


@dataclass(frozen=True)
class ProtocolConfig:
    """Everything one cycle needs; see module docstring for the sequence."""

    budget: ExchangeBudget
    shifts_L: ShiftSet
    shifts_S: ShiftSet
    pi_pulse_fidelity: float
    sideband_cooling_residual: float  # residual n_bar after step (i)
    detection: DetectionModel
    drive: DriveModel
    field_noise: float                # relative field step per sqrt(minute)
    cycles: int
    seed: int
    omega_c_spec: float               # spectroscopy cyclotron frequency [rad/s]
    cooling_time: float = 0.100       # [s]
    pulse_time: float = 1e-3          # [s] per sideband pulse
    mode: str = "cyclotron"           # or "anomaly"
    g: float = G_E
    swap_probability: float | None = None  # override; default from dynamics

    def __post_init__(self) -> None:
        if not 0.0 <= self.pi_pulse_fidelity <= 1.0:
            raise ValueError("pi_pulse_fidelity must lie in [0, 1]")
        if self.sideband_cooling_residual < 0:
            raise ValueError("sideband_cooling_residual must be non-negative")
        if self.cycles < 1:
            raise ValueError("cycles must be at least 1")
        if self.mode not in ("cyclotron", "anomaly"):
            raise ValueError("mode must be 'cyclotron' or 'anomaly'")
        if not 0.0 < self.detection.threshold < self.shifts_L.delta:
            raise ValueError(
                "detection threshold must lie between 0 and the logic-trap delta"
            )
        if self.field_noise < 0:
            raise ValueError("field_noise must be non-negative")
        if self.omega_c_spec <= 0:
            raise ValueError("omega_c_spec must be positive")

    @property
    def cycle_time(self) -> float:
        """Wall-clock duration of one full cycle."""
        return (
            self.cooling_time
            + 2.0 * self.pulse_time
            + self.budget.t_ex
            + self.detection.averaging_time
        )


@dataclass(frozen=True)
class ProtocolRecord:
    """Outcome log of one cycle; declared_jump implies the measured shift
    reached the threshold."""

    cycle: int
    n_c_after_drive: int
    transfer_s_ok: bool
    exchange_ok: bool
    transfer_l_ok: bool
    measured_shift: float  # [rad/s]
    declared_jump: bool
    wall_time: float       # cumulative [s]


@dataclass(frozen=True)
class Lineshape:
    """Declared-jump fraction per drive detuning with binomial errors."""

    detunings: np.ndarray  # [rad/s]
    fractions: np.ndarray
    errors: np.ndarray
    cycles: int

    def __post_init__(self) -> None:
        if np.any(self.fractions < 0.0) or np.any(self.fractions > 1.0):
            raise ValueError("fractions must lie in [0, 1]")
        if np.any(self.errors < 0.0):
            raise ValueError("errors must be non-negative")


@dataclass(frozen=True)
class TimingBudget:
    """Per-stage durations and the bottle-scaling detection comparison."""

    stages: dict[str, float]
    total: float
    exchange_dominates: bool
    detection_speedup: float  # vs. a bottle smaller by `bottle_ratio`
    bottle_ratio: float


def drive_probability(
    drive: DriveModel, width: float, detuning: float, drift: float = 0.0
) -> float:
    """Excitation probability of the drive at a detuning from the nominal
    line center, with the center displaced by `drift`."""
    x = detuning - drift
    if drive.profile == "exponential":
        if x < 0.0:
            return 0.0
        if width == 0.0:
            return drive.peak_probability if x == 0.0 else 0.0
        return drive.peak_probability * math.exp(-x / width)
    if width == 0.0:
        return drive.peak_probability if x == 0.0 else 0.0
    return drive.peak_probability * math.exp(-0.5 * (x / width) ** 2)


def readout_shift(config: ProtocolConfig) -> float:
    """True logic-trap axial shift of a completed jump, from the bottle
    shift formula.

    Cyclotron mode: one transferred cyclotron quantum, shift = delta_L
    exactly. Anomaly mode: the drive also toggles the spin flag, so the
    readout shift is the full quantum-number difference,
    delta_L * (1 + (g/2) * delta_m_s) with delta_m_s = -1 (tiny and
    negative; practical anomaly detection waits for the cyclotron decay,
    outside this machine).
    """
    delta = config.shifts_L.delta
    if config.mode == "cyclotron":
        return delta
    return delta * (1.0 - 0.5 * config.g)


def resolve_swap_probability(config: ProtocolConfig, n_max: int = 4) -> float:
    """Exchange success probability for step (iv).

    Uses the configured override when present, otherwise evaluates the
    open-system swap fidelity at the budget's rates.
    """
    if config.swap_probability is not None:
        return config.swap_probability
    params = dynamics.ExchangeParams(
        omega_ex=config.budget.omega_ex,
        gamma_L=config.budget.gamma_L,
        gamma_S=config.budget.gamma_S,
        n_bar=config.budget.n_bar,
    )
    return dynamics.swap_fidelity(params, n_max=n_max)


def _residual_excited_probability(n_bar: float) -> float:
    """P(n_z >= 1) of a thermal state with mean occupation n_bar."""
    return n_bar / (1.0 + n_bar)


def _detection_probability(shift: float, sigma: float, threshold: float) -> float:
    """P(measured >= threshold | true shift), Gaussian estimator noise."""
    if sigma == 0.0:
        return 1.0 if shift >= threshold else 0.0
    return 0.5 * math.erfc((threshold - shift) / (sigma * math.sqrt(2.0)))


def run_cycle(
    config: ProtocolConfig,
    detuning: float,
    rng: np.random.Generator,
    drift: float = 0.0,
    wall_time: float = 0.0,
    swap_probability: float | None = None,
    cycle_index: int = 0,
) -> ProtocolRecord:
    """Execute one cycle of the sequence; stochastic outcomes are data.

    `drift` is the accumulated field-noise displacement of the cyclotron
    line in rad/s; `wall_time` the clock at cycle start. The swap
    probability may be passed in to avoid re-deriving it per cycle.
    """
    p_swap = (
        swap_probability
        if swap_probability is not None
        else resolve_swap_probability(config)
    )
    p_res = _residual_excited_probability(config.sideband_cooling_residual)
    p_pi = config.pi_pulse_fidelity

    # (i) sideband cooling with residual occupation
    n_z_s = 1 if rng.random() < p_res else 0
    n_z_l = 1 if rng.random() < p_res else 0
    # (ii) spectroscopy drive
    p_exc = drive_probability(
        config.drive, config.shifts_S.broadening, detuning, drift
    )
    n_c_s = 1 if rng.random() < p_exc else 0
    n_c_after_drive = n_c_s
    # (iii) sideband transfer on S, only from |n_z, n_c> = |0, 1>
    transfer_s_ok = False
    if n_c_s == 1 and n_z_s == 0 and rng.random() < p_pi:
        n_z_s, n_c_s = 1, 0
        transfer_s_ok = True
    # (iv) wire exchange of the axial quanta
    exchange_ok = False
    if n_z_s != n_z_l and rng.random() < p_swap:
        n_z_s, n_z_l = n_z_l, n_z_s
        exchange_ok = True
    # (v) sideband transfer on L, only from |n_z, n_c> = |1, 0>
    n_c_l = 0
    transfer_l_ok = False
    if n_z_l == 1 and rng.random() < p_pi:
        n_z_l, n_c_l = 0, 1
        transfer_l_ok = True
    # (vi) axial-frequency measurement of the logic particle
    true_shift = readout_shift(config) * n_c_l
    sigma = config.detection.sigma
    measured = true_shift + (rng.normal(0.0, sigma) if sigma > 0.0 else 0.0)
    declared = measured >= config.detection.threshold
    # (vii) bookkeeping
    return ProtocolRecord(
        cycle=cycle_index,
        n_c_after_drive=n_c_after_drive,
        transfer_s_ok=transfer_s_ok,
        exchange_ok=exchange_ok,
        transfer_l_ok=transfer_l_ok,
        measured_shift=measured,
        declared_jump=bool(declared),
        wall_time=wall_time + config.cycle_time,
    )


def point_rng(seed: int, point_index: int) -> np.random.Generator:
    """Deterministic per-point RNG stream, independent across points."""
    return np.random.default_rng([seed, point_index])


def simulate_point(
    config: ProtocolConfig,
    detuning: float,
    point_index: int = 0,
    swap_probability: float | None = None,
) -> list[ProtocolRecord]:
    """Run `config.cycles` cycles at one drive detuning.

    The cyclotron line center random-walks with the magnet field noise:
    each cycle adds a Gaussian step of relative size
    field_noise * sqrt(cycle_time / minute) to the line position.
    """
    rng = point_rng(config.seed, point_index)
    p_swap = (
        swap_probability
        if swap_probability is not None
        else resolve_swap_probability(config)
    )
    step_scale = config.field_noise * config.omega_c_spec
    records = []
    drift = 0.0
    wall = 0.0
    for i in range(config.cycles):
        if step_scale > 0.0:
            drift += rng.normal(0.0, 1.0) * step_scale * math.sqrt(
                config.cycle_time / SECONDS_PER_MINUTE
            )
        rec = run_cycle(
            config,
            detuning,
            rng,
            drift=drift,
            wall_time=wall,
            swap_probability=p_swap,
            cycle_index=i,
        )
        wall = rec.wall_time
        records.append(rec)
    return records


def lineshape_scan(config: ProtocolConfig) -> Lineshape:
    """Declared-jump fraction across the drive detuning grid.

    Reproducible given the config seed; per-point streams are independent,
    so points may be evaluated in any order (or concurrently) without
    changing the result.
    """
    detunings = np.asarray(config.drive.detunings, dtype=float)
    if detunings.size == 0:
        raise ValueError("drive detuning grid must be non-empty")
    p_swap = resolve_swap_probability(config)
    fractions = np.empty(detunings.size)
    errors = np.empty(detunings.size)
    for k, det in enumerate(detunings):
        records = simulate_point(config, float(det), k, swap_probability=p_swap)
        hits = sum(r.declared_jump for r in records)
        f = hits / config.cycles
        fractions[k] = f
        errors[k] = math.sqrt(f * (1.0 - f) / config.cycles)
    return Lineshape(
        detunings=detunings, fractions=fractions, errors=errors, cycles=config.cycles
    )


def analytic_jump_probability(
    config: ProtocolConfig,
    detuning: float,
    drift: float = 0.0,
    swap_probability: float | None = None,
) -> float:
    """Exact declared-jump probability of one cycle.

    Closed-form enumeration of the stage Bernoulli tree: the independent
    oracle the Monte Carlo must converge to.
    """
    p_swap = (
        swap_probability
        if swap_probability is not None
        else resolve_swap_probability(config)
    )
    p_res = _residual_excited_probability(config.sideband_cooling_residual)
    p_pi = config.pi_pulse_fidelity
    p_exc = drive_probability(
        config.drive, config.shifts_S.broadening, detuning, drift
    )
    shift = readout_shift(config)
    sigma = config.detection.sigma
    threshold = config.detection.threshold

    p_declared = 0.0
    for n_z_s0, pa in ((0, 1.0 - p_res), (1, p_res)):
        for n_z_l0, pb in ((0, 1.0 - p_res), (1, p_res)):
            for exc, pc in ((0, 1.0 - p_exc), (1, p_exc)):
                # step (iii) branches: (n_z_s, n_c_s, probability)
                if exc == 1 and n_z_s0 == 0:
                    branches3 = [(1, 0, p_pi), (n_z_s0, 1, 1.0 - p_pi)]
                else:
                    branches3 = [(n_z_s0, exc, 1.0)]
                for n_z_s, _n_c_s, pd in branches3:
                    # step (iv) branches: (n_z_l, probability)
                    if n_z_s != n_z_l0:
                        branches4 = [(n_z_s, p_swap), (n_z_l0, 1.0 - p_swap)]
                    else:
                        branches4 = [(n_z_l0, 1.0)]
                    for n_z_l, pe in branches4:
                        # step (v) branches: (n_c_l, probability)
                        if n_z_l == 1:
                            branches5 = [(1, p_pi), (0, 1.0 - p_pi)]
                        else:
                            branches5 = [(0, 1.0)]
                        for n_c_l, pf in branches5:
                            weight = pa * pb * pc * pd * pe * pf
                            if weight == 0.0:
                                continue
                            p_declared += weight * _detection_probability(
                                shift * n_c_l, sigma, threshold
                            )
    return p_declared


def fitted_center_width(lineshape: Lineshape) -> tuple[float, float]:
    """Excitation-weighted first moment and standard deviation of the line.

    For the one-sided exponential profile the standard deviation equals the
    1/e width and the first moment sits one width above the edge; for the
    Gaussian profile the standard deviation is the Gaussian sigma.
    """
    w = np.clip(lineshape.fractions, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise ValueError("lineshape has no excitation to fit")
    center = float((w * lineshape.detunings).sum() / total)
    var = float((w * (lineshape.detunings - center) ** 2).sum() / total)
    return center, math.sqrt(max(var, 0.0))


def center_uncertainty(lineshape: Lineshape) -> float:
    """Statistical error of the fitted center, propagated from the
    per-point binomial errors."""
    w = np.clip(lineshape.fractions, 0.0, None)
    total = w.sum()
    if total <= 0.0:
        raise ValueError("lineshape has no excitation to fit")
    center = float((w * lineshape.detunings).sum() / total)
    partials = (lineshape.detunings - center) / total
    return float(np.sqrt(((partials * lineshape.errors) ** 2).sum()))


def day_scale_center_report(
    config: ProtocolConfig, total_duration: float = 86400.0
) -> dict:
    """Order-of-magnitude report of the line-center uncertainty after a
    long measurement campaign.

    Distributes `total_duration` of wall-clock time evenly over the drive
    grid, runs the Monte Carlo with the configured field-noise walk, and
    fits the center. Returns the fitted center, its statistical
    uncertainty, the uncertainty relative to the cyclotron frequency, and
    the expected field-walk drift over the campaign. When the walk carries
    the line off the grid entirely (no excitation recorded), the fit
    entries are None and only the walk scale is meaningful. Reporting
    only; day-scale projections also hinge on drift tracking and cycle
    overheads outside this model.
    """
    points = len(config.drive.detunings)
    cycles = max(1, int(total_duration / config.cycle_time / points))
    day_config = replace(config, cycles=cycles)
    shape = lineshape_scan(day_config)
    walk_sigma = (
        config.field_noise
        * config.omega_c_spec
        * math.sqrt(total_duration / SECONDS_PER_MINUTE)
    )
    report = {
        "cycles_per_point": cycles,
        "total_cycles": cycles * points,
        "simulated_duration_s": cycles * points * config.cycle_time,
        "walk_sigma_rad_per_s": walk_sigma,
        "center_rad_per_s": None,
        "center_sigma_rad_per_s": None,
        "relative_center_uncertainty": None,
    }
    if shape.fractions.sum() > 0.0:
        center, _ = fitted_center_width(shape)
        sigma = center_uncertainty(shape)
        report["center_rad_per_s"] = center
        report["center_sigma_rad_per_s"] = sigma
        report["relative_center_uncertainty"] = sigma / config.omega_c_spec
    return report


def required_averaging_time(
    delta: float,
    noise_density: float,
    z: float = DETECTION_SNR_Z,
    floor: float = 0.0,
) -> float:
    """Averaging time needed to resolve a shift `delta` at z-sigma against
    the threshold delta/2: (2 z noise / delta)^2, floored by overhead."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    return max((2.0 * z * noise_density / delta) ** 2, floor)


def timing_budget(
    config: ProtocolConfig,
    snr_z: float = DETECTION_SNR_Z,
    detection_floor: float = DETECTION_TIME_FLOOR,
    bottle_ratio: float = 30.0,
) -> TimingBudget:
    """Stage durations, totals, and the detection-speedup comparison.

    The speedup compares the required averaging time at the configured
    logic-trap shift against a bottle `bottle_ratio` times smaller
    (detection time scales as delta^-2 at fixed noise density, capped by
    the per-measurement overhead floor).
    """
    stages = {
        "cooling": config.cooling_time,
        "pulses": 2.0 * config.pulse_time,
        "exchange": config.budget.t_ex,
        "detection": config.detection.averaging_time,
    }
    total = sum(stages.values())
    exchange_dominates = all(
        stages["exchange"] >= v for k, v in stages.items() if k != "exchange"
    )
    delta = config.shifts_L.delta
    t_small = required_averaging_time(
        delta / bottle_ratio, config.detection.noise_density, snr_z, detection_floor
    )
    t_large = required_averaging_time(
        delta, config.detection.noise_density, snr_z, detection_floor
    )
    return TimingBudget(
        stages=stages,
        total=total,
        exchange_dominates=exchange_dominates,
        detection_speedup=t_small / t_large,
        bottle_ratio=bottle_ratio,
    )


def write_records_csv(records: list[ProtocolRecord], stream) -> None:
    """Record stream as CSV; shifts in rad/s, times in seconds."""
    stream.write(
        "cycle,n_c_after_drive,transfer_s_ok,exchange_ok,transfer_l_ok,"
        "measured_shift_rad_per_s,declared_jump,wall_time_s\n"
    )
    for r in records:
        stream.write(
            f"{r.cycle},{r.n_c_after_drive},{int(r.transfer_s_ok)},"
            f"{int(r.exchange_ok)},{int(r.transfer_l_ok)},"
            f"{float(r.measured_shift)!r},{int(r.declared_jump)},"
            f"{float(r.wall_time)!r}\n"
        )


def write_lineshape_csv(
    lineshape: Lineshape, stream, summary: dict[str, float] | None = None
) -> None:
    """Lineshape as CSV (detuning, fraction, error) with summary lines
    appended as '# key = value' comments."""
    stream.write("detuning_rad_per_s,excitation_fraction,stat_error\n")
    for d, f, e in zip(lineshape.detunings, lineshape.fractions, lineshape.errors):
        stream.write(f"{float(d)!r},{float(f)!r},{float(e)!r}\n")
    for key, value in (summary or {}).items():
        stream.write(f"# {key} = {float(value)!r}\n")
