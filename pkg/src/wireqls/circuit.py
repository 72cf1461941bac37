"""Equivalent-circuit model of the two-trap coupling network.

A parallel LCR resonator (the shared detection/coupling circuit) presents a
Lorentzian impedance Z(w) = [1/R_p + i w C_p + 1/(i w L_p)]^-1 to the
coupling wire. Each trapped particle's axial mode is the series-mode
equivalent l = m (2 d_eff / q)^2, c = 1/(l w_z0^2). Detuning the resonator
below the common axial frequency makes the circuit capacitive
(|Im Z| >> Re Z); the reactive part then mediates a coherent quantum
exchange between the two axial modes at

    w_ex = |Im Z(w_z)| / (2 sqrt(l_L l_S)),   t_ex = pi / (2 w_ex),

while the resistive part damps each mode at Re Z(w_z) / l_i. The product
t_ex * n_bar * Gamma (exchange time, thermal occupation of the bath, worst
damping rate) is the feasibility figure of merit: the exchange is reliable
when it is well below one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import E, HBAR, K_B, M_E

__all__ = [
    "ResonatorParams",
    "TrapParams",
    "SeriesModeEquivalent",
    "ExchangeBudget",
    "impedance",
    "series_equivalent",
    "exchange_rate",
    "exchange_time",
    "dissipation_rate",
    "thermal_occupation",
    "qls_budget",
    "optimize_detuning",
]

TRAP_LABELS = ("logic", "spectroscopy")


@dataclass(frozen=True)
class ResonatorParams:
    """Parallel LCR resonator: inductance, capacitance, parallel resistance."""

    L_p: float  # [H]
    C_p: float  # [F]
    R_p: float  # [Ohm]

    def __post_init__(self) -> None:
        for name in ("L_p", "C_p", "R_p"):
            if getattr(self, name) <= 0:
                raise ValueError(f"resonator {name} must be positive")

    @property
    def omega_res(self) -> float:
        """Center frequency 1/sqrt(L_p C_p) [rad/s]."""
        return 1.0 / math.sqrt(self.L_p * self.C_p)

    @property
    def delta_omega_res(self) -> float:
        """Full width 1/(C_p R_p) [rad/s]."""
        return 1.0 / (self.C_p * self.R_p)

    @property
    def quality_factor(self) -> float:
        """Q = R_p * omega_res * C_p = omega_res / delta_omega_res."""
        return self.R_p * self.omega_res * self.C_p

    @classmethod
    def detuned_below(
        cls, C_p: float, R_p: float, omega_z: float, detune_linewidths: float
    ) -> "ResonatorParams":
        """Solve for L_p so that omega_res sits the requested number of line
        widths below omega_z (the trap-voltage retuning convention)."""
        if detune_linewidths <= 0:
            raise ValueError("detuning must be positive (resonator below omega_z)")
        if omega_z <= 0:
            raise ValueError("omega_z must be positive")
        width = 1.0 / (C_p * R_p)
        omega_res = omega_z - detune_linewidths * width
        if omega_res <= 0:
            raise ValueError("requested detuning places omega_res at or below zero")
        return cls(L_p=1.0 / (omega_res**2 * C_p), C_p=C_p, R_p=R_p)


@dataclass(frozen=True)
class TrapParams:
    """One trap's geometry and operating point."""

    d_eff: float     # effective trap size [m]
    omega_z: float   # resonator-shifted axial frequency [rad/s]
    B: float         # axial magnetic field [T]
    B2_local: float  # local quadratic field gradient [T/m^2]
    T_axial: float   # axial mode temperature [K]
    label: str       # "logic" or "spectroscopy"

    def __post_init__(self) -> None:
        if self.d_eff <= 0:
            raise ValueError("d_eff must be positive")
        if self.omega_z <= 0:
            raise ValueError("omega_z must be positive")
        if self.T_axial < 0:
            raise ValueError("T_axial must be non-negative")
        if self.label not in TRAP_LABELS:
            raise ValueError(f"label must be one of {TRAP_LABELS}")


@dataclass(frozen=True)
class SeriesModeEquivalent:
    """Series-lc equivalent of one axial mode; l*c*omega_z0^2 = 1."""

    l: float         # [H]
    c: float         # [F]
    omega_z0: float  # bare axial frequency without the resonator [rad/s]


@dataclass(frozen=True)
class ExchangeBudget:
    """Derived exchange/dissipation numbers for one operating point.

    `figure` is t_ex * n_bar * gamma by construction, and `feasible` is set
    iff figure < threshold (default 1.0). gamma_L/gamma_S are the two
    single-mode damping rates whose max is `gamma`; they feed the open-system
    simulation directly.
    """

    z_at_omega_z: complex   # resonator impedance at the operating point [Ohm]
    c_T: float              # capacitive-limit replacement 1/(w_z |Im Z|) [F]
    omega_ex: float         # exchange rate [rad/s]
    t_ex: float             # full exchange time pi/(2 w_ex) [s]
    gamma: float            # max single-mode dissipation rate [1/s]
    n_bar: float            # thermal occupation of the axial bath
    figure: float           # t_ex * n_bar * gamma
    gamma_L: float          # logic-branch damping Re Z / l_L [1/s]
    gamma_S: float          # spectroscopy-branch damping Re Z / l_S [1/s]
    l_L: float              # logic series inductance [H]
    l_S: float              # spectroscopy series inductance [H]
    resonator: ResonatorParams  # as tuned for this budget
    feasible: bool
    threshold: float = 1.0


def impedance(res: ResonatorParams, omega: float) -> complex:
    """Complex impedance of the parallel LCR at angular frequency omega.

    Z(w) = [1/R_p + i w C_p + 1/(i w L_p)]^-1. Purely real (= R_p) at
    omega_res; inductive (Im > 0) below, capacitive (Im < 0) above.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    admittance = 1.0 / res.R_p + 1j * omega * res.C_p + 1.0 / (1j * omega * res.L_p)
    return 1.0 / admittance


def series_equivalent(
    trap: TrapParams, m: float = M_E, q: float = E, z_im: float = 0.0
) -> SeriesModeEquivalent:
    """Series-mode equivalent of one trapped particle.

    l = m (2 d_eff / q)^2. The resonator pulls the axial frequency by
    -Im[Z(w_z)]/l, so the bare frequency that the trap voltage must realize
    is omega_z0 = omega_z + Im[Z(w_z)]/l; c follows from l c omega_z0^2 = 1.
    """
    l = m * (2.0 * trap.d_eff / q) ** 2
    omega_z0 = trap.omega_z + z_im / l
    if omega_z0 <= 0:
        raise ValueError("frequency pulling drives the bare axial frequency negative")
    return SeriesModeEquivalent(l=l, c=1.0 / (l * omega_z0**2), omega_z0=omega_z0)


def exchange_rate(z_im_abs: float, l_L: float, l_S: float) -> float:
    """Exchange rate |Im Z(w_z)| / (2 sqrt(l_L l_S)) in rad/s."""
    if l_L <= 0 or l_S <= 0:
        raise ValueError("series inductances must be positive")
    if z_im_abs < 0:
        raise ValueError("z_im_abs is a magnitude and must be non-negative")
    return z_im_abs / (2.0 * math.sqrt(l_L * l_S))


def exchange_time(omega_ex: float) -> float:
    """Full swap time pi/(2 omega_ex) in seconds."""
    if omega_ex <= 0:
        raise ValueError("omega_ex must be positive")
    return math.pi / (2.0 * omega_ex)


def dissipation_rate(z_re: float, l_L: float, l_S: float) -> float:
    """Worst single-mode damping rate max(Re Z / l_L, Re Z / l_S) in 1/s."""
    if l_L <= 0 or l_S <= 0:
        raise ValueError("series inductances must be positive")
    if z_re < 0:
        raise ValueError("Re Z must be non-negative")
    return max(z_re / l_L, z_re / l_S)


def thermal_occupation(omega_z: float, T: float) -> float:
    """Bose-Einstein occupation 1/[exp(hbar w / k_B T) - 1]; zero at T=0."""
    if omega_z <= 0:
        raise ValueError("omega_z must be positive")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if T == 0.0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega_z / (K_B * T))


def qls_budget(
    res: ResonatorParams,
    trap_L: TrapParams,
    trap_S: TrapParams,
    T: float,
    detune_linewidths: float,
    m: float = M_E,
    q: float = E,
    feasibility_threshold: float = 1.0,
) -> ExchangeBudget:
    """Compose impedance -> series equivalents -> exchange budget.

    The resonator inductor is re-solved from (C_p, R_p) so that omega_res
    sits `detune_linewidths` line widths below the traps' common axial
    frequency; the L_p carried by `res` is treated as stock and replaced.
    Both traps must be tuned to the same omega_z.

    Returns an ExchangeBudget; `feasible` is set iff
    t_ex * n_bar * gamma < feasibility_threshold.
    """
    if not math.isclose(trap_L.omega_z, trap_S.omega_z, rel_tol=1e-12):
        raise ValueError("both traps must be tuned to the same axial frequency")
    omega_z = trap_L.omega_z
    tuned = ResonatorParams.detuned_below(res.C_p, res.R_p, omega_z, detune_linewidths)
    z = impedance(tuned, omega_z)
    eq_L = series_equivalent(trap_L, m=m, q=q, z_im=z.imag)
    eq_S = series_equivalent(trap_S, m=m, q=q, z_im=z.imag)
    z_im_abs = abs(z.imag)
    if z_im_abs == 0.0:
        raise ValueError("Im Z(omega_z) vanishes; no reactive coupling at this detuning")
    w_ex = exchange_rate(z_im_abs, eq_L.l, eq_S.l)
    t_ex = exchange_time(w_ex)
    gamma_L = z.real / eq_L.l
    gamma_S = z.real / eq_S.l
    gamma = max(gamma_L, gamma_S)
    n_bar = thermal_occupation(omega_z, T)
    figure = t_ex * n_bar * gamma
    return ExchangeBudget(
        z_at_omega_z=z,
        c_T=1.0 / (omega_z * z_im_abs),
        omega_ex=w_ex,
        t_ex=t_ex,
        gamma=gamma,
        n_bar=n_bar,
        figure=figure,
        gamma_L=gamma_L,
        gamma_S=gamma_S,
        l_L=eq_L.l,
        l_S=eq_S.l,
        resonator=tuned,
        feasible=figure < feasibility_threshold,
        threshold=feasibility_threshold,
    )


def optimize_detuning(
    res: ResonatorParams,
    trap_L: TrapParams,
    trap_S: TrapParams,
    T: float,
    constraint: float,
    scan_range: tuple[float, float] = (1.0, 1000.0),
    step: float = 0.25,
    m: float = M_E,
    q: float = E,
) -> float | None:
    """Smallest detuning (fastest exchange) whose figure meets `constraint`.

    In the capacitive limit Re Z ~ detuning^-2 and |Im Z| ~ detuning^-1, so
    the figure t_ex * n_bar * gamma falls off as 1/detuning; a monotone
    upward scan therefore finds the smallest admissible detuning. Returns
    None when no detuning in `scan_range` satisfies the constraint.
    """
    if not 0.0 < constraint < 1.0:
        raise ValueError("constraint must lie in (0, 1)")
    lo, hi = scan_range
    if not (0.0 < lo < hi) or step <= 0:
        raise ValueError("scan_range must be increasing and positive, step > 0")
    n_steps = int(math.floor((hi - lo) / step))
    for i in range(n_steps + 1):
        detuning = lo + i * step
        budget = qls_budget(res, trap_L, trap_S, T, detuning, m=m, q=q)
        if budget.figure <= constraint:
            return detuning
    return None
