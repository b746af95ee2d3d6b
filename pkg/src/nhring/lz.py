"""Landau-Zener layer: crossing bookkeeping, tunneling probabilities, the
Hermitian gauge map with its flux-reversal asymmetry, asymptotic one-way
amplitudes for the single-harmonic potential, and transparency planning."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidParameterError, StepUnderflow
from .model import ModeWindow, Picture, WaveState
from .dynamics import Trajectory


@dataclass(frozen=True)
class LZEvent:
    """One diabatic level crossing of the ramped-flux chain."""

    n: int
    tau_n: float  # (2n+1)/(2 sigma)
    s_eff: float  # sqrt(s1 s2)
    p_zener: float


@dataclass(frozen=True)
class TransparencyPlan:
    """Ramp-origin choice realizing delayed invisibility at time T.

    T = (2M+1)/(2 sigma) + tau0 holds exactly by construction; M is the
    occupation cutoff (amplitudes for n <= M must vanish initially) and
    sigma < 0 selects the transition-free ramp direction.
    """

    M: int
    sigma: float
    tau0: float
    T: float


class GaugeDirection(enum.Enum):
    TO_HERMITIAN = "to_hermitian"
    FROM_HERMITIAN = "from_hermitian"


def lz_probability(s1: float, s2: float, sigma: float) -> float:
    """P_Z = 1 - exp(-pi s1 s2 / |sigma|), the two-level tunneling probability.

    The product s1 s2 = S^2 is the squared coupling of the gauge-mapped
    symmetric chain, so the formula covers the non-Hermitian case below the
    symmetry-breaking point; |sigma| keeps it meaningful for either ramp
    direction.  A negative product (non-Hermiticity beyond the breaking
    point) is outside this formula's validity.
    """
    if sigma == 0:
        raise InvalidParameterError("sigma must be nonzero")
    prod = s1 * s2
    if prod < 0:
        raise InvalidParameterError("s1*s2 < 0: tunneling formula invalid beyond the PT-breaking point")
    return 1.0 - math.exp(-math.pi * prod / abs(sigma))


def crossing_times(s1: float, s2: float, sigma: float, n_range) -> list[LZEvent]:
    """LZ events tau_n = (2n+1)/(2 sigma) for each winding number in n_range."""
    if sigma == 0:
        raise InvalidParameterError("sigma must be nonzero")
    s_eff = math.sqrt(s1 * s2) if s1 * s2 >= 0 else float("nan")
    p = lz_probability(s1, s2, sigma) if s1 * s2 >= 0 else float("nan")
    return [LZEvent(n=int(n), tau_n=(2 * n + 1) / (2 * sigma), s_eff=s_eff, p_zener=p) for n in n_range]


def gauge_factors(window: ModeWindow, alpha: float, direction: GaugeDirection) -> np.ndarray:
    if not (0.0 <= alpha < 1.0):
        raise InvalidParameterError("gauge map requires 0 <= alpha < 1 (it diverges at alpha = 1)")
    r = (1.0 + alpha) / (1.0 - alpha)
    exponent = +0.5 if direction is GaugeDirection.FROM_HERMITIAN else -0.5
    return r ** (exponent * window.ns)


def gauge_map(s: WaveState, alpha: float, direction: GaugeDirection) -> WaveState:
    """Rescale amplitudes by [(1+alpha)/(1-alpha)]^(+-n/2).

    FROM_HERMITIAN applies the +n/2 power (symmetric-chain amplitudes a_n to
    physical c_n); TO_HERMITIAN inverts it.
    """
    return WaveState(
        tau=s.tau,
        window=s.window,
        amps=s.amps * gauge_factors(s.window, alpha, direction),
        picture=s.picture,
    )


def asymmetry_residual(traj_plus: Trajectory, traj_minus: Trajectory, alpha: float, floor: float = 1e-10) -> float:
    """Worst-case violation of the flux-reversal identity.

    For ramp rates +sigma and -sigma started from the same state the exact
    dynamics satisfies c_n(tau, -sigma) = c_{-n}(tau, sigma) * r^n with
    r = (1+alpha)/(1-alpha).  Returns the max over sampled (n, tau) of the
    identity's absolute residual, restricted to entries where either side
    exceeds ``floor``.
    """
    if not (0.0 <= alpha < 1.0):
        raise InvalidParameterError("asymmetry identity requires 0 <= alpha < 1")
    if traj_plus.window != traj_minus.window:
        raise InvalidParameterError("trajectories use different mode windows")
    if len(traj_plus.taus) != len(traj_minus.taus) or not np.allclose(traj_plus.taus, traj_minus.taus):
        raise InvalidParameterError("trajectories were sampled at different times")
    w = traj_plus.window
    r = (1.0 + alpha) / (1.0 - alpha)
    worst = 0.0
    for n in w.ns:
        if not (w.n_min <= -n <= w.n_max):
            continue
        lhs = traj_minus.mode(int(n))
        rhs = traj_plus.mode(int(-n)) * r ** int(n)
        mask = np.maximum(np.abs(lhs), np.abs(rhs)) > floor
        if np.any(mask):
            worst = max(worst, float(np.abs(lhs - rhs)[mask].max()))
    return worst


def asymptotic_amplitudes(
    v0: float,
    sigma: float,
    initial: dict[int, complex],
    taus: np.ndarray,
    n_range: tuple[int, int] | None = None,
) -> dict[int, np.ndarray]:
    """Step-function cascade for the one-way chain (s2 = 0, coupling s1 = 2 v0).

    Valid in the slow-ramp, shallow-potential regime.  Away from the level
    crossings the interaction-picture amplitudes are constant; each crossing
    tau_m = (2m+1)/(2 sigma) adds a sudden jump

        J = -i s1 sqrt(pi/(i sigma)) exp(i sigma tau_m^2)

    times the feeding amplitude.  For sigma > 0 only n >= 1 jump (at
    tau_{n-1}, fed by a_{n-1} evaluated at that crossing); for sigma < 0 only
    n <= 0 jump, fed by the initial value a_{n-1}(0).  The square root uses
    its principal branch for either ramp sign.  Sample times equal to a
    crossing time are rejected: the step approximation is discontinuous there.
    """
    if sigma == 0:
        raise InvalidParameterError("sigma must be nonzero")
    if v0 < 0:
        raise InvalidParameterError("v0 must be non-negative")
    if not initial:
        raise InvalidParameterError("initial amplitudes are empty")
    taus = np.asarray(taus, float)
    s1 = 2.0 * v0
    jump_scale = -1j * s1 * cmath.sqrt(cmath.pi / (1j * sigma))

    lo_key, hi_key = min(initial), max(initial)
    if n_range is None:
        t_max = float(taus.max()) if taus.size else 0.0
        if sigma > 0:
            hi_key = max(hi_key, math.floor(sigma * t_max + 0.5))
        else:
            lo_key = min(lo_key, math.ceil(sigma * t_max + 0.5))
        n_lo, n_hi = lo_key, hi_key
    else:
        n_lo, n_hi = n_range

    def tau_cross(m: int) -> float:
        return (2 * m + 1) / (2 * sigma)

    crossings = {n: tau_cross(n - 1) for n in range(n_lo, n_hi + 1)}
    for n, tc in crossings.items():
        if (sigma > 0 and n >= 1) or (sigma < 0 and n <= 0):
            if np.any(taus == tc):
                raise InvalidParameterError(
                    f"sample time equals crossing time tau_{n - 1} = {tc}: jump is discontinuous there"
                )

    a0 = {n: complex(initial.get(n, 0.0)) for n in range(n_lo - 1, n_hi + 1)}

    def value_at(n: int, t: float) -> complex:
        """a_n(t) under the step cascade (t never equals its own crossing)."""
        if n < n_lo - 1:
            return 0j
        base = a0.get(n, 0j)
        if sigma > 0 and n >= 1:
            tc = tau_cross(n - 1)
            if t > tc:
                return base + jump_scale * cmath.exp(1j * sigma * tc * tc) * value_at(n - 1, tc)
            return base
        if sigma < 0 and n <= 0:
            tc = tau_cross(n - 1)
            if t > tc:
                return base + jump_scale * cmath.exp(1j * sigma * tc * tc) * a0.get(n - 1, 0j)
            return base
        return base

    table: dict[int, np.ndarray] = {}
    for n in range(n_lo, n_hi + 1):
        table[n] = np.array([value_at(n, t) for t in taus])
    return table


def plan_transparency(M: int, sigma: float, T_target: float) -> TransparencyPlan:
    """Choose the ramp origin tau0 so the potential turns invisible at T_target.

    Requires sigma < 0: with the one-way coupling, that ramp direction blocks
    every crossing once the flux has passed the populated levels.
    """
    if sigma >= 0:
        raise InvalidParameterError(
            "transparency requires sigma < 0: the opposite ramp direction keeps feeding higher levels"
        )
    tau0 = T_target - (2 * M + 1) / (2 * sigma)
    return TransparencyPlan(M=int(M), sigma=float(sigma), tau0=float(tau0), T=float(T_target))


# ---------------------------------------------------------------------------
# Isolated two-level crossing
# ---------------------------------------------------------------------------


def _two_level_phase(n: int, sigma: float, t: float) -> float:
    # Delta theta(t) = int_0^t [E_{n+1} - E_n] = (2n+1) t - sigma t^2
    return (2 * n + 1) * t - sigma * t * t


def two_level_lz(
    s1: float,
    s2: float,
    n: int,
    sigma: float,
    tau_span: tuple[float, float],
    rtol: float = 1e-10,
    atol: float = 1e-13,
    initial: tuple[complex, complex] = (1.0 + 0j, 0.0j),
) -> np.ndarray:
    """Numerically integrate the isolated crossing of levels n and n+1.

    The pair obeys i c_n' = (n - sigma t)^2 c_n + s2 c_{n+1} and
    i c_{n+1}' = (n+1 - sigma t)^2 c_{n+1} + s1 c_n, with a linear crossing at
    tau_n = (2n+1)/(2 sigma).  ``tau_span`` must bracket tau_n with margin at
    least 20/sqrt(|sigma|) on both sides.  Returns the direct-picture
    amplitudes (c_n, c_{n+1}) at the end of the span; this numerical solve is
    the package's reference for the crossing (no closed-form scattering
    matrix is provided).
    """
    if sigma == 0:
        raise InvalidParameterError("sigma must be nonzero")
    t0, t1 = map(float, tau_span)
    tau_n = (2 * n + 1) / (2 * sigma)
    margin = 20.0 / math.sqrt(abs(sigma))
    if not (t0 <= tau_n - margin and t1 >= tau_n + margin):
        raise InvalidParameterError(
            f"tau_span must bracket the crossing at {tau_n:.6g} with margin >= {margin:.6g}"
        )

    def rhs(t, a):
        ph = cmath.exp(1j * _two_level_phase(n, sigma, t))
        return np.array([-1j * s2 * a[1] / ph, -1j * s1 * a[0] * ph])

    a0 = np.array(initial, complex) * np.exp(1j * _theta_levels(n, sigma, t0))
    sol = solve_ivp(rhs, (t0, t1), a0, method="DOP853", rtol=rtol, atol=atol)
    if sol.status != 0:
        raise StepUnderflow(f"two-level integration failed: {sol.message}")
    return sol.y[:, -1] * np.exp(-1j * _theta_levels(n, sigma, t1))


def _theta_levels(n: int, sigma: float, t: float) -> np.ndarray:
    """Exact dynamical phases int_0^t (m - sigma x)^2 dx for m = n, n+1."""
    m = np.array([n, n + 1], float)
    return (m * m) * t - m * sigma * t * t + sigma * sigma * t**3 / 3.0


def lz_transition_probability(
    s1: float,
    s2: float,
    sigma: float,
    n: int = 0,
    margin: float | None = None,
    rtol: float = 1e-10,
) -> float:
    """Transition probability of one isolated crossing, measured numerically.

    Starts in the instantaneous eigenstate adjacent to diabatic level n well
    before the crossing and projects on the instantaneous eigenstate adjacent
    to level n+1 well after it, which removes the finite-span dressing that
    otherwise pollutes raw diabatic populations.  For s1 != s2 the system is
    first gauge-mapped to the symmetric chain (coupling sqrt(s1 s2)), where
    the adiabatic basis is orthogonal; the probability is gauge-invariant.
    """
    if sigma == 0:
        raise InvalidParameterError("sigma must be nonzero")
    prod = s1 * s2
    if prod < 0:
        raise InvalidParameterError("s1*s2 < 0: no Hermitian-equivalent crossing")
    if prod == 0:
        return 0.0
    S = math.sqrt(prod)
    tau_n = (2 * n + 1) / (2 * sigma)
    if margin is None:
        margin = 20.0 / math.sqrt(abs(sigma))
    t0, t1 = tau_n - margin, tau_n + margin

    def h2(t: float) -> np.ndarray:
        return np.array([[(n - sigma * t) ** 2, S], [S, (n + 1 - sigma * t) ** 2]])

    w0, v0 = np.linalg.eigh(h2(t0))
    start = v0[:, int(np.argmax(np.abs(v0[0, :])))].astype(complex)

    def rhs(t, a):
        ph = cmath.exp(1j * _two_level_phase(n, sigma, t))
        return np.array([-1j * S * a[1] / ph, -1j * S * a[0] * ph])

    a0 = start * np.exp(1j * _theta_levels(n, sigma, t0))
    sol = solve_ivp(rhs, (t0, t1), a0, method="DOP853", rtol=rtol, atol=1e-13)
    if sol.status != 0:
        raise StepUnderflow(f"two-level integration failed: {sol.message}")
    c1 = sol.y[:, -1] * np.exp(-1j * _theta_levels(n, sigma, t1))
    w1, v1 = np.linalg.eigh(h2(t1))
    target = v1[:, int(np.argmax(np.abs(v1[1, :])))]
    return float(abs(np.vdot(target, c1)) ** 2)
