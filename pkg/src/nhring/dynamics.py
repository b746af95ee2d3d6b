"""Time evolution of the truncated momentum-space amplitudes.

The coupled equations are

    i dc_n/dtau = (n - f(tau))^2 c_n + sum_q u_q c_{n-q}

on the winding numbers of a :class:`~nhring.model.ModeWindow`.  The
propagator removes the time-dependent diagonal with its exact closed-form
phase integral (an integrating-factor transform, so the stepper only
resolves the coupling dynamics) and drives the transformed system with an
embedded adaptive Dormand-Prince pair under the (rtol, atol) local-error
contract.  Sampled states are returned in the direct picture with the
dynamical phases restored exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import BoundaryMassExceeded, InvalidParameterError, StepUnderflow
from .model import FluxProgram, ModeWindow, Picture, RingPotential, WaveState

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PropagatorConfig:
    """Tolerances and safety limits for :func:`evolve`."""

    rtol: float = 1e-9
    atol: float = 1e-12
    max_step: float = math.inf
    boundary_guard: float = 1e-8

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise InvalidParameterError("rtol and atol must be positive")
        if not (0.0 < self.boundary_guard < 1.0):
            raise InvalidParameterError("boundary_guard must lie in (0, 1)")


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: amplitudes, norms and mean winding number."""

    window: ModeWindow
    taus: np.ndarray
    amps: np.ndarray  # shape (n_samples, window.size), direct picture
    norms: np.ndarray  # ||c(tau_k)||^2
    mean_winding: np.ndarray

    @property
    def states(self) -> tuple[WaveState, ...]:
        return tuple(
            WaveState(tau=float(t), window=self.window, amps=self.amps[k], picture=Picture.DIRECT)
            for k, t in enumerate(self.taus)
        )

    def mode(self, n: int) -> np.ndarray:
        """Amplitude history of one winding number."""
        return self.amps[:, self.window.index(n)]


def delta_state(window: ModeWindow, n0: int, tau: float = 0.0) -> WaveState:
    """State with all probability on winding number n0."""
    amps = np.zeros(window.size, complex)
    amps[window.index(n0)] = 1.0
    return WaveState(tau=tau, window=window, amps=amps, picture=Picture.DIRECT)


def gaussian_state(
    window: ModeWindow,
    center: float,
    width: float,
    truncate_below: int | None = None,
    tau: float = 0.0,
) -> WaveState:
    """Normalized Gaussian momentum distribution exp[-(n-center)^2/width^2].

    ``truncate_below`` zeroes every amplitude with n <= that winding number
    (used when a protocol requires an exactly empty tail).
    """
    if width <= 0:
        raise InvalidParameterError("width must be positive")
    ns = window.ns
    amps = np.exp(-((ns - center) ** 2) / width**2).astype(complex)
    if truncate_below is not None:
        amps[ns <= truncate_below] = 0.0
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise InvalidParameterError("initial state has no support inside the window")
    return WaveState(tau=tau, window=window, amps=amps / nrm, picture=Picture.DIRECT)


def auto_window(
    initial: dict[int, complex],
    flux: FluxProgram,
    tau_span: tuple[float, float],
    margin: int = 4,
    mass_tol: float = 1e-12,
) -> ModeWindow:
    """Window sized for the momentum drift of a ramped-flux run.

    The core [n_lo, n_hi] is the smallest mode range keeping at least
    1 - mass_tol of the initial probability; the window is then extended by
    the flux excursion on the drift side (population follows n ~ f(tau), one
    step per level crossing) plus ``margin`` modes on both sides.
    """
    if not initial:
        raise InvalidParameterError("initial amplitudes are empty")
    ns = np.array(sorted(initial))
    probs = np.array([abs(initial[n]) ** 2 for n in ns])
    total = probs.sum()
    if total == 0:
        raise InvalidParameterError("initial amplitudes are all zero")
    budget = 0.5 * mass_tol * total
    lo_idx, hi_idx = 0, len(ns) - 1
    acc = 0.0
    while lo_idx < hi_idx and acc + probs[lo_idx] <= budget:
        acc += probs[lo_idx]
        lo_idx += 1
    acc = 0.0
    while hi_idx > lo_idx and acc + probs[hi_idx] <= budget:
        acc += probs[hi_idx]
        hi_idx -= 1
    n_lo, n_hi = int(ns[lo_idx]), int(ns[hi_idx])

    t0, t1 = tau_span
    dflux = float(flux(t1) - flux(t0))
    lo = n_lo + min(0, math.floor(dflux)) - margin
    hi = n_hi + max(0, math.ceil(dflux)) + margin
    return ModeWindow(lo, hi)


def _coupling_terms(p: RingPotential, size: int) -> list[tuple[int, complex]]:
    return [(q, u) for q, u in sorted(p.coeffs.items()) if 0 < abs(q) < size]


def evolve(
    p: RingPotential,
    flux: FluxProgram,
    window: ModeWindow,
    initial: WaveState,
    tau_span: tuple[float, float],
    cfg: PropagatorConfig = PropagatorConfig(),
    taus: np.ndarray | int = 400,
) -> Trajectory:
    """Propagate the truncated amplitude equations over ``tau_span``.

    ``taus`` is either a sample count (uniform over the span) or an explicit
    increasing array of sample times inside the span.  The norm is tracked,
    never enforced: non-Hermitian potentials do not conserve it.

    Raises :class:`BoundaryMassExceeded` when the probability fraction in the
    outermost two modes at either window edge exceeds ``cfg.boundary_guard``
    at any sample (the truncation is then invalid), and
    :class:`StepUnderflow` if the adaptive stepper collapses.
    """
    if initial.window != window:
        raise InvalidParameterError("initial state window does not match the propagation window")
    if initial.picture is not Picture.DIRECT:
        raise InvalidParameterError("initial state must be in the direct picture")
    t0, t1 = map(float, tau_span)
    if not (t1 > t0):
        raise InvalidParameterError("tau_span must be increasing")
    if initial.tau != t0:
        raise InvalidParameterError("initial.tau must equal tau_span[0]")
    if isinstance(taus, (int, np.integer)):
        t_eval = np.linspace(t0, t1, int(taus))
    else:
        t_eval = np.asarray(taus, float)
        if t_eval.ndim != 1 or np.any(np.diff(t_eval) <= 0):
            raise InvalidParameterError("sample times must be strictly increasing")
        if t_eval[0] < t0 or t_eval[-1] > t1:
            raise InvalidParameterError("sample times must lie inside tau_span")

    ns = window.ns
    n_dim = window.size
    couplings = _coupling_terms(p, n_dim)

    def theta(t: float) -> np.ndarray:
        return flux.phase_integral(ns, t)

    def rhs(t: float, a: np.ndarray) -> np.ndarray:
        th = theta(t)
        out = np.zeros(n_dim, complex)
        for q, u in couplings:
            if q > 0:
                out[q:] += u * np.exp(1j * (th[q:] - th[:-q])) * a[:-q]
            else:
                m = -q
                out[:-m] += u * np.exp(1j * (th[:-m] - th[m:])) * a[m:]
        return -1j * out

    a0 = np.asarray(initial.amps, complex) * np.exp(1j * theta(t0))
    sol = solve_ivp(
        rhs,
        (t0, t1),
        a0,
        method="DOP853",
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        t_eval=t_eval,
    )
    if sol.status != 0:
        raise StepUnderflow(f"propagation failed: {sol.message}")

    phases = np.exp(-1j * np.array([theta(t) for t in sol.t]))
    c = sol.y.T * phases  # (n_samples, n_dim), direct picture
    probs = np.abs(c) ** 2
    norms = probs.sum(axis=1)
    mean_w = (probs @ ns) / norms

    guard_width = min(2, n_dim // 2)
    edge = probs[:, :guard_width].sum(axis=1) + probs[:, -guard_width:].sum(axis=1)
    frac = edge / norms
    if np.any(frac > cfg.boundary_guard):
        k = int(np.argmax(frac))
        raise BoundaryMassExceeded(
            f"boundary mass fraction {frac[k]:.3e} exceeds guard {cfg.boundary_guard:.1e} "
            f"at tau = {sol.t[k]:.6g}; widen the window beyond [{window.n_min}, {window.n_max}] "
            "(or rerun with window='auto')"
        )

    return Trajectory(window=window, taus=sol.t.copy(), amps=c, norms=norms, mean_winding=mean_w)


# ---------------------------------------------------------------------------
# Exact recursion for the single-harmonic (maximally non-Hermitian) potential
# ---------------------------------------------------------------------------


class _PolyExpSum:
    """Finite sum  sum_j p_j(x) exp(i w_j x)  with complex polynomials p_j.

    Closed under the definite integral int_0^x (.) exp(i d t) dt, which is
    all the recursion below needs.  Coefficients are kept ascending.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[float, np.ndarray] | None = None):
        self.terms = terms or {}

    @staticmethod
    def _key(w: float) -> float:
        return round(float(w), 12)

    def add(self, w: float, coeffs: np.ndarray):
        k = self._key(w)
        cur = self.terms.get(k)
        if cur is None:
            self.terms[k] = np.asarray(coeffs, complex).copy()
            return
        if len(cur) < len(coeffs):
            cur = np.pad(cur, (0, len(coeffs) - len(cur)))
        new = np.pad(np.asarray(coeffs, complex), (0, len(cur) - len(coeffs)))
        self.terms[k] = cur + new

    def integrate_with_phase(self, delta: float, scale: complex) -> "_PolyExpSum":
        """scale * int_0^x  self(t) exp(i delta t) dt, exactly."""
        out = _PolyExpSum()
        for w, p in self.terms.items():
            mu = w + delta
            if abs(mu) < 1e-12:
                # resonant: plain polynomial antiderivative (secular term)
                anti = np.concatenate(([0.0], p / np.arange(1, len(p) + 1)))
                out.add(0.0, scale * anti)
            else:
                # int p e^{i mu t} dt = e^{i mu t} Q(t),  Q = sum_k (-1)^k p^(k) / (i mu)^{k+1}
                q = np.zeros_like(p)
                d = p.copy()
                sign = 1.0
                imu = 1j * mu
                denom = imu
                while len(d) > 0 and np.any(d):
                    q[: len(d)] += sign * d / denom
                    d = d[1:] * np.arange(1, len(d))
                    sign = -sign
                    denom = denom * imu
                out.add(mu, scale * q)
                out.add(0.0, np.array([-scale * q[0]]))
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, float)
        val = np.zeros(x.shape, complex)
        for w, p in self.terms.items():
            acc = np.zeros(x.shape, complex)
            for ck in p[::-1]:
                acc = acc * x + ck
            val += acc * np.exp(1j * w * x)
        return val


def triangular_oracle(
    v0: float,
    f: float,
    n0: int,
    taus: np.ndarray,
    n_top: int,
) -> dict[int, np.ndarray]:
    """Exact amplitudes for the single-harmonic potential at static flux.

    For the maximally non-Hermitian ring (only u_{+1} = 2 v0 nonzero) the
    chain is one-way and the amplitudes obey

        c_n(tau) = -i s1 int_0^tau c_{n-1}(xi) exp[i (2n - 2f - 1) xi] dxi

    with c_{n0} = 1 and c_n = 0 for n < n0.  Every integrand is a polynomial
    times a complex exponential, so the recursion is evaluated with exact
    antiderivatives (no quadrature).  At flux f = (2l+1)/2 the phase for
    n = l+1 is stationary and the amplitude grows secularly (linear in tau).

    Returns interaction-picture amplitudes (no dynamical phase) for
    n0 <= n <= n_top, sampled at ``taus``.
    """
    if v0 < 0:
        raise InvalidParameterError("v0 must be non-negative")
    if n_top < n0:
        raise InvalidParameterError("n_top must be at least n0")
    taus = np.asarray(taus, float)
    s1 = 2.0 * v0

    table: dict[int, np.ndarray] = {}
    cur = _PolyExpSum({0.0: np.array([1.0 + 0j])})
    table[n0] = cur(taus)
    for n in range(n0 + 1, n_top + 1):
        delta = 2.0 * n - 2.0 * f - 1.0
        cur = cur.integrate_with_phase(delta, -1j * s1)
        table[n] = cur(taus)
    return table


# ---------------------------------------------------------------------------
# Picture transforms and real-space reconstruction
# ---------------------------------------------------------------------------


def to_interaction_picture(s: WaveState, flux: FluxProgram) -> WaveState:
    """Strip the dynamical phase: a_n = c_n exp(+i int_0^tau (n-f)^2 dt)."""
    if s.picture is not Picture.DIRECT:
        raise InvalidParameterError("state is already in the interaction picture")
    phase = np.exp(1j * flux.phase_integral(s.window.ns, s.tau))
    return WaveState(tau=s.tau, window=s.window, amps=s.amps * phase, picture=Picture.INTERACTION)


def from_interaction_picture(s: WaveState, flux: FluxProgram) -> WaveState:
    """Restore the dynamical phase (inverse of :func:`to_interaction_picture`)."""
    if s.picture is not Picture.INTERACTION:
        raise InvalidParameterError("state is already in the direct picture")
    phase = np.exp(-1j * flux.phase_integral(s.window.ns, s.tau))
    return WaveState(tau=s.tau, window=s.window, amps=s.amps * phase, picture=Picture.DIRECT)


def reconstruct_wavefunction(s: WaveState, phis) -> np.ndarray:
    """psi(phi) = (2 pi)^{-1/2} sum_n c_n exp(i n phi), direct picture only."""
    if s.picture is not Picture.DIRECT:
        raise InvalidParameterError("reconstruction requires direct-picture amplitudes")
    phis = np.atleast_1d(np.asarray(phis, float))
    basis = np.exp(1j * np.outer(phis, s.window.ns))
    return (basis @ s.amps) / math.sqrt(TWO_PI)
