"""Ring model: dimensionless units, domain types and potential constructors.

Units convention
----------------
Energies are measured in eps0 = hbar^2/(2 m R^2) and time in tau = hbar t /
(2 m R^2).  A potential Fourier coefficient V_q maps to the dimensionless
amplitude u_q = V_q / eps0 = 2 V_q m R^2 / hbar^2, so for the reference
cosine/sine family the two couplings u_{+1}, u_{-1} equal the chain
couplings s1 = v0 (1 + alpha), s2 = v0 (1 - alpha) directly.  No SI
quantities appear anywhere downstream.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError


class Picture(enum.Enum):
    """Whether amplitudes carry the dynamical phase (direct) or not."""

    DIRECT = "direct"
    INTERACTION = "interaction"


@dataclass(frozen=True)
class RingPotential:
    """Sparse Fourier data of the dimensionless complex ring potential.

    ``coeffs`` maps integer harmonic index q to the complex amplitude u_q of
    exp(i q phi).  Only finitely many harmonics are stored; missing keys are
    zero.  ``v0``/``alpha`` are set when the potential was built through
    :func:`make_reference_potential` and are purely descriptive.
    """

    coeffs: dict[int, complex]
    v0: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        clean = {}
        for q, u in self.coeffs.items():
            if int(q) != q:
                raise InvalidParameterError(f"harmonic index must be integer, got {q!r}")
            if u != 0:
                clean[int(q)] = complex(u)
        object.__setattr__(self, "coeffs", clean)

    @property
    def harmonics(self) -> list[int]:
        return sorted(self.coeffs)

    def coupling(self, q: int) -> complex:
        return self.coeffs.get(q, 0j)


@dataclass(frozen=True)
class FluxProgram:
    """Normalized magnetic flux f(tau), either static or a linear ramp.

    ``Ramp`` means f(tau) = sigma (tau - tau0), vanishing exactly at tau0.
    """

    kind: str
    f0: float = 0.0
    sigma: float = 0.0
    tau0: float = 0.0

    @staticmethod
    def static(f0: float) -> "FluxProgram":
        return FluxProgram(kind="static", f0=float(f0))

    @staticmethod
    def ramp(sigma: float, tau0: float = 0.0) -> "FluxProgram":
        if sigma == 0:
            raise InvalidParameterError("ramp rate sigma must be nonzero")
        return FluxProgram(kind="ramp", sigma=float(sigma), tau0=float(tau0))

    def __post_init__(self):
        if self.kind not in ("static", "ramp"):
            raise InvalidParameterError(f"unknown flux kind {self.kind!r}")
        if self.kind == "ramp" and self.sigma == 0:
            raise InvalidParameterError("ramp rate sigma must be nonzero")

    def __call__(self, tau):
        """Flux value f(tau); accepts scalars or arrays."""
        if self.kind == "static":
            return self.f0 if np.isscalar(tau) else np.full_like(np.asarray(tau, float), self.f0)
        return self.sigma * (np.asarray(tau, float) - self.tau0)

    def phase_integral(self, n, tau):
        """Closed form of int_0^tau (n - f(t))^2 dt (no quadrature).

        For a ramp the integrand is a quadratic polynomial in t; the result
        is the exact cubic.  ``n`` may be an integer array.
        """
        n = np.asarray(n, float)
        if self.kind == "static":
            return (n - self.f0) ** 2 * tau
        a = n + self.sigma * self.tau0  # n - f(t) = a - sigma t
        s = self.sigma
        return (a * a) * tau - a * s * tau**2 + (s * s) * tau**3 / 3.0


@dataclass(frozen=True)
class ModeWindow:
    """Contiguous range of winding numbers retained by the truncation."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min >= self.n_max:
            raise InvalidParameterError("window requires n_min < n_max")
        if self.size < 3:
            raise InvalidParameterError("window must span at least 3 modes")

    @property
    def size(self) -> int:
        return self.n_max - self.n_min + 1

    @property
    def ns(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def index(self, n: int) -> int:
        if not (self.n_min <= n <= self.n_max):
            raise InvalidParameterError(f"winding number {n} outside window [{self.n_min}, {self.n_max}]")
        return n - self.n_min


@dataclass(frozen=True)
class WaveState:
    """Truncated momentum-space amplitude vector at one instant."""

    tau: float
    window: ModeWindow
    amps: np.ndarray
    picture: Picture = Picture.DIRECT

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.window.size,):
            raise InvalidParameterError(
                f"amplitude vector length {amps.shape} does not match window size {self.window.size}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def amplitude(self, n: int) -> complex:
        return complex(self.amps[self.window.index(n)])


def make_reference_potential(v0: float, alpha: float) -> RingPotential:
    """Potential v0*(cos phi + i alpha sin phi) as Fourier data.

    The two nonzero harmonics are u_{+1} = v0 (1 + alpha) and
    u_{-1} = v0 (1 - alpha); alpha = 0 is Hermitian, alpha = 1 leaves the
    single harmonic u_{+1}.
    """
    if v0 < 0 or alpha < 0:
        raise InvalidParameterError("v0 and alpha must be non-negative")
    coeffs = {+1: v0 * (1.0 + alpha), -1: v0 * (1.0 - alpha)}
    return RingPotential(coeffs=coeffs, v0=float(v0), alpha=float(alpha))


def chain_couplings(p: RingPotential) -> tuple[complex, complex]:
    """(s1, s2) = (u_{+1}, u_{-1}), the nearest-neighbour chain couplings."""
    return p.coupling(+1), p.coupling(-1)


def free_energy(n, f):
    """Free-particle energy (n - f)^2 in units of eps0."""
    n = np.asarray(n, float)
    out = (n - f) ** 2
    return float(out) if out.ndim == 0 else out


def is_pt_symmetric(p: RingPotential, tol: float = 0.0) -> bool:
    """True iff V(-phi) = V*(phi), i.e. every Fourier coefficient is real.

    ``tol`` bounds the allowed |Im u_q|; tol = 0 demands exact reality.
    """
    if tol < 0:
        raise InvalidParameterError("tol must be non-negative")
    return all(abs(u.imag) <= tol for u in p.coeffs.values())


def sample_potential(p: RingPotential, phis) -> np.ndarray:
    """Pointwise V(phi)/eps0 = sum_q u_q exp(i q phi)."""
    phis = np.atleast_1d(np.asarray(phis, float))
    if not np.all(np.isfinite(phis)):
        raise InvalidParameterError("phi values must be finite")
    out = np.zeros(phis.shape, complex)
    for q, u in p.coeffs.items():
        out += u * np.exp(1j * q * phis)
    return out
