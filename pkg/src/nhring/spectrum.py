"""Static spectra: momentum-space Hamiltonian, dense non-Hermitian
eigensolves, flux sweeps, PT-breaking threshold and exceptional points."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import BracketError, InvalidParameterError, SolverFailure
from .model import ModeWindow, RingPotential, make_reference_potential

DEFAULT_WINDOW = ModeWindow(-16, 16)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense momentum-space Hamiltonian H[n,m] = (n-f)^2 delta_nm + u_{n-m}."""

    window: ModeWindow
    f: float
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, complex)
        if e.shape != (self.window.size, self.window.size):
            raise InvalidParameterError("entry matrix does not match window size")
        e = e.copy()
        e.flags.writeable = False
        object.__setattr__(self, "entries", e)


@dataclass(frozen=True)
class EigenSolution:
    """All eigenpairs of one Hamiltonian, sorted by (Re, Im) ascending.

    ``eigenvectors`` holds unit-norm right eigenvectors column-wise;
    ``residuals[k]`` is ||H v_k - lambda_k v_k||.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


@dataclass(frozen=True)
class BandStructure:
    """Flux-resolved complex bands tracked by continuity."""

    f_grid: np.ndarray
    bands: np.ndarray  # shape (n_bands, n_f), complex
    max_im: float
    ambiguous: np.ndarray = field(default=None)  # per-f tracking flags

    def band(self, b: int) -> np.ndarray:
        return self.bands[b]


@dataclass(frozen=True)
class EPReport:
    """One candidate exceptional point located in a flux scan."""

    f_star: float
    pair: tuple[int, int]
    gap: float
    coalescence_metric: float


def build_hamiltonian(p: RingPotential, f: float, window: ModeWindow) -> HamiltonianMatrix:
    """Assemble the exact truncated matrix; O(window x harmonics)."""
    ns = window.ns
    H = np.zeros((window.size, window.size), complex)
    np.fill_diagonal(H, (ns - f) ** 2)
    for q, u in p.coeffs.items():
        # H[n, m] += u_q for n - m = q
        if abs(q) < window.size:
            idx = np.arange(max(0, q), window.size + min(0, q))
            H[idx, idx - q] += u
    return HamiltonianMatrix(window=window, f=float(f), entries=H)


def eigensolve(H: HamiltonianMatrix, tol: float = 1e-10) -> EigenSolution:
    """All eigenpairs of the dense non-Hermitian matrix.

    Backed by LAPACK's Hessenberg + shifted-QR machinery (``numpy.linalg.eig``);
    every returned pair satisfies ||H v - lambda v|| <= tol * ||H||.
    Eigenvalues are sorted ascending by real part, ties by imaginary part,
    with eigenvectors reordered to match.
    """
    A = H.entries
    if not np.all(np.isfinite(A)):
        raise InvalidParameterError("Hamiltonian entries must be finite")
    try:
        w, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise SolverFailure(f"eigensolver did not converge: {exc}") from exc
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    V = V[:, order]
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    res = np.linalg.norm(A @ V - V * w, axis=0)
    scale = np.linalg.norm(A)
    if scale > 0 and np.any(res > tol * scale):
        raise SolverFailure(
            f"residual contract violated: max ||Hv - lv|| = {res.max():.3e} > {tol:.1e} * ||H|| = {tol * scale:.3e}"
        )
    return EigenSolution(eigenvalues=w, eigenvectors=V, residuals=res)


def _sweep_grid(n_f: int) -> np.ndarray:
    # Half-open Brillouin zone [-1/2, 1/2); includes f = -1/2 exactly, where
    # PT breaking first shows up for the reference family.
    return np.linspace(-0.5, 0.5, n_f, endpoint=False)


def band_sweep(
    p: RingPotential,
    window: ModeWindow = DEFAULT_WINDOW,
    n_f: int = 101,
    jump_factor: float = 10.0,
    workers: int = 1,
) -> BandStructure:
    """Eigensolve on a flux grid over [-1/2, 1/2) with continuity tracking.

    Bands are matched between adjacent flux samples by minimum-total-distance
    assignment in the complex plane.  Matches whose distance exceeds
    ``jump_factor`` times the median inter-sample step are flagged as
    ambiguous (bands genuinely merge at exceptional points), never fatal.
    """
    if n_f < 8:
        raise InvalidParameterError("n_f must be at least 8")
    f_grid = _sweep_grid(n_f)

    def solve_one(f):
        return eigensolve(build_hamiltonian(p, f, window)).eigenvalues

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            sols = list(ex.map(solve_one, f_grid))
    else:
        sols = [solve_one(f) for f in f_grid]

    n_bands = window.size
    bands = np.empty((n_bands, n_f), complex)
    ambiguous = np.zeros(n_f, bool)
    bands[:, 0] = sols[0]
    prev = sols[0]
    for k in range(1, n_f):
        cur = sols[k]
        cost = np.abs(prev[:, None] - cur[None, :])
        rows, cols = linear_sum_assignment(cost)
        matched = cur[cols[np.argsort(rows)]]
        steps = np.abs(matched - prev)
        med = np.median(steps)
        if med > 0 and np.any(steps > jump_factor * med):
            ambiguous[k] = True
        bands[:, k] = matched
        prev = matched
    max_im = float(np.abs(bands.imag).max())
    return BandStructure(f_grid=f_grid, bands=bands, max_im=max_im, ambiguous=ambiguous)


def estimate_alpha_c(
    v0: float,
    alpha_range: tuple[float, float] = (0.5, 1.5),
    im_tol: float = 1e-9,
    window: ModeWindow = DEFAULT_WINDOW,
    n_f: int = 101,
) -> float:
    """PT-breaking threshold by bisection on the non-Hermiticity strength.

    The predicate is "max |Im E| over the flux grid <= im_tol".  It must be
    true at the low end of ``alpha_range`` and false at the high end;
    otherwise the bracket is rejected.  Returns the midpoint of the final
    bracket, whose width is at most 1e-3.
    """

    def spectrum_real(alpha: float) -> bool:
        bs = band_sweep(make_reference_potential(v0, alpha), window, n_f)
        return bs.max_im <= im_tol

    lo, hi = map(float, alpha_range)
    if not (lo < hi):
        raise InvalidParameterError("alpha_range must be increasing")
    if not spectrum_real(lo):
        raise BracketError(f"spectrum already complex at alpha = {lo}")
    if spectrum_real(hi):
        raise BracketError(f"spectrum still real at alpha = {hi}; bracket does not straddle the transition")
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        if spectrum_real(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _min_gap(p: RingPotential, window: ModeWindow, f: float) -> tuple[float, int]:
    w = eigensolve(build_hamiltonian(p, f, window)).eigenvalues
    gaps = np.abs(np.diff(w))
    i = int(np.argmin(gaps))
    return float(gaps[i]), i


def _golden_refine(fun, a: float, b: float, tol: float) -> float:
    """Golden-section minimizer of a scalar function on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def locate_exceptional_points(
    p: RingPotential,
    window: ModeWindow = DEFAULT_WINDOW,
    f_search: tuple[float, float] = (0.0, 1.0),
    gap_tol: float = 1e-6,
    vec_tol: float = 1e-4,
    n_scan: int = 201,
    f_tol: float = 1e-7,
) -> list[EPReport]:
    """Scan flux for eigenvalue coalescences and refine candidates.

    Interior local minima of the smallest eigenvalue gap are refined by
    golden-section search; a candidate is reported only when the refined gap
    is at most ``gap_tol`` and the eigenvector coalescence metric
    1 - |<v_i, v_j>| (unit-norm vectors) is at most ``vec_tol``.  An empty
    list simply means nothing coalesces in the searched range.
    """
    f_lo, f_hi = map(float, f_search)
    if not (f_lo < f_hi):
        raise InvalidParameterError("f_search must be an increasing interval")
    fs = np.linspace(f_lo, f_hi, n_scan)
    gaps = np.array([_min_gap(p, window, f)[0] for f in fs])

    reports: list[EPReport] = []
    for k in range(1, n_scan - 1):
        if not (gaps[k] <= gaps[k - 1] and gaps[k] <= gaps[k + 1]):
            continue
        f_star = _golden_refine(lambda f: _min_gap(p, window, f)[0], fs[k - 1], fs[k + 1], f_tol)
        sol = eigensolve(build_hamiltonian(p, f_star, window))
        diffs = np.abs(np.diff(sol.eigenvalues))
        i = int(np.argmin(diffs))
        gap = float(diffs[i])
        vi, vj = sol.eigenvectors[:, i], sol.eigenvectors[:, i + 1]
        metric = max(0.0, float(1.0 - abs(np.vdot(vi, vj))))
        if gap <= gap_tol and metric <= vec_tol:
            reports.append(EPReport(f_star=float(f_star), pair=(i, i + 1), gap=gap, coalescence_metric=metric))
    # collapse duplicates from plateaus of the coarse scan
    spacing = fs[1] - fs[0]
    unique: list[EPReport] = []
    for r in reports:
        if unique and abs(r.f_star - unique[-1].f_star) < spacing:
            if r.gap < unique[-1].gap:
                unique[-1] = r
        else:
            unique.append(r)
    return unique


def verify_window_convergence(
    p: RingPotential,
    window: ModeWindow = DEFAULT_WINDOW,
    n_f: int = 33,
    n_bands: int = 8,
    drift_tol: float = 1e-8,
) -> float:
    """Doubling check: max drift of the lowest bands when the window doubles.

    Returns the drift; raises SolverFailure if it exceeds ``drift_tol``.
    """
    big = ModeWindow(2 * window.n_min, 2 * window.n_max)
    drift = 0.0
    for f in _sweep_grid(n_f):
        w1 = eigensolve(build_hamiltonian(p, f, window)).eigenvalues[:n_bands]
        w2 = eigensolve(build_hamiltonian(p, f, big)).eigenvalues[:n_bands]
        drift = max(drift, float(np.abs(w1 - w2).max()))
    if drift > drift_tol:
        raise SolverFailure(
            f"window {window.n_min}..{window.n_max} not converged: lowest-{n_bands} band drift {drift:.2e}"
        )
    return drift
