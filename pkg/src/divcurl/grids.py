"""Polar spectral grids: radial nodes, angular Fourier transforms, boundary traces."""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

__all__ = [
    "RadialGrid",
    "SpectralField",
    "BoundaryTrace",
    "WeightedNormParams",
    "analyze",
    "synthesize",
    "synthesize_boundary",
    "equispaced_angles",
    "smooth_bump",
]


def _frozen_array(values, dtype=None):
    out = np.array(values, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class RadialGrid:
    """Strictly increasing radial nodes r0 = s_0 < s_1 < ... < s_M = rmax with r0 > 0.

    rmax is the truncation radius; fields fed to the solver are assumed
    supported inside [r0, rmax], which makes every integral to infinity a
    finite one over the grid span.
    """

    nodes: np.ndarray
    grading: str = "custom"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 9:
            raise ValueError("need at least 9 radial nodes")
        if nodes[0] <= 0.0:
            raise ValueError("inner radius must be positive")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("radial nodes must be strictly increasing")
        object.__setattr__(self, "nodes", _frozen_array(nodes))

    @property
    def r0(self) -> float:
        return float(self.nodes[0])

    @property
    def rmax(self) -> float:
        return float(self.nodes[-1])

    def __len__(self) -> int:
        return self.nodes.size

    @classmethod
    def uniform(cls, r0: float, rmax: float, count: int) -> "RadialGrid":
        if rmax <= r0:
            raise ValueError("rmax must exceed r0")
        return cls(np.linspace(r0, rmax, count), grading="uniform")

    @classmethod
    def geometric(cls, r0: float, rmax: float, count: int, ratio: float = 1.01) -> "RadialGrid":
        """Graded nodes with panel widths growing by `ratio`, denser near r0."""
        if rmax <= r0:
            raise ValueError("rmax must exceed r0")
        if ratio <= 0.0:
            raise ValueError("panel ratio must be positive")
        if abs(ratio - 1.0) < 1e-12:
            return cls.uniform(r0, rmax, count)
        m = count - 1
        h0 = (rmax - r0) * (ratio - 1.0) / (ratio**m - 1.0)
        nodes = np.concatenate(([r0], r0 + np.cumsum(h0 * ratio ** np.arange(m))))
        nodes[-1] = rmax
        return cls(nodes, grading="geometric")


@dataclass(frozen=True)
class SpectralField:
    """Per-mode radial profiles f_k(s_j) for |k| <= K on a shared radial grid.

    coeffs has shape (2K+1, len(grid)); row k + K holds mode k.  Real-valued
    physical fields satisfy f_{-k} = conj(f_k) at every node.
    """

    grid: RadialGrid
    K: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be nonnegative")
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.K + 1, len(self.grid)):
            raise ValueError(
                f"coeffs shape {coeffs.shape} does not match "
                f"(2K+1, nodes) = {(2 * self.K + 1, len(self.grid))}"
            )
        object.__setattr__(self, "coeffs", _frozen_array(coeffs))

    def coeff(self, k: int) -> np.ndarray:
        if abs(k) > self.K:
            raise ValueError(f"mode {k} outside resolved band |k| <= {self.K}")
        return self.coeffs[k + self.K]

    def modes(self):
        return range(-self.K, self.K + 1)

    @classmethod
    def zeros(cls, grid: RadialGrid, K: int) -> "SpectralField":
        return cls(grid, K, np.zeros((2 * K + 1, len(grid)), dtype=complex))

    @classmethod
    def from_modes(cls, grid: RadialGrid, K: int, mode_profiles: dict) -> "SpectralField":
        coeffs = np.zeros((2 * K + 1, len(grid)), dtype=complex)
        for k, profile in mode_profiles.items():
            if abs(k) > K:
                raise ValueError(f"mode {k} outside |k| <= {K}")
            coeffs[k + K] = np.asarray(profile, dtype=complex)
        return cls(grid, K, coeffs)

    def add_modes(self, mode_deltas: dict) -> "SpectralField":
        """Return a new field with per-mode increments added."""
        coeffs = np.array(self.coeffs)
        for k, delta in mode_deltas.items():
            if abs(k) > self.K:
                raise ValueError(f"mode {k} outside |k| <= {self.K}")
            coeffs[k + self.K] = coeffs[k + self.K] + np.asarray(delta, dtype=complex)
        return SpectralField(self.grid, self.K, coeffs)

    def conjugate_symmetry_defect(self) -> float:
        """Max |f_{-k} - conj(f_k)|, zero (to rounding) for real-valued fields."""
        defect = 0.0
        for k in range(0, self.K + 1):
            defect = max(defect, float(np.max(np.abs(self.coeff(-k) - np.conj(self.coeff(k))))))
        return defect


@dataclass(frozen=True)
class BoundaryTrace:
    """Fourier coefficients (g_{r,k}, g_{phi,k}) of the boundary velocity, |k| <= K."""

    K: int
    g_r: np.ndarray
    g_phi: np.ndarray

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("K must be nonnegative")
        for name in ("g_r", "g_phi"):
            arr = np.array(getattr(self, name), dtype=complex)
            if arr.shape != (2 * self.K + 1,):
                raise ValueError(f"{name} must have shape (2K+1,) = ({2 * self.K + 1},)")
            object.__setattr__(self, name, _frozen_array(arr))

    def coeff_r(self, k: int) -> complex:
        return complex(self.g_r[k + self.K]) if abs(k) <= self.K else 0.0 + 0.0j

    def coeff_phi(self, k: int) -> complex:
        return complex(self.g_phi[k + self.K]) if abs(k) <= self.K else 0.0 + 0.0j

    @classmethod
    def zeros(cls, K: int) -> "BoundaryTrace":
        n = 2 * K + 1
        return cls(K, np.zeros(n, dtype=complex), np.zeros(n, dtype=complex))

    @classmethod
    def from_coeffs(cls, K: int, radial: dict = None, tangential: dict = None) -> "BoundaryTrace":
        g_r = np.zeros(2 * K + 1, dtype=complex)
        g_phi = np.zeros(2 * K + 1, dtype=complex)
        for k, val in (radial or {}).items():
            g_r[k + K] = val
        for k, val in (tangential or {}).items():
            g_phi[k + K] = val
        return cls(K, g_r, g_phi)

    @classmethod
    def from_samples(cls, gr_samples, gphi_samples, K: int) -> "BoundaryTrace":
        """Angular DFT of polar-frame samples on equispaced angles."""
        g_r = _dft_coefficients(np.asarray(gr_samples, dtype=complex)[None, :], K)[:, 0]
        g_phi = _dft_coefficients(np.asarray(gphi_samples, dtype=complex)[None, :], K)[:, 0]
        return cls(K, g_r, g_phi)

    def padded(self, K: int) -> "BoundaryTrace":
        if K < self.K:
            raise ValueError("cannot pad to a smaller band")
        if K == self.K:
            return self
        g_r = np.zeros(2 * K + 1, dtype=complex)
        g_phi = np.zeros(2 * K + 1, dtype=complex)
        sl = slice(K - self.K, K + self.K + 1)
        g_r[sl] = self.g_r
        g_phi[sl] = self.g_phi
        return BoundaryTrace(K, g_r, g_phi)


@dataclass(frozen=True)
class WeightedNormParams:
    """Weight exponent N for the (1+|x|^2)^N volume norms; N = 0 is plain L2."""

    N: float = 0.0

    def __post_init__(self):
        if self.N < 0.0:
            raise ValueError("weight exponent must be nonnegative")


def equispaced_angles(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count


def _dft_coefficients(samples: np.ndarray, K: int) -> np.ndarray:
    """Rows of discrete angular Fourier coefficients for k = -K..K."""
    n = samples.shape[-1]
    if n < 2 * K + 1:
        raise ValueError(
            f"{n} angular samples cannot resolve modes |k| <= {K} without aliasing; "
            f"need at least {2 * K + 1} equispaced angles"
        )
    transform = np.fft.fft(samples, axis=-1) / n
    ks = np.arange(-K, K + 1)
    return np.moveaxis(transform[..., ks % n], -1, 0)


def analyze(grid: RadialGrid, samples, K: int) -> SpectralField:
    """Angular Fourier analysis of samples on the (node, angle) tensor lattice.

    samples[j, a] is the field value at radius nodes[j] and angle 2*pi*a/n.
    Exact inverse of synthesize on band-limited data with n >= 2K+1.
    """
    samples = np.asarray(samples, dtype=complex)
    if samples.shape[0] != len(grid):
        raise ValueError("sample rows must match radial node count")
    return SpectralField(grid, K, _dft_coefficients(samples, K))


def synthesize(field: SpectralField, angles) -> np.ndarray:
    """Pointwise mode sum over the given angles, shape (nodes, len(angles))."""
    angles = np.asarray(angles, dtype=float)
    ks = np.arange(-field.K, field.K + 1)
    phases = np.exp(1j * np.outer(ks, angles))
    return field.coeffs.T @ phases


def synthesize_boundary(trace: BoundaryTrace, angles):
    """Polar-frame boundary samples (g_r, g_phi) at the given angles."""
    angles = np.asarray(angles, dtype=float)
    ks = np.arange(-trace.K, trace.K + 1)
    phases = np.exp(1j * np.outer(ks, angles))
    return trace.g_r @ phases, trace.g_phi @ phases


def smooth_bump(s, lo: float, hi: float) -> np.ndarray:
    """C-infinity bump supported on (lo, hi), peak value 1 at the midpoint."""
    if hi <= lo:
        raise ValueError("bump needs lo < hi")
    s = np.asarray(s, dtype=float)
    t = (2.0 * s - (lo + hi)) / (hi - lo)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
    return out
