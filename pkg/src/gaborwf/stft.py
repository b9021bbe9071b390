"""Gaussian windows and the short-time Fourier transform.

``stft_at`` evaluates ``V_psi u(x, xi) = (u, M_xi T_x psi)`` by direct grid
summation, so off-grid phase points are exact trigonometric sums rather than
interpolants.  ``stft_slice`` is the FFT fast path over a full dual-frequency
row, and ``moyal_reconstruct`` inverts the transform by phase-space
quadrature as a correctness oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import Grid, SampledDistribution, _centered_fft

STFT_FLOOR = 1e-14


@dataclass(frozen=True)
class Window:
    """L2-normalized Gaussian window ``(pi lam^2)^(-d/4) exp(-|y|^2/(2 lam^2))``.

    With ``cutoff=(flat, support)`` (in units of ``lam``) the Gaussian is
    multiplied by a smooth plateau function that is 1 on ``|y| <= flat*lam``
    and 0 outside ``|y| <= support*lam``, giving a compactly supported window
    for local (classical) frequency analysis; it is then renormalized under
    grid quadrature at first use.
    """

    lam: float
    dim: int = 1
    cutoff: tuple[float, float] | None = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("window width must be positive")
        if self.dim not in (1, 2):
            raise ValueError("window dim must be 1 or 2")
        if self.cutoff is not None:
            flat, support = self.cutoff
            if not 0 < flat < support:
                raise ValueError("cutoff must satisfy 0 < flat < support")

    def validate_for(self, grid: Grid):
        if grid.dim != self.dim:
            raise ValueError(f"window dim {self.dim} != grid dim {grid.dim}")
        if self.lam < 4 * grid.spacing or self.lam > grid.length / 8:
            raise ValueError(
                f"window width {self.lam} outside resolvable range "
                f"[{4 * grid.spacing}, {grid.length / 8}]"
            )

    @property
    def support_radius(self) -> float:
        return np.inf if self.cutoff is None else self.cutoff[1] * self.lam

    def axis_values(self, y: np.ndarray) -> np.ndarray:
        """One-axis profile; the full window is the product over axes."""
        vals = (np.pi * self.lam**2) ** -0.25 * np.exp(-(y**2) / (2 * self.lam**2))
        if self.cutoff is not None:
            flat, support = self.cutoff
            vals = vals * _plateau(np.abs(y) / self.lam, flat, support)
        return vals

    def values(self, *meshes: np.ndarray) -> np.ndarray:
        out = self.axis_values(meshes[0])
        for m in meshes[1:]:
            out = out * self.axis_values(m)
        return out


def _plateau(t: np.ndarray, flat: float, support: float) -> np.ndarray:
    """Smooth transition 1 -> 0 over [flat, support], infinitely flat at both ends."""
    s = np.clip((t - flat) / (support - flat), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(s > 0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.maximum(1.0 - s, 1e-300)), 0.0)
    return b / (a + b)


def _normalized_axis_profile(window: Window, grid: Grid) -> np.ndarray:
    """Axis profile on the grid, renormalized when a cutoff perturbs the norm."""
    y = grid.axis()
    prof = window.axis_values(y)
    if window.cutoff is not None:
        norm = np.sqrt(np.sum(prof**2) * grid.spacing)
        prof = prof / norm
    return prof


@dataclass(frozen=True)
class PhasePoint:
    """Point z = (x, xi) of phase space."""

    x: tuple[float, ...]
    xi: tuple[float, ...]

    def __post_init__(self):
        if len(self.x) != len(self.xi):
            raise ValueError("x and xi must have the same dimension")
        if not all(np.isfinite(self.x)) or not all(np.isfinite(self.xi)):
            raise ValueError("phase point components must be finite")

    @property
    def dim(self) -> int:
        return len(self.x)


def _window_axis_at(window: Window, grid: Grid, y: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(P, n) matrix of axis window values ``psi(y_j - c_p)``, cutoff-normalized."""
    vals = window.axis_values(y[None, :] - centers[:, None])
    if window.cutoff is not None:
        scale = np.sqrt(np.sum(window.axis_values(y) ** 2) * grid.spacing)
        vals = vals / scale
    return vals


def stft_points(
    u: SampledDistribution, window: Window, points: np.ndarray, chunk: int = 1024
) -> np.ndarray:
    """``V_psi u`` at arbitrary phase points, shape (P, 2*dim) -> (P,).

    Fixed summation order (ascending grid index) keeps results bit-identical
    across calls; evaluation is chunked over points only.
    """
    g = u.grid
    window.validate_for(g)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2 * g.dim:
        raise ValueError(f"expected phase points of dim {2 * g.dim}")
    y = g.axis()
    out = np.empty(len(pts), dtype=np.complex128)
    if g.dim == 1:
        for lo in range(0, len(pts), chunk):
            xs = pts[lo : lo + chunk, 0]
            xis = pts[lo : lo + chunk, 1]
            kern = _window_axis_at(window, g, y, xs) * np.exp(-1j * xis[:, None] * y[None, :])
            out[lo : lo + chunk] = kern @ u.samples
    else:
        for lo in range(0, len(pts), chunk):
            blk = pts[lo : lo + chunk]
            a = _window_axis_at(window, g, y, blk[:, 0]) * np.exp(-1j * blk[:, 2][:, None] * y[None, :])
            b = _window_axis_at(window, g, y, blk[:, 1]) * np.exp(-1j * blk[:, 3][:, None] * y[None, :])
            out[lo : lo + chunk] = np.einsum("pi,pi->p", a @ u.samples, b)
    return out * g.cell_volume


def stft_at(u: SampledDistribution, window: Window, z) -> complex:
    """``V_psi u(z)`` for a single phase point (PhasePoint or flat sequence)."""
    if isinstance(z, PhasePoint):
        flat = np.concatenate([z.x, z.xi])
    else:
        flat = np.asarray(z, dtype=float).ravel()
    return complex(stft_points(u, window, flat[None, :])[0])


def stft_slice(u: SampledDistribution, window: Window, x) -> np.ndarray:
    """``xi -> V_psi u(x, xi)`` over the full dual grid.

    Equals the Fourier transform of ``u * conj(T_x psi)``, so it agrees with
    ``stft_at`` at every dual frequency up to roundoff.
    """
    g = u.grid
    window.validate_for(g)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if len(x) != g.dim:
        raise ValueError(f"expected a base point of dim {g.dim}")
    y = g.axis()
    if g.dim == 1:
        win = _window_axis_at(window, g, y, x[:1])[0]
        prod = u.samples * np.conj(win)
    else:
        wa = _window_axis_at(window, g, y, x[:1])[0]
        wb = _window_axis_at(window, g, y, x[1:])[0]
        prod = u.samples * np.conj(np.outer(wa, wb))
    return _centered_fft(prod) * g.cell_volume


def moyal_reconstruct(u: SampledDistribution, window: Window) -> SampledDistribution:
    """Inversion by phase-space quadrature:
    ``(2 pi)^{-d} iint V_psi u(x, xi) e^{i y xi} psi(y - x) dx dxi``.

    Quadrature over the sampled phase-space box; valid when u and its
    transform are concentrated inside it (smooth catalog entries).
    """
    g = u.grid
    window.validate_for(g)
    if u.kind != "function":
        raise ValueError("moyal_reconstruct expects a smooth entry, not a spike")
    if g.dim != 1:
        raise ValueError(
            "phase-space quadrature needs n^(2d) transform values; at the supported "
            "grid sizes this is only tractable for dim 1"
        )
    y = g.axis()
    dxi = 2 * np.pi / g.length
    # rows: V(x_j, .) over the dual grid for every grid position x_j
    recon = np.zeros(g.n, dtype=np.complex128)
    for j in range(g.n):
        shifted = _window_axis_at(window, g, y, y[j : j + 1])[0]
        row = _centered_fft(u.samples * np.conj(shifted)) * g.spacing
        # inverse transform of the row back to the position axis
        gj = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(row))) * (g.n * dxi) / (2 * np.pi)
        recon += gj * shifted * g.spacing
    return SampledDistribution(g, recon, label=f"moyal[{u.label}]")


def stft_grid_csv(
    u: SampledDistribution, window: Window, x_values: np.ndarray, xi_values: np.ndarray
) -> str:
    """CSV of the transform on a rectangular phase-space grid (d = 1):
    columns x, xi, re, im, abs."""
    if u.grid.dim != 1:
        raise ValueError("CSV dump is defined for 1-D grids")
    pts = np.array([(x, xi) for x in x_values for xi in xi_values])
    vals = stft_points(u, window, pts)
    lines = ["x,xi,re,im,abs"]
    for (x, xi), v in zip(pts, vals):
        lines.append(f"{float(x)!r},{float(xi)!r},{float(v.real)!r},{float(v.imag)!r},{float(abs(v))!r}")
    return "\n".join(lines) + "\n"
