"""Decay-rate detectors for phase-space and frequency singularities.

Super-polynomial decay cannot be decided from finite data, so every detector
uses the same decidable proxy: sample ``|V|`` along geometric radii on a fan
of unit directions, fit ``log|V| ~ c - s log r`` over the upper half of the
usable radii, and flag a direction singular when the fitted order ``s`` stays
at or below a threshold.  Values under ``1e-14`` are rounding noise and mark
the direction regular instead of producing spurious slopes.

Flagged directions are merged along the sampling adjacency: a narrow arc is
the detector's smearing of a single conic generator and is reported by its
central (medoid) axis, a component wider than the collapse angle is a genuine
extended cone and is reported by all of its sampled generators, and an
isolated single flag surrounded by regular directions is suspect and reported
separately.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .signal import SampledDistribution, Grid, nudft
from .stft import Window, stft_points, STFT_FLOOR

DEFAULT_N_THRESH = 2.5
DEFAULT_RHO = 1.15
ARC_COLLAPSE_ANGLE = np.pi / 3  # arcs wider than this are true cones, not smear
_EXTENT_SIZE_CAP = 64


def position_cap(grid: Grid, lam: float | None = None, compact: bool = True) -> float:
    """Largest usable window center along a ray.

    For inputs concentrated in the central box the direct signal dominates the
    periodized window copy for all centers below L/2, so rays may run to
    0.45 L.  Otherwise the window must stay clear of the box boundary:
    ``exp(-(8 lam)^2 / (2 lam^2))`` is the numeric floor, giving L/2 - 8 lam
    (never below the central-half cap L/4 * 0.9).
    """
    if compact or lam is None:
        return 0.45 * grid.length
    return max(0.225 * grid.length, grid.half_width - 8.0 * lam)


def frequency_cap(grid: Grid) -> float:
    """Largest frequency safely inside the alias-free half band."""
    return 0.9 * np.pi / (2 * grid.spacing)


@dataclass(frozen=True)
class RaySampling:
    """Unit directions with a shared geometric radius ladder.

    ``space`` is ``"phase"`` (directions in R^{2d}) or ``"frequency"``
    (directions in R^d).  ``neighbors`` is the adjacency of the angular grid
    used for arc merging; ``angular_step`` is the pitch of the finest circle.
    Rays are truncated per direction so position components stay within the
    central box and frequency components within the alias-free band.
    """

    directions: np.ndarray
    radii: np.ndarray
    neighbors: tuple[tuple[int, int], ...]
    angular_step: float
    space: str
    n_dirs: int
    r_min: float
    r_max: float
    rho: float

    def __post_init__(self):
        d = np.ascontiguousarray(np.asarray(self.directions, dtype=float))
        r = np.ascontiguousarray(np.asarray(self.radii, dtype=float))
        d.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "radii", r)


def _geometric_radii(r_min: float, r_max: float, rho: float) -> np.ndarray:
    if r_min < 1.0:
        raise ValueError("r_min must be at least 1")
    if rho <= 1.0:
        raise ValueError("rho must exceed 1")
    if r_max <= r_min:
        raise ValueError("r_max must exceed r_min")
    count = int(np.floor(np.log(r_max / r_min) / np.log(rho))) + 1
    return r_min * rho ** np.arange(count)


def _circle(n: int) -> np.ndarray:
    ang = 2 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(ang), np.sin(ang)])


def phase_space_rays(
    grid: Grid,
    n_dirs: int | None = None,
    r_min: float = 1.0,
    r_max: float | None = None,
    rho: float | None = None,
    tilt_count: int = 5,
) -> RaySampling:
    """Directions on the phase-space sphere S^{2d-1}.

    d = 1: n_dirs points on the circle.  d = 2: a join parameterization,
    ``(cos t * u(alpha), sin t * v(beta))`` over ``tilt_count`` tilt levels
    with n_dirs points on each of the two circles; the pure-position and
    pure-frequency fibers appear once each.  The shared radius ladder is
    truncated per direction at estimate time by the position/frequency caps.
    """
    if rho is None:
        rho = DEFAULT_RHO if grid.dim == 1 else 1.08
    cap = max(0.45 * grid.length, 0.9 * np.pi / (2 * grid.spacing))
    if r_max is None:
        r_max = cap
    elif r_max > cap + 1e-9:
        raise ValueError(f"r_max {r_max} exceeds the resolvable phase-space radius {cap}")
    radii = _geometric_radii(r_min, r_max, rho)
    if grid.dim == 1:
        if n_dirs is None:
            n_dirs = 256
        if n_dirs < 64 or n_dirs % 4:
            raise ValueError("need n_dirs >= 64, divisible by 4, for the phase-space circle")
        dirs = _circle(n_dirs)
        neighbors = tuple((k, (k + 1) % n_dirs) for k in range(n_dirs))
        step = 2 * np.pi / n_dirs
        return RaySampling(dirs, radii, neighbors, step, "phase", n_dirs, r_min, float(r_max), rho)
    if n_dirs is None:
        n_dirs = 32
    if n_dirs < 32 or n_dirs % 4:
        raise ValueError("need n_dirs >= 32 per circle, divisible by 4, in 2-D")
    if tilt_count < 3:
        raise ValueError("need at least 3 tilt levels")
    circ = _circle(n_dirs)
    tilts = np.pi / 2 * np.arange(tilt_count) / (tilt_count - 1)
    dirs: list[np.ndarray] = []
    index: dict[tuple[int, int, int], int] = {}
    for ti, tau in enumerate(tilts):
        c, s = np.cos(tau), np.sin(tau)
        if ti == 0:
            for i in range(n_dirs):
                index[(ti, i, -1)] = len(dirs)
                dirs.append(np.array([circ[i, 0], circ[i, 1], 0.0, 0.0]))
        elif ti == tilt_count - 1:
            for j in range(n_dirs):
                index[(ti, -1, j)] = len(dirs)
                dirs.append(np.array([0.0, 0.0, circ[j, 0], circ[j, 1]]))
        else:
            for i in range(n_dirs):
                for j in range(n_dirs):
                    index[(ti, i, j)] = len(dirs)
                    dirs.append(np.array([c * circ[i, 0], c * circ[i, 1], s * circ[j, 0], s * circ[j, 1]]))
    pairs: set[tuple[int, int]] = set()

    def link(a: int, b: int):
        pairs.add((min(a, b), max(a, b)))

    for (ti, i, j), a in index.items():
        if ti == 0:
            link(a, index[(0, (i + 1) % n_dirs, -1)])
            for jj in range(n_dirs):
                key = (1, i, jj)
                if key in index:
                    link(a, index[key])
        elif ti == tilt_count - 1:
            link(a, index[(ti, -1, (j + 1) % n_dirs)])
            for ii in range(n_dirs):
                key = (ti - 1, ii, j)
                if key in index:
                    link(a, index[key])
        else:
            link(a, index[(ti, (i + 1) % n_dirs, j)])
            link(a, index[(ti, i, (j + 1) % n_dirs)])
            key = (ti + 1, i, j)
            if key in index:
                link(a, index[key])
    step = 2 * np.pi / n_dirs
    return RaySampling(
        np.array(dirs), radii, tuple(sorted(pairs)), step, "phase", n_dirs, r_min, float(r_max), rho
    )


def frequency_rays(
    grid: Grid,
    n_dirs: int | None = None,
    r_min: float = 1.0,
    r_max: float | None = None,
    rho: float | None = None,
) -> RaySampling:
    """Directions on the frequency sphere S^{d-1}; the pair {-1, +1} in 1-D."""
    if rho is None:
        rho = DEFAULT_RHO if grid.dim == 1 else 1.08
    cap = frequency_cap(grid)
    if r_max is None:
        r_max = cap
    elif r_max > cap + 1e-9:
        raise ValueError(f"r_max {r_max} exceeds the alias-free frequency radius {cap}")
    radii = _geometric_radii(r_min, r_max, rho)
    if grid.dim == 1:
        dirs = np.array([[1.0], [-1.0]])
        return RaySampling(dirs, radii, (), np.pi, "frequency", 2, r_min, float(r_max), rho)
    if n_dirs is None:
        n_dirs = 32
    if n_dirs < 32 or n_dirs % 4:
        raise ValueError("need n_dirs >= 32, divisible by 4, on the frequency circle")
    dirs = _circle(n_dirs)
    neighbors = tuple((k, (k + 1) % n_dirs) for k in range(n_dirs))
    step = 2 * np.pi / n_dirs
    return RaySampling(dirs, radii, neighbors, step, "frequency", n_dirs, r_min, float(r_max), rho)


@dataclass(frozen=True)
class DecayProfile:
    """Fitted decay order along one ray.

    ``slope`` is s in ``log|V| ~ c - s log r`` over the top half of the usable
    radii (negative slope means growth); ``floor_hit`` marks rays whose fit
    window dipped under the numeric floor, which forces the direction regular.
    """

    direction: tuple[float, ...]
    slope: float
    residual: float
    floor_hit: bool


@dataclass(frozen=True)
class WavefrontReport:
    """Detected singular directions plus all per-ray evidence.

    ``singular_dirs`` holds cone generators (arc representatives or sampled
    members of extended cones), ``isolated`` the suspect single-direction
    flags, ``rays`` the (radius, |V|) samples behind each profile.
    """

    kind: str
    singular_dirs: tuple[tuple[float, ...], ...]
    isolated: tuple[tuple[float, ...], ...]
    profiles: tuple[DecayProfile, ...]
    params: dict
    rays: tuple[tuple[tuple[float, float], ...], ...]
    base_point: tuple[float, ...] | None = None

    def flagged_indices(self) -> tuple[int, ...]:
        t = self.params["n_thresh"]
        return tuple(
            i for i, p in enumerate(self.profiles) if (not p.floor_hit) and p.slope <= t
        )


def angular_distance(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.arccos(np.clip(np.dot(a, b) / (np.linalg.norm(a) * np.linalg.norm(b)), -1.0, 1.0)))


def directed_hausdorff_angle(a_set, b_set) -> float:
    """max over a of the angle to the nearest b; 0 for empty a, inf for empty b."""
    a_set, b_set = list(a_set), list(b_set)
    if not a_set:
        return 0.0
    if not b_set:
        return np.inf
    return max(min(angular_distance(a, b) for b in b_set) for a in a_set)


def hausdorff_angle(a_set, b_set) -> float:
    return max(directed_hausdorff_angle(a_set, b_set), directed_hausdorff_angle(b_set, a_set))


def _fit_profile(radii: np.ndarray, values: np.ndarray) -> tuple[float, float, bool]:
    """Least-squares decay order over the top half of a ray; one (slope,
    residual, floor_hit) triple."""
    k = len(radii) // 2
    rr, vv = radii[k:], values[k:]
    if len(rr) < 4:
        raise ValueError("degenerate fit: fewer than 4 usable radii in the fit window")
    if np.min(vv) < STFT_FLOOR:
        return np.inf, 0.0, True
    lr, lv = np.log(rr), np.log(vv)
    A = np.column_stack([lr, np.ones_like(lr)])
    sol, *_ = np.linalg.lstsq(A, lv, rcond=None)
    resid = lv - A @ sol
    return float(-sol[0]), float(np.sqrt(np.mean(resid**2))), False


def _components(flagged: np.ndarray, neighbors) -> list[list[int]]:
    idx = np.nonzero(flagged)[0]
    parent = {int(i): int(i) for i in idx}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in neighbors:
        if flagged[a] and flagged[b]:
            ra, rb = find(int(a)), find(int(b))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in idx:
        groups.setdefault(find(int(i)), []).append(int(i))
    return [sorted(g) for g in sorted(groups.values(), key=min)]


def _component_extent(members: list[int], dirs: np.ndarray) -> float:
    if len(members) > _EXTENT_SIZE_CAP:
        return np.pi
    worst = 0.0
    for ii in range(len(members)):
        for jj in range(ii + 1, len(members)):
            worst = max(worst, angular_distance(dirs[members[ii]], dirs[members[jj]]))
    return worst


def _component_axis(
    members: list[int],
    dirs: np.ndarray,
    rays: list[tuple[np.ndarray, np.ndarray]],
    n_thresh: float,
) -> int:
    """Representative of a point-cone component.

    Members whose rays were truncated by different caps carry incomparable
    slopes, which skews the flagged arc toward the short-ray side; re-fitting
    on the radii common to the whole component makes them comparable.  The
    axis is the slope-depth-weighted mean direction of the low-slope core,
    snapped to the nearest member: stable against both oscillatory slope
    jitter and asymmetric arc boundaries.
    """
    common = min(len(rays[i][0]) for i in members)
    if common // 2 >= 4:
        scores = {}
        for i in members:
            rr, vv = rays[i][0][:common], rays[i][1][:common]
            scores[i] = _fit_profile(rr, vv)[0]
    else:
        scores = {i: 0.0 for i in members}
    s_min = min(scores.values())
    margin = 0.25 * max(n_thresh - s_min, 1e-6)
    core = [i for i in members if scores[i] <= s_min + margin]
    axis = np.zeros(dirs.shape[1])
    for i in core:
        axis += (s_min + margin - scores[i] + 1e-12) * dirs[i]
    norm = np.linalg.norm(axis)
    if norm < 1e-12:
        return members[len(members) // 2]
    axis /= norm
    return min(members, key=lambda i: (round(angular_distance(dirs[i], axis), 12), i))


def _assemble_report(
    kind: str,
    sampling: RaySampling,
    per_dir: list[tuple[np.ndarray, np.ndarray]],
    n_thresh: float,
    params: dict,
    base_point=None,
) -> WavefrontReport:
    dirs = sampling.directions
    profiles = []
    rays = []
    for i, (rr, vv) in enumerate(per_dir):
        slope, resid, floor = _fit_profile(rr, vv)
        profiles.append(DecayProfile(tuple(dirs[i]), slope, resid, floor))
        rays.append(tuple((float(r), float(v)) for r, v in zip(rr, vv)))
    flagged = np.array([(not p.floor_hit) and p.slope <= n_thresh for p in profiles])
    singular: list[tuple[float, ...]] = []
    isolated: list[tuple[float, ...]] = []
    if not sampling.neighbors:
        # S^0: no angular smoothing possible, every flag stands by itself
        singular = [tuple(dirs[i]) for i in np.nonzero(flagged)[0]]
    else:
        for comp in _components(flagged, sampling.neighbors):
            if len(comp) == 1:
                # a lone flag near the threshold is jitter; one far below it
                # is a sharply resolved generator
                if profiles[comp[0]].slope > 0.75 * n_thresh:
                    isolated.append(tuple(dirs[comp[0]]))
                    continue
                singular.append(tuple(dirs[comp[0]]))
                continue
            if _component_extent(comp, dirs) <= ARC_COLLAPSE_ANGLE:
                singular.append(tuple(dirs[_component_axis(comp, dirs, per_dir, n_thresh)]))
            else:
                singular.extend(tuple(dirs[i]) for i in comp)
    full_params = {
        "n_dirs": sampling.n_dirs,
        "r_min": sampling.r_min,
        "r_max": sampling.r_max,
        "rho": sampling.rho,
        "n_thresh": float(n_thresh),
        "angular_step": sampling.angular_step,
        "floor": STFT_FLOOR,
    }
    full_params.update(params)
    return WavefrontReport(
        kind,
        tuple(singular),
        tuple(isolated),
        tuple(profiles),
        full_params,
        tuple(rays),
        None if base_point is None else tuple(np.atleast_1d(base_point).astype(float)),
    )


def _usable_radii(
    sampling: RaySampling,
    grid: Grid,
    pos_cap: float | None = None,
) -> list[np.ndarray]:
    """Per-direction radius ladders truncated by the anisotropic caps."""
    radii = sampling.radii
    out = []
    d = grid.dim
    f_cap = frequency_cap(grid)
    for w in sampling.directions:
        if sampling.space == "frequency" or pos_cap is None:
            cap = f_cap / max(np.linalg.norm(w[-d:]), 1e-300)
        else:
            nx = np.linalg.norm(w[:d])
            nxi = np.linalg.norm(w[d:])
            cap = min(
                pos_cap / nx if nx > 1e-300 else np.inf,
                f_cap / nxi if nxi > 1e-300 else np.inf,
            )
        out.append(radii[radii <= cap + 1e-12])
    return out


def _evaluate_rays(sampling, grid, usable, evaluate) -> list[tuple[np.ndarray, np.ndarray]]:
    """Flatten all (direction, radius) pairs, evaluate once, scatter back."""
    pts = []
    slices = []
    start = 0
    for w, rr in zip(sampling.directions, usable):
        pts.append(rr[:, None] * w[None, :])
        slices.append((start, start + len(rr)))
        start += len(rr)
    values = np.abs(evaluate(np.vstack(pts)))
    return [(usable[i], values[a:b]) for i, (a, b) in enumerate(slices)]


def estimate_gabor_wf(
    u: SampledDistribution,
    window: Window,
    sampling: RaySampling | None = None,
    n_thresh: float = DEFAULT_N_THRESH,
) -> WavefrontReport:
    """Phase-space wavefront detection: decay of ``|V_psi u|`` along rays of
    S^{2d-1}."""
    if n_thresh <= 0:
        raise ValueError("n_thresh must be positive")
    if sampling is None:
        sampling = phase_space_rays(u.grid)
    if sampling.space != "phase":
        raise ValueError("estimate_gabor_wf needs a phase-space sampling")
    window.validate_for(u.grid)
    compact = u.central_mass_fraction() >= 0.999
    usable = _usable_radii(sampling, u.grid, position_cap(u.grid, window.lam, compact))
    per_dir = _evaluate_rays(sampling, u.grid, usable, lambda p: stft_points(u, window, p))
    return _assemble_report("gabor", sampling, per_dir, n_thresh, {"lambda": window.lam})


def estimate_sigma(
    u: SampledDistribution,
    sampling: RaySampling | None = None,
    n_thresh: float = DEFAULT_N_THRESH,
) -> WavefrontReport:
    """Frequency-cone detection: decay of ``|uhat|`` along rays of S^{d-1}."""
    if n_thresh <= 0:
        raise ValueError("n_thresh must be positive")
    if sampling is None:
        sampling = frequency_rays(u.grid)
    if sampling.space != "frequency":
        raise ValueError("estimate_sigma needs a frequency sampling")
    # 0.1% leeway: band-limited synthesis of discontinuous entries rings at the
    # 1e-6 mass level without making them non-compact
    if u.central_mass_fraction() < 0.999:
        warnings.warn(
            "estimate_sigma: input is not concentrated in the central box; "
            "the frequency cone of a non compactly supported input is not defined",
            stacklevel=2,
        )
    usable = _usable_radii(sampling, u.grid)
    per_dir = _evaluate_rays(sampling, u.grid, usable, lambda p: nudft(u, p))
    return _assemble_report("sigma", sampling, per_dir, n_thresh, {"lambda": None})


def estimate_classical_wf(
    u: SampledDistribution,
    window: Window,
    x0,
    sampling: RaySampling | None = None,
    n_thresh: float = DEFAULT_N_THRESH,
) -> WavefrontReport:
    """Local frequency detection at the base point x0: decay of
    ``xi -> |V_psi u(x0, r eta)|`` per frequency direction.

    The window must be compactly supported (a cutoff Gaussian), otherwise
    distant singularities leak into the local spectrum.
    """
    if n_thresh <= 0:
        raise ValueError("n_thresh must be positive")
    if window.cutoff is None:
        raise ValueError("classical detection needs a compactly supported (cutoff) window")
    if sampling is None:
        sampling = frequency_rays(u.grid)
    if sampling.space != "frequency":
        raise ValueError("estimate_classical_wf needs a frequency sampling")
    window.validate_for(u.grid)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if len(x0) != u.grid.dim:
        raise ValueError("base point dimension mismatch")
    usable = _usable_radii(sampling, u.grid)

    def evaluate(freq_pts):
        phase_pts = np.hstack([np.tile(x0, (len(freq_pts), 1)), freq_pts])
        return stft_points(u, window, phase_pts)

    report = _assemble_report(
        "classical",
        sampling,
        _evaluate_rays(sampling, u.grid, usable, evaluate),
        n_thresh,
        {"lambda": window.lam},
        base_point=x0,
    )
    return report


def rethreshold(report: WavefrontReport, sampling: RaySampling, n_thresh: float) -> WavefrontReport:
    """Re-flag an existing report at a different threshold without re-sampling."""
    per_dir = [
        (np.array([r for r, _ in ray]), np.array([v for _, v in ray])) for ray in report.rays
    ]
    extra = {k: report.params[k] for k in ("lambda",) if k in report.params}
    return _assemble_report(report.kind, sampling, per_dir, n_thresh, extra, report.base_point)


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome of the compact-support identity check.

    ``max_x_component`` is the largest position component among detected
    phase-space singular directions (the identity forces it to ~0);
    the two directed angular Hausdorff distances compare the frequency parts
    of the phase-space detection against the frequency-cone detection.
    """

    passed: bool
    max_x_component: float
    dist_gabor_to_sigma: float
    dist_sigma_to_gabor: float
    ang_tol: float


def check_main_theorem(
    gabor_report: WavefrontReport,
    sigma_report: WavefrontReport | None,
    ang_tol: float,
) -> ComparisonResult:
    """Verify that the phase-space singular set is {0} x (frequency cone).

    Requires a frequency-cone report, which only exists for compactly
    supported (or Schwartz) inputs; passing None rejects the check.
    """
    if gabor_report.kind != "gabor":
        raise ValueError("first report must be a phase-space detection")
    if sigma_report is None:
        raise ValueError(
            "frequency-cone report unavailable (input not compactly supported); "
            "the identity does not apply"
        )
    if sigma_report.kind != "sigma":
        raise ValueError("second report must be a frequency-cone detection")
    max_x = 0.0
    xi_parts = []
    for z in gabor_report.singular_dirs:
        d = len(z) // 2
        x_part, xi_part = np.array(z[:d]), np.array(z[d:])
        max_x = max(max_x, float(np.linalg.norm(x_part)))
        if np.linalg.norm(xi_part) > 1e-9:
            xi_parts.append(xi_part / np.linalg.norm(xi_part))
    sig = [np.array(s) for s in sigma_report.singular_dirs]
    both_empty = not xi_parts and not sig
    d_gs = 0.0 if both_empty else directed_hausdorff_angle(xi_parts, sig)
    d_sg = 0.0 if both_empty else directed_hausdorff_angle(sig, xi_parts)
    ok = max_x <= np.sin(ang_tol) + 1e-12 and d_gs <= ang_tol and d_sg <= ang_tol
    return ComparisonResult(bool(ok), max_x, float(d_gs), float(d_sg), float(ang_tol))


def schwartz_direction_test(report: WavefrontReport, ang_tol: float | None = None) -> bool:
    """True when no singular direction comes near the pure-frequency sphere
    {0} x S^{d-1}; such states are smooth with polynomially bounded
    derivatives."""
    if report.kind != "gabor":
        raise ValueError("smoothness test needs a phase-space report")
    if ang_tol is None:
        ang_tol = 2 * report.params["angular_step"]
    for z in report.singular_dirs:
        d = len(z) // 2
        xi_norm = float(np.linalg.norm(z[d:]))
        if np.arccos(np.clip(xi_norm, -1.0, 1.0)) <= ang_tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _json_num(x: float):
    if np.isposinf(x):
        return "inf"
    if np.isneginf(x):
        return "-inf"
    return float(x)


def report_to_json(report: WavefrontReport) -> dict:
    params = {k: _json_num(v) if isinstance(v, float) else v for k, v in report.params.items()}
    out = {
        "kind": report.kind,
        "params": params,
        "profiles": [
            {
                "dir": list(p.direction),
                "slope": _json_num(p.slope),
                "residual": p.residual,
                "floor_hit": p.floor_hit,
            }
            for p in report.profiles
        ],
        "singular_dirs": [list(d) for d in report.singular_dirs],
        "isolated": [list(d) for d in report.isolated],
    }
    if report.base_point is not None:
        out["base_point"] = list(report.base_point)
    return out


def profiles_to_csv(report: WavefrontReport) -> str:
    lines = ["dir_index,r,abs_V"]
    for i, ray in enumerate(report.rays):
        for r, v in ray:
            lines.append(f"{i},{r!r},{v!r}")
    return "\n".join(lines) + "\n"
