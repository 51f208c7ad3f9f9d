"""Search over factored inputs to estimate full achievable regions.

Derivative-free search: random restarts over the factor simplices (plus a
few structured starting points), followed by coordinate-wise local
refinement with a shrinking step, swept over a set of weighting directions
so the Pareto surface of the region gets traced.  Every reported point is
re-certified against a freshly recomputed region for its generating input,
and identical seeds reproduce identical estimates.

Estimates are lower bounds only: the auxiliary alphabet sizes are
configurable but there is no finite bound that provably suffices for the
two per-sender auxiliaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np

from .errors import PreconditionError, ValidationError
from .probkit import Alphabet, Channel, Dist, FactoredInput, WiretapMAC
from .regions import (
    CaseLabel,
    RatePolytope,
    classify_profile,
    info_profile,
    region_common,
)
from .conferencing import region_conferencing


def prefix_channel(mac: WiretapMAC, x_given_v1: Channel,
                   y_given_v2: Channel) -> WiretapMAC:
    """Compose artificial per-sender input channels in front of the physical MAC.

    The result is a MAC with inputs V1, V2; composing twice is the same as
    composing the prefix chains first.
    """
    if x_given_v1.output_alphabet.size != mac.x_alphabet.size:
        raise ValidationError("X-prefix output does not match the channel input")
    if y_given_v2.output_alphabet.size != mac.y_alphabet.size:
        raise ValidationError("Y-prefix output does not match the channel input")
    tensor = np.einsum("vx,wy,xytz->vwtz", x_given_v1.matrix, y_given_v2.matrix,
                       mac.tensor, optimize=True)
    v1 = x_given_v1.input_alphabet.size
    v2 = y_given_v2.input_alphabet.size
    rows = tensor.reshape(v1 * v2, -1)
    return WiretapMAC(x_given_v1.input_alphabet, y_given_v2.input_alphabet,
                      mac.t_alphabet, mac.z_alphabet,
                      Channel(Alphabet(v1 * v2),
                              Alphabet(mac.t_alphabet.size * mac.z_alphabet.size),
                              rows))


@dataclass(frozen=True)
class CommonMode:
    """Search target: common-message regions at randomness bound ``hc``."""

    hc: float


@dataclass(frozen=True)
class ConferencingMode:
    """Search target: conferencing regions at link capacities (c1, c2)."""

    c1: float
    c2: float


@dataclass(frozen=True)
class SearchConfig:
    """Knobs of the region search.

    ``u_size`` defaults to |X||Y| + 5 (a provably sufficient size for the
    common auxiliary); the per-sender auxiliaries default to the channel
    input sizes and are not provably sufficient.  ``max_evaluations`` is a
    deterministic budget: once exhausted the estimate is returned partial.
    """

    u_size: int | None = None
    v1_size: int | None = None
    v2_size: int | None = None
    restarts: int = 30
    refine_iters: int = 40
    step_init: float = 0.35
    step_decay: float = 0.85
    directions: int = 16
    seed: int = 0
    independent_only: bool = False
    structured_starts: bool = True
    max_evaluations: int | None = None

    def sizes_for(self, mac: WiretapMAC) -> tuple[int, int, int]:
        nx, ny = mac.x_alphabet.size, mac.y_alphabet.size
        u = self.u_size if self.u_size is not None else nx * ny + 5
        v1 = self.v1_size if self.v1_size is not None else nx
        v2 = self.v2_size if self.v2_size is not None else ny
        if min(u, v1, v2) < 1:
            raise ValidationError("auxiliary sizes must be >= 1")
        return u, v1, v2


def _simplex_blocks(params: np.ndarray, shapes) -> list[np.ndarray]:
    """Split a flat parameter vector into row-stochastic blocks."""
    out = []
    at = 0
    for rows, cols in shapes:
        block = params[at:at + rows * cols].reshape(rows, cols)
        out.append(block)
        at += rows * cols
    return out


def _project_rows(block: np.ndarray) -> np.ndarray:
    b = np.clip(block, 1e-12, None)
    return b / b.sum(axis=1, keepdims=True)


class _Parameterization:
    """Maps flat parameter vectors to factored inputs for one channel."""

    def __init__(self, mac: WiretapMAC, cfg: SearchConfig):
        self.mac = mac
        self.cfg = cfg
        nx, ny = mac.x_alphabet.size, mac.y_alphabet.size
        if cfg.independent_only:
            self.shapes = [(1, nx), (1, ny)]
            self.sizes = (1, nx, ny)
        else:
            u, v1, v2 = cfg.sizes_for(mac)
            self.sizes = (u, v1, v2)
            self.shapes = [(1, u), (u, v1), (u, v2), (v1, nx), (v2, ny)]
        self.length = sum(r * c for r, c in self.shapes)

    def random(self, rng: np.random.Generator) -> np.ndarray:
        parts = [rng.dirichlet(np.ones(c), size=r).ravel() for r, c in self.shapes]
        return np.concatenate(parts)

    def structured(self) -> list[np.ndarray]:
        """Deterministic starting points worth trying on any channel."""
        mac, cfg = self.mac, self.cfg
        nx, ny = mac.x_alphabet.size, mac.y_alphabet.size
        out = []
        if cfg.independent_only:
            out.append(np.concatenate([np.full(nx, 1 / nx), np.full(ny, 1 / ny)]))
            return out
        u, v1, v2 = self.sizes
        # independent uniform inputs: the auxiliaries ignore U
        blocks = [np.full((1, u), 1 / u), np.full((u, v1), 1 / v1),
                  np.full((u, v2), 1 / v2), _wrapped_identity(v1, nx),
                  _wrapped_identity(v2, ny)]
        out.append(np.concatenate([b.ravel() for b in blocks]))
        # coupled uniform input: both senders track the shared symbol exactly
        blocks = [np.full((1, u), 1 / u), _wrapped_identity(u, v1),
                  _wrapped_identity(u, v2), _wrapped_identity(v1, nx),
                  _wrapped_identity(v2, ny)]
        out.append(np.concatenate([b.ravel() for b in blocks]))
        return out

    def build(self, params: np.ndarray) -> FactoredInput:
        blocks = [_project_rows(b) for b in _simplex_blocks(params, self.shapes)]
        mac = self.mac
        if self.cfg.independent_only:
            return FactoredInput.independent(Dist.from_mass(blocks[0][0]),
                                             Dist.from_mass(blocks[1][0]), mac)
        return FactoredInput(
            Dist.from_mass(blocks[0][0]),
            Channel.from_matrix(blocks[1]),
            Channel.from_matrix(blocks[2]),
            Channel.from_matrix(blocks[3]),
            Channel.from_matrix(blocks[4]),
            mac,
        )


def _wrapped_identity(rows: int, cols: int) -> np.ndarray:
    m = np.zeros((rows, cols))
    for r in range(rows):
        m[r, r % cols] = 1.0
    return m


@dataclass
class AchievablePoint:
    """One certified point of the estimate with its provenance."""

    rates: np.ndarray
    case: CaseLabel
    params: np.ndarray
    generator_id: int


@dataclass
class RegionEstimate:
    """Point cloud of certified achievable rate tuples plus its convex closure."""

    mode: object
    dim: int
    points: np.ndarray
    cases: list
    generators: list
    hull_vertices: np.ndarray
    partial: bool
    seed: int
    aux_sizes: tuple

    def max_sum_rate(self) -> float:
        if self.points.shape[0] == 0:
            return 0.0
        return float(self.points.sum(axis=1).max())

    def max_coordinate(self) -> float:
        if self.points.shape[0] == 0:
            return 0.0
        return float(self.points.max())

    def to_json_dict(self) -> dict:
        mode = {"kind": type(self.mode).__name__}
        mode.update({k: float(v) for k, v in self.mode.__dict__.items()})
        return {
            "mode": mode,
            "dim": self.dim,
            "points": [[float(v) for v in p] for p in self.points],
            "cases": [int(c) for c in self.cases],
            "hull_vertices": [[float(v) for v in p] for p in self.hull_vertices],
            "partial": self.partial,
            "seed": self.seed,
            "aux_sizes": list(self.aux_sizes),
            "note": "lower bound only: per-sender auxiliary sizes are not "
                    "provably sufficient",
        }

    def to_csv(self) -> str:
        cols = ["R0", "R1", "R2"][3 - self.dim:] if self.dim == 3 else ["R1", "R2"]
        lines = [",".join(cols + ["case", "generator"])]
        for pt, case, gen in zip(self.points, self.cases, range(len(self.cases))):
            lines.append(",".join(f"{v:.12g}" for v in pt)
                         + f",{int(case)},{gen}")
        return "\n".join(lines) + "\n"


def _achievable_polytopes(p: FactoredInput, mode) -> list[tuple[CaseLabel, object]]:
    prof = info_profile(p)
    out = []
    if isinstance(mode, CommonMode):
        cases = classify_profile(prof, mode.hc, u_independent=p.u_independent()).cases
        for case in cases:
            try:
                out.append((case, region_common(prof, mode.hc, case,
                                                check_membership=False)))
            except PreconditionError:
                continue
    else:
        hc = mode.c1 + mode.c2
        cases = classify_profile(prof, hc).cases
        for case in cases - {CaseLabel.CASE0}:
            try:
                out.append((case, region_conferencing(prof, mode.c1, mode.c2,
                                                      case, alpha_points=21)))
            except PreconditionError:
                continue
    return out


def _best_along(p: FactoredInput, mode, weights: np.ndarray):
    """Best weighted rate achieved by p, with the witnessing case and vertex."""
    best = (0.0, None, None)
    for case, region in _achievable_polytopes(p, mode):
        if isinstance(region, RatePolytope):
            verts = region.vertices()
        else:
            verts = np.vstack([poly.vertices() for _, poly in region.pieces])
        if verts.shape[0] == 0:
            continue
        scores = verts @ weights
        idx = int(np.argmax(scores))
        if scores[idx] > best[0]:
            best = (float(scores[idx]), case, verts[idx])
    return best


def _directions(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    fixed = [np.ones(dim)]
    fixed.extend(np.eye(dim))
    extra = rng.dirichlet(np.ones(dim), size=max(count - len(fixed), 0))
    dirs = np.vstack([fixed, extra])[:count]
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def achievable_region_estimate(mac: WiretapMAC, mode,
                               cfg: SearchConfig) -> RegionEstimate:
    """Estimate the achievable region of a channel under the given mode.

    Returns a cloud of certified points (each re-checked against the region
    of its generating input) whose convex closure with the origin is the
    estimate.  Deterministic for a fixed (channel, mode, config).
    """
    if not isinstance(mode, (CommonMode, ConferencingMode)):
        raise ValidationError("mode must be CommonMode or ConferencingMode")
    rng = np.random.default_rng(cfg.seed)
    par = _Parameterization(mac, cfg)
    dim = 3 if isinstance(mode, CommonMode) else 2
    dirs = _directions(dim, cfg.directions, rng)

    evaluations = 0
    budget = cfg.max_evaluations if cfg.max_evaluations is not None else math.inf
    partial = False

    candidates: list[np.ndarray] = []
    if cfg.structured_starts:
        candidates.extend(par.structured())
    for _ in range(cfg.restarts):
        candidates.append(par.random(rng))

    # Coverage pass: best candidate per direction (regions computed once per
    # candidate, scored along every direction).
    per_dir: list[tuple[float, np.ndarray]] = [(-1.0, None)] * len(dirs)
    for params in candidates:
        if evaluations >= budget:
            partial = True
            break
        evaluations += 1
        p = par.build(params)
        vertex_sets = []
        for case, region in _achievable_polytopes(p, mode):
            if isinstance(region, RatePolytope):
                verts = region.vertices()
            else:
                verts = np.vstack([poly.vertices() for _, poly in region.pieces])
            if verts.shape[0]:
                vertex_sets.append(verts)
        if not vertex_sets:
            continue
        all_verts = np.vstack(vertex_sets)
        scores = all_verts @ dirs.T  # (v, d)
        best_per_dir = scores.max(axis=0)
        for d in range(len(dirs)):
            if best_per_dir[d] > per_dir[d][0]:
                per_dir[d] = (float(best_per_dir[d]), params)

    # Refinement pass per direction.
    points: list[AchievablePoint] = []
    for d, w in enumerate(dirs):
        score, params = per_dir[d]
        if params is None:
            continue
        step = cfg.step_init
        for it in range(cfg.refine_iters):
            if evaluations >= budget:
                partial = True
                break
            evaluations += 1
            trial = params + step * rng.standard_normal(par.length)
            t_score, _, _ = _best_along(par.build(trial), mode, w)
            if t_score > score:
                score, params = t_score, trial
            else:
                step *= cfg.step_decay
        final_score, case, vert = _best_along(par.build(params), mode, w)
        if vert is not None:
            points.append(AchievablePoint(vert, case, params, d))

    # Certification: recompute each generating region and re-check membership.
    certified: list[AchievablePoint] = []
    for pt in points:
        p = par.build(pt.params)
        for case, region in _achievable_polytopes(p, mode):
            if case == pt.case and region.contains(pt.rates, tol=1e-9):
                certified.append(pt)
                break

    if certified:
        cloud = np.vstack([pt.rates for pt in certified])
    else:
        cloud = np.zeros((1, dim))
    hull = _hull_with_origin(cloud, dim)
    return RegionEstimate(
        mode=mode, dim=dim, points=cloud,
        cases=[pt.case for pt in certified] or [CaseLabel.CASE0],
        generators=[par.build(pt.params) for pt in certified],
        hull_vertices=hull, partial=partial, seed=cfg.seed,
        aux_sizes=par.sizes,
    )


def _hull_with_origin(cloud: np.ndarray, dim: int) -> np.ndarray:
    pts = np.vstack([np.zeros((1, dim)), cloud])
    pts = np.unique(np.round(pts, 12), axis=0)
    if pts.shape[0] <= dim + 1:
        return pts
    try:
        from scipy.spatial import ConvexHull

        hull = ConvexHull(pts, qhull_options="QJ")
        return pts[hull.vertices]
    except Exception:
        return pts


def single_sender_secrecy_capacity(mac: WiretapMAC, cfg: SearchConfig) -> float:
    """Search lower bound on the secrecy capacity with both senders combined.

    Maximizes the legitimate-minus-eavesdropper information gap over the
    factored input family; monotone nondecreasing in the search budget.
    """
    rng = np.random.default_rng(cfg.seed)
    par = _Parameterization(mac, cfg)

    def objective(params: np.ndarray) -> float:
        prof = info_profile(par.build(params))
        return prof.it_v12 - prof.iz_v12

    best_val, best_params = 0.0, None
    starts: list[np.ndarray] = []
    if cfg.structured_starts and not cfg.independent_only:
        starts.extend(par.structured())
    for _ in range(cfg.restarts):
        starts.append(par.random(rng))
    for params in starts:
        val = objective(params)
        if val > best_val:
            best_val, best_params = val, params
    if best_params is None:
        return 0.0
    step = cfg.step_init
    val, params = best_val, best_params
    for _ in range(cfg.refine_iters):
        trial = params + step * rng.standard_normal(par.length)
        t_val = objective(trial)
        if t_val > val:
            val, params = t_val, trial
        else:
            step *= cfg.step_decay
    return float(max(val, 0.0))
