"""Empirical verification of the codebook concentration bounds.

Each bound concerns an event of one randomly drawn codebook family: enough
private sequences are jointly conditionally typical, or an empirical
channel-output average stays within a relative corridor of its reference
measure.  At desk scale the reference measures are computed exactly by
enumerating the truncated typical supports, events are evaluated on
resampled families, and the observed failure frequencies are compared
against the bound formulas (with the typicality slacks and the tail
exponent supplied as parameters, since their asymptotic forms carry
unspecified constants).

Reference measures defined through conditioning on a success event of the
inner indices cannot be enumerated directly; they are estimated from the
resamples themselves and flagged as estimated in the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codesim import (
    CodeChain,
    CodebookFamily,
    DEFAULT_SLACK,
    DEFAULT_TAIL_EXPONENT,
    sample_codebook_family,
)
from .errors import PreconditionError, ResourceBudgetError
from .probkit import (
    Alphabet,
    Channel,
    Dist,
    all_sequences,
    mutual_information,
    typical_mask,
    typical_membership,
    zip_sequences,
)

LN2 = math.log(2.0)


@dataclass
class LemmaCheck:
    """One bound: its formula value and the observed failure frequency."""

    name: str
    bound: float
    empirical: float | None
    events: int
    vacuous: bool
    exceeded: bool
    note: str = ""

    def to_json_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class ConcentrationReport:
    checks: list
    params: dict
    partial: bool = False
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return not any(c.exceeded for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "checks": [c.to_json_dict() for c in self.checks],
            "params": self.params,
            "partial": self.partial,
            "notes": list(self.notes),
            "passed": self.passed,
        }


class _Workspace:
    """Exact per-(u, y) and per-u reference measures for one chain."""

    def __init__(self, chain: CodeChain, n: int, delta: float, eps: float,
                 slack: float, tail_exponent: float):
        self.chain = chain
        self.n = n
        self.delta = delta
        self.eps = eps
        self.slack = slack
        self.c_exp = tail_exponent
        mac = chain.mac
        self.nx = mac.x_alphabet.size
        self.ny = mac.y_alphabet.size
        self.nz = mac.z_alphabet.size
        self.nu = chain.p_u.alphabet.size
        if self.nz ** n > 1 << 20:
            raise ResourceBudgetError(f"|Z|^{n} output space too large")
        joint = chain.joint  # axes (U, X, Y, T, Z)
        self.h_z_xy = joint.entropy({1, 2, 4}) - joint.entropy({1, 2})
        self.i_z_x_yu = mutual_information(joint, {4}, {1}, {2, 0})
        self.i_z_y_u = mutual_information(joint, {4}, {2}, {0})
        self.i_z_xy = mutual_information(joint, {4}, {1, 2})
        self.i_z_u = mutual_information(joint, {4}, {0})
        self.i_z_yu = mutual_information(joint, {4}, {2, 0})
        self.we = mac.eve.matrix

        # conditional laws for typicality tests
        x_rows = np.zeros((self.ny * self.nu, self.nx))
        for yy in range(self.ny):
            for uu in range(self.nu):
                x_rows[yy * self.nu + uu] = chain.x_given_u.matrix[uu]
        self.x_given_yu = Channel(Alphabet(self.ny * self.nu),
                                  Alphabet(self.nx), x_rows)
        z_rows = np.zeros((self.ny * self.nu, self.nz))
        for yy in range(self.ny):
            for uu in range(self.nu):
                z_rows[yy * self.nu + uu] = (
                    chain.x_given_u.matrix[uu] @ self.we.reshape(
                        self.nx, self.ny, self.nz)[:, yy, :])
        self.z_given_yu = Channel(Alphabet(self.ny * self.nu),
                                  Alphabet(self.nz), z_rows)
        zu_rows = np.einsum("ux,uy,xyz->uz", chain.x_given_u.matrix,
                            chain.y_given_u.matrix,
                            self.we.reshape(self.nx, self.ny, self.nz))
        self.z_given_u = Channel(Alphabet(self.nu), Alphabet(self.nz), zu_rows)
        self.p_z = Dist(Alphabet(self.nz),
                        joint.marginal_mass({4}))
        self._row_cache: dict = {}
        self._typ_x_cache: dict = {}
        self._typ_y_cache: dict = {}
        self._uy_cache: dict = {}
        self._u_cache: dict = {}
        self.z_seqs = all_sequences(self.nz, n)
        # plain typical-Z count at delta (threshold denominators)
        self.t_z_plain = int(typical_mask(self.p_z, delta, n).sum())
        big = 4 * self.ny * self.nx * self.nu * delta
        self.t_z_big_mask = typical_mask(self.p_z, big, n)

    # -- sequence-level pieces ------------------------------------------------

    def batch_rows(self, xs: np.ndarray, yseq: np.ndarray) -> np.ndarray:
        """Channel-output rows over all output sequences, one per x in the batch."""
        xs = np.atleast_2d(xs)
        out = np.ones((xs.shape[0], 1))
        for i in range(self.n):
            step = self.we[xs[:, i] * self.ny + yseq[i]]  # (m, nz)
            out = (out[:, :, None] * step[:, None, :]).reshape(xs.shape[0], -1)
        return out

    def we_row(self, xseq: np.ndarray, yseq: np.ndarray) -> np.ndarray:
        key = (xseq.tobytes(), yseq.tobytes())
        row = self._row_cache.get(key)
        if row is None:
            if len(self._row_cache) > 20000:
                self._row_cache.clear()
            row = self.batch_rows(xseq[None, :], yseq)[0]
            self._row_cache[key] = row
        return row

    def typical_x_given(self, useq: np.ndarray):
        key = useq.tobytes()
        out = self._typ_x_cache.get(key)
        if out is None:
            from .probkit import truncated_typical_dist

            sd = truncated_typical_dist(self.chain.x_given_u, self.n,
                                        self.delta, useq)
            sup = sd.support()
            probs = np.array([sd.prob(s) for s in sup])
            out = (sup, probs)
            self._typ_x_cache[key] = out
        return out

    def typical_y_given(self, useq: np.ndarray):
        key = useq.tobytes()
        out = self._typ_y_cache.get(key)
        if out is None:
            from .probkit import truncated_typical_dist

            sd = truncated_typical_dist(self.chain.y_given_u, self.n,
                                        self.delta, useq)
            sup = sd.support()
            probs = np.array([sd.prob(s) for s in sup])
            out = (sup, probs)
            self._typ_y_cache[key] = out
        return out

    def e1_mask(self, useq, xseq, yseq) -> np.ndarray:
        """Output-sequence mask: conditionally typical and probability-capped."""
        zy_mask = self._z_given_yu_mask(useq, yseq)
        cap = 2.0 ** (-self.n * (self.h_z_xy - self.slack))
        return zy_mask & (self.we_row(xseq, yseq) <= cap)

    def _z_given_yu_mask(self, useq, yseq) -> np.ndarray:
        key = (useq.tobytes(), yseq.tobytes(), "zyu")
        mask = self._uy_cache.get(key)
        if mask is None:
            ctx, _ = zip_sequences(yseq, useq, [self.ny, self.nu])
            mask = typical_mask(self.z_given_yu, 2 * self.nx * self.delta,
                                self.n, ctx)
            self._uy_cache[key] = mask
        return mask

    def theta_uy(self, useq, yseq):
        """Exact reference measure given (u, y) and its support threshold."""
        key = (useq.tobytes(), yseq.tobytes())
        out = self._uy_cache.get(key)
        if out is None:
            xs, probs = self.typical_x_given(useq)
            rows = self.batch_rows(xs, yseq)
            zy_mask = self._z_given_yu_mask(useq, yseq)
            cap = 2.0 ** (-self.n * (self.h_z_xy - self.slack))
            masks = zy_mask[None, :] & (rows <= cap)
            theta = probs @ (rows * masks)
            count = max(int(zy_mask.sum()), 1)
            f1 = zy_mask & (theta >= self.eps / count)
            theta_hat = theta * f1
            out = (theta, theta_hat, f1)
            self._uy_cache[key] = out
        return out

    def theta_u(self, useq):
        """Exact reference measure given u alone (pairs enumerated)."""
        key = useq.tobytes()
        out = self._u_cache.get(key)
        if out is None:
            xs, xp = self.typical_x_given(useq)
            ys, yp = self.typical_y_given(useq)
            cap = 2.0 ** (-self.n * (self.h_z_xy - self.slack))
            theta = np.zeros(self.nz ** self.n)
            for yseq, pyv in zip(ys, yp):
                _, _, f1 = self.theta_uy(useq, yseq)
                zy_mask = self._z_given_yu_mask(useq, yseq)
                rows = self.batch_rows(xs, yseq)
                e2 = (zy_mask & f1)[None, :] & (rows <= cap)
                theta += pyv * (xp @ (rows * e2))
            ctx = np.asarray(useq, dtype=np.int64)
            zmask = typical_mask(self.z_given_u,
                                 3 * self.ny * self.nx * self.delta,
                                 self.n, ctx)
            count = max(int(zmask.sum()), 1)
            f2 = zmask & (theta >= self.eps / count)
            out = (theta, theta * f2, f2)
            self._u_cache[key] = out
        return out

    def typical_fraction_threshold(self, size: int) -> float:
        mu = 1.0 - 2.0 * 2.0 ** (-self.n * self.c_exp * self.delta ** 2)
        return (1.0 - self.eps) * mu * size

    def star_bound(self, size: int) -> float:
        mu = 1.0 - 2.0 * 2.0 ** (-self.n * self.c_exp * self.delta ** 2)
        if mu <= 0.0:
            return 1.0
        return min(math.exp(-size * self.eps ** 2 * mu / (2.0 * LN2)), 1.0)


def _three_sigma(freq: float, events: int) -> float:
    return 3.0 * math.sqrt(max(freq * (1.0 - freq), 1e-12) / max(events, 1))


def concentration_report(family: CodebookFamily, eps: float, *,
                         resamples: int = 300, seed: int = 12345,
                         slack: float = DEFAULT_SLACK,
                         tail_exponent: float = DEFAULT_TAIL_EXPONENT,
                         w_e: Channel | None = None) -> ConcentrationReport:
    """Evaluate the applicable concentration bounds for one family shape.

    Resamples ``resamples`` fresh families of the same shape from the same
    chain, measures how often each event fails, and compares against the
    bound formulas.  A check is ``exceeded`` when the empirical frequency
    beats its bound by more than three binomial standard deviations;
    vacuous bounds (>= 1) can never be exceeded.
    """
    if family.k_sizes != (1, 1, 1):
        raise PreconditionError("concentration checks run on single-message "
                                "families (K sizes all 1)")
    if w_e is not None and not np.allclose(w_e.matrix, family.chain.mac.eve.matrix):
        raise PreconditionError("the eavesdropper channel must match the chain")
    if not 0.0 < eps < 0.5:
        raise PreconditionError(f"need 0 < eps < 1/2, got {eps}")
    chain = family.chain
    n = family.n
    l0, l1, l2 = family.l_sizes
    params = {
        "n": n, "l_sizes": list(family.l_sizes), "delta": family.delta,
        "eps": eps, "resamples": resamples, "slack": slack,
        "tail_exponent": tail_exponent, "seed": seed,
    }
    try:
        ws = _Workspace(chain, n, family.delta, eps, slack, tail_exponent)
    except ResourceBudgetError as exc:
        return ConcentrationReport([], params, partial=True,
                                   notes=(f"budget exceeded: {exc}",))

    fams = [sample_codebook_family(chain, n, family.l_sizes, family.delta,
                                   seed + 7919 * i) for i in range(resamples)]

    checks: list[LemmaCheck] = []
    notes: list[str] = []

    if l1 == 1 and l2 == 1:
        checks += _case3_checks(ws, fams, l0)
    elif l2 == 1:
        checks += _pair_typicality_check(ws, fams, inner="x")
        checks += _mean_corridor_check(ws, fams, inner="x")
        checks += _outer_mean_check_case2(ws, fams)
        notes.append("outer reference measure estimated from the resamples")
    else:
        checks += _pair_typicality_check(ws, fams, inner="x")
        checks += _mean_corridor_check(ws, fams, inner="x")
        checks += _joint_mean_check(ws, fams)
        checks += _outer_mean_check_case1(ws, fams)
        notes.append("outer reference measure estimated from the resamples")

    return ConcentrationReport(checks, params, notes=tuple(notes))


def _pair_typicality_check(ws: _Workspace, fams, inner: str) -> list:
    """Fraction of inner sequences jointly typical with each partner sequence."""
    l0, l1, l2 = fams[0].l_sizes
    threshold = ws.typical_fraction_threshold(l1)
    failures = 0
    events = 0
    for fam in fams:
        for a in range(l0):
            useq = fam.u[0, a]
            for c in range(l2):
                yseq = fam.y[0, a, 0, c]
                ctx, _ = zip_sequences(yseq, useq, [ws.ny, ws.nu])
                good = sum(
                    typical_membership(ws.x_given_yu, fam.x[0, a, 0, b],
                                       ws.delta, ctx)
                    for b in range(l1))
                events += 1
                if good < threshold:
                    failures += 1
    freq = failures / events
    bound = ws.star_bound(l1)
    return [LemmaCheck(
        name="typical-fraction (inner sequences vs partner)",
        bound=bound, empirical=freq, events=events,
        vacuous=bound >= 1.0,
        exceeded=bound < 1.0 and freq - _three_sigma(freq, events) > bound,
    )]


def _mean_corridor_check(ws: _Workspace, fams, inner: str) -> list:
    """Per-output concentration of the inner empirical channel average."""
    l0, l1, l2 = fams[0].l_sizes
    bound = min(2.0 * math.exp(
        -l1 * ws.eps ** 3
        * 2.0 ** (-ws.n * (ws.i_z_x_yu + 2 * ws.slack)) / (2.0 * LN2)), 1.0)
    worst = 0.0
    events = 0
    fail_by_z = np.zeros(ws.nz ** ws.n)
    for fam in fams:
        for a in range(l0):
            useq = fam.u[0, a]
            for c in range(l2):
                yseq = fam.y[0, a, 0, c]
                _, theta_hat, f1 = ws.theta_uy(useq, yseq)
                rows = ws.batch_rows(fam.x[0, a, 0, :, :], yseq)
                cap = 2.0 ** (-ws.n * (ws.h_z_xy - ws.slack))
                zy_mask = ws._z_given_yu_mask(useq, yseq)
                e2 = (zy_mask & f1)[None, :] & (rows <= cap)
                mean = (rows * e2).mean(axis=0)
                bad = (mean > (1.0 + ws.eps) * theta_hat + 1e-15) | \
                      (mean < (1.0 - ws.eps) * theta_hat - 1e-15)
                fail_by_z += bad
                events += 1
    freq = float(fail_by_z.max()) / events
    return [LemmaCheck(
        name="inner-mean corridor (per output sequence)",
        bound=bound, empirical=freq, events=events,
        vacuous=bound >= 1.0,
        exceeded=bound < 1.0 and freq - _three_sigma(freq, events) > bound,
    )]


def _joint_mean_check(ws: _Workspace, fams) -> list:
    """Concentration of the pair-averaged output law around the per-u reference."""
    l0, l1, l2 = fams[0].l_sizes
    bound = min(
        2.0 * ws.ny ** ws.n * math.exp(
            -l1 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_x_yu + 2 * ws.slack)) / (2.0 * LN2))
        + 2.0 * math.exp(
            -l2 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_y_u + 2 * ws.slack)) / (4.0 * LN2)),
        1.0)
    fail_by_z = np.zeros(ws.nz ** ws.n)
    events = 0
    for fam in fams:
        for a in range(l0):
            useq = fam.u[0, a]
            _, theta_hat_u, f2 = ws.theta_u(useq)
            mean = np.zeros_like(theta_hat_u)
            for b in range(l1):
                for c in range(l2):
                    xseq = fam.x[0, a, 0, b]
                    yseq = fam.y[0, a, 0, c]
                    _, _, f1 = ws.theta_uy(useq, yseq)
                    e0 = ws.e1_mask(useq, xseq, yseq) & f1 & f2
                    mean += ws.we_row(xseq, yseq) * e0
            mean /= l1 * l2
            bad = (mean > (1.0 + 3 * ws.eps) * theta_hat_u + 1e-15) | \
                  (mean < (1.0 - 3 * ws.eps) * theta_hat_u - 1e-15)
            fail_by_z += bad
            events += 1
    freq = float(fail_by_z.max()) / events
    return [LemmaCheck(
        name="pair-mean corridor (per shared sequence)",
        bound=bound, empirical=freq, events=events,
        vacuous=bound >= 1.0,
        exceeded=bound < 1.0 and freq - _three_sigma(freq, events) > bound,
    )]


def _family_mean_case1(ws: _Workspace, fam) -> tuple[np.ndarray, np.ndarray]:
    """Family-wide averaged output measure and the all-shared success mask."""
    l0, l1, l2 = fam.l_sizes
    total = np.zeros(ws.nz ** ws.n)
    ok = np.ones(ws.nz ** ws.n, dtype=bool)
    theta_first = None
    for a in range(l0):
        useq = fam.u[0, a]
        _, theta_hat_u, f2 = ws.theta_u(useq)
        mean = np.zeros_like(theta_hat_u)
        for b in range(l1):
            for c in range(l2):
                xseq = fam.x[0, a, 0, b]
                yseq = fam.y[0, a, 0, c]
                _, _, f1 = ws.theta_uy(useq, yseq)
                e0 = ws.e1_mask(useq, xseq, yseq) & f1 & f2
                mean += ws.we_row(xseq, yseq) * e0
        mean /= l1 * l2
        ok &= (mean <= (1.0 + 3 * ws.eps) * theta_hat_u + 1e-15) & \
              (mean >= (1.0 - 3 * ws.eps) * theta_hat_u - 1e-15)
        total += mean
        if a == 0:
            theta_first = theta_hat_u
    return total / l0, ok, theta_first


def _outer_mean_check_case1(ws: _Workspace, fams) -> list:
    l0, l1, l2 = fams[0].l_sizes
    bound = min(
        2.0 * l0 * ws.ny ** ws.n * math.exp(
            -l1 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_x_yu + 2 * ws.slack)) / (2.0 * LN2))
        + 2.0 * l0 * math.exp(
            -l2 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_y_u + 2 * ws.slack)) / (4.0 * LN2))
        + 2.0 * math.exp(
            -l0 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_u + 2 * ws.slack)) / (4.0 * LN2)),
        1.0)
    per_fam = [_family_mean_case1(ws, fam) for fam in fams]
    # estimated conditional reference: average first-u measure over successes
    acc = np.zeros(ws.nz ** ws.n)
    cnt = np.zeros(ws.nz ** ws.n)
    for _, ok, theta_first in per_fam:
        acc += np.where(ok, theta_first, 0.0)
        cnt += ok
    theta_est = np.divide(acc, np.maximum(cnt, 1.0))
    support = ws.t_z_big_mask & (theta_est >= 1.0 /
                                 max(int(ws.t_z_big_mask.sum()), 1))
    theta_hat = theta_est * support
    fail_by_z = np.zeros(ws.nz ** ws.n)
    for mean, _, _ in per_fam:
        bad = support & ((mean > (1.0 + 5 * ws.eps) * theta_hat + 1e-15)
                         | (mean < (1.0 - 5 * ws.eps) * theta_hat - 1e-15))
        fail_by_z += bad
    freq = float(fail_by_z.max()) / len(fams)
    return [LemmaCheck(
        name="family-mean corridor (common index, estimated reference)",
        bound=bound, empirical=freq, events=len(fams),
        vacuous=bound >= 1.0,
        exceeded=bound < 1.0 and freq - _three_sigma(freq, len(fams)) > bound,
        note="reference measure estimated from resamples",
    )]


def _outer_mean_check_case2(ws: _Workspace, fams) -> list:
    l0, l1, _ = fams[0].l_sizes
    bound = min(
        2.0 * l0 * math.exp(
            -l1 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_x_yu + 2 * ws.slack)) / (2.0 * LN2))
        + 2.0 * math.exp(
            -l0 * ws.eps ** 3
            * 2.0 ** (-ws.n * (ws.i_z_yu + 2 * ws.slack)) / (4.0 * LN2)),
        1.0)
    per_fam = []
    cap = 2.0 ** (-ws.n * (ws.h_z_xy - ws.slack))
    for fam in fams:
        total = np.zeros(ws.nz ** ws.n)
        ok = np.ones(ws.nz ** ws.n, dtype=bool)
        theta_first = None
        for a in range(l0):
            useq = fam.u[0, a]
            yseq = fam.y[0, a, 0, 0]
            _, theta_hat_uy, f1 = ws.theta_uy(useq, yseq)
            zy_mask = ws._z_given_yu_mask(useq, yseq)
            rows = ws.batch_rows(fam.x[0, a, 0, :, :], yseq)
            e2 = (zy_mask & f1)[None, :] & (rows <= cap)
            mean = (rows * e2).mean(axis=0)
            ok &= (mean <= (1.0 + ws.eps) * theta_hat_uy + 1e-15) & \
                  (mean >= (1.0 - ws.eps) * theta_hat_uy - 1e-15)
            total += mean
            if a == 0:
                theta_first = theta_hat_uy
        per_fam.append((total / l0, ok, theta_first))
    acc = np.zeros(ws.nz ** ws.n)
    cnt = np.zeros(ws.nz ** ws.n)
    for _, ok, theta_first in per_fam:
        acc += np.where(ok, theta_first, 0.0)
        cnt += ok
    theta_est = np.divide(acc, np.maximum(cnt, 1.0))
    support = ws.t_z_big_mask & (theta_est >= ws.eps / max(ws.t_z_plain, 1))
    theta_hat = theta_est * support
    fail_by_z = np.zeros(ws.nz ** ws.n)
    for mean, _, _ in per_fam:
        bad = support & ((mean > (1.0 + 3 * ws.eps) * theta_hat + 1e-15)
                         | (mean < (1.0 - 3 * ws.eps) * theta_hat - 1e-15))
        fail_by_z += bad
    freq = float(fail_by_z.max()) / len(fams)
    return [LemmaCheck(
        name="family-mean corridor (single partner, estimated reference)",
        bound=bound, empirical=freq, events=len(fams),
        vacuous=bound >= 1.0,
        exceeded=bound < 1.0 and freq - _three_sigma(freq, len(fams)) > bound,
        note="reference measure estimated from resamples",
    )]


def _case3_checks(ws: _Workspace, fams, l0: int) -> list:
    threshold = ws.typical_fraction_threshold(l0)
    star_fail = 0
    cap = 2.0 ** (-ws.n * (ws.h_z_xy - ws.slack))
    # exact reference over the full typical triple enumeration
    theta = np.zeros(ws.nz ** ws.n)
    from .probkit import truncated_typical_dist

    u_law = truncated_typical_dist(ws.chain.p_u, ws.n, ws.delta)
    for useq in u_law.support():
        pu = u_law.prob(useq)
        xs, xp = ws.typical_x_given(useq)
        ys, yp = ws.typical_y_given(useq)
        for yseq, pyv in zip(ys, yp):
            for xseq, pxv in zip(xs, xp):
                row = ws.we_row(xseq, yseq)
                e3 = ws.t_z_big_mask & (row <= cap)
                theta += pu * pxv * pyv * row * e3
    f3 = ws.t_z_big_mask & (theta >= ws.eps / max(ws.t_z_plain, 1))
    theta_hat = theta * f3
    mean_bound = min(2.0 * math.exp(
        -l0 * ws.eps ** 3
        * 2.0 ** (-ws.n * (ws.i_z_xy + 2 * ws.slack)) / (2.0 * LN2)), 1.0)
    fail_by_z = np.zeros(ws.nz ** ws.n)
    for fam in fams:
        good = 0
        mean = np.zeros(ws.nz ** ws.n)
        for a in range(l0):
            useq = fam.u[0, a]
            xseq = fam.x[0, a, 0, 0]
            yseq = fam.y[0, a, 0, 0]
            ctx, _ = zip_sequences(yseq, useq, [ws.ny, ws.nu])
            if typical_membership(ws.x_given_yu, xseq, ws.delta, ctx):
                good += 1
            row = ws.we_row(xseq, yseq)
            mean += row * (ws.t_z_big_mask & (row <= cap))
        if good < threshold:
            star_fail += 1
        mean /= l0
        bad = f3 & ((mean > (1.0 + ws.eps) * theta_hat + 1e-15)
                    | (mean < (1.0 - ws.eps) * theta_hat - 1e-15))
        fail_by_z += bad
    star_freq = star_fail / len(fams)
    star_bound = ws.star_bound(l0)
    mean_freq = float(fail_by_z.max()) / len(fams)
    return [
        LemmaCheck(
            name="typical-fraction (shared-index pairs)",
            bound=star_bound, empirical=star_freq, events=len(fams),
            vacuous=star_bound >= 1.0,
            exceeded=star_bound < 1.0
            and star_freq - _three_sigma(star_freq, len(fams)) > star_bound,
        ),
        LemmaCheck(
            name="family-mean corridor (exact reference)",
            bound=mean_bound, empirical=mean_freq, events=len(fams),
            vacuous=mean_bound >= 1.0,
            exceeded=mean_bound < 1.0
            and mean_freq - _three_sigma(mean_freq, len(fams)) > mean_bound,
        ),
    ]
