"""The two worked examples: additive noise channels and the time-sharing witness.

The first example is a pair of additive channels (ternary legitimate output,
six-valued eavesdropper output) where no independent-input choice beats the
eavesdropper but coupled inputs do; the second is a numeric 2x2x2x2 channel
pair whose time-sharing interval is strictly interior on one side.  A
brute-force search reproduces how such examples are found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, ValidationError
from .probkit import (
    AX_T,
    AX_X,
    AX_Y,
    AX_Z,
    Dist,
    FactoredInput,
    WiretapMAC,
    mutual_information,
)
from .regions import (
    AlphaBounds,
    CaseLabel,
    alpha_bounds_case1,
    classify_profile,
    info_profile,
)

LN2 = math.log(2.0)

WB_EXAMPLE = np.array([[0.6178, 0.3822], [0.0624, 0.9376],
                       [0.9350, 0.0650], [0.2353, 0.7647]])
WE_EXAMPLE = np.array([[0.0729, 0.9271], [0.7264, 0.2736],
                       [0.3662, 0.6338], [0.4643, 0.5357]])
Q_EXAMPLE = 0.6933
R_EXAMPLE = 0.3151


def discussion_channels() -> WiretapMAC:
    """The additive example pair: t = x + y + N1 (mod 3), z = 2x - 2y + N2.

    N1, N2 are i.i.d. fair bits; z lives on {-2, ..., 3}, stored with offset
    2.  Every marginal transition probability is 0 or 1/2.
    """
    tensor = np.zeros((2, 2, 3, 6))
    for x in range(2):
        for y in range(2):
            for n1 in range(2):
                for n2 in range(2):
                    t = (x + y + n1) % 3
                    z = 2 * x - 2 * y + n2 + 2
                    tensor[x, y, t, z] += 0.25
    return WiretapMAC.from_rows(tensor.reshape(4, 18), 2, 2, 3, 6)


@dataclass(frozen=True)
class GapPoint:
    """Information gap of the additive example at one independent input."""

    q: float
    r: float
    gap: float
    d2_gap_dq2: float


def _h2term(p: float) -> float:
    return 0.0 if p <= 0.0 else -p * math.log2(p / 2.0)


def eavesdropper_output_entropy(q: float, r: float) -> float:
    """H of the six-valued output under independent inputs (q, r)."""
    return (_h2term(q * (1 - r))
            + _h2term(q * r + (1 - q) * (1 - r))
            + _h2term((1 - q) * r))


def legitimate_output_entropy(q: float, r: float) -> float:
    """H of the ternary output under independent inputs (q, r)."""
    s1 = q * r + (1 - q) * (1 - r)
    s2 = q * r + q * (1 - r) + (1 - q) * r
    s3 = q * (1 - r) + (1 - q) * r + (1 - q) * (1 - r)
    return 0.5 * (_h2term(s1) + _h2term(s2) + _h2term(s3))


def lessnoisy_gap(q: float, r: float) -> GapPoint:
    """Gap H(Z) - H(T) of the additive example and its second q-derivative.

    Both in bits; the derivative formula is the closed form (the conditional
    output entropies are input-independent, so the gap decides whether the
    eavesdropper dominates every independent input).  Interior inputs only.
    """
    if not (0.0 < q < 1.0 and 0.0 < r < 1.0):
        raise PreconditionError("inputs must be strictly interior to (0,1)^2")
    gap = eavesdropper_output_entropy(q, r) - legitimate_output_entropy(q, r)
    s = q * r + (1 - q) * (1 - r)
    s2 = q + r - q * r
    s3 = 1 - q * r
    bracket = (-(1 - r) / (2 * q) * (q + 2 * r - q * r) / s2
               - (2 * r - 1) ** 2 / (2 * s)
               - r / (2 * (1 - q)) * (2 - r - q * r) / s3)
    return GapPoint(q, r, gap, bracket / LN2)


@dataclass
class ConcavityReport:
    """Sign scan of the gap's second derivative over an interior grid."""

    grid_shape: tuple
    violations: list
    min_margin: float

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {"grid_shape": list(self.grid_shape),
                "violations": self.violations,
                "min_abs_margin": self.min_margin,
                "passed": self.passed}


def concavity_scan(q_points: int = 99, r_points: int = 99) -> ConcavityReport:
    """Assert the strict negativity of the second q-derivative on a grid.

    The gap is symmetric in its two arguments, so negativity along q settles
    the other direction as well.
    """
    qs = np.linspace(0.0, 1.0, q_points + 2)[1:-1]
    rs = np.linspace(0.0, 1.0, r_points + 2)[1:-1]
    violations = []
    min_margin = math.inf
    for q in qs:
        for r in rs:
            d2 = lessnoisy_gap(q, r).d2_gap_dq2
            min_margin = min(min_margin, abs(d2))
            if d2 >= 0.0:
                violations.append({"q": float(q), "r": float(r), "d2": float(d2)})
    return ConcavityReport((len(qs), len(rs)), violations, float(min_margin))


@dataclass(frozen=True)
class EqualInputWitness:
    """Coupled-input rates on the additive example plus the scanned maximizer."""

    i_t: float
    i_z: float
    best_p0: float
    scanned: tuple


def coupled_input(mac: WiretapMAC, p0: float) -> FactoredInput:
    """Both senders transmit one shared fair-or-biased bit: x = y = U."""
    return FactoredInput.coupled(Dist.from_mass([p0, 1.0 - p0]), mac)


def equal_input_witness(scan_points: int = 99) -> EqualInputWitness:
    """Coupled uniform inputs: the eavesdropper sees pure noise.

    Returns the exact rates at the uniform coupling and a grid scan over the
    coupling bias confirming the uniform choice maximizes the legitimate
    rate.
    """
    mac = discussion_channels()
    scanned = []
    best = (-1.0, None)
    for p0 in np.linspace(0.0, 1.0, scan_points + 2)[1:-1]:
        j = coupled_input(mac, float(p0)).joint
        i_t = mutual_information(j, {AX_T}, {AX_X, AX_Y})
        scanned.append((float(p0), float(i_t)))
        if i_t > best[0]:
            best = (i_t, float(p0))
    j = coupled_input(mac, 0.5).joint
    return EqualInputWitness(
        i_t=mutual_information(j, {AX_T}, {AX_X, AX_Y}),
        i_z=mutual_information(j, {AX_Z}, {AX_X, AX_Y}),
        best_p0=best[1],
        scanned=tuple(scanned),
    )


@dataclass
class Example62Report:
    """All numeric quantities of the explicit 2x2x2x2 example."""

    mac: WiretapMAC
    q: float
    r: float
    entropies: dict
    mutual_informations: dict
    profile: object
    alpha_first_sender: AlphaBounds
    alpha_second_sender: AlphaBounds
    hc01: bool
    hc02: bool
    case0: bool

    def to_json_dict(self) -> dict:
        return {
            "q": self.q, "r": self.r,
            "entropies": self.entropies,
            "mutual_informations": self.mutual_informations,
            "alpha_first_sender": _alpha_json(self.alpha_first_sender),
            "alpha_second_sender": _alpha_json(self.alpha_second_sender),
            "hc01": self.hc01, "hc02": self.hc02, "case0": self.case0,
        }


def _alpha_json(ab: AlphaBounds) -> dict:
    return {"alpha0": ab.alpha0, "alpha1": ab.alpha1, "degenerate": ab.degenerate}


def example62_channels() -> WiretapMAC:
    return WiretapMAC.from_marginals(WB_EXAMPLE, WE_EXAMPLE)


def example62() -> Example62Report:
    """Reconstruct the explicit example and evaluate everything it reports.

    The two senders could occupy either slot of the rate bounds, so both
    role assignments are evaluated and reported.  The interesting conclusion
    (interval strictly interior on the left, endpoint on the right) holds
    under the assignment where the second physical sender leads.
    """
    mac = example62_channels()
    p = FactoredInput.independent(Dist.from_mass([Q_EXAMPLE, 1 - Q_EXAMPLE]),
                                  Dist.from_mass([R_EXAMPLE, 1 - R_EXAMPLE]), mac)
    j = p.joint

    def h(axes):
        return j.entropy(axes)

    entropies = {
        "H(T|XY)": h({AX_X, AX_Y, AX_T}) - h({AX_X, AX_Y}),
        "H(Z|XY)": h({AX_X, AX_Y, AX_Z}) - h({AX_X, AX_Y}),
        "H(T|X)": h({AX_X, AX_T}) - h({AX_X}),
        "H(Z|X)": h({AX_X, AX_Z}) - h({AX_X}),
        "H(T|Y)": h({AX_Y, AX_T}) - h({AX_Y}),
        "H(Z|Y)": h({AX_Y, AX_Z}) - h({AX_Y}),
        "H(T)": h({AX_T}),
        "H(Z)": h({AX_Z}),
    }
    mi = mutual_information
    mis = {
        "I(T^XY)": mi(j, {AX_T}, {AX_X, AX_Y}),
        "I(Z^XY)": mi(j, {AX_Z}, {AX_X, AX_Y}),
        "I(T^X|Y)": mi(j, {AX_T}, {AX_X}, {AX_Y}),
        "I(Z^X|Y)": mi(j, {AX_Z}, {AX_X}, {AX_Y}),
        "I(T^Y|X)": mi(j, {AX_T}, {AX_Y}, {AX_X}),
        "I(Z^Y|X)": mi(j, {AX_Z}, {AX_Y}, {AX_X}),
        "I(Z^X)": mi(j, {AX_Z}, {AX_X}),
        "I(Z^Y)": mi(j, {AX_Z}, {AX_Y}),
    }
    prof = info_profile(p)
    hc01 = prof.iz_v1_u <= prof.it_v1_v2u
    hc02 = prof.iz_v2_u <= prof.it_v2_v1u
    report = Example62Report(
        mac=mac, q=Q_EXAMPLE, r=R_EXAMPLE,
        entropies={k: float(v) for k, v in entropies.items()},
        mutual_informations={k: float(v) for k, v in mis.items()},
        profile=prof,
        alpha_first_sender=alpha_bounds_case1(prof),
        alpha_second_sender=alpha_bounds_case1(prof.swapped()),
        hc01=hc01, hc02=hc02,
        case0=CaseLabel.CASE0 in classify_profile(prof, 0.0, u_independent=True).cases,
    )
    return report


@dataclass
class FoundChannel:
    """A search hit: the channel pair, the input, and its certificate."""

    mac: WiretapMAC
    q: float
    r: float
    predicate: str
    certificate: dict

    def to_json_dict(self) -> dict:
        out = self.mac.to_json_dict()
        out["input"] = {"q": self.q, "r": self.r}
        out["predicate"] = self.predicate
        out["certificate"] = self.certificate
        return out


def _needs_time_sharing(mac: WiretapMAC, q: float, r: float,
                        tol: float) -> dict | None:
    p = FactoredInput.independent(Dist.from_mass([q, 1 - q]),
                                  Dist.from_mass([r, 1 - r]), mac)
    prof = info_profile(p)
    if prof.iz_v12 > prof.it_v12:
        return None
    for name, cand in (("first", prof), ("second", prof.swapped())):
        if cand.iz_v1_u > cand.it_v1_v2u or cand.iz_v2_u > cand.it_v2_v1u:
            continue  # zero-randomness conditions fail under this assignment
        ab = alpha_bounds_case1(cand)
        if ab.degenerate:
            continue
        if ab.alpha0 > ab.alpha1:
            continue
        if ab.alpha0 > tol or ab.alpha1 < 1.0 - tol:
            return {
                "assignment": name,
                "alpha0": float(ab.alpha0),
                "alpha1": float(ab.alpha1),
                "zero_randomness_conditions": [
                    [float(cand.iz_v1_u), float(cand.it_v1_v2u)],
                    [float(cand.iz_v2_u), float(cand.it_v2_v1u)],
                ],
                "common_gate": [float(prof.iz_v12), float(prof.it_v12)],
            }
    return None


def _entropy_gap(mac: WiretapMAC, q: float, r: float) -> float:
    p = FactoredInput.independent(Dist.from_mass([q, 1 - q]),
                                  Dist.from_mass([r, 1 - r]), mac)
    j = p.joint
    return (mutual_information(j, {AX_Z}, {AX_X, AX_Y})
            - mutual_information(j, {AX_T}, {AX_X, AX_Y}))


def _conferencing_helps(mac: WiretapMAC, rng: np.random.Generator,
                        tol: float, grid: int = 7,
                        step: float = 1e-3) -> dict | None:
    # the eavesdropper must beat every independent input, including ones fed
    # through per-sender auxiliaries: that is concavity of the information
    # gap in each input bias (mixtures never flip the sign), checked here by
    # central second differences on an interior grid, plus pointwise
    # positivity of the gap itself...
    qs = np.linspace(0.1, 0.9, grid)
    min_gap = math.inf
    max_d2 = -math.inf
    for q in qs:
        for r in qs:
            gap = _entropy_gap(mac, q, r)
            min_gap = min(min_gap, gap)
            if gap < tol:
                return None
            d2q = (_entropy_gap(mac, q + step, r) - 2 * gap
                   + _entropy_gap(mac, q - step, r)) / step ** 2
            d2r = (_entropy_gap(mac, q, r + step) - 2 * gap
                   + _entropy_gap(mac, q, r - step)) / step ** 2
            max_d2 = max(max_d2, d2q, d2r)
            if max_d2 >= -tol:
                return None
    # ... while some coupled input flips the sign
    couplings = [0.5, 0.3, 0.7] + list(rng.uniform(0.1, 0.9, size=3))
    for p0 in couplings:
        p = FactoredInput.coupled(Dist.from_mass([p0, 1 - p0]), mac)
        j = p.joint
        advantage = (mutual_information(j, {AX_T}, {AX_X, AX_Y})
                     - mutual_information(j, {AX_Z}, {AX_X, AX_Y}))
        if advantage > tol:
            return {
                "independent_min_gap": float(min_gap),
                "max_second_difference": float(max_d2),
                "independent_grid": int(grid),
                "coupling_p0": float(p0),
                "coupled_advantage": float(advantage),
            }
    return None


def bruteforce_search(budget: int, seed: int, predicate: str,
                      tol: float = 1e-3) -> list[FoundChannel]:
    """Randomly search 2x2 channel pairs for a structural predicate.

    ``needs-time-sharing``: the zero-randomness conditions hold but the
    time-sharing interval is strictly interior on one side.
    ``conferencing-helps``: independent inputs never beat the eavesdropper
    while some coupled input does.  Channel rows are uniform on the simplex,
    input biases uniform on [0.05, 0.95]; deterministic under the seed.
    """
    if predicate not in ("needs-time-sharing", "conferencing-helps"):
        raise ValidationError(f"unknown predicate {predicate!r}")
    rng = np.random.default_rng(seed)
    found = []
    for _ in range(budget):
        rows_b = rng.dirichlet(np.ones(2), size=4)
        rows_e = rng.dirichlet(np.ones(2), size=4)
        mac = WiretapMAC.from_marginals(rows_b, rows_e)
        q = float(rng.uniform(0.05, 0.95))
        r = float(rng.uniform(0.05, 0.95))
        if predicate == "needs-time-sharing":
            cert = _needs_time_sharing(mac, q, r, tol)
        else:
            cert = _conferencing_helps(mac, rng, tol)
        if cert is not None:
            found.append(FoundChannel(mac, q, r, predicate, cert))
    return found
