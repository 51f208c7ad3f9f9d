"""Desk-scale random wiretap codes: sampling, decoding, exact secrecy audits.

Codebooks are drawn i.i.d. from truncated typical laws, decoding is unique
joint typicality (ties and misses decode to failure), and at tiny
blocklengths everything of interest -- average error, the eavesdropper's
exact message leakage and optimal decoding error -- is computed by full
enumeration.  The concentration machinery evaluates the (desk-scale
instantiations of the) codebook concentration bounds and measures the
empirical failure frequencies of their events over resampled codebooks.

The typicality slack functions have no closed form at this scale; every
size window carries a single configurable slack parameter (bits, default
0.05) and the tail exponent constant is likewise configurable (default the
Hoeffding-style 2*log2(e)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import (
    BlocklengthTooSmallError,
    PreconditionError,
    ResourceBudgetError,
    ValidationError,
)
from .probkit import (
    Alphabet,
    CELL_BUDGET,
    Channel,
    Dist,
    FactoredInput,
    JointDist,
    WiretapMAC,
    all_sequences,
    entropy_bits,
    mutual_information,
    sample_typical,
    typical_membership,
    zip_sequences,
)
from .regions import CaseLabel, InfoProfile, elementary_region, info_profile

DEFAULT_SLACK = 0.05
DEFAULT_TAIL_EXPONENT = 2.0 * math.log2(math.e)  # Hoeffding-style surrogate


@dataclass(frozen=True)
class CodeChain:
    """The (U, X|U, Y|U) generating chain of a codebook plus the channel."""

    p_u: Dist
    x_given_u: Channel
    y_given_u: Channel
    mac: WiretapMAC

    @staticmethod
    def from_factored(p: FactoredInput) -> "CodeChain":
        return CodeChain(p.p_u, p.x_given_u, p.y_given_u, p.mac)

    @cached_property
    def joint(self) -> JointDist:
        """Joint law of (U, X, Y, T, Z)."""
        mass = np.einsum("u,ux,uy,xytz->uxytz", self.p_u.mass,
                         self.x_given_u.matrix, self.y_given_u.matrix,
                         self.mac.tensor, optimize=True)
        return JointDist((self.p_u.alphabet, self.mac.x_alphabet,
                          self.mac.y_alphabet, self.mac.t_alphabet,
                          self.mac.z_alphabet), mass)

    @cached_property
    def decode_law(self) -> Dist:
        """P(U, X, Y, T) as one distribution over the zipped symbol."""
        mass = self.joint.marginal_mass({0, 1, 2, 3}).ravel()
        size = (self.p_u.alphabet.size * self.mac.x_alphabet.size
                * self.mac.y_alphabet.size * self.mac.t_alphabet.size)
        return Dist(Alphabet(size), mass)

    @cached_property
    def profile(self) -> InfoProfile:
        """Information profile with the inputs themselves as auxiliaries."""
        p = FactoredInput(self.p_u, self.x_given_u, self.y_given_u,
                          Channel.identity(self.mac.x_alphabet.size),
                          Channel.identity(self.mac.y_alphabet.size), self.mac)
        return info_profile(p)

    def mi(self, a, b, cond=()):
        return mutual_information(self.joint, a, b, cond)


@dataclass(frozen=True)
class CodebookFamily:
    """An i.i.d. typical codebook: shared sequences per common index, private
    sequences per (common, private) index pair.

    Arrays: ``u`` has shape (K0, L0, n); ``x`` (K0, L0, K1, L1, n);
    ``y`` (K0, L0, K2, L2, n).  Every u is delta-typical and every private
    sequence conditionally delta-typical given its u.
    """

    chain: CodeChain
    n: int
    k_sizes: tuple[int, int, int]
    l_sizes: tuple[int, int, int]
    delta: float
    seed: int
    u: np.ndarray
    x: np.ndarray
    y: np.ndarray

    def l_tuples(self):
        l0, l1, l2 = self.l_sizes
        for a in range(l0):
            for b in range(l1):
                for c in range(l2):
                    yield (a, b, c)

    def codeword(self, k, l) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        k0, k1, k2 = k
        l0, l1, l2 = l
        return (self.u[k0, l0], self.x[k0, l0, k1, l1], self.y[k0, l0, k2, l2])

    def to_csv(self) -> str:
        """Flat listing of every sequence: kind, index tuple, symbols."""
        lines = ["kind,k0,l0,k1_or_k2,l1_or_l2,sequence"]
        k0s, l0s = self.k_sizes[0], self.l_sizes[0]
        for a in range(k0s):
            for b in range(l0s):
                seq = " ".join(map(str, self.u[a, b]))
                lines.append(f"u,{a},{b},,,{seq}")
                for c in range(self.k_sizes[1]):
                    for d in range(self.l_sizes[1]):
                        seq = " ".join(map(str, self.x[a, b, c, d]))
                        lines.append(f"x,{a},{b},{c},{d},{seq}")
                for c in range(self.k_sizes[2]):
                    for d in range(self.l_sizes[2]):
                        seq = " ".join(map(str, self.y[a, b, c, d]))
                        lines.append(f"y,{a},{b},{c},{d},{seq}")
        return "\n".join(lines) + "\n"


def sample_codebook_family(p, n: int, l_sizes: Sequence[int], delta: float,
                           seed: int,
                           k_sizes: Sequence[int] = (1, 1, 1)) -> CodebookFamily:
    """Draw a codebook family from the truncated typical laws of ``p``.

    ``p`` is a factored input or a :class:`CodeChain`; per-sender sequences
    are conditionally independent given their shared sequence.  Reproducible
    from the seed.
    """
    chain = p if isinstance(p, CodeChain) else CodeChain.from_factored(p)
    l0, l1, l2 = (int(v) for v in l_sizes)
    k0, k1, k2 = (int(v) for v in k_sizes)
    if min(l0, l1, l2, k0, k1, k2) < 1:
        raise ValidationError("codebook sizes must be positive")
    rng = np.random.default_rng(seed)
    u = np.empty((k0, l0, n), dtype=np.int64)
    x = np.empty((k0, l0, k1, l1, n), dtype=np.int64)
    y = np.empty((k0, l0, k2, l2, n), dtype=np.int64)
    for a0 in range(k0):
        for b0 in range(l0):
            useq = sample_typical(chain.p_u, n, delta, rng)
            u[a0, b0] = useq
            for a1 in range(k1):
                for b1 in range(l1):
                    x[a0, b0, a1, b1] = sample_typical(
                        chain.x_given_u, n, delta, rng, context=useq)
            for a2 in range(k2):
                for b2 in range(l2):
                    y[a0, b0, a2, b2] = sample_typical(
                        chain.y_given_u, n, delta, rng, context=useq)
    return CodebookFamily(chain, n, (k0, k1, k2), (l0, l1, l2), delta, seed,
                          u, x, y)


# ---------------------------------------------------------------------------
# Size windows
# ---------------------------------------------------------------------------

def _window_int(lo_bits: float, hi_bits: float) -> int | None:
    """Smallest integer whose log2 lies in [lo_bits, hi_bits], if any."""
    lo = max(math.ceil(2.0 ** lo_bits - 1e-9), 1)
    if math.log2(lo) <= hi_bits + 1e-12:
        return lo
    return None


def _window_pair(total_lo: float, total_hi: float, cap: int = 4096):
    """Smallest integer pair (a, b) with log2(a) + log2(b) in the window."""
    for a in range(1, cap + 1):
        la = math.log2(a)
        if la > total_hi + 1e-12:
            break
        b = _window_int(total_lo - la, total_hi - la)
        if b is not None and b <= cap:
            return a, b
    return None


def _required_n(bits_fn, n_start: int, n_cap: int) -> int | None:
    for m in range(n_start, n_cap + 1):
        lo, hi = bits_fn(m)
        if _window_int(lo, hi) is not None:
            return m
    return None


@dataclass(frozen=True)
class WiretapCode:
    """A built wiretap code: one codebook family, or two concatenated ones.

    The stochastic encoders are implicit: the common-randomness index is
    uniform, each sender mixes uniformly over its private randomization
    indices, and the decoder is unique joint typicality over the full index
    tuple (both halves must be typical for concatenated codes).
    """

    case: CaseLabel
    hc: float
    delta: float
    slack: float
    alpha: float | None
    families: tuple[CodebookFamily, ...]
    rate_targets: tuple[float, float, float]

    def __post_init__(self):
        ks = {fam.k_sizes for fam in self.families}
        if len(ks) != 1:
            raise ValidationError("families must share the message sets")

    @property
    def chain(self) -> CodeChain:
        return self.families[0].chain

    @property
    def k_sizes(self) -> tuple[int, int, int]:
        return self.families[0].k_sizes

    @property
    def n_total(self) -> int:
        return sum(fam.n for fam in self.families)

    @property
    def message_count(self) -> int:
        k0, k1, k2 = self.k_sizes
        return k0 * k1 * k2

    @property
    def randomization_count(self) -> int:
        out = 1
        for fam in self.families:
            l0, l1, l2 = fam.l_sizes
            out *= l0 * l1 * l2
        return out

    @property
    def common_randomness_rate(self) -> float:
        """(1/n) log of the shared randomization alphabet (the L0 indices)."""
        bits = sum(math.log2(fam.l_sizes[0]) for fam in self.families)
        return bits / self.n_total

    def realized_rates(self) -> tuple[float, float, float]:
        k0, k1, k2 = self.k_sizes
        return (math.log2(k0) / self.n_total, math.log2(k1) / self.n_total,
                math.log2(k2) / self.n_total)

    def messages(self):
        k0, k1, k2 = self.k_sizes
        for a in range(k0):
            for b in range(k1):
                for c in range(k2):
                    yield (a, b, c)

    def index_tuples(self):
        """All (message, per-family l-tuples) index combinations."""
        fams = self.families
        for k in self.messages():
            for ls in _product_l(fams):
                yield k, ls

    def codeword_pair(self, k, ls) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated (x, y) sequences for one full index tuple."""
        xs, ys = [], []
        for fam, l in zip(self.families, ls):
            _, xseq, yseq = fam.codeword(k, l)
            xs.append(xseq)
            ys.append(yseq)
        return np.concatenate(xs), np.concatenate(ys)


def _product_l(fams):
    if len(fams) == 1:
        for l in fams[0].l_tuples():
            yield (l,)
    else:
        for l1 in fams[0].l_tuples():
            for l2 in fams[1].l_tuples():
                yield (l1, l2)


def _case_j_values(chain: CodeChain, case: CaseLabel, alpha: float):
    """Randomization-rate targets (j0, j1, j2) for one case."""
    # chain joint axes: (U, X, Y, T, Z) = 0..4; beware that `|` below is set
    # union: a union in the second argument makes a joint group, a union in
    # the third makes a joint conditioning
    z = {4}
    ux, xx, yy = {0}, {1}, {2}
    mi = chain.mi
    if case == CaseLabel.CASE3:
        return (mi(z, xx | yy), 0.0, 0.0)
    if case in (CaseLabel.CASE0, CaseLabel.CASE1):
        j1 = alpha * mi(z, xx, yy | ux) + (1 - alpha) * mi(z, xx, ux)
        j2 = alpha * mi(z, yy, ux) + (1 - alpha) * mi(z, yy, xx | ux)
        return (mi(z, ux), j1, j2)
    if case == CaseLabel.CASE2:
        j0 = alpha * mi(z, yy | ux) + (1 - alpha) * mi(z, xx | ux)
        return (j0, alpha * mi(z, xx, yy | ux), (1 - alpha) * mi(z, yy, xx | ux))
    raise PreconditionError(f"unknown case {case!r}")


def build_wiretap_code(p, case: CaseLabel, rates: Sequence[float], hc: float,
                       n: int, delta: float, *, slack: float = DEFAULT_SLACK,
                       seed: int = 0, n2: int | None = None,
                       alpha: float | None = None, gamma: float = 0.05,
                       size_cap: int = 4096) -> WiretapCode:
    """Build a wiretap code whose sizes sit inside the per-case windows.

    The randomization sizes L are chosen with ``log2(L)/n`` inside
    ``[J + 2*slack, J + 3*slack]`` for the case's randomization targets J,
    and message sizes K with ``log2(K*L)/n`` inside
    ``[R + J - slack, R + J - slack/2]`` for positive rate targets.  Cases
    with an interior time-sharing fraction build two families at
    blocklengths (n, n2) with the windows applied to the combined sizes.
    Raises :class:`BlocklengthTooSmallError` (with a workable-blocklength
    estimate) when a window holds no integer, and refuses budgets whose
    randomization rate exceeds the common randomness bound.
    """
    chain = p if isinstance(p, CodeChain) else CodeChain.from_factored(p)
    case = CaseLabel(case)
    rates = tuple(float(v) for v in rates)
    if len(rates) != 3:
        raise ValidationError("rates must be a triple (R0, R1, R2)")
    if case == CaseLabel.CASE0 and rates[0] > 0:
        raise PreconditionError(
            "a common message cannot be protected without common randomness"
        )
    if case == CaseLabel.CASE3:
        alpha_eff = 1.0
    else:
        if alpha is None:
            alpha_eff = 1.0
        else:
            alpha_eff = float(alpha)
    time_share = case in (CaseLabel.CASE0, CaseLabel.CASE1, CaseLabel.CASE2) \
        and 0.0 < alpha_eff < 1.0
    if time_share:
        if n2 is None:
            raise PreconditionError("interior alpha needs the second blocklength n2")
        realized = n / (n + n2)
        if abs(realized - alpha_eff) > gamma:
            raise PreconditionError(
                f"n/(n+n2) = {realized:.4f} misses alpha = {alpha_eff} "
                f"by more than gamma = {gamma}"
            )
    # rate-target membership in the elementary region
    prof = chain.profile
    region = elementary_region(prof, case, alpha_eff,
                               hc if case != CaseLabel.CASE0 else None,
                               check_range=False)
    if not region.contains(rates, tol=1e-9):
        raise PreconditionError(
            f"rate targets {rates} violate the {case.name} elementary region: "
            f"{region.violated(rates, 1e-9)}"
        )

    j_vals = _case_j_values(chain, case, alpha_eff)
    lengths = (n, n2) if time_share else (n,)
    n_total = sum(lengths)

    def l_window_bits(m: int, j: float) -> tuple[float, float]:
        return (m * (j + 2 * slack), m * (j + 3 * slack))

    # structural L shape per case and family; in Case 2 the first family
    # randomizes only the first sender and the second family only the second
    # (a single family at an endpoint alpha takes the matching shape)
    def l_shape(which: int) -> tuple[bool, bool, bool]:
        if case == CaseLabel.CASE3:
            return (True, False, False)
        if case in (CaseLabel.CASE0, CaseLabel.CASE1):
            return (case != CaseLabel.CASE0, True, True)
        if not time_share:
            return (True, alpha_eff > 0.0, alpha_eff <= 0.0)
        return (True, which == 0, which == 1)

    l_sizes: list[list[int]] = []
    for which, m in enumerate(lengths):
        sizes = [1, 1, 1]
        if not time_share:
            for nu in range(3):
                if not l_shape(which)[nu]:
                    continue
                lo, hi = l_window_bits(m, j_vals[nu])
                windowed = _window_int(lo, hi)
                if windowed is None:
                    need = _required_n(
                        lambda mm, j=j_vals[nu]: l_window_bits(mm, j),
                        n + 1, 16 * n)
                    raise BlocklengthTooSmallError(
                        f"no integer L{nu} satisfies the window at n={m}",
                        required_n=need)
                sizes[nu] = windowed
        l_sizes.append(sizes)
    if time_share:
        # windows on the combined sizes across both families
        l_sizes = [[1, 1, 1], [1, 1, 1]]
        for nu in range(3):
            active = [l_shape(w)[nu] for w in range(2)]
            if not any(active):
                continue
            lo, hi = l_window_bits(n_total, j_vals[nu])
            if active[0] and active[1]:
                pair = _window_pair(lo, hi, size_cap)
                if pair is None:
                    need = _required_n(
                        lambda mm, j=j_vals[nu]: l_window_bits(mm, j),
                        n_total + 1, 16 * n_total)
                    raise BlocklengthTooSmallError(
                        f"no integer pair L{nu}, L{nu}' fits the combined "
                        f"window at n+n' = {n_total}", required_n=need)
                l_sizes[0][nu], l_sizes[1][nu] = pair
            else:
                one = _window_int(lo, hi)
                if one is None:
                    raise BlocklengthTooSmallError(
                        f"no integer L{nu} fits the combined window",
                        required_n=None)
                l_sizes[0 if active[0] else 1][nu] = one

    if case in (CaseLabel.CASE1, CaseLabel.CASE2, CaseLabel.CASE3):
        l0_bits = sum(math.log2(s[0]) for s in l_sizes)
        if l0_bits / n_total > hc + 1e-12:
            raise PreconditionError(
                f"realized randomness rate {l0_bits / n_total:.4f} exceeds "
                f"the common randomness bound {hc}"
            )
    else:
        for s in l_sizes:
            s[0] = 1

    # message sizes against the combined windows (positive-part clamps: tiny
    # targets degrade to a single message at desk scale)
    k_sizes = [1, 1, 1]
    for nu in range(3):
        if rates[nu] <= 0:
            continue
        if case == CaseLabel.CASE0 and nu == 0:
            continue
        l_bits = sum(math.log2(s[nu]) for s in l_sizes)
        tilde = rates[nu] + j_vals[nu]
        lo = max(n_total * (tilde - slack), 0.0) - l_bits
        hi = max(n_total * (tilde - slack / 2), 0.0) - l_bits
        if hi < 0.0:
            if lo <= 0.0:
                continue  # the randomization indices already exhaust the budget
            raise BlocklengthTooSmallError(
                f"rate window for K{nu} is empty at n_total={n_total}",
                required_n=None)
        k = _window_int(max(lo, 0.0), hi)
        if k is None or k > size_cap:
            raise BlocklengthTooSmallError(
                f"no integer K{nu} fits the rate window at n_total={n_total}",
                required_n=None)
        k_sizes[nu] = k

    families = []
    for which, m in enumerate(lengths):
        families.append(sample_codebook_family(
            chain, m, l_sizes[which], delta, seed + which, k_sizes=k_sizes))
    return WiretapCode(case, hc, delta, slack,
                       alpha_eff if time_share or case == CaseLabel.CASE2 else None,
                       tuple(families), rates)


# ---------------------------------------------------------------------------
# Decoding and error
# ---------------------------------------------------------------------------

def joint_typicality_decode(code: WiretapCode, delta: float, t_seq):
    """Decode an output sequence to the unique jointly typical index tuple.

    Returns (message triple, per-family l-tuples) or None on a miss or tie;
    concatenated codes require every segment to be typical.
    """
    t_seq = np.asarray(t_seq, dtype=np.int64)
    if t_seq.shape[0] != code.n_total:
        raise ValidationError(
            f"output length {t_seq.shape[0]} != blocklength {code.n_total}")
    chain = code.chain
    law = chain.decode_law
    sizes = [chain.p_u.alphabet.size, chain.mac.x_alphabet.size,
             chain.mac.y_alphabet.size, chain.mac.t_alphabet.size]
    segments = []
    at = 0
    for fam in code.families:
        segments.append(t_seq[at:at + fam.n])
        at += fam.n
    hit = None
    for k, ls in code.index_tuples():
        ok = True
        for fam, l, seg in zip(code.families, ls, segments):
            useq, xseq, yseq = fam.codeword(k, l)
            zipped, _ = zip_sequences(useq, xseq, yseq, seg, sizes)
            if not typical_membership(law, zipped, delta):
                ok = False
                break
        if ok:
            if hit is not None:
                return None  # ambiguity decodes to failure
            hit = (k, ls)
    return hit


def _channel_row(matrix: np.ndarray, xseq: np.ndarray, yseq: np.ndarray,
                 y_size: int) -> np.ndarray:
    """W^(x)n row over all output sequences for one input pair."""
    row = np.ones(1)
    for xi, yi in zip(xseq, yseq):
        row = np.kron(row, matrix[xi * y_size + yi])
    return row


def _bob_rows(code: WiretapCode, w_b: Channel | None) -> tuple[list, np.ndarray]:
    mac = code.chain.mac
    matrix = (w_b or mac.bob).matrix
    t_size = matrix.shape[1]
    count = t_size ** code.n_total
    tuples = list(code.index_tuples())
    if count * len(tuples) > CELL_BUDGET:
        raise ResourceBudgetError(
            f"exact error needs {count} x {len(tuples)} likelihoods")
    rows = np.empty((len(tuples), count))
    for i, (k, ls) in enumerate(tuples):
        xseq, yseq = code.codeword_pair(k, ls)
        rows[i] = _channel_row(matrix, xseq, yseq, mac.y_alphabet.size)
    return tuples, rows


@dataclass(frozen=True)
class ErrorEstimate:
    """Average decoding error; the MAC criterion scores the full index tuple,
    the message criterion only the message triple."""

    tuple_error: float
    message_error: float
    mode: str
    trials: int | None = None
    wilson_interval: tuple[float, float] | None = None


def average_error(code: WiretapCode, w_b: Channel | None = None,
                  mode: str = "exact", trials: int = 2000,
                  seed: int = 0, decode_delta: float | None = None) -> ErrorEstimate:
    """Average decoding error under uniform messages and uniform mixing.

    Exact mode enumerates every output sequence; Monte Carlo mode reports a
    Wilson 95% interval on the tuple criterion.  Decode failures count as
    errors.
    """
    delta = code.delta if decode_delta is None else decode_delta
    if mode == "exact":
        tuples, rows = _bob_rows(code, w_b)
        t_size = (w_b or code.chain.mac.bob).matrix.shape[1]
        decoded = _decode_all(code, delta, t_size)
        tuple_err = 0.0
        msg_err = 0.0
        weight = 1.0 / len(tuples)
        for i, (k, ls) in enumerate(tuples):
            wrong_tuple = np.array([decoded[t] != (k, ls) for t in range(rows.shape[1])])
            wrong_msg = np.array([decoded[t] is None or decoded[t][0] != k
                                  for t in range(rows.shape[1])])
            tuple_err += weight * float(rows[i] @ wrong_tuple)
            msg_err += weight * float(rows[i] @ wrong_msg)
        return ErrorEstimate(tuple_err, msg_err, "exact")
    if mode != "mc":
        raise ValidationError("mode must be 'exact' or 'mc'")
    rng = np.random.default_rng(seed)
    mac = code.chain.mac
    matrix = (w_b or mac.bob).matrix
    tuples = list(code.index_tuples())
    hits = 0
    msg_hits = 0
    for _ in range(trials):
        k, ls = tuples[rng.integers(0, len(tuples))]
        xseq, yseq = code.codeword_pair(k, ls)
        t_seq = np.array([rng.choice(matrix.shape[1],
                                     p=matrix[xi * mac.y_alphabet.size + yi])
                          for xi, yi in zip(xseq, yseq)], dtype=np.int64)
        out = joint_typicality_decode(code, delta, t_seq)
        if out != (k, ls):
            hits += 1
        if out is None or out[0] != k:
            msg_hits += 1
    frac = hits / trials
    z = 1.959963984540054
    denom = 1 + z * z / trials
    center = (frac + z * z / (2 * trials)) / denom
    half = z * math.sqrt(frac * (1 - frac) / trials
                         + z * z / (4 * trials * trials)) / denom
    return ErrorEstimate(frac, msg_hits / trials, "mc", trials,
                         (max(center - half, 0.0), min(center + half, 1.0)))


def _decode_all(code: WiretapCode, delta: float, t_size: int) -> list:
    count = t_size ** code.n_total
    seqs = all_sequences(t_size, code.n_total)
    return [joint_typicality_decode(code, delta, seqs[t]) for t in range(count)]


def mac_average_error(code: WiretapCode, w_b: Channel | None = None,
                      decode_delta: float | None = None) -> float:
    """Average error of the deterministic code over the full index tuples.

    The uniform mixing of the stochastic encoders makes this coincide with
    the tuple-criterion average error of the wiretap code.
    """
    delta = code.delta if decode_delta is None else decode_delta
    tuples, rows = _bob_rows(code, w_b)
    t_size = (w_b or code.chain.mac.bob).matrix.shape[1]
    decoded = _decode_all(code, delta, t_size)
    err = 0.0
    for i, (k, ls) in enumerate(tuples):
        wrong = np.array([decoded[t] != (k, ls) for t in range(rows.shape[1])])
        err += float(rows[i] @ wrong)
    return err / len(tuples)


# ---------------------------------------------------------------------------
# Eavesdropper audits
# ---------------------------------------------------------------------------

def eavesdropper_conditionals(code: WiretapCode,
                              w_e: Channel | None = None) -> np.ndarray:
    """Matrix of P(eavesdropper output | message), one row per message."""
    mac = code.chain.mac
    matrix = (w_e or mac.eve).matrix
    z_count = matrix.shape[1] ** code.n_total
    messages = list(code.messages())
    if z_count * len(messages) > CELL_BUDGET:
        raise ResourceBudgetError(
            f"exact leakage needs {len(messages)} x {z_count} entries")
    out = np.zeros((len(messages), z_count))
    for i, k in enumerate(messages):
        rows = []
        for ls in _product_l(code.families):
            xseq, yseq = code.codeword_pair(k, ls)
            rows.append(_channel_row(matrix, xseq, yseq, mac.y_alphabet.size))
        out[i] = np.mean(rows, axis=0)
    return out


def exact_leakage(code: WiretapCode, w_e: Channel | None = None) -> float:
    """Exact eavesdropper message information in bits, by enumeration."""
    cond = eavesdropper_conditionals(code, w_e)
    mean = cond.mean(axis=0)
    return entropy_bits(mean) - float(np.mean([entropy_bits(r) for r in cond]))


def eve_map_error(code: WiretapCode, w_e: Channel | None = None) -> float:
    """Exact average error of the eavesdropper's optimal decoder."""
    cond = eavesdropper_conditionals(code, w_e)
    return 1.0 - float(cond.max(axis=0).sum()) / cond.shape[0]


def max_message_variation(code: WiretapCode,
                          w_e: Channel | None = None) -> float:
    """max over messages of the L1 distance to the mean output law."""
    cond = eavesdropper_conditionals(code, w_e)
    mean = cond.mean(axis=0)
    return float(np.abs(cond - mean[None, :]).sum(axis=1).max())


def secrecy_from_variation(eps: float, z_size: int, n: int) -> float:
    """Leakage bound implied by output-law closeness in variation distance.

    Valid for 0 < eps <= 1/2: the leakage is at most eps * log2(|Z|^n / eps).
    """
    if not 0.0 < eps <= 0.5:
        raise PreconditionError(f"the bound needs 0 < eps <= 1/2, got {eps}")
    if z_size < 1 or n < 1:
        raise ValidationError("need a nonempty output space")
    return eps * math.log2(z_size ** n / eps)


@dataclass(frozen=True)
class LeakageChainReport:
    """End-to-end check: variation closeness implies the leakage bound."""

    epsilon: float
    premise_holds: bool
    bound: float | None
    leakage: float
    holds: bool


def leakage_chain_check(code: WiretapCode,
                        w_e: Channel | None = None) -> LeakageChainReport:
    """Verify the variation-to-leakage chain on one concrete code."""
    eps = max_message_variation(code, w_e)
    leak = exact_leakage(code, w_e)
    if eps <= 0.0:
        return LeakageChainReport(eps, True, 0.0, leak, leak <= 1e-12)
    if eps > 0.5:
        return LeakageChainReport(eps, False, None, leak, True)
    z_size = (w_e or code.chain.mac.eve).matrix.shape[1]
    bound = secrecy_from_variation(eps, z_size, code.n_total)
    return LeakageChainReport(eps, True, bound, leak, leak <= bound + 1e-12)


def chernoff_bound(count: int, eps: float, mu: float, b: float) -> float:
    """Tail bound for means of independent [0, b]-valued variables.

    Probability that the mean of ``count`` variables leaves
    ``(1 +/- eps) * mu`` on one side, bounded by
    ``exp(-count * eps^2 * mu / (2 b ln 2))``.
    """
    if count < 0:
        raise PreconditionError("count must be nonnegative")
    if not 0.0 < eps < 0.5:
        raise PreconditionError(f"the bound needs 0 < eps < 1/2, got {eps}")
    if b <= 0.0:
        raise PreconditionError("the range bound b must be positive")
    if not 0.0 <= mu <= b:
        raise PreconditionError("the mean must lie in [0, b]")
    return math.exp(-count * eps * eps * mu / (2.0 * b * math.log(2.0)))


@dataclass(frozen=True)
class SimReport:
    """One-stop summary of a built code's reliability and secrecy numbers."""

    tuple_error: float
    message_error: float
    error_mode: str
    wilson_interval: tuple | None
    leakage_bits: float
    max_variation: float
    eve_map_error: float
    message_count: int
    randomization_count: int
    n_total: int
    common_randomness_rate: float
    seed: int

    def to_json_dict(self) -> dict:
        out = dict(self.__dict__)
        if out["wilson_interval"] is not None:
            out["wilson_interval"] = list(out["wilson_interval"])
        return out


def simulate_report(code: WiretapCode, mode: str = "exact",
                    trials: int = 2000, seed: int = 0) -> SimReport:
    """Run the full audit of a built code."""
    err = average_error(code, mode=mode, trials=trials, seed=seed)
    return SimReport(
        tuple_error=err.tuple_error,
        message_error=err.message_error,
        error_mode=err.mode,
        wilson_interval=err.wilson_interval,
        leakage_bits=exact_leakage(code),
        max_variation=max_message_variation(code),
        eve_map_error=eve_map_error(code),
        message_count=code.message_count,
        randomization_count=code.randomization_count,
        n_total=code.n_total,
        common_randomness_rate=code.common_randomness_rate,
        seed=seed,
    )


# Concentration checks live in a sibling module; re-exported here since they
# are part of the simulation surface.
from .concentration import (  # noqa: E402  (deliberate late import)
    ConcentrationReport,
    LemmaCheck,
    concentration_report,
)
