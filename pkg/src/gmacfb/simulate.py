"""Monte Carlo simulation of the two-user Gaussian channel with feedback.

The channel is driven symbol by symbol: at time k each encoder sees its own
source block and every past channel output, produces one real input, and
the receiver observes the sum of both inputs plus fresh Gaussian noise.
Causality is structural; the harness only ever hands an encoder the
outputs strictly before the current instant.

Only the uncoded encoder ships: it sends a scaled copy of the current
source symbol and ignores the feedback entirely. Because everything is
then jointly Gaussian and memoryless, the per-symbol linear estimator
c * y is the exact conditional mean, and the simulator's empirical
distortions can be checked against the closed-form prediction.

Reproducibility: every chunk of blocks draws from its own generator seeded
by (seed, chunk index), so the same configuration always produces the same
report, chunk by chunk, regardless of execution order.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from .model import ParameterError, SourceParams

DEFAULT_SEED = 123456789


class SimulationError(RuntimeError):
    """An encoder or the channel produced an unusable value."""


class FeedbackEncoder(abc.ABC):
    """One transmitter: maps (own source block, past outputs, time) to a symbol.

    Subclasses that never read the feedback should set uses_feedback to
    False and provide encode_block; the channel then computes the whole
    input vector in one shot, with arithmetic identical to the loop.
    """

    uses_feedback: bool = True

    @abc.abstractmethod
    def emit(self, source_block: np.ndarray, past_outputs: np.ndarray, k: int) -> float:
        """Channel input at time k, given outputs 0..k-1 only."""

    def encode_block(self, source_block: np.ndarray) -> np.ndarray:
        raise NotImplementedError("feedback-dependent encoder has no block form")


@dataclass(frozen=True)
class UncodedEncoder(FeedbackEncoder):
    """Sends gain * s_k, ignoring feedback; gain = sqrt(p / sigma2) meets
    the power constraint with equality in expectation."""

    gain: float

    uses_feedback = False

    @classmethod
    def for_power(cls, p: float, sigma2: float) -> "UncodedEncoder":
        if not (math.isfinite(p) and p > 0.0 and math.isfinite(sigma2) and sigma2 > 0.0):
            raise ParameterError("power and variance must be positive and finite")
        return cls(math.sqrt(p / sigma2))

    def emit(self, source_block: np.ndarray, past_outputs: np.ndarray, k: int) -> float:
        return self.gain * source_block[k]

    def encode_block(self, source_block: np.ndarray) -> np.ndarray:
        return self.gain * source_block


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run shape: num_blocks blocks of block_len symbols each,
    split over `chunking` independently seeded substreams."""

    num_blocks: int
    block_len: int = 1
    seed: int = DEFAULT_SEED
    chunking: int = 1

    def __post_init__(self) -> None:
        if self.num_blocks < 1 or self.block_len < 1 or self.chunking < 1:
            raise ParameterError("num_blocks, block_len and chunking must all be >= 1")
        if not (0 <= self.seed < 2 ** 64):
            raise ParameterError("seed must fit in 64 bits")

    @property
    def total_symbols(self) -> int:
        return self.num_blocks * self.block_len


@dataclass(frozen=True)
class SimReport:
    """Empirical audit of one run.

    d*_hat are the mean squared reconstruction errors, p*_hat the average
    transmit powers, rho_tilde_hat the normalized |correlation| of the two
    realized input sequences. Standard errors come from the across-block
    spread. p*_flagged marks an empirical power more than four standard
    errors above its constraint (audited, never clipped).
    """

    d1_hat: float
    d2_hat: float
    p1_hat: float
    p2_hat: float
    rho_tilde_hat: float
    stderr_d1: float
    stderr_d2: float
    stderr_p1: float
    stderr_p2: float
    p1_flagged: bool
    p2_flagged: bool
    total_symbols: int

    def __post_init__(self) -> None:
        fields = (
            self.d1_hat, self.d2_hat, self.p1_hat, self.p2_hat,
            self.rho_tilde_hat, self.stderr_d1, self.stderr_d2,
            self.stderr_p1, self.stderr_p2,
        )
        if not all(math.isfinite(v) for v in fields):
            raise SimulationError("non-finite statistic in report")
        if self.p1_hat < 0.0 or self.p2_hat < 0.0:
            raise SimulationError("negative empirical power")
        if abs(self.rho_tilde_hat) > 1.0 + 1e-12:
            raise SimulationError("empirical correlation outside [-1, 1]")


def gen_source(source: SourceParams, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw n correlated source pairs: s1 = sigma g1,
    s2 = sigma (rho g1 + sqrt(1 - rho^2) g2) for independent normals."""
    if n < 0:
        raise ParameterError("n must be nonnegative")
    sigma = math.sqrt(source.sigma2)
    g = rng.standard_normal((2, n))
    s1 = sigma * g[0]
    s2 = sigma * (source.rho * g[0] + math.sqrt(1.0 - source.rho ** 2) * g[1])
    return s1, s2


def run_channel(
    enc1: FeedbackEncoder,
    enc2: FeedbackEncoder,
    s1: np.ndarray,
    s2: np.ndarray,
    n0: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One pass through the channel; returns (outputs, inputs1, inputs2).

    The noise block is drawn up front, so the feedback loop and the
    vectorized fast path (taken when neither encoder reads the feedback)
    produce bit-identical outputs.
    """
    if len(s1) != len(s2):
        raise ParameterError("source blocks must have equal length")
    if not (math.isfinite(n0) and n0 > 0.0):
        raise ParameterError("n0 must be positive and finite")
    n = len(s1)
    z = math.sqrt(n0) * rng.standard_normal(n)

    if not (enc1.uses_feedback or enc2.uses_feedback):
        x1 = np.asarray(enc1.encode_block(s1), dtype=np.float64)
        x2 = np.asarray(enc2.encode_block(s2), dtype=np.float64)
        if not (np.isfinite(x1).all() and np.isfinite(x2).all()):
            raise SimulationError("encoder produced non-finite symbol")
        return x1 + x2 + z, x1, x2

    x1 = np.empty(n)
    x2 = np.empty(n)
    y = np.empty(n)
    for k in range(n):
        past = y[:k]
        a = float(enc1.emit(s1, past, k))
        b = float(enc2.emit(s2, past, k))
        if not (math.isfinite(a) and math.isfinite(b)):
            raise SimulationError("encoder produced non-finite symbol")
        x1[k] = a
        x2[k] = b
        y[k] = a + b + z[k]
    return y, x1, x2


def mmse_gain(source: SourceParams, p: float, n0: float) -> float:
    """Scalar conditional-mean coefficient for the uncoded scheme.

    c = cov(s_i, y) / var(y) = sqrt(p sigma2) (1 + rho) / (2p (1 + rho) + n0);
    symmetry makes the same c serve both components.
    """
    if not (math.isfinite(p) and p > 0.0 and math.isfinite(n0) and n0 > 0.0):
        raise ParameterError("p and n0 must be positive and finite")
    return math.sqrt(p * source.sigma2) * (1.0 + source.rho) / (2.0 * p * (1.0 + source.rho) + n0)


def mmse_decode_uncoded(
    source: SourceParams, p: float, n0: float, y: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-symbol conditional-mean estimates (s1_hat, s2_hat) = (c y, c y)."""
    est = mmse_gain(source, p, n0) * np.asarray(y, dtype=np.float64)
    return est, est


def _chunk_sizes(num_blocks: int, chunking: int) -> list[int]:
    base, extra = divmod(num_blocks, chunking)
    return [base + (1 if c < extra else 0) for c in range(chunking)]


def simulate_uncoded(source: SourceParams, p: float, n0: float, cfg: SimConfig) -> SimReport:
    """Full pipeline: draw sources, run the channel with uncoded encoders,
    decode, and fold per-chunk statistics in chunk order."""
    enc = UncodedEncoder.for_power(p, source.sigma2)

    sum_e1 = sum_e2 = 0.0          # squared reconstruction errors
    bm1_sum = bm1_sq = 0.0         # per-block mean squared error moments
    bm2_sum = bm2_sq = 0.0
    sum_x1sq = sum_x2sq = sum_x1x2 = 0.0
    pm1_sum = pm1_sq = 0.0         # per-block mean power moments
    pm2_sum = pm2_sq = 0.0

    # With a single block the across-block spread is undefined; fall back
    # to per-symbol statistics, which describe the same iid draws.
    per_symbol = cfg.num_blocks < 2

    for chunk, blocks in enumerate(_chunk_sizes(cfg.num_blocks, cfg.chunking)):
        if blocks == 0:
            continue
        rng = np.random.default_rng((cfg.seed, chunk))
        n = blocks * cfg.block_len
        s1, s2 = gen_source(source, n, rng)
        y, x1, x2 = run_channel(enc, enc, s1, s2, n0, rng)
        s1_hat, s2_hat = mmse_decode_uncoded(source, p, n0, y)

        e1 = (s1 - s1_hat) ** 2
        e2 = (s2 - s2_hat) ** 2
        w1 = x1 * x1
        w2 = x2 * x2
        sum_e1 += float(e1.sum())
        sum_e2 += float(e2.sum())
        sum_x1sq += float(w1.sum())
        sum_x2sq += float(w2.sum())
        sum_x1x2 += float((x1 * x2).sum())

        if per_symbol:
            b1, b2, q1, q2 = e1, e2, w1, w2
        else:
            b1 = e1.reshape(blocks, cfg.block_len).mean(axis=1)
            b2 = e2.reshape(blocks, cfg.block_len).mean(axis=1)
            q1 = w1.reshape(blocks, cfg.block_len).mean(axis=1)
            q2 = w2.reshape(blocks, cfg.block_len).mean(axis=1)
        bm1_sum += float(b1.sum())
        bm1_sq += float((b1 * b1).sum())
        bm2_sum += float(b2.sum())
        bm2_sq += float((b2 * b2).sum())
        pm1_sum += float(q1.sum())
        pm1_sq += float((q1 * q1).sum())
        pm2_sum += float(q2.sum())
        pm2_sq += float((q2 * q2).sum())

    n_total = cfg.total_symbols
    nb = n_total if per_symbol else cfg.num_blocks

    def block_stderr(m_sum: float, m_sq: float) -> float:
        if nb < 2:
            return 0.0
        var = max(m_sq - m_sum * m_sum / nb, 0.0) / (nb - 1)
        return math.sqrt(var / nb)

    d1_hat = sum_e1 / n_total
    d2_hat = sum_e2 / n_total
    p1_hat = sum_x1sq / n_total
    p2_hat = sum_x2sq / n_total
    stderr_p1 = block_stderr(pm1_sum, pm1_sq)
    stderr_p2 = block_stderr(pm2_sum, pm2_sq)
    denom = math.sqrt(sum_x1sq * sum_x2sq)
    rho_tilde_hat = abs(sum_x1x2) / denom if denom > 0.0 else 0.0

    return SimReport(
        d1_hat=d1_hat,
        d2_hat=d2_hat,
        p1_hat=p1_hat,
        p2_hat=p2_hat,
        rho_tilde_hat=rho_tilde_hat,
        stderr_d1=block_stderr(bm1_sum, bm1_sq),
        stderr_d2=block_stderr(bm2_sum, bm2_sq),
        stderr_p1=stderr_p1,
        stderr_p2=stderr_p2,
        p1_flagged=p1_hat > p + 4.0 * stderr_p1,
        p2_flagged=p2_hat > p + 4.0 * stderr_p2,
        total_symbols=n_total,
    )
