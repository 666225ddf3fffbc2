"""Monte Carlo estimates of the guessing success, sharded and seeded with numpy."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ic_engine.bits import format_float
from ic_engine.coding.codes import Code, DeterministicCode
from ic_engine.errors import InstanceValidationError
from ic_engine.leakage.guessing import top_c_mass
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec

logger = logging.getLogger(__name__)

Z_95 = 1.96


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int
    shards: int
    c: int
    posterior: bool

    @property
    def low(self) -> float:
        return self.mean - Z_95 * self.stderr

    @property
    def high(self) -> float:
        return self.mean + Z_95 * self.stderr

    def contains(self, value: float | Fraction) -> bool:
        return self.low <= float(value) <= self.high

    def to_payload(self) -> dict:
        return {
            "quantity": "ps_posterior" if self.posterior else "ps_prior",
            "estimate": format_float(self.mean),
            "stderr": format_float(self.stderr),
            "interval_95": [format_float(self.low), format_float(self.high)],
            "samples": self.samples,
            "seed": self.seed,
            "shards": self.shards,
            "c_used": self.c,
        }


class _Sampler:
    def __init__(self, code: Code, base: Distribution, adversary: AdversarySpec) -> None:
        if base.t != 1:
            raise InstanceValidationError("Monte Carlo sampling needs the single-letter distribution")
        if base.scope != code.scope:
            raise InstanceValidationError(f"code scope {code.scope} and distribution scope {base.scope} differ")
        self.code = code
        self.base = base
        self.index = code.index
        self.t = code.t
        self.q = base.q
        self.width = len(base.scope)
        self.base_probs = np.array([float(p) for p in base.probs])
        known_ranks = [self.index.rank(i) for i in adversary.known_sorted]
        # weight of (message rank k, symbol j) in the flat X^t index, and in the X_P^t index
        self.flat_weights = np.array(
            [[self.q ** (self.index.width - 1 - (k * self.t + j)) for k in range(self.width)] for j in range(self.t)],
            dtype=np.int64,
        )
        known_width = len(known_ranks) * self.t
        self.known_weights = np.zeros((self.t, self.width), dtype=np.int64)
        for position, k in enumerate(known_ranks):
            for j in range(self.t):
                self.known_weights[j, k] = self.q ** (known_width - 1 - (position * self.t + j))
        self.base_digit_weights = np.array([self.q ** (self.width - 1 - k) for k in range(self.width)], dtype=np.int64)

    def draw(self, rng: np.random.Generator, count: int, posterior: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat tuple indices, codewords (0 when not needed) and X_P^t indices for `count` samples."""
        letters = rng.choice(len(self.base_probs), size=(count, self.t), p=self.base_probs)
        digits = (letters[:, :, None] // self.base_digit_weights[None, None, :]) % self.q
        flat = (digits * self.flat_weights[None, :, :]).sum(axis=(1, 2))
        known = (digits * self.known_weights[None, :, :]).sum(axis=(1, 2))
        if not posterior:
            return flat, np.zeros(count, dtype=np.int64), known
        if isinstance(self.code, DeterministicCode):
            table = np.array(self.code.table, dtype=np.int64)
            return flat, table[flat], known
        codewords = np.zeros(count, dtype=np.int64)
        order = np.argsort(flat, kind="stable")
        values, starts, counts = np.unique(flat[order], return_index=True, return_counts=True)
        for value, start, size in zip(values, starts, counts):
            row = self.code.transitions_at(int(value))
            choices = np.array([y for y, _ in row], dtype=np.int64)
            weights = np.array([float(p) for _, p in row])
            codewords[order[start : start + size]] = rng.choice(choices, size=size, p=weights)
        return flat, codewords, known


def _observation_value(
    sampler: _Sampler, flat_index: int, y: int, c: int, posterior: bool, adversary: AdversarySpec
) -> float:
    """Exact top-c mass of P(x_Q | y, x_P) at the observation of the sampled tuple."""
    index = sampler.index
    x = index.tuple_of_index(flat_index)
    known = adversary.known_sorted
    x_p = index.project(x, known)
    cells = []
    for v, z in enumerate(index.tuples()):
        if index.project(z, known) != x_p:
            continue
        p = Fraction(1)
        for j in range(index.t):
            p *= sampler.base.prob(index.symbol_slice(z, j))
        if posterior:
            p *= sum((w for value, w in sampler.code.transitions_at(v) if value == y), Fraction(0))
        if p:
            cells.append(p)
    return float(top_c_mass(cells, c) / sum(cells, Fraction(0)))


def estimate_ps(
    code: Code,
    dist: Distribution,
    adversary: AdversarySpec,
    samples: int,
    seed: int,
    *,
    c: int | None = None,
    shards: int = 1,
    posterior: bool = True,
) -> MonteCarloEstimate:
    """Sample mean of the per-observation top-c mass with a 95% normal interval.

    Shard seeds come from SeedSequence(seed).spawn(shards), so the result
    depends only on (seed, shards), never on thread scheduling.
    """
    if samples < 2:
        raise InstanceValidationError("Monte Carlo needs at least two samples")
    if shards < 1:
        raise InstanceValidationError("shard count must be positive")
    c = adversary.capability.at(code.t) if c is None else c
    sampler = _Sampler(code, dist, adversary)
    sizes = [samples // shards + (1 if k < samples % shards else 0) for k in range(shards)]
    streams = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(shards)]
    with ThreadPoolExecutor(max_workers=shards) as pool:
        parts = list(pool.map(lambda args: sampler.draw(args[0], args[1], posterior), zip(streams, sizes)))
    flat = np.concatenate([part[0] for part in parts])
    codewords = np.concatenate([part[1] for part in parts])
    known = np.concatenate([part[2] for part in parts])

    known_space = code.index.q ** (len(adversary.known) * code.t)
    keys = codewords * known_space + known
    unique_keys, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    values = np.array(
        [
            _observation_value(sampler, int(flat[position]), int(codewords[position]), c, posterior, adversary)
            for position in first
        ]
    )
    per_sample = values[inverse.reshape(-1)]
    mean = float(per_sample.mean())
    stderr = float(per_sample.std(ddof=1)) / math.sqrt(samples)
    logger.info("Monte Carlo: %s samples, %s distinct observations, estimate %s", samples, len(unique_keys), mean)
    return MonteCarloEstimate(mean, stderr, samples, seed, shards, c, posterior)
