"""Shot-by-shot stochastic simulation of the sequential decoding protocol.

Every shot draws Alice's two bits, prepares the matching state, and walks it
through the chain of receivers: each draws which bit to decode, samples the
outcome from the Born rule, applies the corresponding selective collapse
(projective on the sharp axis, square-root Kraus on the unsharp one), and
hands the state on.  Per-receiver empirical success rates converge to the
analytic values and, after averaging over outcomes, the collapsed states
reproduce the non-selective channel.

Randomness comes from counter-based Philox streams keyed by
``(seed, shard_index)`` with a fixed shard size, so results are bit-identical
no matter how shards are scheduled across threads.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import SequentialChannelStep, nonselective_step
from .errors import DomainError
from .rac import PreparationFamily
from .sequential import per_bob_success, propagate

RNG_ALGORITHM = "philox4x64/shard65536"
SHARD_SIZE = 1 << 16


@dataclass(frozen=True)
class SimulationConfig:
    prep: PreparationFamily
    steps: tuple[SequentialChannelStep, ...]
    shots: int
    seed: int

    def __post_init__(self):
        if not self.steps:
            raise DomainError("at least one receiver step is required")
        if self.shots < 1:
            raise DomainError("shots must be >= 1")


@dataclass(frozen=True)
class ReceiverStats:
    empirical_success: float
    standard_error: float
    shots_counted: int


@dataclass(frozen=True)
class SimulationResult:
    """Per-receiver tallies plus the mean collapsed state after each receiver."""

    per_receiver: tuple[ReceiverStats, ...]
    mean_post_bloch: tuple[tuple[float, float, float], ...]
    seed: int
    rng_algorithm: str = RNG_ALGORITHM


def outcome_to_guess(sign: int) -> int:
    """Decode an outcome sign into a bit guess: +1 -> 0, -1 -> 1."""
    if sign not in (+1, -1):
        raise DomainError(f"outcome sign {sign} not in {{+1, -1}}")
    return 0 if sign == +1 else 1


def _shard(config: SimulationConfig, shard_index: int, m: int):
    """Simulate ``m`` shots of one shard; returns success counts and
    per-receiver summed post-measurement Bloch vectors."""
    steps = config.steps
    n_rec = len(steps)
    rng = np.random.Generator(
        np.random.Philox(key=np.array([config.seed, shard_index], dtype=np.uint64))
    )
    u = rng.random((m, 1 + 2 * n_rec))

    prep_bloch = np.array([s.bloch_vector for s in config.prep.states])
    x = np.minimum((u[:, 0] * 4).astype(np.intp), 3)
    x1, x2 = x >> 1, x & 1
    state = prep_bloch[x]

    a1 = np.array(steps[0].b1.bloch)
    a2 = np.array(steps[0].b2.bloch)

    successes = np.zeros(n_rec, dtype=np.int64)
    post_sums = np.zeros((n_rec, 3))
    for k, step in enumerate(steps):
        lam = step.lam
        root = math.sqrt(1.0 - lam * lam)
        shrink = 1.0 - root
        pick_y2 = u[:, 1 + 2 * k] >= 0.5
        n_a1 = state @ a1
        n_a2 = state @ a2
        p_plus = np.where(pick_y2, 0.5 * (1.0 + lam * n_a2), 0.5 * (1.0 + n_a1))
        plus = u[:, 2 + 2 * k] < p_plus
        sign = np.where(plus, 1.0, -1.0)
        p_branch = np.where(plus, p_plus, 1.0 - p_plus)

        guess = np.where(plus, 0, 1)
        target = np.where(pick_y2, x2, x1)
        successes[k] = np.count_nonzero(guess == target)

        post_sharp = sign[:, None] * a1[None, :]
        post_unsharp = (
            sign[:, None] * lam * a2[None, :]
            + root * state
            + (n_a2 * shrink)[:, None] * a2[None, :]
        ) / (2.0 * p_branch[:, None])
        state = np.where(pick_y2[:, None], post_unsharp, post_sharp)
        post_sums[k] = state.sum(axis=0)

    return successes, post_sums


def run(config: SimulationConfig, threads: int | None = None) -> SimulationResult:
    """Simulate the full protocol; deterministic given (seed, config).

    ``threads`` caps shard parallelism (default: SEQRAC_THREADS env var, or
    1); the shard decomposition is fixed, so the thread count never changes
    the result.
    """
    if threads is None:
        threads = int(os.environ.get("SEQRAC_THREADS", "1"))
    shots = config.shots
    n_rec = len(config.steps)
    shard_sizes = [
        min(SHARD_SIZE, shots - i) for i in range(0, shots, SHARD_SIZE)
    ]
    jobs = list(enumerate(shard_sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda j: _shard(config, j[0], j[1]), jobs))
    else:
        parts = [_shard(config, idx, m) for idx, m in jobs]

    successes = np.zeros(n_rec, dtype=np.int64)
    post_sums = np.zeros((n_rec, 3))
    for s, p in parts:  # shard order fixed regardless of scheduling
        successes += s
        post_sums += p

    stats = []
    for k in range(n_rec):
        p_hat = successes[k] / shots
        se = math.sqrt(p_hat * (1.0 - p_hat) / shots)
        stats.append(ReceiverStats(float(p_hat), se, shots))
    mean_post = tuple(tuple(float(c) for c in post_sums[k] / shots) for k in range(n_rec))
    return SimulationResult(tuple(stats), mean_post, config.seed)


def analytic_reference(config: SimulationConfig):
    """Analytic per-receiver successes and mean non-selective states.

    The success list comes from the exact trace-norm pipeline; the state
    list is the input-averaged state pushed through the non-selective
    channel, matching what the simulation's outcome-averaged collapsed
    states should reproduce.
    """
    steps = list(config.steps)
    trace = propagate(config.prep, steps)
    successes = [
        per_bob_success(trace.entries[k].exact, steps[k].lam)
        for k in range(len(steps))
    ]
    avg = np.mean([s.bloch_vector for s in config.prep.states], axis=0)
    mean_states = []
    from .bloch import DensityOp

    rho = DensityOp.from_bloch(tuple(avg))
    for step in steps:
        rho = nonselective_step(rho, step)
        mean_states.append(rho.bloch_vector)
    return successes, mean_states
