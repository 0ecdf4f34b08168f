"""Counter-based per-shot random streams.

Every shot draws from its own generator seeded by ``(seed, shot_index)``,
so results do not depend on how shots are split across workers. The first
draw of a shot's stream is always its measurement uniform; noise coins
come after it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

T = TypeVar("T")


def shot_rng(seed: int, shot: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, int(shot)])


def shot_uniform(seed: int, shot: int) -> float:
    return float(shot_rng(seed, shot).random())


def chunked(shots: int, workers: int) -> list[range]:
    workers = max(1, min(int(workers), shots))
    step = -(-shots // workers)
    return [range(i, min(i + step, shots)) for i in range(0, shots, step)]


def map_shots(fn: Callable[[range], T], shots: int, workers: int = 1) -> Iterable[T]:
    """Run ``fn`` over contiguous shot ranges, possibly in threads."""
    parts = chunked(shots, workers)
    if len(parts) == 1:
        return [fn(parts[0])]
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        return list(pool.map(fn, parts))
