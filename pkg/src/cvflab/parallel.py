"""Worker-count independent parallel map and keyed random streams."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def parallel_map(func, tasks, workers: int = 1) -> list:
    """Order-preserving map; runs in-process when ``workers <= 1``."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_seed(*keys: int) -> int:
    """Mix a root seed with integer keys (state index, probe index, ...) into 64 bits."""
    h = 0
    for k in keys:
        k = int(k)
        while True:  # fold keys wider than 64 bits
            h = _mix(((h + _GOLDEN) & _MASK) ^ (k & _MASK))
            k >>= 64
            if not k:
                break
    return h


class SplitMix:
    """splitmix64 stream; only what the schedulers need."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _mix(self.state)

    def randrange(self, n: int) -> int:
        return (self.next64() * n) >> 64
