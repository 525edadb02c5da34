# polyz/bench.py
"""Closed-form kernels timed against the generic engine on the same inputs."""
import functools
import logging
import random
import statistics
import time
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from polyz.errors import KernelMismatchError, UnknownGroupError
from polyz.g2 import g2_mul, g2_pow
from polyz.g3 import Variant, g3_mul, g3_pow
from polyz.presets import get_preset

logger = logging.getLogger(__name__)

OPS = ("mul", "pow")

# group -> op -> closed-form kernel; tests swap entries to check mismatch handling
KERNELS: Dict[str, Dict[str, Callable]] = {
    "g2": {"mul": g2_mul, "pow": g2_pow},
}
for _variant in Variant:
    KERNELS[_variant.value] = {
        "mul": functools.partial(g3_mul, _variant),
        "pow": functools.partial(g3_pow, _variant),
    }


class BenchReport(BaseModel):
    group: str
    op: str
    count: int
    seed: int
    exponent_bound: int
    power: Optional[int] = None
    repeats: int = 1
    kernel_seconds: float
    engine_seconds: float

    @property
    def speedup(self) -> Optional[float]:
        if self.count == 0 or self.kernel_seconds == 0:
            return None
        return self.engine_seconds / self.kernel_seconds


def _inputs(rng: random.Random, n: int, op: str, count: int, bound: int) -> List[Tuple]:
    def word():
        return tuple(rng.randint(-bound, bound) for _ in range(n))

    if op == "mul":
        return [(word(), word()) for _ in range(count)]
    return [(word(), rng.randint(-bound * bound, bound * bound)) for _ in range(count)]


def _timed(fn: Callable, inputs: List[Tuple]) -> Tuple[List, float]:
    start = time.perf_counter()
    results = [fn(*args) for args in inputs]
    return results, time.perf_counter() - start


def bench(
    group: str,
    op: str,
    count: int,
    seed: int = 0,
    exponent_bound: int = 1000,
    power: Optional[int] = None,
    repeats: int = 1,
) -> BenchReport:
    """
    Time kernel and engine on the same random inputs; any disagreement raises KernelMismatchError.

    With ``power`` every pow input uses that exponent. Timings are the median of ``repeats`` runs.
    """
    name = group.strip().lower()
    if name not in KERNELS:
        raise UnknownGroupError(f"no closed-form kernel for {group!r}; choose one of {', '.join(KERNELS)}")
    if op not in OPS:
        raise ValueError(f"unknown bench op {op!r}; choose mul or pow")

    tower = get_preset(name)
    kernel = KERNELS[name][op]
    engine = tower.mul if op == "mul" else tower.pow
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    inputs = _inputs(random.Random(seed), tower.n, op, count, exponent_bound)
    if op == "pow" and power is not None:
        inputs = [(x, power) for x, _ in inputs]

    # Results are compared before any further timing runs
    kernel_results, first_kernel = _timed(kernel, inputs)
    engine_results, first_engine = _timed(engine, inputs)
    for args, got, expected in zip(inputs, kernel_results, engine_results):
        if tuple(got) != expected:
            raise KernelMismatchError(f"{name} {op} kernel gave {got} on {args}, engine gave {expected}")

    kernel_times, engine_times = [first_kernel], [first_engine]
    for _ in range(repeats - 1):
        kernel_times.append(_timed(kernel, inputs)[1])
        engine_times.append(_timed(engine, inputs)[1])
    kernel_seconds, engine_seconds = statistics.median(kernel_times), statistics.median(engine_times)

    report = BenchReport(
        group=name,
        op=op,
        count=count,
        seed=seed,
        exponent_bound=exponent_bound,
        power=power if op == "pow" else None,
        repeats=repeats,
        kernel_seconds=kernel_seconds,
        engine_seconds=engine_seconds,
    )
    logger.debug("bench %s %s x%d: kernel %.4fs, engine %.4fs", name, op, count, kernel_seconds, engine_seconds)
    return report
