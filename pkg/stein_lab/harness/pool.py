"""
Seeded fan-out of independent campaign trials.

Trial i always receives child i of SeedSequence(seed), so the records do
not depend on the number of worker processes. Workers inherit the
parent's active tolerances.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Union

import numpy as np

from stein_lab.config import get_tolerances, set_tolerances
from stein_lab.verdicts import CheckRecord

logger = logging.getLogger(__name__)

TrialResult = Union[CheckRecord, Iterable[CheckRecord]]
Trial = Callable[[np.random.SeedSequence, int], TrialResult]


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def fan_out(trial: Trial, seed: int, count: int, jobs: int = 1) -> list[CheckRecord]:
    """
    Run trial(seed_i, i) for i < count and flatten the records in trial order.

    trial must be picklable (a module-level function or a functools.partial
    of one) when jobs > 1.
    """
    seeds = spawn_seeds(seed, count)
    if jobs <= 1 or count <= 1:
        results = [trial(child, i) for i, child in enumerate(seeds)]
    else:
        logger.info("fan_out trials=%d jobs=%d", count, jobs)
        with ProcessPoolExecutor(max_workers=jobs, initializer=set_tolerances, initargs=(get_tolerances(),)) as pool:
            results = list(pool.map(trial, seeds, range(count)))
    records: list[CheckRecord] = []
    for result in results:
        if isinstance(result, CheckRecord):
            records.append(result)
        else:
            records.extend(result)
    return records
