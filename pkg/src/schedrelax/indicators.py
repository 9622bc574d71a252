"""Bottleneck identification indicators computed on a finished schedule.

All values are exact fractions. Two indicator families:

* MRUR (machine resource utilization rate): consumed capacity-time over
  available capacity-time up to the latest completion. AUAU (average
  uninterrupted active utilization): the mean, over maximal runs of positive
  consumption, of each run's utilization (PRU).
* MUR and AUAD: the unit-capacity ancestors of the above, kept as reference
  indicators. They coincide with MRUR/AUAU on unit-capacity,
  unit-consumption schedules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import ProblemInstance, Schedule, consumption_timeline, latest_completion

INDICATOR_NAMES = ("MRUR", "AUAU", "MUR", "AUAD")


@dataclass(frozen=True)
class ActivePeriod:
    """Maximal half-open run [start, end) of positive consumption."""

    resource: int
    start: int
    end: int

    @property
    def last_period(self) -> int:
        """Inclusive final time period of the run."""
        return self.end - 1


@dataclass(frozen=True)
class IndicatorValue:
    value: Fraction
    defined: bool = True


@dataclass(frozen=True)
class ResourceScore:
    resource: int
    score: Fraction
    defined: bool


def active_periods(
    instance: ProblemInstance, schedule: Schedule, resource_id: int
) -> list[ActivePeriod]:
    load = consumption_timeline(instance, schedule, resource_id)
    periods: list[ActivePeriod] = []
    t = 0
    horizon = instance.horizon
    while t < horizon:
        if load[t] > 0:
            begin = t
            while t < horizon and load[t] > 0:
                t += 1
            periods.append(ActivePeriod(resource_id, begin, t))
        else:
            t += 1
    return periods


def _capacity_sum(instance: ProblemInstance, resource_id: int, start: int, end: int) -> int:
    res = instance.resource(resource_id)
    return sum(res.capacity_at(t) for t in range(start, end))


def _work(instance: ProblemInstance, resource_id: int) -> int:
    return sum(j.duration * j.consumption.get(resource_id, 0) for j in instance.jobs)


def mrur(instance: ProblemInstance, schedule: Schedule, resource_id: int) -> IndicatorValue:
    """Work placed on the resource over capacity available before the last
    completion. Zero available capacity flags the value as undefined."""
    c_max = latest_completion(instance, schedule)
    available = _capacity_sum(instance, resource_id, 0, c_max)
    if available == 0:
        return IndicatorValue(Fraction(0), defined=False)
    return IndicatorValue(Fraction(_work(instance, resource_id), available))


def pru(
    instance: ProblemInstance,
    schedule: Schedule,
    resource_id: int,
    period: ActivePeriod,
) -> Fraction:
    """Utilization of one active period.

    Jobs are assigned to the period that contains their start, so a job
    overhanging the period end still contributes its whole work here.
    """
    numerator = 0
    for job in instance.jobs:
        qty = job.consumption.get(resource_id, 0)
        if qty > 0 and period.start <= schedule.starts[job.id] < period.end:
            numerator += job.duration * qty
    return Fraction(numerator, _capacity_sum(instance, resource_id, period.start, period.end))


def auau(instance: ProblemInstance, schedule: Schedule, resource_id: int) -> IndicatorValue:
    periods = active_periods(instance, schedule, resource_id)
    if not periods:
        return IndicatorValue(Fraction(0), defined=False)
    total = sum((pru(instance, schedule, resource_id, p) for p in periods), Fraction(0))
    return IndicatorValue(total / len(periods))


def mur(instance: ProblemInstance, schedule: Schedule, resource_id: int) -> IndicatorValue:
    """Total busy duration of the resource's jobs over elapsed time."""
    c_max = latest_completion(instance, schedule)
    if c_max == 0:
        return IndicatorValue(Fraction(0), defined=False)
    busy = sum(j.duration for j in instance.jobs if j.consumption.get(resource_id, 0) > 0)
    return IndicatorValue(Fraction(busy, c_max))


def auad(instance: ProblemInstance, schedule: Schedule, resource_id: int) -> IndicatorValue:
    """Mean, over active periods, of the busy time started in the period
    relative to the period length (the unit-capacity special case of AUAU)."""
    periods = active_periods(instance, schedule, resource_id)
    if not periods:
        return IndicatorValue(Fraction(0), defined=False)
    total = Fraction(0)
    for period in periods:
        busy = sum(
            job.duration
            for job in instance.jobs
            if job.consumption.get(resource_id, 0) > 0
            and period.start <= schedule.starts[job.id] < period.end
        )
        total += Fraction(busy, period.end - period.start)
    return IndicatorValue(total / len(periods))


_INDICATORS = {"MRUR": mrur, "AUAU": auau, "MUR": mur, "AUAD": auad}


def compute_indicator(
    instance: ProblemInstance, schedule: Schedule, resource_id: int, indicator: str
) -> IndicatorValue:
    try:
        fn = _INDICATORS[indicator.upper()]
    except KeyError:
        raise ValueError(f"unknown indicator {indicator!r}; pick one of {INDICATOR_NAMES}")
    return fn(instance, schedule, resource_id)


def rank_resources(
    instance: ProblemInstance, schedule: Schedule, indicator: str
) -> list[ResourceScore]:
    """Resources by descending score; ties resolved toward the lowest id."""
    scores = [
        ResourceScore(res.id, *_astuple(compute_indicator(instance, schedule, res.id, indicator)))
        for res in instance.resources
    ]
    return sorted(scores, key=lambda s: (-s.score, s.resource))


def _astuple(value: IndicatorValue) -> tuple[Fraction, bool]:
    return value.value, value.defined
