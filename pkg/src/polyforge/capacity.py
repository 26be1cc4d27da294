"""Fleet data-volume estimator for connected-vehicle data sources.

Units are SI decimal throughout (1000 between MB/GB/TB/PB), the year is 365
days and an operation day is 24 hours. All arithmetic is exact Decimal;
rounding to two significant figures happens only when the yearly column is
displayed.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP

DAYS_PER_YEAR = 365
OPERATION_HOURS_PER_DAY = 24
_THOUSAND = Decimal(1000)


@dataclass(frozen=True)
class DataSourceRate:
    """One in-vehicle data source and its per-car volume in GB/day."""

    name: str
    per_car_gb_per_day: Decimal

    def __post_init__(self):
        object.__setattr__(self, "per_car_gb_per_day", Decimal(self.per_car_gb_per_day))
        if self.per_car_gb_per_day < 0:
            raise ValueError("data rate must be non-negative")


# Built-in vehicle bus rates (GB/day per car).
DEFAULT_SOURCES = (
    DataSourceRate("4-12 CAN buses", Decimal(12)),
    DataSourceRate("Optional MOST bus", Decimal(210)),
    DataSourceRate("Optional FlexRay network", Decimal(80)),
    DataSourceRate("Optional Ethernet network", Decimal(80)),
)


@dataclass(frozen=True)
class SourceEstimate:
    name: str
    per_car_gb_per_day: Decimal
    daily_tb: Decimal
    yearly_pb: Decimal


@dataclass(frozen=True)
class FleetEstimate:
    fleet_size: int
    sources: tuple[SourceEstimate, ...]
    daily_tb_total: Decimal
    yearly_pb_total: Decimal


def fleet_daily(rate: DataSourceRate, fleet_size: int) -> Decimal:
    """Fleet-wide TB/day for one source."""
    if fleet_size < 0:
        raise ValueError("fleet size must be non-negative")
    return rate.per_car_gb_per_day * fleet_size / _THOUSAND


def yearly_pb(daily_tb: Decimal) -> Decimal:
    """PB accumulated over a 365-day year at a given TB/day."""
    if daily_tb < 0:
        raise ValueError("daily volume must be non-negative")
    return daily_tb * DAYS_PER_YEAR / _THOUSAND


def daily_from_hourly(mb_per_hour: Decimal) -> Decimal:
    """GB/day from MB per vehicle operation hour, at 24 hours/day."""
    if mb_per_hour < 0:
        raise ValueError("hourly volume must be non-negative")
    return Decimal(mb_per_hour) * OPERATION_HOURS_PER_DAY / _THOUSAND


def estimate_fleet(
    fleet_size: int, sources: tuple[DataSourceRate, ...] = DEFAULT_SOURCES
) -> FleetEstimate:
    """Per-source and total daily/yearly volumes for a fleet."""
    estimates = []
    for rate in sources:
        daily = fleet_daily(rate, fleet_size)
        estimates.append(SourceEstimate(
            name=rate.name,
            per_car_gb_per_day=rate.per_car_gb_per_day,
            daily_tb=daily,
            yearly_pb=yearly_pb(daily),
        ))
    return FleetEstimate(
        fleet_size=fleet_size,
        sources=tuple(estimates),
        daily_tb_total=sum((e.daily_tb for e in estimates), Decimal(0)),
        yearly_pb_total=sum((e.yearly_pb for e in estimates), Decimal(0)),
    )


def round_two_significant(value: Decimal) -> str:
    """Display form with two significant figures and no exponent notation."""
    if value.is_zero():
        return "0"
    quantum = Decimal(1).scaleb(value.adjusted() - 1)
    rounded = value.quantize(quantum, rounding=ROUND_HALF_UP)
    if rounded.as_tuple().exponent >= 0:
        return str(int(rounded))
    return str(rounded)


def format_table(estimate: FleetEstimate) -> str:
    """Aligned text table; daily volumes exact, yearly shown at two
    significant figures."""
    header = (
        "Data source",
        "Per car (GB/day)",
        f"Fleet of {estimate.fleet_size} (TB/day)",
        "One year (PB)",
    )
    rows = [header]
    for source in estimate.sources:
        rows.append((
            source.name,
            str(source.per_car_gb_per_day),
            str(source.daily_tb),
            round_two_significant(source.yearly_pb),
        ))
    rows.append((
        "Total",
        str(sum((s.per_car_gb_per_day for s in estimate.sources), Decimal(0))),
        str(estimate.daily_tb_total),
        round_two_significant(estimate.yearly_pb_total),
    ))
    widths = [max(len(row[col]) for row in rows) for col in range(len(header))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [row[col].rjust(widths[col]) for col in range(1, len(header))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def format_machine(estimate: FleetEstimate) -> str:
    """One `source,daily_tb,yearly_pb` line per row, exact values."""
    lines = [
        f"{source.name},{source.daily_tb},{source.yearly_pb}"
        for source in estimate.sources
    ]
    lines.append(f"Total,{estimate.daily_tb_total},{estimate.yearly_pb_total}")
    return "\n".join(lines) + "\n"
