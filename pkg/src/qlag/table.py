"""Reference rows for the negative-zero bounds and their reproduction."""

from __future__ import annotations

from dataclasses import dataclass

from .checks import BoundsRecord, bounds
from .qlaguerre import make_params

# (q, n, delta, B_n, z_1n, A_n), reference values to about six significant digits.
REFERENCE_ROWS = (
    ("0.23", 2, "-1.1", "-0.11032", "-0.110294", "-0.10681"),
    ("0.23", 2, "-1.81", "-0.505545", "-0.448837", "-0.20526"),
    ("0.23", 7, "-1.1", "-0.104315", "-0.104286", "-0.100269"),
    ("0.23", 7, "-1.81", "-0.46738", "-0.40912", "-0.169571"),
    ("0.23", 12, "-1.1", "-0.104311", "-0.104283", "-0.100265"),
    ("0.23", 12, "-1.81", "-0.467357", "-0.409097", "-0.169552"),
    ("0.89", 2, "-1.1", "-0.00598206", "-0.00597785", "-0.00580805"),
    ("0.89", 2, "-1.81", "-0.0360942", "-0.0294349", "-0.0152326"),
    ("0.89", 7, "-1.1", "-0.00219276", "-0.00219076", "-0.0020879"),
    ("0.89", 7, "-1.81", "-0.0114906", "-0.00913766", "-0.0038382"),
    ("0.89", 12, "-1.1", "-0.0016198", "-0.00161831", "-0.00153785"),
    ("0.89", 12, "-1.81", "-0.0083227", "-0.00661085", "-0.00270734"),
)

COMPARE_RTOL = 1e-4


@dataclass(frozen=True)
class RowComparison:
    record: BoundsRecord
    reference: tuple
    rel_diff: dict

    @property
    def within(self) -> bool:
        return all(d <= COMPARE_RTOL for d in self.rel_diff.values())


def compute_rows(rows=REFERENCE_ROWS, precision: int | None = None) -> list:
    """BoundsRecord for every (q, n, delta) row, in input order."""
    out = []
    for q, n, delta, *_ in rows:
        out.append(bounds(make_params(q, delta, precision), int(n)))
    return out


def compare(records, rows=REFERENCE_ROWS) -> list:
    """Relative differences of B_n, z_1n and A_n against the reference columns."""
    out = []
    for rec, row in zip(records, rows):
        ctx = rec.z1n.context
        diffs = {}
        for name, value, ref in zip(("B_n", "z_1n", "A_n"), (rec.B, rec.z1n, rec.A), row[3:]):
            ref = ctx.mpf(ref)
            diffs[name] = float(abs(value - ref) / abs(ref))
        out.append(RowComparison(rec, row, diffs))
    return out
