"""Published reference brackets used by ``hausdim reproduce`` and the acceptance tests.

Each row is (problem label, h, R, lower, upper, tolerance).  Values are
copied verbatim from the published tables; tolerances are the per-endpoint
agreement the reproduction is expected to reach.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InputError

__all__ = ["GoldenRow", "TABLES", "TAIL_CONSTANTS", "rows"]


@dataclass(frozen=True)
class GoldenRow:
    table: str
    label: str
    h: float
    lower: float
    upper: float
    tol: float
    R: Optional[float] = None

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _cf(label, h, lo, hi, tol=2e-9):
    return GoldenRow("t1", label, h, lo, hi, tol)


# t1: real continued fractions; label lists the digits
T1 = (
    _cf("1,2", 1e-4, 0.531280505099895, 0.531280506539767),
    _cf("1,2", 5e-5, 0.531280505981423, 0.531280506343388, 1e-9),
    _cf("1,3", 1e-4, 0.454489076859422, 0.454489077843624),
    _cf("1,3", 5e-5, 0.454489077459035, 0.454489077707546, 1e-9),
    _cf("1,4", 1e-4, 0.411182724095752, 0.411182724934834),
    _cf("1,4", 5e-5, 0.411182724603313, 0.411182724815117, 1e-9),
    _cf("2,3", 1e-4, 0.337436780744847, 0.337436780851139, 1e-9),
    _cf("2,3", 5e-5, 0.337436780790228, 0.337436780817793, 1e-9),
    _cf("2,4", 1e-4, 0.306312767993699, 0.306312768092506, 1e-9),
    _cf("2,4", 5e-5, 0.306312768039239, 0.306312768061760, 1e-9),
    _cf("3,4", 1e-4, 0.263737482885901, 0.263737482913807, 1e-9),
    _cf("3,4", 5e-5, 0.263737482894486, 0.263737482901574, 1e-9),
    _cf("10,11", 2e-4, 0.146921235390446, 0.146921235393309, 1e-9),
    _cf("10,11", 5e-5, 0.146921235390764, 0.146921235390925, 1e-9),
    _cf("100,10000", 4e-4, 0.052246592638657, 0.052246592638662, 1e-12),
    _cf("100,10000", 1e-4, 0.052246592638659, 0.052246592638659, 1e-12),
    _cf("2,4,6,8,10", 1e-4, 0.517357030830725, 0.517357030987649),
    _cf("2,4,6,8,10", 5e-5, 0.517357030911231, 0.517357030949266, 1e-9),
    _cf("1-10", 1e-4, 0.925737589218857, 0.925737591547918),
    _cf("1-10", 5e-5, 0.925737590664670, 0.925737591246997, 1e-9),
    _cf("odd 1-33", 1e-4, 0.770516007582087, 0.770516008987138),
    _cf("odd 1-33", 5e-5, 0.770516008433225, 0.770516008784885, 1e-9),
    _cf("even 2-34", 1e-4, 0.633471970121772, 0.633471970288076),
    _cf("even 2-34", 5e-5, 0.633471970211609, 0.633471970252711, 1e-9),
    _cf("1-34", 1e-4, 0.980419623378987, 0.980419625624112),
    _cf("1-34", 5e-5, 0.980419624765058, 0.980419625326256, 1e-9),
)

# t3: perturbed middle-thirds maps; label is lambda
T3 = (
    GoldenRow("t3", "0", 1e-4, 0.630929753571458, 0.630929753571458, 1e-12),
    GoldenRow("t3", "0.25", 1e-4, 0.691029102085966, 0.691029110502743, 1e-8),
    GoldenRow("t3", "0.5", 1e-4, 0.733474587362570, 0.733474622222681, 1e-8),
    GoldenRow("t3", "0.75", 1e-4, 0.767207161950980, 0.767207292955634, 1e-8),
    GoldenRow("t3", "1", 1e-4, 0.796727161816835, 0.796727861914653, 1e-8),
)

# t4: complex continued fractions, printed to five decimals
T4 = (
    GoldenRow("t4", "I1", 0.02, 1.85459, 1.85609, 1e-3, 100.0),
    GoldenRow("t4", "I1", 0.01, 1.85507, 1.85595, 1e-4, 100.0),
    GoldenRow("t4", "I1", 0.005, 1.85518, 1.85591, 1e-4, 100.0),
    GoldenRow("t4", "I1", 0.02, 1.85503, 1.85604, 1e-4, 200.0),
    GoldenRow("t4", "I1", 0.01, 1.85550, 1.85589, 1e-4, 200.0),
    GoldenRow("t4", "I1", 0.02, 1.85513, 1.85603, 1e-4, 300.0),
    GoldenRow("t4", "I2", 0.02, 1.60240, 1.60677, 1e-3, 100.0),
    GoldenRow("t4", "I2", 0.01, 1.60270, 1.60668, 1e-4, 100.0),
    GoldenRow("t4", "I2", 0.005, 1.60277, 1.60666, 1e-4, 100.0),
    GoldenRow("t4", "I2", 0.02, 1.60444, 1.60654, 1e-4, 200.0),
    GoldenRow("t4", "I2", 0.01, 1.60474, 1.60644, 1e-4, 200.0),
    GoldenRow("t4", "I2", 0.02, 1.60504, 1.60650, 1e-4, 300.0),
    GoldenRow("t4", "I3", 0.02, 1.53705, 1.53790, 5e-5),
    GoldenRow("t4", "I3", 0.01, 1.53754, 1.53774, 5e-5),
    GoldenRow("t4", "I3", 0.005, 1.53765, 1.53770, 5e-5),
)

TABLES = {"t1": T1, "t3": T3, "t4": T4}

# printed tail constants: (set, s, R) -> value, six decimals
TAIL_CONSTANTS = {
    ("I1", 1.85, 100.0): 0.000796,
    ("I1", 1.85, 200.0): 0.000236,
    ("I1", 1.85, 300.0): 0.000117,
    ("I2", 1.60, 100.0): 0.005582,
    ("I2", 1.60, 200.0): 0.002347,
    ("I2", 1.60, 300.0): 0.001427,
}

_CF_DIGITS = {
    "1-10": list(range(1, 11)),
    "odd 1-33": list(range(1, 34, 2)),
    "even 2-34": list(range(2, 35, 2)),
    "1-34": list(range(1, 35)),
}


def cf_digits(label: str) -> list[int]:
    """Digit list for a t1 label."""
    if label in _CF_DIGITS:
        return _CF_DIGITS[label]
    return [int(d) for d in label.split(",")]


def _norm(label: str) -> str:
    label = label.strip()
    if label.startswith("E[") and label.endswith("]"):
        label = label[2:-1]
    return label.replace(" ", "") if "," in label else label


def rows(table: str, subset: Optional[str] = None) -> list[GoldenRow]:
    """Rows of ``table`` whose label equals ``subset`` (all rows when None).

    Digit labels may be written with or without the ``E[...]`` wrapper.
    """
    if table not in TABLES:
        raise KeyError(f"unknown table {table!r}; choose from {sorted(TABLES)}")
    if subset is None:
        return list(TABLES[table])
    want = _norm(subset)
    found = [r for r in TABLES[table] if _norm(r.label) == want]
    if not found:
        raise InputError(f"no row of {table} has label {subset!r}")
    return found
