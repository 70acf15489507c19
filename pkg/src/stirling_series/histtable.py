"""De Moivre's 14-place tables of log10(n!): regeneration, diffs and error forensics."""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence, Union

from .exceptions import MalformedDigitsError, PositionError, RowMismatchError
from .numerics import ExtFloat, format_fixed, parse_fixed, workctx
from .series import _log_factorial_decimal

__all__ = [
    "TABLE_PRECISION",
    "TableRow",
    "PowerTerm",
    "TableDiff",
    "HistoricalDataset",
    "load_dataset",
    "log10_factorial",
    "generate_table",
    "classify_delta",
    "compare_tables",
    "AddDelta",
    "ReplaceDigit",
    "Transpose",
    "HISTORICAL_CORRUPTIONS",
    "inject_errors",
    "cast_out_nines",
    "format_historical",
    "rows_to_tsv",
    "rows_from_tsv",
    "rows_to_csv",
    "rows_to_json",
    "PRINTED_DIFF_COLUMN",
    "AuditLine",
    "audit_editions",
]

#: Working digits for table generation.
TABLE_PRECISION = 40

_FIXED = re.compile(r"^-?\d+\.(\d+)$")


@dataclass(frozen=True)
class TableRow:
    """One table entry: n and log10(n!) as a fixed-point string."""

    n: int
    digits: str
    value: ExtFloat | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not _FIXED.match(self.digits):
            raise MalformedDigitsError(f"not a fixed-point decimal: {self.digits!r}")
        if self.value is None:
            object.__setattr__(self, "value", ExtFloat(Decimal(self.digits), len(self.digits) + 1))
        elif format_fixed(self.value.to_fraction(), self.places) != self.digits:
            raise ValueError(f"value {self.value} does not round to {self.digits}")

    @property
    def places(self) -> int:
        return len(self.digits.split(".")[1])

    @property
    def exact(self) -> Fraction:
        return parse_fixed(self.digits)


def _ln10(prec: int) -> Decimal:
    with workctx(prec):
        return Decimal(10).ln()


def log10_factorial(n: int, places: int = 14, precision: int = TABLE_PRECISION) -> TableRow:
    """log10(n!) rounded half-even to ``places`` decimals."""
    if not 1 <= n <= 10**6:
        raise ValueError(f"n must lie in 1..10^6, got {n}")
    wp = precision + len(str(n))
    with workctx(wp):
        v = _log_factorial_decimal(n, wp) / _ln10(wp)
    return TableRow(n, format_fixed(v, places), ExtFloat(v, precision))


def generate_table(start: int, stop: int, step: int, places: int = 14,
                   precision: int = TABLE_PRECISION) -> list[TableRow]:
    """Rows for n = start, start+step, ... <= stop.

    log n! is accumulated as a running sum over the gaps (the product of each
    gap is exact, so one logarithm per row), and each row is rounded from
    the unrounded running value.
    """
    if start < 1 or step < 1:
        raise ValueError("need start >= 1 and step >= 1")
    wp = precision + len(str(stop)) + 2
    rows = []
    with workctx(wp):
        ln10 = _ln10(wp)
        acc = _log_factorial_decimal(start, wp)
        prev = start
        for n in range(start, stop + 1, step):
            block = 1
            for k in range(prev + 1, n + 1):
                block *= k
            if block > 1:
                acc += Decimal(block).ln()
            prev = n
            v = acc / ln10
            rows.append(TableRow(n, format_fixed(v, places), ExtFloat(v, precision)))
    return rows


@dataclass(frozen=True)
class PowerTerm:
    """coefficient * 10**exponent, printed like ``+27e-10``."""

    coefficient: int
    exponent: int

    @property
    def value(self) -> Fraction:
        return self.coefficient * Fraction(10) ** self.exponent

    def __str__(self):
        return f"{self.coefficient:+d}e{self.exponent}"

    @classmethod
    def parse(cls, s: str) -> PowerTerm:
        c, e = s.replace("−", "-").split("e")
        return cls(int(c), int(e))


def _leading_exponent(r: Fraction) -> int:
    r = abs(r)
    e = len(str(r.numerator)) - len(str(r.denominator))
    while Fraction(10) ** e > r:
        e -= 1
    while Fraction(10) ** (e + 1) <= r:
        e += 1
    return e


def _as_short_power(r: Fraction) -> PowerTerm | None:
    # r = c * 10^e with |c| <= 99, using the largest such e
    den = r.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        return None
    e = 0
    while (r * Fraction(10) ** -e).denominator != 1:
        e -= 1
    c = (r * Fraction(10) ** -e).numerator
    while c and c % 10 == 0:
        c //= 10
        e += 1
    return PowerTerm(c, e) if abs(c) <= 99 else None


def classify_delta(delta: Fraction) -> list[PowerTerm]:
    """Greedy split of ``delta`` into signed power-of-ten terms, largest first.

    At each step, with leading digit position e and mantissa c = r/10^e:
    a mantissa above 9 is carried to ±1·10^{e+1}; otherwise a residual that
    is exactly c·10^e with |c| <= 99 is emitted whole and ends the split;
    otherwise round(c)·10^e is emitted.  The terms always sum to delta.
    """
    delta = Fraction(delta)
    terms: list[PowerTerm] = []
    r = delta
    while r:
        e = _leading_exponent(r)
        c = r / Fraction(10) ** e
        sign = 1 if r > 0 else -1
        short = _as_short_power(r)
        if abs(c) > 9:
            term = PowerTerm(sign, e + 1)
        elif short is not None:
            term = short
        else:
            term = PowerTerm(round(c), e)
        terms.append(term)
        r -= term.value
        if len(terms) > 64:
            raise ArithmeticError("classification did not terminate")
    return terms


@dataclass(frozen=True)
class TableDiff:
    """a - b for one row, exactly, with its power-of-ten classification."""

    n: int
    delta: Fraction
    classification: tuple[PowerTerm, ...]

    def __post_init__(self):
        if sum((t.value for t in self.classification), Fraction(0)) != self.delta:
            raise ValueError("classification does not sum to delta")

    def units(self, places: int = 14) -> Fraction:
        """delta in units of the last printed place."""
        return self.delta * 10**places

    def label(self) -> str:
        return " ".join(str(t) for t in self.classification) or "0"


def compare_tables(a: Sequence[TableRow], b: Sequence[TableRow]) -> list[TableDiff]:
    if [r.n for r in a] != [r.n for r in b]:
        raise RowMismatchError("tables cover different rows")
    out = []
    for ra, rb in zip(a, b):
        d = ra.exact - rb.exact
        out.append(TableDiff(ra.n, d, tuple(classify_delta(d))))
    return out


# digit edits used by inject_errors; positions are 1-based decimal places


@dataclass(frozen=True)
class AddDelta:
    delta: Fraction | str

    def apply(self, digits: str) -> str:
        places = len(digits.split(".")[1])
        return format_fixed(parse_fixed(digits) + Fraction(self.delta), places)


def _check_position(digits: str, position: int) -> int:
    places = len(digits.split(".")[1])
    if not 1 <= position <= places:
        raise PositionError(f"decimal place {position} outside 1..{places}")
    return digits.index(".") + position


@dataclass(frozen=True)
class ReplaceDigit:
    position: int
    new: str
    old: str | None = None

    def apply(self, digits: str) -> str:
        i = _check_position(digits, self.position)
        if self.old is not None and digits[i] != self.old:
            raise ValueError(f"expected {self.old!r} at place {self.position} of {digits}, found {digits[i]!r}")
        return digits[:i] + self.new + digits[i + 1:]


@dataclass(frozen=True)
class Transpose:
    """Swap decimal places ``position`` and ``position + 1``."""

    position: int

    def apply(self, digits: str) -> str:
        i = _check_position(digits, self.position)
        _check_position(digits, self.position + 1)
        return digits[:i] + digits[i + 1] + digits[i] + digits[i + 2:]


Edit = Union[AddDelta, ReplaceDigit, Transpose]

#: The three mechanisms behind the 1730/1756 differences.
HISTORICAL_CORRUPTIONS: tuple[tuple[int, Edit], ...] = (
    (10, AddDelta(Fraction(1, 10**5))),
    (80, ReplaceDigit(7, "1", old="7")),
    (180, Transpose(9)),
)


def inject_errors(corruptions: Iterable[tuple[int, Edit]] = HISTORICAL_CORRUPTIONS,
                  rows: Sequence[TableRow] | None = None) -> list[TableRow]:
    """Replay a running-sum table with digit edits.

    Each row is the (possibly corrupted) previous row plus the exact
    increment of the base table, after which any edits for that row are
    applied; so every edit carries into all later rows.  The base defaults
    to the 1756 edition.
    """
    if rows is None:
        rows = load_dataset().rows_1756
    if any(b.n <= a.n for a, b in zip(rows, rows[1:])):
        raise ValueError("rows must be strictly ascending")
    edits: dict[int, list[Edit]] = {}
    for n, edit in corruptions:
        edits.setdefault(n, []).append(edit)
    unknown = set(edits) - {r.n for r in rows}
    if unknown:
        raise RowMismatchError(f"no table rows for {sorted(unknown)}")
    out: list[TableRow] = []
    for i, row in enumerate(rows):
        if i == 0:
            digits = row.digits
        else:
            inc = row.exact - rows[i - 1].exact
            digits = format_fixed(out[-1].exact + inc, row.places)
        for edit in edits.get(row.n, ()):
            digits = edit.apply(digits)
        out.append(TableRow(row.n, digits))
    return out


def cast_out_nines(digits: str) -> int:
    """Digit sum mod 9; blind to any reordering of the digits."""
    if not re.fullmatch(r"\d+(\.\d*)?|\.\d+", digits or ""):
        raise MalformedDigitsError(f"expected digits with at most one point, got {digits!r}")
    return sum(int(ch) for ch in digits if ch != ".") % 9


def format_historical(digits: str, groups: Sequence[int] = (5, 2, 3, 4)) -> str:
    """Insert spaces after the point in the printed grouping (5|2|3|4)."""
    head, tail = digits.split(".")
    parts, i = [], 0
    for g in groups:
        if i >= len(tail):
            break
        parts.append(tail[i:i + g])
        i += g
    if i < len(tail):
        parts.append(tail[i:])
    return head + "." + " ".join(parts)


# file formats


def rows_to_tsv(rows: Iterable[TableRow]) -> str:
    return "".join(f"{r.n}\t{r.digits}\n" for r in rows)


def rows_from_tsv(text: str) -> list[TableRow]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            n, digits = line.split("\t")
        except ValueError:
            raise MalformedDigitsError(f"line {lineno}: expected 'n<TAB>digits'") from None
        out.append(TableRow(int(n), digits.strip()))
    return out


def rows_to_csv(rows: Iterable[TableRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "digits"])
    for r in rows:
        w.writerow([r.n, r.digits])
    return buf.getvalue()


def rows_to_json(rows: Iterable[TableRow]) -> str:
    return json.dumps([{"n": r.n, "digits": r.digits} for r in rows])


@dataclass(frozen=True)
class HistoricalDataset:
    """The 20 comparison rows (n = 10..200) of both editions, as printed."""

    rows_1730: tuple[TableRow, ...]
    rows_1756: tuple[TableRow, ...]

    def edition(self, year) -> tuple[TableRow, ...]:
        year = str(year)
        if year == "1730":
            return self.rows_1730
        if year == "1756":
            return self.rows_1756
        raise KeyError(f"unknown edition {year!r}; have 1730, 1756")


@lru_cache(maxsize=1)
def load_dataset() -> HistoricalDataset:
    data = resources.files(__package__) / "data"
    a = rows_from_tsv((data / "demoivre_1730.tsv").read_text(encoding="utf-8"))
    b = rows_from_tsv((data / "demoivre_1756.tsv").read_text(encoding="utf-8"))
    return HistoricalDataset(tuple(a), tuple(b))


def _column(spec):
    out = {}
    for ns, labels in spec:
        for n in ns:
            out[n] = tuple(labels.split())
    return out


#: The printed (1730) - (1756) column, verbatim.  Row 180 is printed as
#: -9e-9 although the two printed rows differ by -9e-10 there.
PRINTED_DIFF_COLUMN: dict[int, tuple[str, ...]] = _column([
    (range(10, 80, 10), "+1e-5"),
    (range(80, 180, 10), "+1e-5 -6e-7"),
    ((180,), "+1e-5 -6e-7 -9e-9"),
    ((190, 200), "+1e-5 -6e-7 +27e-10"),
])


@dataclass(frozen=True)
class AuditLine:
    diff: TableDiff
    printed: tuple[str, ...] | None

    @property
    def n(self) -> int:
        return self.diff.n

    @property
    def matches(self) -> bool:
        return self.printed is not None and tuple(str(t) for t in self.diff.classification) == self.printed


def audit_editions(edition_a="1730", edition_b="1756") -> list[AuditLine]:
    """Diff two embedded editions and set each row against the printed column."""
    ds = load_dataset()
    diffs = compare_tables(ds.edition(edition_a), ds.edition(edition_b))
    printed = PRINTED_DIFF_COLUMN if (str(edition_a), str(edition_b)) == ("1730", "1756") else {}
    return [AuditLine(d, printed.get(d.n)) for d in diffs]
