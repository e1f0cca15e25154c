"""CSV contracts for the four figure kinds.

The columns mirror the files the data pipeline emits: order-parameter
sweep aggregates, distance sweep aggregates, and the two evaluation curve
exports. Headers must match exactly, in order; lines starting with # carry
provenance and are skipped. Column problems are reported by name so a
mismatched file can be diagnosed from the error alone.
"""

from __future__ import annotations

from dataclasses import dataclass

SCHEMAS: dict[str, tuple[str, ...]] = {
    "phase": (
        "z",
        "bin_low",
        "bin_high",
        "n",
        "n_unknown",
        "cost_p25",
        "cost_p50",
        "cost_p90",
        "p_solvable",
    ),
    "distance": ("d", "n", "mean_cost"),
    "roc": ("fpr", "tpr"),
    "pr": ("recall", "precision"),
}

KINDS = tuple(SCHEMAS)


class SchemaError(ValueError):
    """Input CSV does not match the expected contract."""


@dataclass(frozen=True)
class PhaseRow:
    z: int
    bin_low: float
    bin_high: float
    n: int
    n_unknown: int
    cost_p25: int
    cost_p50: int
    cost_p90: int
    p_solvable: float

    @property
    def underflow(self) -> bool:
        return self.bin_low == float("-inf")

    @property
    def midpoint(self) -> float:
        return (self.bin_low + self.bin_high) / 2


@dataclass(frozen=True)
class DistanceRow:
    d: int
    n: int
    mean_cost: float


@dataclass(frozen=True)
class CurvePoint:
    x: float
    y: float


def split_csv(text: str) -> list[list[str]]:
    """Data lines as cell lists; comments and blank lines dropped."""
    return [
        line.split(",")
        for line in text.splitlines()
        if line and not line.startswith("#")
    ]


def validate_header(kind: str, cells: list[str]) -> None:
    """Exact-order header check with missing/unexpected diagnostics."""
    expected = SCHEMAS[kind]
    if tuple(cells) == expected:
        return
    missing = [name for name in expected if name not in cells]
    unexpected = [name for name in cells if name not in expected]
    problems = []
    if missing:
        problems.append("missing columns: " + ", ".join(missing))
    if unexpected:
        problems.append("unexpected columns: " + ", ".join(unexpected))
    if not problems:
        problems.append(
            "columns out of order: expected " + ",".join(expected)
        )
    raise SchemaError(f"{kind} CSV header mismatch; " + "; ".join(problems))


def _rows(kind: str, text: str) -> list[list[str]]:
    lines = split_csv(text)
    if not lines:
        raise SchemaError(f"{kind} CSV has no header")
    validate_header(kind, lines[0])
    width = len(SCHEMAS[kind])
    for cells in lines[1:]:
        if len(cells) != width:
            raise SchemaError(
                f"{kind} CSV row has {len(cells)} cells, expected {width}: "
                + ",".join(cells)
            )
    return lines[1:]


def _cell(kind: str, convert, value: str):
    try:
        return convert(value)
    except ValueError as exc:
        raise SchemaError(f"{kind} CSV cell {value!r} is not numeric") from exc


def parse_phase(text: str) -> list[PhaseRow]:
    return [
        PhaseRow(
            z=_cell("phase", int, c[0]),
            bin_low=_cell("phase", float, c[1]),
            bin_high=_cell("phase", float, c[2]),
            n=_cell("phase", int, c[3]),
            n_unknown=_cell("phase", int, c[4]),
            cost_p25=_cell("phase", int, c[5]),
            cost_p50=_cell("phase", int, c[6]),
            cost_p90=_cell("phase", int, c[7]),
            p_solvable=_cell("phase", float, c[8]),
        )
        for c in _rows("phase", text)
    ]


def parse_distance(text: str) -> list[DistanceRow]:
    return [
        DistanceRow(
            d=_cell("distance", int, c[0]),
            n=_cell("distance", int, c[1]),
            mean_cost=_cell("distance", float, c[2]),
        )
        for c in _rows("distance", text)
    ]


def parse_curve(kind: str, text: str) -> list[CurvePoint]:
    """roc and pr files share the two-column point layout."""
    if kind not in ("roc", "pr"):
        raise ValueError(f"not a curve kind: {kind!r}")
    return [
        CurvePoint(_cell(kind, float, c[0]), _cell(kind, float, c[1]))
        for c in _rows(kind, text)
    ]
