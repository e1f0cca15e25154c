"""Figure construction from parsed CSV data.

Figures are built on matplotlib Figure objects directly (no pyplot state),
so rendering stays headless and side-effect free. Every drawn data series
is also recorded as a PlottedSeries so tests can compare the plotted
arrays against the CSV instead of comparing pixels.

Phase figures follow the percentile conventions: solid median, dashed
25th, dash-dot 90th percentile on the cost axis, dotted solvable
probability on a secondary [0, 1] axis, x at the bin midpoint. Underflow
rows (order parameter zero) have no finite midpoint and are left out. The
cost axis goes logarithmic when every plotted cost is positive, linear
otherwise. Distance figures draw the solid mean cost with a dashed
vertical boundary at d = 0, where instances stop being guaranteed
solvable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .schemas import KINDS, PhaseRow, parse_curve, parse_distance, parse_phase

# default palette (the common ten-color wheel); one color per series group,
# line styles carry the meaning within a group
PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#bcbd22",
    "#17becf",
)

STYLE_P50 = "-"
STYLE_P25 = "--"
STYLE_P90 = "-."
STYLE_SOLVABLE = ":"

_AXIS_LABELS = {
    "phase": ("log2 order parameter (bin midpoint)", "combinations explored"),
    "distance": ("distance d = z_max - z", "mean combinations explored"),
    "roc": ("false positive rate", "true positive rate"),
    "pr": ("recall", "precision"),
}


@dataclass(frozen=True)
class PlotSpec:
    """One figure request: input file(s), kind, destination, labeling."""

    inputs: tuple[str, ...]
    kind: str
    out: str | None = None
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


@dataclass(frozen=True)
class PlottedSeries:
    """Test hook: the exact arrays one plot call received."""

    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    linestyle: str
    axis: str  # "cost", "probability", or "rate"


@dataclass(frozen=True)
class RenderResult:
    figure: Figure
    series: tuple[PlottedSeries, ...]
    vlines: tuple[tuple[float, str], ...] = field(default=())


def _stem_labels(inputs: tuple[str, ...]) -> list[str]:
    """Empty labels for a single input; file stems when overlaying."""
    if len(inputs) == 1:
        return [""]
    return [Path(path).stem for path in inputs]


def _finish(ax, spec: PlotSpec, title_default: str) -> None:
    xlabel, ylabel = _AXIS_LABELS[spec.kind]
    ax.set_xlabel(spec.xlabel or xlabel)
    ax.set_ylabel(spec.ylabel or ylabel)
    ax.figure.suptitle(spec.title or title_default)


def _render_phase(spec: PlotSpec, texts: list[str]) -> RenderResult:
    fig = Figure(figsize=(8, 5))
    ax_cost = fig.add_subplot()
    ax_prob = ax_cost.twinx()
    ax_prob.set_ylim(0.0, 1.0)
    ax_prob.set_ylabel("solvable probability")

    series: list[PlottedSeries] = []
    group_index = 0
    for text, stem in zip(texts, _stem_labels(spec.inputs)):
        rows = [r for r in parse_phase(text) if not r.underflow]
        by_z: dict[int, list[PhaseRow]] = {}
        for row in rows:
            by_z.setdefault(row.z, []).append(row)
        for z in sorted(by_z):
            group = sorted(by_z[z], key=lambda r: r.bin_low)
            xs = tuple(r.midpoint for r in group)
            color = PALETTE[group_index % len(PALETTE)]
            group_index += 1
            base = f"{stem} z={z}".strip()
            quartets = (
                ("p50", STYLE_P50, tuple(float(r.cost_p50) for r in group), "cost"),
                ("p25", STYLE_P25, tuple(float(r.cost_p25) for r in group), "cost"),
                ("p90", STYLE_P90, tuple(float(r.cost_p90) for r in group), "cost"),
                (
                    "p_solvable",
                    STYLE_SOLVABLE,
                    tuple(r.p_solvable for r in group),
                    "probability",
                ),
            )
            for name, style, ys, axis in quartets:
                target = ax_cost if axis == "cost" else ax_prob
                label = f"{base} {name}"
                target.plot(xs, ys, linestyle=style, color=color, label=label)
                series.append(PlottedSeries(label, xs, ys, style, axis))

    costs = [y for s in series if s.axis == "cost" for y in s.y]
    if costs and all(y > 0 for y in costs):
        ax_cost.set_yscale("log")
    if series:
        handles, labels = ax_cost.get_legend_handles_labels()
        more, more_labels = ax_prob.get_legend_handles_labels()
        ax_cost.legend(handles + more, labels + more_labels, fontsize="small")
    _finish(ax_cost, spec, "search cost across the order parameter")
    return RenderResult(fig, tuple(series))


def _render_distance(spec: PlotSpec, texts: list[str]) -> RenderResult:
    fig = Figure(figsize=(8, 5))
    ax = fig.add_subplot()
    series: list[PlottedSeries] = []
    for index, (text, stem) in enumerate(zip(texts, _stem_labels(spec.inputs))):
        rows = sorted(parse_distance(text), key=lambda r: r.d)
        xs = tuple(float(r.d) for r in rows)
        ys = tuple(r.mean_cost for r in rows)
        label = (stem or "mean cost").strip()
        ax.plot(
            xs,
            ys,
            linestyle=STYLE_P50,
            color=PALETTE[index % len(PALETTE)],
            label=label,
        )
        series.append(PlottedSeries(label, xs, ys, STYLE_P50, "cost"))
    # solvable/insoluble boundary
    ax.axvline(0.0, linestyle="--", color="#444444")
    if series:
        ax.legend(fontsize="small")
    _finish(ax, spec, "search cost against distance from z_max")
    return RenderResult(fig, tuple(series), vlines=((0.0, "--"),))


def _render_curve(spec: PlotSpec, texts: list[str]) -> RenderResult:
    fig = Figure(figsize=(6, 6))
    ax = fig.add_subplot()
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.05)
    series: list[PlottedSeries] = []
    for index, (text, stem) in enumerate(zip(texts, _stem_labels(spec.inputs))):
        points = parse_curve(spec.kind, text)
        xs = tuple(p.x for p in points)
        ys = tuple(p.y for p in points)
        label = (stem or spec.kind).strip()
        ax.plot(
            xs,
            ys,
            linestyle=STYLE_P50,
            color=PALETTE[index % len(PALETTE)],
            label=label,
        )
        series.append(PlottedSeries(label, xs, ys, STYLE_P50, "rate"))
    if series:
        ax.legend(fontsize="small")
    titles = {"roc": "receiver operating characteristic", "pr": "precision-recall"}
    _finish(ax, spec, titles[spec.kind])
    return RenderResult(fig, tuple(series))


def render(spec: PlotSpec) -> RenderResult:
    """Build the figure and the plotted-data record without saving."""
    texts = [
        Path(path).read_text(encoding="utf-8") for path in spec.inputs
    ]
    if spec.kind == "phase":
        return _render_phase(spec, texts)
    if spec.kind == "distance":
        return _render_distance(spec, texts)
    return _render_curve(spec, texts)


def render_to_file(spec: PlotSpec) -> RenderResult:
    """Render and write the image; format follows the file extension."""
    if spec.out is None:
        raise ValueError("render_to_file needs spec.out")
    result = render(spec)
    FigureCanvasAgg(result.figure)
    result.figure.savefig(spec.out)
    return result
