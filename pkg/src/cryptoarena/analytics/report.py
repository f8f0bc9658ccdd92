"""Text, CSV and JSON renderings of run summaries, leaderboards and comparisons."""

import csv
import io
import json
from dataclasses import dataclass

from ..wire.service import canonical_json
from .compare import ComparisonReport
from .scoring import DIMENSIONS, RunSummary

FORMATS = ("text", "csv", "json")
SHORT = {"primitive_selection": "Prim", "negotiation": "Neg", "implementation": "Impl",
         "tool_usage": "Tool", "security": "Sec", "overall": "Overall"}


@dataclass
class Leaderboard:
    """Named run summaries; always listed by overall, best first."""
    entries: dict  # label -> RunSummary

    def ordered(self) -> list[tuple[str, RunSummary]]:
        return sorted(self.entries.items(), key=lambda kv: (-kv[1].overall, kv[0]))

    def to_dict(self) -> dict:
        return {"kind": "leaderboard", "entries": [{"label": k, "summary": v.to_dict()} for k, v in self.ordered()]}

    @classmethod
    def from_dict(cls, d: dict) -> "Leaderboard":
        return cls({e["label"]: RunSummary.from_dict(e["summary"]) for e in d["entries"]})


def _f(x, digits=3) -> str:
    return "n/a" if x is None else f"{x:.{digits}f}"


def _signed(x) -> str:
    return f"{x:+.3f}"


def _p(p: float) -> str:
    return f"{p:.3f}" if p >= 0.001 else f"{p:.1e}"


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    line = lambda r: "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
    return "\n".join([line(header), "  ".join("-" * w for w in widths)] + [line(r) for r in rows]) + "\n"


def _summary_rows(s: RunSummary) -> list[list]:
    rows = [[d, s.dimension_means[d], s.dimension_counts[d]] for d in DIMENSIONS]
    return rows + [["overall", s.overall, s.scored_count]]


def _grid(obj) -> tuple[list[str], list[list]]:
    if isinstance(obj, RunSummary):
        return ["series", "mean", "n"], _summary_rows(obj)
    if isinstance(obj, Leaderboard):
        cols = list(DIMENSIONS) + ["overall"]
        return ["model"] + cols, [[k] + [s.dimension_means[d] for d in DIMENSIONS] + [s.overall]
                                  for k, s in obj.ordered()]
    if isinstance(obj, ComparisonReport):
        return (["series", "base", "tuned", "delta", "p_value", "ci_halfwidth", "n_pairs"],
                [[r.series, r.base, r.tuned, r.delta, r.p_value, r.ci_halfwidth, r.n_pairs] for r in obj.rows])
    raise TypeError(f"cannot render {type(obj).__name__}")


def render_report(obj, fmt: str = "text") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if fmt == "json":
        return canonical_json(obj.to_dict()) + "\n"
    header, rows = _grid(obj)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(["" if c is None else repr(c) if isinstance(c, float) else c for c in r])
        return buf.getvalue()
    if isinstance(obj, RunSummary):
        body = _table(["Dimension", "Mean", "N"], [[SHORT[r[0]], _f(r[1]), str(r[2])] for r in rows])
        return body + f"matches: {obj.match_count}  judge failures: {obj.judge_failure_count}\n"
    if isinstance(obj, Leaderboard):
        return _table(["Model"] + [SHORT[c] for c in header[1:]], [[r[0]] + [_f(x) for x in r[1:]] for r in rows])
    return _table(["Metric", obj.base_label, obj.tuned_label, "Delta", "p", "CI95 +/-", "Pairs"],
                  [[SHORT[r.series], _f(r.base), _f(r.tuned), _signed(r.delta), _p(r.p_value),
                    _f(r.ci_halfwidth, 4), str(r.n_pairs)] for r in obj.rows])


def load_report(text: str):
    d = json.loads(text)
    kinds = {"run_summary": RunSummary, "comparison": ComparisonReport, "leaderboard": Leaderboard}
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind not in kinds:
        raise ValueError(f"unrecognised report kind {kind!r}")
    return kinds[kind].from_dict(d)
