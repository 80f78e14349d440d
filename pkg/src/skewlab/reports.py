"""Report assembly and rendering.

JSON output is canonical: sorted keys, two-space indent, and nothing
that varies between identical runs (no timestamps, no durations), so
byte-level comparison is a meaningful determinism check.  Text output
is for people; it may carry timing and is not a stability surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

TOOL_NAME = "skewlab"
TOOL_VERSION = "0.1.0"


@dataclass
class Report:
    command: str
    scenario: str
    seed: int
    records: list
    meta: dict = field(default_factory=dict)

    def exit_code(self) -> int:
        """0 when every record completed, 2 when any errored or failed.

        Honest negative verdicts (not-central, unknown, holds-on-pool)
        are completed analyses and exit 0.
        """
        for rec in self.records:
            if rec.get("status") not in ("ok",):
                return 2
        return 0

    def as_dict(self) -> dict:
        return {
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "command": self.command,
            "scenario": self.scenario,
            "seed": self.seed,
            "records": self.records,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self, elapsed: float | None = None) -> str:
        lines = [f"== {TOOL_NAME} {self.command}: {self.scenario} =="]
        head = f"seed {self.seed} | records {len(self.records)}"
        if elapsed is not None:
            head += f" | elapsed {elapsed:.2f}s"
        lines.append(head)
        for i, rec in enumerate(self.records):
            lines.append("-" * 60)
            status = rec.get("status", "?")
            label = rec.get("op") or rec.get("example", "record")
            where = f" [{rec['twist']} on {rec['ring']}]" if "twist" in rec else ""
            lines.append(f"record {i + 1}: {label}{where} -> {status}")
            body = {
                k: v
                for k, v in rec.items()
                if k not in ("op", "twist", "ring", "status")
            }
            lines.extend(_render_value(body, 1))
        lines.append("-" * 60)
        code = self.exit_code()
        lines.append(f"result: {'all records completed' if code == 0 else 'failures present'}")
        return "\n".join(lines) + "\n"


def _render_value(v, depth: int) -> list[str]:
    pad = "  " * depth
    out: list[str] = []
    if isinstance(v, dict):
        for k in v:
            val = v[k]
            if isinstance(val, (dict, list)) and val and not _is_flat_list(val):
                out.append(f"{pad}{k}:")
                out.extend(_render_value(val, depth + 1))
            else:
                out.append(f"{pad}{k}: {_inline(val)}")
        return out
    if isinstance(v, list):
        for item in v:
            if isinstance(item, (dict, list)) and item and not _is_flat_list(item):
                out.append(f"{pad}-")
                out.extend(_render_value(item, depth + 1))
            else:
                out.append(f"{pad}- {_inline(item)}")
        return out
    return [f"{pad}{_inline(v)}"]


def _is_flat_list(v) -> bool:
    return isinstance(v, list) and all(
        not isinstance(x, (dict, list)) for x in v
    )


def _inline(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return str(v)


def render_report(report: Report, fmt: str, elapsed: float | None = None) -> str:
    if fmt == "json":
        return report.to_json()
    if fmt == "text":
        return report.to_text(elapsed=elapsed)
    raise ValueError(f"unknown format {fmt!r}")
