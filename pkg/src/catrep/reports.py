"""Report assembly and serialization: versioned JSON and aligned text.

Every numeric block carries its validity horizon; JSON output is produced
with sorted keys so fixed inputs give byte-identical bytes.
"""

from __future__ import annotations

import json


JSON_VERSION = 1


def make_report(command: str, config: dict, items: list) -> dict:
    return {
        "version": JSON_VERSION,
        "command": command,
        "config": config,
        "items": items,
    }


def dims_item(name: str, dims, valid_to: int, **extra) -> dict:
    item = {"type": "dims", "name": name, "dims": list(dims), "valid_to": valid_to}
    item.update(extra)
    return item


def value_item(name: str, value, valid_to=None, **extra) -> dict:
    item = {"type": "value", "name": name, "value": value}
    if valid_to is not None:
        item["valid_to"] = valid_to
    item.update(extra)
    return item


def check_item(name: str, status: str, detail: str = "", **extra) -> dict:
    item = {"type": "check", "name": name, "status": status, "detail": detail}
    item.update(extra)
    return item


def to_json(report: dict) -> str:
    doc = {k: v for k, v in report.items() if k not in ("command", "config") or v}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def to_text(report: dict) -> str:
    lines = [f"# {report['command']}"]
    cfg = report.get("config", {})
    if cfg:
        lines.append("  " + "  ".join(f"{k}={v}" for k, v in sorted(cfg.items())))
    width = max((len(str(item.get("name", ""))) for item in report["items"]), default=0)
    for item in report["items"]:
        name = str(item.get("name", "")).ljust(width)
        kind = item.get("type")
        if kind == "dims":
            lines.append(
                f"{name}  dims={item['dims']}  (valid to degree {item['valid_to']})"
            )
        elif kind == "value":
            suffix = f"  (valid to degree {item['valid_to']})" if "valid_to" in item else ""
            lines.append(f"{name}  {item['value']}{suffix}")
        elif kind == "check":
            detail = f"  {item['detail']}" if item.get("detail") else ""
            lines.append(f"{name}  [{item['status'].upper()}]{detail}")
        else:
            lines.append(f"{name}  {json.dumps(item, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown format {fmt!r}")
