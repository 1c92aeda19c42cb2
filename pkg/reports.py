# reports.py - Rendering report models for people and for machines
import json
from enum import Enum
from typing import Any, List

from pydantic import BaseModel

# ---------------------- JSON ----------------------

def to_data(report: BaseModel) -> dict:
    return report.model_dump(mode="json")


def render_json(report: BaseModel) -> str:
    return json.dumps(to_data(report), indent=2, sort_keys=True, ensure_ascii=False)

# ---------------------- TEXT ----------------------

def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "✅ yes" if value else "❌ no"
    if value is None:
        return "-"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        return "[" + ", ".join(str(v) for v in value) + "]"
    return str(value)


def _lines(data: Any, indent: int) -> List[str]:
    pad = "  " * indent
    out: List[str] = []
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if isinstance(value, dict) or (isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value)):
                out.append(f"{pad}{key}:")
                out.extend(_lines(value, indent + 1))
            else:
                out.append(f"{pad}{key}: {_scalar(value)}")
    elif isinstance(data, list):
        for i, item in enumerate(data):
            if isinstance(item, (dict, list)):
                out.append(f"{pad}- [{i}]")
                out.extend(_lines(item, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(item)}")
    else:
        out.append(f"{pad}{_scalar(data)}")
    return out


def render_text(report: BaseModel, title: str) -> str:
    data = to_data(report)
    header = f"📐 {title}"
    if "verdict" in data and data["verdict"] is not None:
        header += f": {data['verdict']}"
    return "\n".join([header, *_lines(data, 1)])


def render(report: BaseModel, title: str, as_json: bool = False) -> str:
    return render_json(report) if as_json else render_text(report, title)
