"""Reading and writing scenario files.

A scenario file is a UTF-8 JSON document::

    {"scenarios": [{"name": "case 1", "r1": 0.1, ..., "n11": 100, "n12": 100}]}

Every economic field is required; there are no defaults.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .decision import PARAM_FIELDS, ScenarioParams
from .errors import InvalidScenarioError


class ScenarioFileError(ValueError):
    """The scenario document cannot be parsed or fails validation."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None,
                 scenario: str | None = None):
        super().__init__(message)
        self.line = line
        self.field = field
        self.scenario = scenario


@dataclass(frozen=True)
class NamedScenario:
    name: str
    params: ScenarioParams


def parse_scenarios(text: str) -> list[NamedScenario]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFileError(
            f"line {exc.lineno}, column {exc.colno}: invalid JSON: {exc.msg}", line=exc.lineno
        ) from None
    if not isinstance(doc, dict) or "scenarios" not in doc:
        raise ScenarioFileError("top level must be an object with a 'scenarios' array", field="scenarios")
    entries = doc["scenarios"]
    if not isinstance(entries, list):
        raise ScenarioFileError("'scenarios' must be an array", field="scenarios")

    result: list[NamedScenario] = []
    seen: set[str] = set()
    for index, entry in enumerate(entries):
        where = f"scenario #{index}"
        if not isinstance(entry, dict):
            raise ScenarioFileError(f"{where}: must be an object")
        name = entry.get("name")
        if not isinstance(name, str) or not name.strip():
            raise ScenarioFileError(f"{where}: field 'name' must be a non-empty string", field="name")
        where = f"scenario #{index} ({name!r})"
        if name in seen:
            raise ScenarioFileError(f"{where}: duplicate name", field="name", scenario=name)
        seen.add(name)

        unknown = sorted(set(entry) - set(PARAM_FIELDS) - {"name"})
        if unknown:
            raise ScenarioFileError(f"{where}: unknown field '{unknown[0]}'", field=unknown[0], scenario=name)
        values: dict[str, float] = {}
        for key in PARAM_FIELDS:
            if key not in entry:
                raise ScenarioFileError(f"{where}: missing field '{key}'", field=key, scenario=name)
            raw = entry[key]
            if isinstance(raw, bool) or not isinstance(raw, (int, float)):
                raise ScenarioFileError(f"{where}: field '{key}' must be a number, got {raw!r}",
                                        field=key, scenario=name)
            values[key] = float(raw)
        params = ScenarioParams(**values)
        try:
            params.validate(name)
        except InvalidScenarioError as exc:
            raise ScenarioFileError(f"{where}: {exc}", field=exc.field, scenario=name) from None
        result.append(NamedScenario(name, params))
    return result


def load_scenarios(path: str | Path) -> list[NamedScenario]:
    text = Path(path).read_text(encoding="utf-8")
    return parse_scenarios(text)


def dump_scenarios(scenarios: list[NamedScenario]) -> str:
    """Serialize scenarios; floats are written with ``repr`` so they re-parse bit-for-bit."""
    docs = []
    for item in scenarios:
        entry: dict[str, object] = {"name": item.name}
        for key in PARAM_FIELDS:
            value = float(getattr(item.params, key))
            if not math.isfinite(value):
                raise ValueError(f"cannot serialize non-finite {key}={value!r}")
            entry[key] = value
        docs.append(entry)
    return json.dumps({"scenarios": docs}, indent=2, ensure_ascii=False) + "\n"
