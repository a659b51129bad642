"""Experiment configuration: a small JSON document, validated up front."""
from __future__ import annotations

import copy
import json
import numbers
from dataclasses import dataclass, field
from pathlib import Path

from .. import suite
from ..config import TOL
from ..errors import ConfigError

MODES = ("validate", "spectrum", "anneal", "qaoa", "end2end")

# knobs with defaults; required ones are listed per mode below
DEFAULTS = {
    "grid_points": 201,
    "refine": None,
    "eps": 0.1,
    "caps": {"T": 100.0, "m": 50, "n": 50},
    "random_checks": 20,
    "richardson": True,
    "shifted": False,
}
REQUIRED = {
    "validate": (),
    "spectrum": (),
    "anneal": ("T_list",),
    "qaoa": ("T", "m", "n_list"),
    "end2end": ("eps",),
}
_POSITIVE = ("T", "m", "eps", "grid_points")
_POSITIVE_LISTS = ("T_list", "n_list")


@dataclass
class ExperimentConfig:
    mode: str
    problem: dict
    knobs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    output: str | None = None
    source: str | None = None

    def get(self, name):
        return self.knobs.get(name, DEFAULTS.get(name))

    def to_json(self) -> dict:
        """Fully resolved config; replaying it reproduces the run."""
        doc = {"mode": self.mode, "problem": copy.deepcopy(self.problem), "seed": self.seed}
        doc.update(copy.deepcopy(self.knobs))
        if self.tolerances:
            doc["tolerances"] = dict(self.tolerances)
        if self.output is not None:
            doc["output"] = self.output
        return doc


def _positive(name, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not value > 0:
        raise ConfigError(f"'{name}' must be a positive number, got {value!r}")


def _check_knobs(mode: str, knobs: dict) -> None:
    missing = [k for k in REQUIRED[mode] if k not in knobs]
    if missing:
        raise ConfigError(f"mode {mode!r} needs {', '.join(missing)}")
    for k in _POSITIVE:
        if k in knobs:
            _positive(k, knobs[k])
    for k in _POSITIVE_LISTS:
        if k in knobs:
            vals = knobs[k]
            if not isinstance(vals, list) or not vals:
                raise ConfigError(f"'{k}' must be a non-empty list")
            for v in vals:
                _positive(k, v)
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise ConfigError(f"'{k}' must be strictly ascending")
    if "n_list" in knobs and any(int(v) != v for v in knobs["n_list"]):
        raise ConfigError("'n_list' entries must be integers")
    if "m" in knobs and int(knobs["m"]) != knobs["m"]:
        raise ConfigError("'m' must be an integer")
    if "caps" in knobs:
        caps = knobs["caps"]
        if not isinstance(caps, dict) or set(caps) - {"T", "m", "n"}:
            raise ConfigError("'caps' must be an object with keys among T, m, n")
        for k, v in caps.items():
            _positive(f"caps.{k}", v)


def _read_json(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def parse_config(doc: dict, mode: str | None = None, base_dir: Path | None = None,
                 source: str | None = None) -> ExperimentConfig:
    """Build a config from a parsed document.

    A run manifest is accepted too (its ``config`` entry is used), so any run
    can be replayed. ``mode`` (from the CLI subcommand) overrides the document.
    """
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    if "config" in doc and "versions" in doc:
        doc = doc["config"]
    doc = copy.deepcopy(doc)
    mode = mode or doc.pop("mode", None)
    doc.pop("mode", None)
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")

    problem = doc.pop("problem", None)
    if isinstance(problem, str) and problem.startswith("builtin:"):
        try:
            problem = suite.problem(problem.split(":", 1)[1])
        except KeyError as exc:
            raise ConfigError(str(exc.args[0])) from None
    elif isinstance(problem, str):
        path = Path(problem)
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        problem = _read_json(path)
    if not isinstance(problem, dict):
        raise ConfigError("'problem' must be an inline object or a path to a JSON file")
    for key in ("mixer", "mixer_kind"):
        if key in doc:
            problem[key] = doc.pop(key)

    tolerances = doc.pop("tolerances", {}) or {}
    if not isinstance(tolerances, dict):
        raise ConfigError("'tolerances' must be an object")
    unknown = set(tolerances) - set(TOL.names())
    if unknown:
        raise ConfigError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")

    seed = doc.pop("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("'seed' must be an integer")
    output = doc.pop("output", None)
    _check_knobs(mode, doc)
    return ExperimentConfig(mode, problem, doc, dict(tolerances), seed, output, source)


def load_config(path, mode: str | None = None) -> ExperimentConfig:
    path = Path(path)
    return parse_config(_read_json(path), mode, base_dir=path.parent, source=str(path))
