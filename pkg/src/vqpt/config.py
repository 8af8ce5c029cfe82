"""Experiment configuration: JSON schema, validation and flag overrides.

Example::

    {
      "target": {"kind": "xxz", "J": 1.0, "Delta": 1.0, "h": 0.1, "dt": 0.01},
      "n": 2, "d": 2, "N": 4,
      "pattern": "ladder",
      "trials": 20,
      "master_seed": 0,
      "validation_size": null,
      "num_cz": null,
      "shots": null,
      "optimizer": {"method": "adam", "learning_rate": 0.01, "max_epochs": 2000},
      "progress_every": 0,
      "output_dir": "runs/xxz-2"
    }

``target.kind`` is ``"xxz"`` (fields J, Delta, h, dt) or ``"rqc"`` (fields D,
seed). ``validation_size``/``num_cz`` default to N and n; ``shots`` null means
exact SWAP-test statistics.
"""
from __future__ import annotations

import copy
import json
import re
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from .ansatz import PATTERNS
from .simcore import MAX_QUBITS, CapacityError
from .targets import RQCParams, XXZParams
from .training import OptimizerConfig

SCHEMA_VERSION = 1

_XXZ_KEYS = {"kind", "n", "J", "Delta", "h", "dt"}
_RQC_KEYS = {"kind", "n", "D", "seed"}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    target: dict
    n: int
    d: int
    N: int
    trials: int = 100
    master_seed: int = 0
    pattern: str = "ladder"
    validation_size: Optional[int] = None
    num_cz: Optional[int] = None
    shots: Optional[int] = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    progress_every: int = 0
    output_dir: str = "vqpt-output"

    @property
    def target_kind(self) -> str:
        return self.target["kind"]

    def target_params(self):
        extra = {k: v for k, v in self.target.items() if k not in ("kind", "n")}
        if self.target_kind == "xxz":
            return XXZParams(self.n, **extra)
        return RQCParams(self.n, **extra)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["schema_version"] = SCHEMA_VERSION
        return out


def _line_of(text: str, key: str) -> Optional[int]:
    if not text:
        return None
    match = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, match.start()) + 1 if match else None


def _fail(msg: str, text: str = "", key: Optional[str] = None):
    line = _line_of(text, key) if key else None
    where = f"line {line}: " if line else ""
    raise ConfigError(where + msg)


def _int(data, key, text, minimum=None, optional=False):
    value = data.get(key)
    if value is None and optional:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"{key!r} must be an integer, got {value!r}", text, key)
    if minimum is not None and value < minimum:
        _fail(f"{key!r} must be >= {minimum}, got {value}", text, key)
    return value


def from_dict(data: dict, text: str = "") -> ExperimentConfig:
    """Validate a parsed config; ``text`` (the raw JSON) lets errors cite line numbers."""
    if not isinstance(data, dict):
        _fail("config must be a JSON object")
    known = {f.name for f in fields(ExperimentConfig)} | {"schema_version"}
    for key in data:
        if key not in known:
            _fail(f"unknown field {key!r}", text, key)
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})", text, "schema_version")
    for key in ("target", "n", "d", "N"):
        if key not in data:
            _fail(f"missing required field {key!r}")

    n = _int(data, "n", text, 1)
    if n > MAX_QUBITS:
        raise CapacityError(f"n = {n} exceeds the limit of {MAX_QUBITS} qubits")
    d = _int(data, "d", text, 0)
    size = _int(data, "N", text, 1)
    trials = _int(data, "trials", text, 1) if "trials" in data else 100
    seed = _int(data, "master_seed", text, 0) if "master_seed" in data else 0
    validation_size = _int(data, "validation_size", text, 1, optional=True)
    num_cz = _int(data, "num_cz", text, 0, optional=True)
    shots = _int(data, "shots", text, 1, optional=True)
    progress = _int(data, "progress_every", text, 0) if "progress_every" in data else 0

    target = data["target"]
    if not isinstance(target, dict) or target.get("kind") not in ("xxz", "rqc"):
        _fail("'target' must be an object with kind 'xxz' or 'rqc'", text, "target")
    allowed = _XXZ_KEYS if target["kind"] == "xxz" else _RQC_KEYS
    for key in target:
        if key not in allowed:
            _fail(f"unknown {target['kind']} target field {key!r}", text, key)
    if "n" in target and target["n"] != n:
        _fail(f"target n = {target['n']} disagrees with n = {n}", text, "target")
    for key in target:
        if key != "kind" and (isinstance(target[key], bool) or not isinstance(target[key], (int, float))):
            _fail(f"target field {key!r} must be a number", text, key)

    pattern = data.get("pattern", "ladder")
    if pattern not in PATTERNS:
        _fail(f"unknown pattern {pattern!r}; choose from {sorted(PATTERNS)}", text, "pattern")

    opt = data.get("optimizer", {})
    if not isinstance(opt, dict):
        _fail("'optimizer' must be an object", text, "optimizer")
    opt_keys = {f.name for f in fields(OptimizerConfig)}
    for key in opt:
        if key not in opt_keys:
            _fail(f"unknown optimizer field {key!r}", text, key)
    if shots is not None and "shots" not in opt:
        opt = {**opt, "shots": shots}
    try:
        optimizer = OptimizerConfig(**opt)
    except (TypeError, ValueError) as err:
        _fail(f"optimizer: {err}", text, "optimizer")

    cfg = ExperimentConfig(
        target=dict(target), n=n, d=d, N=size, trials=trials, master_seed=seed, pattern=pattern,
        validation_size=validation_size, num_cz=num_cz, shots=shots, optimizer=optimizer,
        progress_every=progress, output_dir=str(data.get("output_dir", "vqpt-output")),
    )
    try:
        cfg.target_params()
    except (TypeError, ValueError) as err:
        _fail(f"target: {err}", text, "target")
    return cfg


def load(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: line {err.lineno} column {err.colno}: {err.msg}") from err
    try:
        return from_dict(data, text)
    except ConfigError as err:
        raise ConfigError(f"{path}: {err}") from err


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Return a re-validated copy with top-level (or target ``dt``) fields replaced; ``None`` skips."""
    data = copy.deepcopy(cfg.to_dict())
    for key, value in overrides.items():
        if value is None:
            continue
        if key == "dt":
            if cfg.target_kind != "xxz":
                raise ConfigError("dt only applies to xxz targets")
            data["target"]["dt"] = value
        elif key == "n":
            data["n"] = value
            data["target"].pop("n", None)
        elif key in ("learning_rate", "max_epochs"):
            data["optimizer"][key] = value
        else:
            data[key] = value
    return from_dict(data)
