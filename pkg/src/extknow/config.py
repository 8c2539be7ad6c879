"""Pipeline configuration: a TOML/JSON file merged with command-line overrides.

File layout (TOML shown; JSON uses the same nesting)::

    log_level = "INFO"

    [paths]
    doc_dump = "docs.jsonl"
    ann_train = "conala-train.json"
    ann_dev = "conala-dev.json"
    ann_test = "conala-test.json"
    mined = "conala-mined.jsonl"
    out_dir = "out"

    [plan]
    k = 1
    tau = 2.0
    target = "code"
    strategy = "dist"
    seed = 0

    [strategy]
    label = "man_mine_api"
    mined_top_k = 100000
    api_source = "dist"

Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from extknow.corpus import API_SOURCES, LABELS, DataStrategy
from extknow.errors import ConfigError
from extknow.resample import DIRECT_K, STRATEGIES, ResamplePlan

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PATH_KEYS = ("doc_dump", "ann_train", "ann_dev", "ann_test", "mined",
             "api_pairs", "sampled_pairs", "index", "out_dir")


@dataclass
class Paths:
    doc_dump: Optional[Path] = None
    ann_train: Optional[Path] = None
    ann_dev: Optional[Path] = None
    ann_test: Optional[Path] = None
    mined: Optional[Path] = None
    api_pairs: Optional[Path] = None
    sampled_pairs: Optional[Path] = None
    index: Optional[Path] = None
    out_dir: Path = Path("out")

    def output(self, name: str) -> Path:
        return self.out_dir / name

    def resolved_api_pairs(self) -> Path:
        return self.api_pairs or self.output("api_pairs.jsonl")

    def resolved_sampled_pairs(self) -> Path:
        return self.sampled_pairs or self.output("sampled_api_pairs.jsonl")


@dataclass
class PipelineConfig:
    paths: Paths = field(default_factory=Paths)
    plan: dict[str, Any] = field(default_factory=dict)
    strategy: dict[str, Any] = field(default_factory=dict)
    log_level: str = "INFO"

    def resample_plan(self) -> ResamplePlan:
        d = dict(self.plan)
        strat = d.get("strategy", "dist")
        if strat == "raw":
            raise ConfigError("strategy 'raw' has no re-sampling step")
        if d.get("k") is None:
            d["k"] = DIRECT_K if strat == "direct" else 1
        return ResamplePlan.from_mapping(d)

    def data_strategy(self) -> DataStrategy:
        d = dict(self.strategy)
        try:
            return DataStrategy(**d)
        except TypeError as exc:
            raise ConfigError(f"bad [strategy] section: {exc}") from exc

    def require(self, *names: str) -> None:
        """Fail with :class:`ConfigError` unless every named input exists."""
        for name in names:
            p = getattr(self.paths, name)
            if p is None:
                raise ConfigError(f"missing required path: {name}")
            if not Path(p).is_file():
                raise ConfigError(f"{name}: no such file {p}")

    def prepare_out_dir(self) -> Path:
        out = self.paths.out_dir
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output dir {out}: {exc}") from exc
        if not os.access(out, os.W_OK):
            raise ConfigError(f"output dir {out} is not writable")
        return out

    def describe(self) -> dict:
        """Path-free view for manifests, so outputs do not depend on where they were written."""
        return {"plan": dict(sorted(self.plan.items())),
                "strategy": dict(sorted(self.strategy.items()))}


def read_config_file(path) -> dict:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix == ".toml":
            return tomllib.loads(raw.decode("utf-8"))
        return json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc


def build_config(file_data: Optional[Mapping] = None, base_dir: Optional[Path] = None,
                 overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    """Merge file contents with flag overrides; flags win. ``None`` overrides are ignored."""
    data = dict(file_data or {})
    unknown = set(data) - {"paths", "plan", "strategy", "log_level"}
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    paths_in = dict(data.get("paths", {}))
    plan = dict(data.get("plan", {}))
    strategy = dict(data.get("strategy", {}))
    log_level = data.get("log_level", "INFO")

    bad = set(paths_in) - set(PATH_KEYS)
    if bad:
        raise ConfigError(f"unknown path keys: {sorted(bad)}")
    base = base_dir or Path(".")
    paths = Paths(**{k: base / v for k, v in paths_in.items()})

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in PATH_KEYS:
            setattr(paths, key, Path(value))
        elif key == "strategy_name":
            # one flag drives both the re-sampling method and the api source
            if value == "raw":
                strategy["api_source"] = "raw"
            else:
                plan["strategy"] = value
                strategy["api_source"] = value
        elif key == "label":
            strategy["label"] = value
        elif key == "mined_top_k":
            strategy["mined_top_k"] = value
        elif key in ("k", "tau", "target", "sample_size", "seed"):
            plan[key] = value
        elif key == "log_level":
            log_level = value
        else:
            raise ConfigError(f"unknown override {key!r}")

    if plan.get("tau") in ("inf", "infinity") or plan.get("tau") == math.inf:
        plan["tau"] = "inf"
    if strategy.get("label", "man_mine_api") != "man_mine_api":
        strategy.setdefault("api_source", "none")
        if strategy["api_source"] != "none":
            raise ConfigError(
                f"strategy label {strategy['label']!r} takes no api source "
                f"(got {strategy['api_source']!r})")
    for name, allowed in (("label", LABELS), ("api_source", API_SOURCES)):
        if name in strategy and strategy[name] not in allowed:
            raise ConfigError(f"{name} must be one of {allowed}")
    if "strategy" in plan and plan["strategy"] not in STRATEGIES:
        raise ConfigError(f"plan strategy must be one of {STRATEGIES}")
    return PipelineConfig(paths=paths, plan=plan, strategy=strategy, log_level=log_level)


def load_config(path=None, overrides: Optional[Mapping[str, Any]] = None) -> PipelineConfig:
    if path is None:
        return build_config(None, None, overrides)
    path = Path(path)
    return build_config(read_config_file(path), path.parent, overrides)
