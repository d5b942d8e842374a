#!/usr/bin/env python3
"""
Experiment configuration files

A file is a list of ``section.key = value`` lines; ``#`` starts a comment.
Sections are topology, scenario, placement and run. Every key is optional
and unknown keys are rejected.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import settings
from .chain.types import ObjectiveWeights, VnfKind
from .network.types import TopologyConfig
from .placement.types import Algorithm, PlacementParams
from .simulator.scenarios import ScenarioConfig, ScenarioKind
from .solvers.types import LoadMode

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Unreadable or invalid experiment file"""


def _split_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class TopologySection(_Section):
    """Tree-to-star FiWi network"""
    ecn_count: int = Field(settings.ECN_COUNT, ge=1, description="Edge computing nodes")
    tree_depth: int = Field(settings.TREE_DEPTH, ge=0, description="Switch tree depth below the root")
    tree_fanout: int = Field(settings.TREE_FANOUT, ge=1, description="Children per switch")
    star_leaves_per_hub: int = Field(settings.STAR_LEAVES_PER_HUB, ge=1,
                                     description="ECN slots per FiWi hub")
    optical_bandwidth: float = Field(settings.OPTICAL_BANDWIDTH, gt=0, description="bits/s per fiber link")
    wireless_bandwidth: float = Field(settings.WIRELESS_BANDWIDTH, gt=0,
                                      description="bits/s per wireless channel")
    wireless_channels: int = Field(settings.WIRELESS_CHANNELS, ge=1, description="Channels per hub")
    compute_capacity_mean: float = Field(settings.COMPUTE_CAPACITY_MEAN, gt=0,
                                         description="Mean ECN capacity, cycles/s")
    compute_capacity_spread: float = Field(settings.COMPUTE_CAPACITY_SPREAD, ge=0,
                                           description="Uniform half-width of ECN capacity")
    switch_capacity: float = Field(settings.SWITCH_CAPACITY, gt=0, description="Flow-table entries")
    optical_prop_delay: float = Field(settings.OPTICAL_PROP_DELAY, ge=0, description="seconds")
    wireless_prop_delay: float = Field(settings.WIRELESS_PROP_DELAY, ge=0, description="seconds")
    ecn_interconnect: bool = Field(settings.ECN_INTERCONNECT, description="Fiber ring between ECNs")
    rng_seed: int = Field(settings.TOPOLOGY_SEED, description="Capacity draw seed")


class ScenarioSection(_Section):
    """Request stream; unset keys take the defaults of the chosen kind"""
    kind: ScenarioKind = Field(ScenarioKind.DATA_INTENSIVE,
                               description="data_intensive or user_intensive")
    chain_len_range: Optional[Tuple[int, int]] = Field(None, description="VNFs per chain, min,max")
    cpu_demand_range: Optional[Tuple[float, float]] = Field(None, description="cycles per VNF, min,max")
    data_size_range: Optional[Tuple[float, float]] = Field(None, description="bytes per chain, min,max")
    request_counts: Optional[List[int]] = Field(None, description="Snapshot points, comma list")
    delay_bound: Optional[float] = Field(None, gt=0, description="End-to-end bound, seconds")
    transfer_window: Optional[float] = Field(None, gt=0,
                                             description="bandwidth_demand = data_size * 8 / window")
    catalog: List[str] = Field(list(settings.VNF_CATALOG), min_length=1, description="VNF kinds")

    @field_validator("chain_len_range", "cpu_demand_range", "data_size_range",
                     "request_counts", "catalog", mode="before")
    @classmethod
    def _comma_lists(cls, value: Any) -> Any:
        return _split_list(value)

    @field_validator("request_counts")
    @classmethod
    def _nonnegative_counts(cls, value: Optional[List[int]]) -> Optional[List[int]]:
        if value is not None and (not value or min(value) < 0):
            raise ValueError("request counts must be a nonempty list of nonnegative integers")
        return value


class PlacementSection(_Section):
    """Algorithm knobs"""
    max_paths: int = Field(settings.MAX_PATHS, ge=1, description="MP, instances/paths per stage")
    candidate_pool_size: Optional[int] = Field(None, ge=1, description="Candidates per stage (MP when unset)")
    alpha: float = Field(settings.OBJECTIVE_WEIGHTS[0], ge=0, description="ECN imbalance weight")
    beta: float = Field(settings.OBJECTIVE_WEIGHTS[1], ge=0, description="Link imbalance weight")
    gamma: float = Field(settings.OBJECTIVE_WEIGHTS[2], ge=0, description="Switch imbalance weight")
    bisection_tol: float = Field(settings.BISECTION_TOL, gt=0, description="Relative to split demand")
    load_mode: LoadMode = Field(LoadMode.UTILIZATION, description="GBMP split load term")
    ksmp_hop_cost: float = Field(settings.KSMP_HOP_COST, ge=0, description="KSMP per-link base cost")
    ilps_exact_ecns: int = Field(settings.ILPS_EXACT_ECNS, ge=1,
                                 description="ILPS exact search up to this many ECNs")
    ilps_exact_stages: int = Field(settings.ILPS_EXACT_STAGES, ge=1,
                                   description="ILPS exact search up to this many stages")
    ilps_beam_width: int = Field(settings.ILPS_BEAM_WIDTH, ge=1, description="ILPS beam width")
    ilps_incumbent_width: int = Field(settings.ILPS_INCUMBENT_WIDTH, ge=1,
                                      description="ILPS beam seeding the exact search")

    @model_validator(mode="after")
    def _some_weight(self) -> "PlacementSection":
        if self.alpha + self.beta + self.gamma <= 0:
            raise ValueError("at least one of alpha, beta, gamma must be positive")
        return self


class RunSection(_Section):
    """Sweep and output"""
    algorithms: List[Algorithm] = Field(list(Algorithm), min_length=1,
                                        description="Comma list of gbmp, ksmp, ecmp, ilps")
    seeds: List[int] = Field(list(settings.DEFAULT_SEEDS), min_length=1,
                             description="Request stream seeds")
    out_dir: str = Field(settings.OUTPUT_DIR, description="Output directory")
    plots: bool = Field(False, description="Write SVG figures")
    record_timing: bool = Field(False, description="Write wall-clock ms (breaks byte-identical reruns)")
    workers: int = Field(settings.MAX_WORKERS, ge=1, description="Worker processes")

    @field_validator("algorithms", "seeds", mode="before")
    @classmethod
    def _comma_lists(cls, value: Any) -> Any:
        return _split_list(value)


class ExperimentConfig(_Section):
    """One experiment file"""
    topology: TopologySection = Field(default_factory=TopologySection)
    scenario: ScenarioSection = Field(default_factory=ScenarioSection)
    placement: PlacementSection = Field(default_factory=PlacementSection)
    run: RunSection = Field(default_factory=RunSection)

    def topology_config(self) -> TopologyConfig:
        return TopologyConfig(**self.topology.model_dump())

    def scenario_config(self) -> ScenarioConfig:
        values = self.scenario.model_dump(exclude={"kind", "catalog"}, exclude_none=True)
        values["catalog"] = tuple(VnfKind(label) for label in self.scenario.catalog)
        return ScenarioConfig.for_kind(self.scenario.kind, rng_seed=self.run.seeds[0], **values)

    def placement_params(self) -> PlacementParams:
        p = self.placement
        return PlacementParams(
            max_paths=p.max_paths,
            weights=ObjectiveWeights(p.alpha, p.beta, p.gamma),
            candidate_pool_size=p.candidate_pool_size,
            bisection_tol=p.bisection_tol,
            load_mode=p.load_mode,
            ksmp_hop_cost=p.ksmp_hop_cost,
            ilps_exact_ecns=p.ilps_exact_ecns,
            ilps_exact_stages=p.ilps_exact_stages,
            ilps_beam_width=p.ilps_beam_width,
            ilps_incumbent_width=p.ilps_incumbent_width,
        )


SECTIONS = {
    "topology": TopologySection,
    "scenario": ScenarioSection,
    "placement": PlacementSection,
    "run": RunSection,
}


def _read_lines(text: str) -> Tuple[Dict[str, Dict[str, str]], Dict[str, int]]:
    values: Dict[str, Dict[str, str]] = {name: {} for name in SECTIONS}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not value or name.count(".") != 1:
            raise ConfigError(f"line {number}: expected 'section.key = value', got {raw.strip()!r}")
        section, key = name.split(".")
        if section not in SECTIONS:
            raise ConfigError(f"line {number}: unknown section {section!r} in {name}")
        if key not in SECTIONS[section].model_fields:
            raise ConfigError(f"line {number}: unknown key {name}")
        if name in lines:
            raise ConfigError(f"line {number}: {name} already set on line {lines[name]}")
        values[section][key] = value
        lines[name] = number
    return values, lines


def parse_config_text(text: str) -> ExperimentConfig:
    """Parse experiment file contents; see ``parse_config``"""
    values, lines = _read_lines(text)
    sections = {}
    for section, model in SECTIONS.items():
        try:
            sections[section] = model(**values[section])
        except ValidationError as e:
            error = e.errors()[0]
            key = f"{section}.{error['loc'][0]}" if error["loc"] else section
            where = f"line {lines[key]}: " if key in lines else ""
            raise ConfigError(f"{where}{key}: {error['msg']}") from e
    config = ExperimentConfig(**sections)

    # Cross-field checks the dataclasses own
    try:
        config.topology_config()
        config.scenario_config()
        config.placement_params()
    except ValueError as e:
        raise ConfigError(str(e)) from e
    return config


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read an experiment file

    Args:
        path: File of ``section.key = value`` lines

    Returns:
        ExperimentConfig with defaults for every unset key

    Raises:
        ConfigError: missing file, malformed line, unknown key or invalid value
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    config = parse_config_text(text)
    logger.info(f"Loaded experiment config from {path}")
    return config


def _format_value(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(v) for v in value)
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def format_defaults() -> str:
    """Every key with its default and description, in experiment file syntax"""
    out = []
    for section, model in SECTIONS.items():
        out.append(f"# {section}: {model.__doc__}")
        for key, info in model.model_fields.items():
            default = info.get_default(call_default_factory=True)
            line = f"{section}.{key} = {_format_value(default)}"
            if default is None:
                line = f"# {section}.{key} ="
            out.append(f"{line}  # {info.description}")
        out.append("")
    return "\n".join(out)
