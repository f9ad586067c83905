import logging
import numpy
import pathlib
import semver
import yaml

from typing import Any, Dict, List, NamedTuple, Optional, Union

import spincraft

from spincraft import arglib, errors
from spincraft.analysis.ensemble import Distribution
from spincraft.logging import internal_logger
from spincraft.pulse import cycle
from spincraft.pulse.sequence import (
    AdiabaticShape, CslicParams, Sequence, adslic_samples,
    build_adslic, build_cslic, build_slic)
from spincraft.system import SpinSystem


Path = Union[str, pathlib.Path]


def check_version(path: Path, version: Any) -> None:
    """Accept configurations of the same major schema version."""
    major = semver.parse_version_info(spincraft.__configversion__).major
    try:
        accepted = (semver.match(str(version), f">={major}.0.0") and
                    semver.match(str(version), f"<{major + 1}.0.0"))
    except ValueError:
        raise errors.ConfigError(path, f"invalid version {version!r}")
    if not accepted:
        raise errors.ConfigError(
            path, f"version {version} is not compatible with "
                  f"{spincraft.__configversion__}")


def resolve(path: Path) -> pathlib.Path:
    """Fall back to the user recipe directory for relative paths that do
    not exist in the working directory."""
    path = pathlib.Path(path)
    if not path.is_absolute() and not path.exists():
        candidate = spincraft.homepath.joinpath(path)
        if candidate.exists():
            return candidate
    return path


def load(path: Path, logger: logging.Logger = internal_logger) -> Dict:
    """Load and version-check a YAML configuration file."""
    path = resolve(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise errors.ConfigError(path, e.strerror or str(e))
    except yaml.YAMLError as e:
        raise errors.ConfigError(path, f"malformed YAML: {e}")

    if not isinstance(data, dict):
        raise errors.ConfigError(path, "expected a mapping at the top level")
    if "version" not in data:
        raise errors.ConfigError(path, "missing version")
    check_version(path, data["version"])

    logger.info("Loaded configuration %s", path)
    return data


def dump(data: Dict) -> str:
    return yaml.safe_dump(data, default_flow_style=False, sort_keys=False)


def override(data: Dict, **flags) -> Dict:
    """Replace configuration values by the flags that are set.

    Dotted names address nested blocks, e.g. "distribution.width".
    """
    data = dict(data)
    for name, value in flags.items():
        if value is None:
            continue
        *parents, key = name.split(".")
        block = data
        for parent in parents:
            block[parent] = dict(block.get(parent) or {})
            block = block[parent]
        block[key] = value
    return data


def load_system(path: Path, data: Optional[Dict] = None) -> SpinSystem:
    data = load(path) if data is None else data
    if "system" not in data:
        raise errors.ConfigError(path, "missing system block")
    try:
        return SpinSystem.from_dict(**data["system"])
    except (KeyError, TypeError) as e:
        raise errors.ConfigError(path, f"malformed system block: {e}")


def _slic(j_hz, total_s, channel, phase_rad=0.0):
    return build_slic(j_hz, total_s, phase_rad, channel)


def _adslic(j_hz, total_s, channel, delta_max, shape_xi,
            n_samples=adslic_samples, phase_rad=0.0):
    shape = AdiabaticShape(delta_max, shape_xi, total_s, n_samples)
    return build_adslic(shape, j_hz, channel, phase_rad)


def _cslic(j_hz, n_reps, channel, alpha=None, strong_nut_hz=None,
           phase_rad=0.0):
    params = CslicParams.new(j_hz, n_reps, alpha, strong_nut_hz)
    return build_cslic(params, channel, phase_rad)


def _cycle(cycle_text, j_hz, channel, alpha=None, strong_nut_hz=None,
           n_cycles=None, phase_rad=0.0):
    if n_cycles is None:
        return cycle.parse_cycle(cycle_text, j_hz, strong_nut_hz, alpha,
                                 channel, phase_rad)
    return cycle.repeat_cycle(cycle_text, n_cycles, j_hz, strong_nut_hz,
                              alpha, channel, phase_rad)


builders = {
    "slic": _slic,
    "adslic": _adslic,
    "cslic": _cslic,
    "cycle": _cycle,
}


def build_sequence(block: Dict, channel: str, path: Path = "<config>"
                   ) -> Sequence:
    """Build a sequence from a builder block {kind: ..., parameters}."""
    block = dict(block)
    kind = block.pop("kind", None)
    block.pop("channel", None)
    if kind not in builders:
        raise errors.ConfigError(
            path, f"sequence kind {kind!r} is not one of "
                  f"{', '.join(builders)}")
    if "cycle" in block:
        block["cycle_text"] = block.pop("cycle")

    builder = builders[kind]
    kwargs = arglib.filter_callable_arguments(builder, **block)
    unknown = sorted(set(block) - set(kwargs))
    if unknown:
        raise errors.ConfigError(
            path, f"unknown {kind} parameters: {', '.join(unknown)}")
    try:
        return builder(channel=channel, **kwargs)
    except TypeError as e:
        raise errors.ConfigError(path, f"incomplete {kind} block: {e}")


class PipelineConfig(NamedTuple):
    """Heteronuclear transfer experiment.

    Attributes:
        system -- the three-spin system
        seq_h -- sequence on the proton channel
        seq_c -- sequence on the carbon channel
        eps_axis -- rf errors to sweep
        eps_channels -- channels receiving the rf error, None for all
        distribution -- rf inhomogeneity of the sample, if any
        output -- CSV output path, if any
    """

    system: SpinSystem
    seq_h: Sequence
    seq_c: Sequence
    eps_axis: numpy.ndarray
    eps_channels: Optional[List[str]]
    distribution: Optional[Distribution]
    output: Optional[str]


def pipeline_config(data: Dict, path: Path = "<config>") -> PipelineConfig:
    system = load_system(path, data)

    sequences = data.get("sequences") or {}
    for channel in ("H", "C"):
        if channel not in sequences:
            raise errors.ConfigError(path, f"missing sequences.{channel}")

    seq_h = build_sequence(sequences["H"], "H", path)
    seq_c = build_sequence(sequences["C"], "C", path)
    eps_axis = arglib.parse_range(data.get("eps", "0"), "eps")

    eps_channels = data.get("eps_channels")
    if eps_channels is not None:
        if isinstance(eps_channels, str):
            eps_channels = [c for c in eps_channels.split(",") if c]
        for channel in eps_channels:
            if channel not in system.channels:
                raise errors.ChannelError(channel, system.channel_set)
        eps_channels = list(eps_channels)

    distribution = data.get("distribution")
    if distribution is not None:
        try:
            distribution = Distribution.from_dict(**distribution)
        except (KeyError, TypeError) as e:
            raise errors.ConfigError(path, f"malformed distribution: {e}")

    return PipelineConfig(system, seq_h, seq_c, eps_axis, eps_channels,
                          distribution, data.get("output"))
