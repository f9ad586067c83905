from spincraft.pulse.sequence import (
    AdiabaticShape, CslicParams, PulseSegment, Sequence,
    adslic_amplitude, build_adslic, build_cslic, build_slic,
    deserialize_sequence, optimal_repetitions, serialize_sequence,
    slic_duration)
from spincraft.pulse.cycle import (
    expand_cycle, parse_cycle, repeat_cycle)
from spincraft.pulse.catalog import MatchingCondition, matching_catalog


__all__ = [
    "AdiabaticShape",
    "CslicParams",
    "MatchingCondition",
    "PulseSegment",
    "Sequence",
    "adslic_amplitude",
    "build_adslic",
    "build_cslic",
    "build_slic",
    "deserialize_sequence",
    "expand_cycle",
    "matching_catalog",
    "optimal_repetitions",
    "parse_cycle",
    "repeat_cycle",
    "serialize_sequence",
    "slic_duration",
]
