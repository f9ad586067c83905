"""Spin systems and their rotating-frame Hamiltonians.

User-facing parameters are given in Hz, Hamiltonians are returned in
angular frequency units (rad/s).
"""

import itertools
import numpy

from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from spincraft import errors
from spincraft.operators import Operator, angular_momentum, scalar_product


two_pi = 2 * numpy.pi


class SpinSystem:
    """System of coupled spins-1/2.

    Attributes:
        num_spins -- number of spins
        channels -- channel label of every spin (e.g. "H" or "C")
        offsets_hz -- chemically shifted Larmor offsets in Hz
        j_hz -- symmetric matrix of J-couplings in Hz
    """

    def __init__(self, channels: Sequence[str], offsets_hz: Sequence[float],
                 j_hz):
        channels = tuple(str(c) for c in channels)
        num_spins = len(channels)
        if num_spins < 2:
            raise errors.ParameterError("num_spins", num_spins,
                                        "at least two spins are required")

        offsets_hz = numpy.array(offsets_hz, dtype=float)
        if offsets_hz.shape != (num_spins,):
            raise errors.DimensionError(num_spins, offsets_hz.shape)
        if not numpy.all(numpy.isfinite(offsets_hz)):
            raise errors.ParameterError("offsets_hz", offsets_hz.tolist(),
                                        "offsets must be finite")

        j_hz = numpy.array(j_hz, dtype=float)
        if j_hz.shape != (num_spins, num_spins):
            raise errors.DimensionError((num_spins, num_spins), j_hz.shape)
        if not numpy.array_equal(j_hz, j_hz.T):
            raise errors.ParameterError("j_hz", j_hz.tolist(),
                                        "couplings must be symmetric")
        if numpy.any(numpy.diag(j_hz) != 0):
            raise errors.ParameterError("j_hz", j_hz.tolist(),
                                        "diagonal must be zero")

        offsets_hz.setflags(write=False)
        j_hz.setflags(write=False)

        self.channels = channels
        self.offsets_hz = offsets_hz
        self.j_hz = j_hz

    @classmethod
    def new(cls, channels: Sequence[str], offsets_hz: Sequence[float],
            couplings: Mapping[Tuple[int, int], float]) -> "SpinSystem":
        """Create a system from a mapping of 1-based pairs to couplings."""
        num_spins = len(channels)
        j_hz = numpy.zeros((num_spins, num_spins))
        for (j, k), coupling in couplings.items():
            if not (1 <= j <= num_spins and 1 <= k <= num_spins):
                raise errors.SpinIndexError(max(j, k), num_spins)
            j_hz[j-1, k-1] = j_hz[k-1, j-1] = coupling
        return cls(channels, offsets_hz, j_hz)

    @classmethod
    def pair(cls, j_hz: float, delta_hz: float,
             channel: str = "H") -> "SpinSystem":
        """Homonuclear pair with offsets +Δ/2 and -Δ/2."""
        return cls.new([channel, channel], [delta_hz/2, -delta_hz/2],
                       {(1, 2): j_hz})

    @classmethod
    def from_dict(cls, **kwargs) -> "SpinSystem":
        num_spins = int(kwargs["num_spins"])
        channels = kwargs["channels"]
        if len(channels) != num_spins:
            raise errors.DimensionError(num_spins, len(channels))

        pairs = list(itertools.combinations(range(1, num_spins+1), 2))
        upper = list(kwargs.get("j_hz", []))
        if len(upper) != len(pairs):
            raise errors.DimensionError(len(pairs), len(upper))
        return cls.new(channels, kwargs.get("offsets_hz", [0.0]*num_spins),
                       dict(zip(pairs, upper)))

    def asdict(self) -> Dict:
        pairs = itertools.combinations(range(self.num_spins), 2)
        return dict(num_spins=self.num_spins,
                    channels=list(self.channels),
                    offsets_hz=[float(o) for o in self.offsets_hz],
                    j_hz=[float(self.j_hz[j, k]) for j, k in pairs])

    @property
    def num_spins(self) -> int:
        return len(self.channels)

    @property
    def dim(self) -> int:
        return 2 ** self.num_spins

    @property
    def channel_set(self) -> List[str]:
        """Channel labels in the order of first appearance."""
        return list(dict.fromkeys(self.channels))

    def spins_on(self, channel: str) -> List[int]:
        """1-based indices of the spins on the channel."""
        if channel not in self.channels:
            raise errors.ChannelError(channel, self.channel_set)
        return [i+1 for i, c in enumerate(self.channels) if c == channel]

    def coupling(self, j: int, k: int) -> float:
        return float(self.j_hz[j-1, k-1])

    def __repr__(self) -> str:
        return (f"<SpinSystem spins={self.num_spins} "
                f"channels={''.join(self.channels)}>")


class OffsetSetting:
    """Carrier placement of every rf channel in Hz.

    Channels that are not listed sit at zero offset.
    """

    def __init__(self,
                 carrier_offset_hz: Optional[Mapping[str, float]] = None):
        carrier_offset_hz = dict(carrier_offset_hz or {})
        for channel, offset in carrier_offset_hz.items():
            if not numpy.isfinite(offset):
                raise errors.ParameterError(f"carrier offset of {channel}",
                                            offset, "must be finite")
        self.carrier_offset_hz = carrier_offset_hz

    @classmethod
    def on(cls, channel: str, offset_hz: float) -> "OffsetSetting":
        return cls({channel: offset_hz})

    def carrier(self, channel: str) -> float:
        return float(self.carrier_offset_hz.get(channel, 0.0))

    def check(self, system: SpinSystem) -> None:
        for channel in self.carrier_offset_hz:
            if channel not in system.channels:
                raise errors.ChannelError(channel, system.channel_set)

    def __repr__(self) -> str:
        return f"<OffsetSetting {self.carrier_offset_hz}>"


def static_hamiltonian(system: SpinSystem,
                       offsets: Optional[OffsetSetting] = None) -> Operator:
    """Offset and coupling Hamiltonian in the rotating frame.

    Spins of the same channel couple through the isotropic term 2πJ I_j·I_k,
    spins of different channels through the secular term 2πJ I_jz I_kz.
    """
    offsets = offsets or OffsetSetting()
    offsets.check(system)

    n = system.num_spins
    matrix = numpy.zeros((system.dim, system.dim), dtype=complex)

    for j in range(1, n+1):
        omega = two_pi * (system.offsets_hz[j-1] -
                          offsets.carrier(system.channels[j-1]))
        if omega:
            matrix += omega * angular_momentum(n, j, "z").matrix

    for j, k in itertools.combinations(range(1, n+1), 2):
        coupling = system.coupling(j, k)
        if not coupling:
            continue
        if system.channels[j-1] == system.channels[k-1]:
            term = scalar_product(n, j, k).matrix
        else:
            term = (angular_momentum(n, j, "z").matrix @
                    angular_momentum(n, k, "z").matrix)
        matrix += two_pi * coupling * term

    return Operator.hermitian(matrix)


def channel_operators(system: SpinSystem,
                      channel: str) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Sums of I_jx and I_jy over the spins of the channel."""
    spins = system.spins_on(channel)
    n = system.num_spins
    fx = sum(angular_momentum(n, j, "x").matrix for j in spins)
    fy = sum(angular_momentum(n, j, "y").matrix for j in spins)
    return fx, fy


def rf_hamiltonian(system: SpinSystem, channel: str, nut_hz: float,
                   phase_rad: float) -> Operator:
    """Spin-lock Hamiltonian 2π·ν·Σ(cos φ I_jx + sin φ I_jy) of a channel."""
    if nut_hz < 0:
        raise errors.ParameterError("nut_hz", nut_hz, "must not be negative")
    fx, fy = channel_operators(system, channel)
    matrix = two_pi * nut_hz * (numpy.cos(phase_rad) * fx +
                                numpy.sin(phase_rad) * fy)
    return Operator.hermitian(matrix)


def fractional_rf_error(nut_hz: float, nominal_hz: float) -> float:
    """Fractional deviation of the nutation frequency from nominal."""
    if nominal_hz <= 0:
        raise errors.ParameterError("nominal_hz", nominal_hz,
                                    "must be positive")
    return (nut_hz - nominal_hz) / nominal_hz
