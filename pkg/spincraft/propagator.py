"""Unitary propagators of piecewise-constant Hamiltonians and first-order
average Hamiltonians in the toggling frame of the spin-lock."""

import logging
import numpy
import scipy.linalg

from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

from spincraft import errors
from spincraft.logging import internal_logger
from spincraft.operators import Operator, Role, angular_momentum
from spincraft.pulse.sequence import PulseSegment, Sequence
from spincraft.system import (
    OffsetSetting, SpinSystem, channel_operators, static_hamiltonian, two_pi)


RfError = Union[float, Mapping[str, float]]


def _exp(matrix: numpy.ndarray, duration_s: float) -> numpy.ndarray:
    w, v = scipy.linalg.eigh(matrix)
    return (v * numpy.exp(-1j * w * duration_s)) @ v.conj().T


def segment_propagator(h: Operator, duration_s: float) -> Operator:
    """Return exp(-i H t) computed from the eigendecomposition of H."""
    if h.role is not Role.Hermitian and not h.is_hermitian():
        raise errors.HermiticityError(
            float(numpy.max(numpy.abs(h.matrix - h.matrix.conj().T))))
    if duration_s < 0:
        raise errors.ParameterError("duration_s", duration_s,
                                    "must not be negative")
    if duration_s == 0:
        return Operator.identity(h.dim)
    return Operator(_exp(h.matrix, duration_s), Role.Unitary)


def rf_scale(eps_rf: RfError, channel: str) -> float:
    """Amplitude scaling 1 + ε of the channel."""
    if isinstance(eps_rf, Mapping):
        return 1.0 + float(eps_rf.get(channel, 0.0))
    return 1.0 + float(eps_rf)


class _Drive:
    """Hamiltonians of the segments of a sequence on a fixed system.

    Matrices of the channel operators and of distinct segment Hamiltonians
    are computed once per instance.
    """

    def __init__(self, system: SpinSystem, static: numpy.ndarray,
                 eps_rf: RfError):
        self.system = system
        self.static = static
        self.eps_rf = eps_rf
        self._channels: Dict[str, Tuple[numpy.ndarray, numpy.ndarray]] = {}
        self._steps: Dict[tuple, Tuple[numpy.ndarray, numpy.ndarray]] = {}

    def rf(self, channel: str, nut_hz: float,
           phase_rad: float) -> numpy.ndarray:
        if channel not in self._channels:
            self._channels[channel] = channel_operators(self.system, channel)
        fx, fy = self._channels[channel]
        nut = two_pi * nut_hz * rf_scale(self.eps_rf, channel)
        return nut * (numpy.cos(phase_rad) * fx + numpy.sin(phase_rad) * fy)

    def steps(self, segment: PulseSegment) -> Iterator[Tuple[float, float]]:
        """Yield (amplitude, duration) of the constant pieces of a segment."""
        if segment.envelope is None:
            yield segment.nut_hz, segment.duration_s
            return
        step = segment.duration_s / len(segment.envelope)
        for value in segment.envelope:
            yield segment.nut_hz * value, step

    def eigen(self, channel: str, nut_hz: float,
              phase_rad: float) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """Eigendecomposition of the total Hamiltonian of a constant piece."""
        key = (channel, nut_hz, phase_rad)
        if key not in self._steps:
            h = self.static + self.rf(channel, nut_hz, phase_rad)
            self._steps[key] = scipy.linalg.eigh(h)
        return self._steps[key]

    def propagator(self, channel: str, nut_hz: float, phase_rad: float,
                   duration_s: float) -> numpy.ndarray:
        w, v = self.eigen(channel, nut_hz, phase_rad)
        return (v * numpy.exp(-1j * w * duration_s)) @ v.conj().T


def sequence_propagator(seq: Sequence, system: SpinSystem,
                        offsets: Optional[OffsetSetting] = None,
                        eps_rf: RfError = 0.0) -> Operator:
    """Propagator of the whole sequence, later segments multiply from the left.

    The rf error scales every nutation frequency by (1 + ε). A mapping of
    channel labels to errors applies a separate error to every channel,
    channels that are not listed stay exact.
    """
    static = static_hamiltonian(system, offsets).matrix
    drive = _Drive(system, static, eps_rf)

    u = numpy.eye(system.dim, dtype=complex)
    cache: Dict[tuple, numpy.ndarray] = {}
    for segment in seq:
        for nut_hz, duration_s in drive.steps(segment):
            key = (segment.channel, nut_hz, segment.phase_rad, duration_s)
            if key not in cache:
                cache[key] = drive.propagator(*key)
            u = cache[key] @ u
    return Operator(u, Role.Unitary)


def hard_pulse(system: SpinSystem, channel: str, angle_rad: float,
               phase_rad: float = 0.0) -> Operator:
    """Ideal instantaneous rotation of all spins of the channel."""
    fx, fy = channel_operators(system, channel)
    generator = angle_rad * (numpy.cos(phase_rad) * fx +
                             numpy.sin(phase_rad) * fy)
    return Operator(_exp(generator, 1.0), Role.Unitary)


def rotate(rho: Operator, u: Operator) -> Operator:
    """Evolve the density operator, ρ → U ρ U†."""
    return rho.conjugate(u)


def driving_hamiltonian(system: SpinSystem) -> numpy.ndarray:
    """Offset differences within every channel, the part of the static
    Hamiltonian that drives the level crossing."""
    n = system.num_spins
    matrix = numpy.zeros((system.dim, system.dim), dtype=complex)
    for channel in system.channel_set:
        spins = system.spins_on(channel)
        mean = numpy.mean([system.offsets_hz[j-1] for j in spins])
        for j in spins:
            omega = two_pi * (system.offsets_hz[j-1] - mean)
            if omega:
                matrix += omega * angular_momentum(n, j, "z").matrix
    return matrix


def _modulation_period(seq: Sequence, system: SpinSystem) -> Optional[float]:
    couplings = []
    for channel in seq.channels:
        spins = system.spins_on(channel)
        couplings.extend(abs(system.coupling(j, k))
                         for j in spins for k in spins if j < k)
    couplings = [c for c in couplings if c]
    return 1 / max(couplings) if couplings else None


def _integral(h_delta: numpy.ndarray, w: numpy.ndarray, v: numpy.ndarray,
              duration_s: float) -> numpy.ndarray:
    """∫ exp(iHs) H_Δ exp(-iHs) ds over [0, duration] in the eigenbasis."""
    m = v.conj().T @ h_delta @ v
    difference = w[:, None] - w[None, :]
    phase = difference * duration_s
    small = numpy.abs(phase) < 1e-8
    safe = numpy.where(small, 1.0, difference)
    weights = numpy.where(small, duration_s * (1 + 0.5j * phase),
                          (numpy.exp(1j * phase) - 1) / (1j * safe))
    return v @ (m * weights) @ v.conj().T


def average_hamiltonian_first_order(seq: Sequence, system: SpinSystem,
                                    offsets: Optional[OffsetSetting] = None,
                                    eps_rf: RfError = 0.0,
                                    steps: int = 10000,
                                    method: str = "exact",
                                    logger: logging.Logger = internal_logger
                                    ) -> Operator:
    """First-order average of the driving Hamiltonian in the toggling frame.

    The couplings, the common offsets and the rf field define the toggling
    frame, the offset differences within a channel are the driving term.
    The average is returned after the fixed (π/2)_y rotation of the spins
    of the sequence channel, which takes the spin-lock axis to z.

    The "exact" method integrates every piece in closed form, the
    "midpoint" method samples the toggling-frame Hamiltonian at the
    midpoints of the pieces. Both split the sequence into about `steps`
    pieces.
    """
    if not len(seq):
        raise errors.SequenceError("empty sequence")
    if steps < 1:
        raise errors.ParameterError("steps", steps, "must be positive")
    if method not in ("exact", "midpoint"):
        raise errors.ParameterError("method", method,
                                    "expected exact or midpoint")

    total = seq.total_duration
    period = _modulation_period(seq, system)
    if period is not None:
        cycles = total / period
        if abs(cycles - round(cycles)) > 1e-6 or round(cycles) == 0:
            logger.warning("Sequence of %.6g s is not a whole number of "
                           "%.6g s modulation cycles", total, period)

    h_delta = driving_hamiltonian(system)
    modulation = static_hamiltonian(system, offsets).matrix - h_delta
    drive = _Drive(system, modulation, eps_rf)

    toggling = numpy.eye(system.dim, dtype=complex)
    average = numpy.zeros_like(toggling)

    for segment in seq:
        for nut_hz, duration_s in drive.steps(segment):
            w, v = drive.eigen(segment.channel, nut_hz, segment.phase_rad)
            pieces = max(1, int(round(steps * duration_s / total)))
            dt = duration_s / pieces
            step = (v * numpy.exp(-1j * w * dt)) @ v.conj().T

            if method == "exact":
                piece = _integral(h_delta, w, v, dt)
            else:
                half = (v * numpy.exp(-1j * w * dt / 2)) @ v.conj().T
                piece = half.conj().T @ h_delta @ half * dt

            for _ in range(pieces):
                average += toggling.conj().T @ piece @ toggling
                toggling = step @ toggling

    average /= total

    channel = seq[0].channel
    rotation = hard_pulse(system, channel, numpy.pi / 2, numpy.pi / 2).matrix
    return Operator.hermitian(rotation @ average @ rotation.conj().T)
