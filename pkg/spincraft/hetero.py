"""Singlet-mediated polarization transfer from a proton pair to a
heteronucleus.

The proton magnetization is converted into proton singlet order by a
spin-lock on the proton channel, a filter keeps the singlet order only, and
a spin-lock on the heteronucleus channel converts the singlet order into
transverse heteronuclear magnetization.
"""

import concurrent.futures
import humanize
import logging
import numpy
import time

from typing import Optional, Sequence as Seq, Tuple

from spincraft import arglib, errors
from spincraft.logging import internal_logger
from spincraft.operators import (
    Operator, angular_momentum, singlet_order_op, total_angular_momentum)
from spincraft.propagator import (
    RfError, hard_pulse, rotate, sequence_propagator)
from spincraft.pulse.catalog import MatchingCondition, matching_catalog
from spincraft.pulse.sequence import Sequence
from spincraft.system import OffsetSetting, SpinSystem


proton = "H"
carbon = "C"


def build_fumarate_like(j_hh_hz: float, j_ch_hz: float,
                        j_ch_prime_hz: float, proton_delta_hz: float = 0.0,
                        carbon_offset_hz: float = 0.0) -> SpinSystem:
    """Two protons on the H channel coupled to a single carbon.

    The difference of the two proton-carbon couplings takes the role of the
    chemical shift difference of the proton pair.
    """
    return SpinSystem.new(
        [proton, proton, carbon],
        [proton_delta_hz / 2, -proton_delta_hz / 2, carbon_offset_hz],
        {(1, 2): j_hh_hz, (1, 3): j_ch_hz, (2, 3): j_ch_prime_hz})


def _check_three_spins(system: SpinSystem) -> None:
    if system.channels != (proton, proton, carbon):
        raise errors.ChannelError("".join(system.channels),
                                  [proton + proton + carbon])


def coupling_difference(system: SpinSystem) -> float:
    _check_three_spins(system)
    return system.coupling(1, 3) - system.coupling(2, 3)


def effective_rabi(system: SpinSystem) -> MatchingCondition:
    """Matching condition of the pair, driven by the coupling difference."""
    _check_three_spins(system)
    return matching_catalog("PHIP",
                            j_is_hz=system.coupling(1, 3),
                            j_is_prime_hz=system.coupling(2, 3),
                            j_ii_hz=system.coupling(1, 2))


def ideal_slic_durations(system: SpinSystem) -> Tuple[float, float]:
    """On-resonance optimal spin-lock durations of the two stages.

    The proton stage lasts √2/|ΔJ| and the carbon stage 1/|ΔJ|, where ΔJ is
    the difference of the proton-carbon couplings.
    """
    delta = coupling_difference(system)
    if not delta:
        raise errors.ParameterError("j_ch_hz", system.coupling(1, 3),
                                    "equal couplings drive no transfer")
    return numpy.sqrt(2) / abs(delta), 1 / abs(delta)


def _filter_basis(pair: Tuple[int, int], num_spins: int):
    q = singlet_order_op(pair, num_spins).matrix
    basis = [q]
    for spin in range(1, num_spins + 1):
        if spin not in pair:
            iz = angular_momentum(num_spins, spin, "z").matrix
            basis.append(q @ (2 * iz))
    return basis


def singlet_filter(rho: Operator, pair: Tuple[int, int] = (1, 2),
                   num_spins: Optional[int] = None) -> Operator:
    """Keep the singlet order of the pair and its correlations with the
    z-magnetization of the other spins, discard everything else."""
    num_spins = num_spins or rho.num_spins
    if rho.dim != 2 ** num_spins:
        raise errors.DimensionError(2 ** num_spins, rho.dim)

    result = numpy.zeros_like(rho.matrix)
    for b in _filter_basis(pair, num_spins):
        # The basis operators are mutually orthogonal.
        result += b * (numpy.vdot(b, rho.matrix).real / numpy.vdot(b, b).real)
    return Operator.hermitian(result)


def initial_state(system: SpinSystem) -> Operator:
    """Proton Zeeman order, the identity part of the thermal state dropped."""
    return total_angular_momentum(system.num_spins, "z",
                                  system.spins_on(proton))


def _first_phase(seq: Sequence, channel: str) -> float:
    for segment in seq:
        if segment.channel == channel:
            return segment.phase_rad
    raise errors.ChannelError(channel, seq.channels)


def _check_channel(seq: Sequence, channel: str) -> None:
    if not len(seq):
        raise errors.SequenceError("empty sequence")
    for segment in seq:
        if segment.channel != channel:
            raise errors.ChannelError(segment.channel, [channel])


def run_pipeline(seq_h: Sequence, seq_c: Sequence, system: SpinSystem,
                 eps_rf: RfError = 0.0,
                 offsets: Optional[OffsetSetting] = None,
                 rho0: Optional[Operator] = None,
                 filtered: bool = True,
                 pair: Tuple[int, int] = (1, 2),
                 logger: logging.Logger = internal_logger) -> float:
    """Carbon transverse amplitude after the full transfer.

    An ideal 90° pulse, shifted by +90° from the phase of the proton
    spin-lock, puts the proton magnetization along the lock axis. The
    carbon signal is detected along the phase of the carbon spin-lock and
    normalized by Tr{C_φ²}.
    """
    _check_channel(seq_h, proton)
    _check_channel(seq_c, carbon)
    _check_three_spins(system)

    rho = initial_state(system) if rho0 is None else rho0
    phase_h = _first_phase(seq_h, proton)
    rho = rotate(rho, hard_pulse(system, proton, numpy.pi / 2,
                                 phase_h + numpy.pi / 2))

    rho = rotate(rho, sequence_propagator(seq_h, system, offsets, eps_rf))
    q = singlet_order_op(pair, system.num_spins)
    logger.debug("Proton singlet order after %s: %.6f", seq_h.name,
                 q.inner(rho).real / q.inner(q).real)

    if filtered:
        rho = singlet_filter(rho, pair, system.num_spins)

    rho = rotate(rho, sequence_propagator(seq_c, system, offsets, eps_rf))

    phase_c = _first_phase(seq_c, carbon)
    n = system.num_spins
    spin = system.spins_on(carbon)[0]
    detect = (numpy.cos(phase_c) * angular_momentum(n, spin, "x").matrix +
              numpy.sin(phase_c) * angular_momentum(n, spin, "y").matrix)
    signal = (numpy.vdot(detect, rho.matrix).real /
              numpy.vdot(detect, detect).real)
    logger.debug("Carbon signal after %s: %.6f", seq_c.name, signal)
    return float(signal)


def channel_errors(eps: float, channels: Optional[Seq[str]]) -> RfError:
    """Rf error of every listed channel, all channels when none listed."""
    if channels is None:
        return float(eps)
    return {channel: float(eps) for channel in channels}


def sweep_pipeline(seq_h: Sequence, seq_c: Sequence, system: SpinSystem,
                   eps_axis: Seq[float],
                   eps_channels: Optional[Seq[str]] = None,
                   offsets: Optional[OffsetSetting] = None,
                   threads: Optional[int] = None,
                   logger: logging.Logger = internal_logger) -> numpy.ndarray:
    """Pipeline output along the rf error axis, evaluated in parallel."""
    eps_axis = numpy.asarray(eps_axis, dtype=float)
    threads = arglib.default_threads(threads)
    values = numpy.zeros(eps_axis.size)

    def point(i: int) -> None:
        values[i] = run_pipeline(
            seq_h, seq_c, system, channel_errors(eps_axis[i], eps_channels),
            offsets=offsets, logger=logger)

    started = time.monotonic()
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        for future in [pool.submit(point, i) for i in range(eps_axis.size)]:
            future.result()

    logger.info("Pipeline %s/%s over %d points finished in %s",
                seq_h.name, seq_c.name, eps_axis.size,
                humanize.naturaldelta(time.monotonic() - started))
    return values
