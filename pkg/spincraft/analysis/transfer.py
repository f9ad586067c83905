import concurrent.futures
import humanize
import logging
import numpy
import time

from typing import Callable, Dict, Optional, Sequence as Seq, Tuple, Union

from spincraft import arglib, errors
from spincraft.logging import internal_logger
from spincraft.operators import (
    Operator, singlet_order_op, total_angular_momentum)
from spincraft.propagator import RfError, sequence_propagator
from spincraft.pulse.sequence import Sequence
from spincraft.system import OffsetSetting, SpinSystem


Progress = Callable[[int, int], None]

imaginary_tolerance = 1e-10

# Magnetization left by a (π/2)_-y pulse on I_z. A matched +x spin-lock
# turns it into positive singlet order.
default_source = "-x"


def transfer_amplitude(u: Operator, source: Operator,
                       target: Operator) -> float:
    """Return Tr{target U source U†} / Tr{target target}."""
    if not (u.dim == source.dim == target.dim):
        raise errors.DimensionError(u.dim, (source.dim, target.dim))
    for operator in (source, target):
        if not operator.is_hermitian():
            raise errors.HermiticityError(float(numpy.max(numpy.abs(
                operator.matrix - operator.matrix.conj().T))))
    return _amplitude(u.matrix, source.matrix, target.matrix)


def _amplitude(u: numpy.ndarray, source: numpy.ndarray,
               target: numpy.ndarray) -> float:
    evolved = u @ source @ u.conj().T
    # Tr{T X} equals vdot(T, X) for Hermitian T.
    value = numpy.vdot(target, evolved) / numpy.vdot(target, target).real
    if abs(value.imag) > imaginary_tolerance:
        raise errors.HermiticityError(abs(value.imag))
    return float(value.real)


def source_operator(system: SpinSystem, name: str, channel: str,
                    pair: Tuple[int, int] = (1, 2)) -> Operator:
    """Named initial operator of a transfer.

    Names are "x", "y", "z" for the channel magnetization, optionally with
    a leading "-" or "+", and "so" for the singlet order of the pair.
    """
    text = name.strip().lower()
    if text == "so":
        return singlet_order_op(pair, system.num_spins)

    sign = -1.0 if text.startswith("-") else 1.0
    axis = text.lstrip("+-")
    if axis not in ("x", "y", "z"):
        raise errors.ParameterError("source", name,
                                    "expected x, y, z, -x, -y, -z or so")

    total = total_angular_momentum(system.num_spins, axis,
                                   system.spins_on(channel))
    return sign * total


class TransferMap:
    """Grid of transfer amplitudes over resonance offset and rf error.

    Attributes:
        offset_axis_hz -- resonance offsets in Hz
        eps_axis -- fractional rf errors
        amplitude -- matrix with one row per rf error and one column
            per offset
        metadata -- sequence name and its parameters
    """

    def __init__(self, offset_axis_hz, eps_axis, amplitude,
                 metadata: Optional[Dict] = None):
        offset_axis_hz = numpy.asarray(offset_axis_hz, dtype=float)
        eps_axis = numpy.asarray(eps_axis, dtype=float)
        amplitude = numpy.asarray(amplitude, dtype=float)

        shape = (eps_axis.size, offset_axis_hz.size)
        if amplitude.size != shape[0] * shape[1]:
            raise errors.DimensionError(shape, amplitude.shape)
        amplitude = amplitude.reshape(shape)

        self.offset_axis_hz = offset_axis_hz
        self.eps_axis = eps_axis
        self.amplitude = amplitude
        self.metadata = dict(metadata or {})

    @classmethod
    def from_dict(cls, **kwargs) -> "TransferMap":
        return cls(offset_axis_hz=kwargs["offset_axis_hz"],
                   eps_axis=kwargs["eps_axis"],
                   amplitude=kwargs["amplitude"],
                   metadata=kwargs.get("metadata"))

    def asdict(self) -> Dict:
        return dict(metadata=self.metadata,
                    offset_axis_hz=self.offset_axis_hz.tolist(),
                    eps_axis=self.eps_axis.tolist(),
                    amplitude=self.amplitude.tolist())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.amplitude.shape

    def column(self, offset_hz: float = 0.0) -> numpy.ndarray:
        """Amplitudes along ε at the grid offset nearest to the given one."""
        if not self.offset_axis_hz.size:
            raise errors.ParameterError("offset_hz", offset_hz, "empty map")
        index = int(numpy.argmin(numpy.abs(self.offset_axis_hz - offset_hz)))
        return self.amplitude[:, index]

    def extrema(self) -> Tuple[float, float]:
        if not self.amplitude.size:
            raise errors.ParameterError("amplitude", [], "empty map")
        return float(self.amplitude.min()), float(self.amplitude.max())

    def epsilon_width(self, level: float = 0.5,
                      offset_hz: float = 0.0) -> float:
        """Width in ε of the main lobe above level·max along an offset.

        The edges are located by linear interpolation; a lobe that reaches
        the border of the grid is cut at the border.
        """
        return curve_width(self.eps_axis, self.column(offset_hz), level)

    def __repr__(self) -> str:
        name = self.metadata.get("sequence", "unknown")
        return f"<TransferMap {name} shape={self.shape}>"


def curve_width(axis: numpy.ndarray, curve: numpy.ndarray,
                level: float = 0.5) -> float:
    """Width of the lobe around the maximum above level·max."""
    if not 0 < level < 1:
        raise errors.ParameterError("level", level, "expected 0 < level < 1")
    if len(axis) < 2:
        raise errors.ParameterError("axis", list(axis),
                                    "at least two points are required")

    peak = int(numpy.argmax(curve))
    threshold = level * curve[peak]

    def edge(step: int) -> float:
        i = peak
        while 0 <= i + step < len(curve) and curve[i + step] >= threshold:
            i += step
        if not 0 <= i + step < len(curve):
            return float(axis[i])
        inside, outside = curve[i], curve[i + step]
        fraction = (inside - threshold) / (inside - outside)
        return float(axis[i] + fraction * (axis[i + step] - axis[i]))

    return edge(+1) - edge(-1)


def _carriers(system: SpinSystem, channel: str,
              offset_hz: float) -> OffsetSetting:
    spins = system.spins_on(channel)
    center = float(numpy.mean([system.offsets_hz[j-1] for j in spins]))
    return OffsetSetting.on(channel, center + offset_hz)


def simulate(seq: Sequence, system: SpinSystem, offset_hz: float = 0.0,
             eps_rf: RfError = 0.0,
             source: Union[str, Operator] = default_source,
             target: Optional[Operator] = None,
             pair: Tuple[int, int] = (1, 2)) -> float:
    """Transfer amplitude of the sequence at a single grid point.

    The offset is the resonance offset of the carrier from the mean shift
    of the spins on the sequence channel.
    """
    channel, source, target = _operators(seq, system, source, target, pair)
    u = sequence_propagator(seq, system, _carriers(system, channel, offset_hz),
                            eps_rf)
    return _amplitude(u.matrix, source.matrix, target.matrix)


def _operators(seq, system, source, target, pair):
    if not len(seq):
        raise errors.SequenceError("empty sequence")
    channel = seq[0].channel
    if isinstance(source, str):
        source = source_operator(system, source, channel, pair)
    if target is None:
        target = singlet_order_op(pair, system.num_spins)
    return channel, source, target


def sweep_map(seq: Sequence, system: SpinSystem,
              offset_axis_hz: Seq[float], eps_axis: Seq[float],
              source: Union[str, Operator] = default_source,
              target: Optional[Operator] = None,
              pair: Tuple[int, int] = (1, 2),
              threads: Optional[int] = None,
              progress: Optional[Progress] = None,
              logger: logging.Logger = internal_logger) -> TransferMap:
    """Evaluate the transfer amplitude over the (offset, ε) grid.

    Rows of the grid are evaluated by a pool of worker threads and written
    into preallocated slots, the result does not depend on the number of
    workers.
    """
    offset_axis_hz = numpy.asarray(offset_axis_hz, dtype=float)
    eps_axis = numpy.asarray(eps_axis, dtype=float)
    if offset_axis_hz.ndim != 1 or eps_axis.ndim != 1:
        raise errors.ParameterError("range", None, "axes must be 1-D")
    if not (numpy.all(numpy.isfinite(offset_axis_hz)) and
            numpy.all(numpy.isfinite(eps_axis))):
        raise errors.ParameterError("range", None, "axes must be finite")

    channel, source, target = _operators(seq, system, source, target, pair)
    threads = arglib.default_threads(threads)
    amplitude = numpy.zeros((eps_axis.size, offset_axis_hz.size))
    carriers = [_carriers(system, channel, o) for o in offset_axis_hz]

    def row(i: int) -> int:
        for j, offsets in enumerate(carriers):
            u = sequence_propagator(seq, system, offsets, eps_axis[i])
            amplitude[i, j] = _amplitude(u.matrix, source.matrix,
                                         target.matrix)
        return i

    logger.info("Sweeping %s over %s points with %d workers",
                seq.name, humanize.intcomma(amplitude.size), threads)
    started = time.monotonic()

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(row, i) for i in range(eps_axis.size)]
        for done, future in enumerate(
                concurrent.futures.as_completed(futures), 1):
            future.result()
            if progress is not None:
                progress(done, len(futures))

    logger.info("Sweep of %s finished in %s", seq.name,
                humanize.naturaldelta(time.monotonic() - started))

    metadata = dict(sequence=seq.name, params=dict(seq.params),
                    duration_s=seq.total_duration)
    return TransferMap(offset_axis_hz, eps_axis, amplitude, metadata)


def sweep_curve(seq: Sequence, system: SpinSystem, eps_axis: Seq[float],
                offset_hz: float = 0.0, **kwargs) -> numpy.ndarray:
    """Transfer amplitude along ε at a fixed resonance offset."""
    m = sweep_map(seq, system, [offset_hz], eps_axis, **kwargs)
    return m.amplitude[:, 0].copy()


def normalized_efficiency(curve: Seq[float], eps_axis: Seq[float]
                          ) -> numpy.ndarray:
    """Divide the curve by its value at exact matching, ε = 0."""
    curve = numpy.asarray(curve, dtype=float)
    eps_axis = numpy.asarray(eps_axis, dtype=float)
    if curve.shape != eps_axis.shape:
        raise errors.DimensionError(eps_axis.shape, curve.shape)
    if not eps_axis.min() <= 0 <= eps_axis.max():
        raise errors.ParameterError("eps_axis", [eps_axis.min(),
                                                 eps_axis.max()],
                                    "the axis must contain zero")

    order = numpy.argsort(eps_axis)
    reference = numpy.interp(0.0, eps_axis[order], curve[order])
    if abs(reference) < 1e-12:
        raise errors.ParameterError("curve", reference,
                                    "vanishes at exact matching")
    return curve / reference


class EfficiencyCurve:
    """Amplitude as a function of the fractional rf error.

    Attributes:
        eps_axis -- fractional rf errors
        amplitude -- amplitude at every error
        metadata -- how the curve was obtained
    """

    def __init__(self, eps_axis, amplitude, metadata: Optional[Dict] = None):
        eps_axis = numpy.asarray(eps_axis, dtype=float)
        amplitude = numpy.asarray(amplitude, dtype=float)
        if amplitude.shape != eps_axis.shape:
            raise errors.DimensionError(eps_axis.shape, amplitude.shape)

        self.eps_axis = eps_axis
        self.amplitude = amplitude
        self.metadata = dict(metadata or {})

    def asdict(self) -> Dict:
        return dict(metadata=self.metadata,
                    eps_axis=self.eps_axis.tolist(),
                    amplitude=self.amplitude.tolist())

    def normalized(self) -> "EfficiencyCurve":
        amplitude = normalized_efficiency(self.amplitude, self.eps_axis)
        return EfficiencyCurve(
            self.eps_axis, amplitude,
            dict(self.metadata, normalized=True))

    def width(self, level: float = 0.5) -> float:
        return curve_width(self.eps_axis, self.amplitude, level)

    def __len__(self) -> int:
        return self.eps_axis.size

    def __repr__(self) -> str:
        return f"<EfficiencyCurve points={len(self)}>"
