import json
import numpy

from typing import Dict, Iterable, List, NamedTuple, Optional

from spincraft import errors


two_pi = 2 * numpy.pi

# Phases and amplitudes closer than this are treated as identical when
# adjacent segments are merged.
merge_tolerance = 1e-12

# Halving the step of the adiabatic sweep at this sample count changes the
# transfer amplitude by less than 1e-6.
adslic_samples = 1024


class PulseSegment(NamedTuple):
    """Constant-phase rf segment on a single channel.

    Attributes:
        channel -- channel label the segment irradiates
        nut_hz -- nominal nutation frequency in Hz
        phase_rad -- rf phase, 0 is +x and π is -x
        duration_s -- duration in seconds
        envelope -- optional amplitude samples, the segment is then split
            into equal sub-steps with amplitude nut_hz·envelope[k]
    """

    channel: str
    nut_hz: float
    phase_rad: float
    duration_s: float
    envelope: Optional[tuple] = None

    @classmethod
    def new(cls, channel: str, nut_hz: float, phase_rad: float,
            duration_s: float, envelope: Optional[Iterable[float]] = None
            ) -> "PulseSegment":
        if envelope is not None:
            envelope = tuple(float(v) for v in envelope)
        segment = cls(str(channel), float(nut_hz), float(phase_rad),
                      float(duration_s), envelope)
        segment.validate()
        return segment

    @classmethod
    def from_dict(cls, **kwargs) -> "PulseSegment":
        return cls.new(**kwargs)

    def asdict(self) -> Dict:
        d = dict(channel=self.channel, nut_hz=self.nut_hz,
                 phase_rad=self.phase_rad, duration_s=self.duration_s)
        if self.envelope is not None:
            d["envelope"] = list(self.envelope)
        return d

    def validate(self) -> None:
        if not self.duration_s > 0:
            raise errors.ParameterError("duration_s", self.duration_s,
                                        "must be positive")
        if self.nut_hz < 0:
            raise errors.ParameterError("nut_hz", self.nut_hz,
                                        "must not be negative")
        if self.envelope is not None:
            if len(self.envelope) == 0:
                raise errors.ParameterError("envelope", self.envelope,
                                            "empty envelope")
            if min(self.envelope) < 0:
                raise errors.ParameterError("envelope", min(self.envelope),
                                            "samples must not be negative")

    @property
    def flip_angle(self) -> float:
        """Nominal rotation angle in radians."""
        scale = 1.0
        if self.envelope is not None:
            scale = float(numpy.mean(self.envelope))
        return two_pi * self.nut_hz * self.duration_s * scale

    def same_drive(self, other: "PulseSegment") -> bool:
        if self.envelope is not None or other.envelope is not None:
            return False
        phase = numpy.angle(numpy.exp(1j * (self.phase_rad - other.phase_rad)))
        return (self.channel == other.channel and
                abs(self.nut_hz - other.nut_hz) <= merge_tolerance and
                abs(phase) <= merge_tolerance)

    def __repr__(self) -> str:
        shaped = " shaped" if self.envelope is not None else ""
        return (f"<PulseSegment {self.channel} nut={self.nut_hz:g}Hz "
                f"phase={self.phase_rad:g} t={self.duration_s:g}s{shaped}>")


class Sequence:
    """Ordered list of rf segments.

    Attributes:
        segments -- tuple of pulse segments
        name -- name of the sequence, e.g. "slic" or "cycle:S3"
        params -- nominal parameters the sequence was built from
    """

    def __init__(self, segments: Iterable[PulseSegment] = (),
                 name: str = "custom", params: Optional[Dict] = None):
        segments = tuple(segments)
        for segment in segments:
            segment.validate()

        self.segments = segments
        self.name = name
        self.params = dict(params or {})

    @classmethod
    def from_dict(cls, **kwargs) -> "Sequence":
        segments = [PulseSegment.from_dict(**s)
                    for s in kwargs.pop("segments", [])]
        return cls(segments, **kwargs)

    def asdict(self) -> Dict:
        return dict(name=self.name,
                    params=self.params,
                    segments=[s.asdict() for s in self.segments])

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration_s for s in self.segments))

    @property
    def channels(self) -> List[str]:
        return list(dict.fromkeys(s.channel for s in self.segments))

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, index):
        return self.segments[index]

    def __add__(self, other: "Sequence") -> "Sequence":
        return Sequence(self.segments + other.segments,
                        name=f"{self.name}+{other.name}",
                        params=self.params)

    def __mul__(self, times: int) -> "Sequence":
        if times < 0:
            raise errors.ParameterError("repetitions", times,
                                        "must not be negative")
        return Sequence(self.segments * times, self.name, self.params)

    __rmul__ = __mul__

    def merged(self) -> "Sequence":
        """Coalesce adjacent segments with identical drive."""
        segments: List[PulseSegment] = []
        for segment in self.segments:
            if segments and segments[-1].same_drive(segment):
                last = segments[-1]
                duration = last.duration_s + segment.duration_s
                segments[-1] = last._replace(duration_s=duration)
            else:
                segments.append(segment)
        return Sequence(segments, self.name, self.params)

    def scaled_phase(self, shift_rad: float) -> "Sequence":
        """Apply a global phase shift to every segment."""
        segments = [s._replace(phase_rad=s.phase_rad + shift_rad)
                    for s in self.segments]
        return Sequence(segments, self.name, self.params)

    def __repr__(self) -> str:
        return (f"<Sequence {self.name} segments={len(self.segments)} "
                f"T={self.total_duration:g}s>")


class CslicParams(NamedTuple):
    """Parameters of the compensated spin-lock.

    Attributes:
        j_hz -- J-coupling, the weak amplitude matches |j_hz|
        alpha -- flip-angle scaling factor strong/(strong + weak)
        n_reps -- number of repetitions of the cyclic element
        strong_nut_hz -- amplitude of the compensating pulse
    """

    j_hz: float
    alpha: float
    n_reps: int
    strong_nut_hz: float

    @classmethod
    def new(cls, j_hz: float, n_reps: int = 1,
            alpha: Optional[float] = None,
            strong_nut_hz: Optional[float] = None) -> "CslicParams":
        """Complete the parameters from either alpha or the strong amplitude.

        When both are given they must be consistent.
        """
        if not j_hz:
            raise errors.ParameterError("j_hz", j_hz, "must not be zero")
        weak = abs(j_hz)

        if alpha is None and strong_nut_hz is None:
            raise errors.ParameterError("alpha", alpha,
                                        "alpha or strong amplitude required")
        if alpha is None:
            alpha = alpha_factor(weak, strong_nut_hz)
        elif strong_nut_hz is None:
            strong_nut_hz = strong_amplitude(weak, alpha)

        params = cls(float(j_hz), float(alpha), int(n_reps),
                     float(strong_nut_hz))
        params.validate()
        return params

    def validate(self) -> None:
        if not self.j_hz:
            raise errors.ParameterError("j_hz", self.j_hz,
                                        "must not be zero")
        if not 0.5 < self.alpha < 1:
            raise errors.ParameterError("alpha", self.alpha,
                                        "expected 0.5 < alpha < 1")
        if self.n_reps < 1:
            raise errors.ParameterError("n_reps", self.n_reps,
                                        "must be positive")
        expected = alpha_factor(self.weak_nut_hz, self.strong_nut_hz)
        if abs(expected - self.alpha) > 1e-12:
            raise errors.ParameterError(
                "alpha", self.alpha,
                f"amplitudes give alpha={expected:.12g}")

    @property
    def weak_nut_hz(self) -> float:
        return abs(self.j_hz)

    @property
    def tau_weak(self) -> float:
        """Duration of each weak απ pulse."""
        return self.alpha / (2 * self.weak_nut_hz)

    @property
    def tau_strong(self) -> float:
        """Duration of the central α2π pulse."""
        return self.alpha / self.strong_nut_hz

    @property
    def element_duration(self) -> float:
        return 2 * self.tau_weak + self.tau_strong


def alpha_factor(weak_nut_hz: float, strong_nut_hz: float) -> float:
    if strong_nut_hz <= 0:
        raise errors.ParameterError("strong_nut_hz", strong_nut_hz,
                                    "must be positive")
    return strong_nut_hz / (strong_nut_hz + weak_nut_hz)


def strong_amplitude(weak_nut_hz: float, alpha: float) -> float:
    if not 0 < alpha < 1:
        raise errors.ParameterError("alpha", alpha, "expected 0 < alpha < 1")
    return alpha * weak_nut_hz / (1 - alpha)


class AdiabaticShape(NamedTuple):
    """Amplitude sweep of the adiabatic spin-lock.

    Attributes:
        delta_max -- relative sweep depth, within (-1, 1)
        shape_xi -- tangential shape parameter, within (0, 1)
        total_s -- total duration in seconds
        n_samples -- number of piecewise-constant samples
    """

    delta_max: float
    shape_xi: float
    total_s: float
    n_samples: int = adslic_samples

    def validate(self) -> None:
        if not -1 < self.delta_max < 1:
            raise errors.ParameterError("delta_max", self.delta_max,
                                        "expected -1 < delta_max < 1")
        if not 0 < self.shape_xi < 1:
            raise errors.ParameterError("shape_xi", self.shape_xi,
                                        "expected 0 < xi < 1")
        if not self.total_s > 0:
            raise errors.ParameterError("total_s", self.total_s,
                                        "must be positive")
        if self.n_samples < 2:
            raise errors.ParameterError("n_samples", self.n_samples,
                                        "at least two samples are required")


def _check_positive(name: str, value: float) -> None:
    if not value > 0:
        raise errors.ParameterError(name, value, "must be positive")


def build_slic(j_hz: float, total_s: float, phase_rad: float = 0.0,
               channel: str = "H") -> Sequence:
    """Continuous spin-lock with the nutation frequency matched to J."""
    _check_positive("j_hz", j_hz)
    _check_positive("total_s", total_s)

    segment = PulseSegment.new(channel, j_hz, phase_rad, total_s)
    return Sequence([segment], name="slic",
                    params=dict(j_hz=j_hz, total_s=total_s,
                                phase_rad=phase_rad, channel=channel))


def adslic_amplitude(shape: AdiabaticShape, j_hz: float, t: float) -> float:
    """Nutation frequency in Hz of the adiabatic sweep at time t."""
    shape.validate()
    if not 0 <= t <= shape.total_s:
        raise errors.ParameterError("t", t,
                                    f"expected 0 <= t <= {shape.total_s}")

    x = 2 * t / shape.total_s - 1
    half = shape.shape_xi * numpy.pi / 2
    return j_hz * (1 - shape.delta_max * numpy.tan(x * half) / numpy.tan(half))


def build_adslic(shape: AdiabaticShape, j_hz: float, channel: str = "H",
                 phase_rad: float = 0.0, shaped: bool = False) -> Sequence:
    """Sample the adiabatic sweep at the midpoints of equal segments.

    With shaped=True the samples are carried as the envelope of a single
    segment with nominal amplitude j_hz.
    """
    shape.validate()
    _check_positive("j_hz", j_hz)

    step = shape.total_s / shape.n_samples
    times = (numpy.arange(shape.n_samples) + 0.5) * step
    amplitudes = [adslic_amplitude(shape, j_hz, t) for t in times]

    params = dict(shape._asdict(), j_hz=j_hz, phase_rad=phase_rad,
                  channel=channel)
    if shaped:
        envelope = [a / j_hz for a in amplitudes]
        segment = PulseSegment.new(channel, j_hz, phase_rad,
                                   shape.total_s, envelope)
        return Sequence([segment], name="adslic", params=params)

    segments = [PulseSegment.new(channel, a, phase_rad, step)
                for a in amplitudes]
    return Sequence(segments, name="adslic", params=params)


def build_cslic(p: CslicParams, channel: str = "H",
                phase_rad: float = 0.0) -> Sequence:
    """Repeat the compensated element weak(απ) strong(α2π, -x) weak(απ)."""
    p.validate()

    weak = PulseSegment.new(channel, p.weak_nut_hz, phase_rad, p.tau_weak)
    strong = PulseSegment.new(channel, p.strong_nut_hz,
                              phase_rad + numpy.pi, p.tau_strong)
    params = dict(p._asdict(), phase_rad=phase_rad, channel=channel)
    return Sequence([weak, strong, weak] * p.n_reps, name="cslic",
                    params=params)


def optimal_repetitions(j_hz: float, delta_hz: float) -> int:
    """Number of cyclic elements that completes the level crossing."""
    if not delta_hz:
        raise errors.ParameterError("delta_hz", delta_hz,
                                    "the level crossing never completes")
    ratio = abs(j_hz) / (numpy.sqrt(2) * abs(delta_hz))
    return max(1, int(numpy.floor(ratio + 0.5)))


def slic_duration(delta_hz: float) -> float:
    """Nominal spin-lock duration π/ω_μ of an AB pair, ω_μ = √2πΔ."""
    if not delta_hz:
        raise errors.ParameterError("delta_hz", delta_hz, "must not be zero")
    return 1 / (numpy.sqrt(2) * abs(delta_hz))


def serialize_sequence(seq: Sequence) -> str:
    """Render the sequence as deterministic JSON text."""
    if not len(seq):
        raise errors.SequenceError("empty sequence")
    return json.dumps(seq.asdict(), sort_keys=True, indent=2)


def deserialize_sequence(text: str) -> Sequence:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise errors.SequenceError(f"malformed text: {e}")
    if not isinstance(data, dict) or not data.get("segments"):
        raise errors.SequenceError("no segments")
    try:
        return Sequence.from_dict(**data)
    except (TypeError, KeyError) as e:
        raise errors.SequenceError(f"malformed segment: {e}")
