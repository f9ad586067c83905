import enum
import numpy
import scipy.integrate

from typing import (
    Callable, Dict, NamedTuple, Optional, Sequence as Seq, Tuple)

from spincraft import errors


Curve = Callable[[float], float]


class Kind(enum.Enum):

    gaussian = "gaussian"
    uniform = "uniform"


class Distribution(NamedTuple):
    """Distribution of the fractional rf error across the sample.

    Attributes:
        kind -- "gaussian" (width is σ) or "uniform" (width is the half-width)
        width -- width of the distribution
        points -- number of quadrature points
    """

    kind: str
    width: float
    points: int = 81

    # Gaussian weights are truncated at this many standard deviations.
    gaussian_span = 4.0

    @classmethod
    def from_dict(cls, **kwargs) -> "Distribution":
        distribution = cls(kind=str(kwargs["kind"]),
                           width=float(kwargs["width"]),
                           points=int(kwargs.get("points", 81)))
        distribution.validate()
        return distribution

    def asdict(self) -> Dict:
        return dict(kind=self.kind, width=self.width, points=self.points)

    def validate(self) -> None:
        try:
            Kind(self.kind)
        except ValueError:
            raise errors.ParameterError("distribution", self.kind,
                                        "expected gaussian or uniform")
        if not self.width > 0:
            raise errors.ParameterError("width", self.width,
                                        "must be positive")
        if self.points < 3:
            raise errors.ParameterError("points", self.points,
                                        "at least three points are required")

    def grid(self, center: float = 0.0) -> Tuple[numpy.ndarray, numpy.ndarray]:
        """Quadrature nodes and unnormalized weights."""
        self.validate()
        if Kind(self.kind) is Kind.gaussian:
            span = self.gaussian_span * self.width
            nodes = numpy.linspace(-span, span, self.points)
            weights = numpy.exp(-0.5 * (nodes / self.width) ** 2)
        else:
            nodes = numpy.linspace(-self.width, self.width, self.points)
            weights = numpy.ones_like(nodes)
        return center + nodes, weights


def quadrature_average(values: Seq[float], nodes: Seq[float],
                       weights: Seq[float]) -> float:
    """Weighted average ∫f·w / ∫w by Simpson's rule."""
    values = numpy.asarray(values, dtype=float)
    weights = numpy.asarray(weights, dtype=float)
    if values.shape != weights.shape:
        raise errors.DimensionError(weights.shape, values.shape)
    norm = scipy.integrate.simpson(weights, x=nodes)
    return float(scipy.integrate.simpson(values * weights, x=nodes) / norm)


def rf_inhomogeneity_average(curve: Curve, distribution: Distribution,
                             n_points: Optional[int] = None,
                             center: float = 0.0) -> float:
    """Average the amplitude curve over the distribution of rf errors
    around the nominal error `center`."""
    if n_points is not None:
        distribution = distribution._replace(points=n_points)
    nodes, weights = distribution.grid(center)
    values = [curve(float(eps)) for eps in nodes]
    return quadrature_average(values, nodes, weights)


def ensemble_curve(curve: Curve, eps_axis: Seq[float],
                   distribution: Distribution) -> numpy.ndarray:
    """Ensemble-averaged amplitude as a function of the nominal rf error.

    The error of every sample volume is the nominal error shifted by a
    draw from the distribution.
    """
    return numpy.array([rf_inhomogeneity_average(curve, distribution,
                                                 center=float(eps))
                        for eps in eps_axis])
