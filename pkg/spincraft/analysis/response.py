"""Closed-form excitation efficiencies of the spin-lock and of its
compensated variant as functions of the fractional rf error."""

import numpy

from typing import NamedTuple

from spincraft import errors


def sinc(x):
    """Unnormalized sinc, sin(x)/x with sinc(0) = 1."""
    return numpy.sinc(numpy.asarray(x, dtype=float) / numpy.pi)


def _check_rabi(rabi_rad: float) -> None:
    if not rabi_rad > 0:
        raise errors.ParameterError("rabi_rad", rabi_rad, "must be positive")


class ResponseParams(NamedTuple):
    """Two-level transfer driven by ω_μ and detuned by Ω_μ·ε.

    Attributes:
        rabi_rad -- driving Rabi frequency ω_μ in rad/s
        resonance_rad -- modulation frequency Ω_μ in rad/s
        eps_rf -- fractional rf error
        t_s -- duration of the transfer in seconds
    """

    rabi_rad: float
    resonance_rad: float
    eps_rf: float
    t_s: float

    @classmethod
    def nominal(cls, rabi_rad: float, resonance_rad: float,
                eps_rf: float) -> "ResponseParams":
        """Parameters at the nominal duration t = π/ω_μ."""
        _check_rabi(rabi_rad)
        return cls(rabi_rad, resonance_rad, eps_rf, numpy.pi / rabi_rad)

    @property
    def theta(self) -> float:
        """Detuning angle, π/2 at exact matching."""
        _check_rabi(self.rabi_rad)
        return float(numpy.arctan2(self.rabi_rad,
                                   self.resonance_rad * self.eps_rf))

    @property
    def f_plus(self) -> float:
        return numpy.pi * self.eps_rf

    @property
    def f_minus(self) -> float:
        return numpy.pi * (2 + self.eps_rf)


def xi_slic(p: ResponseParams) -> float:
    """Efficiency sin²θ·sin²(½ω_μ cscθ t) of the detuned spin-lock."""
    theta = p.theta
    # ω_μ cscθ is the effective Rabi frequency √(ω_μ² + (Ω_μ ε)²).
    effective = numpy.hypot(p.rabi_rad, p.resonance_rad * p.eps_rf)
    return float(numpy.sin(theta) ** 2 *
                 numpy.sin(0.5 * effective * p.t_s) ** 2)


def xi_slic_nominal(rabi_rad: float, resonance_rad: float,
                    eps_rf: float) -> float:
    """Efficiency of the spin-lock at t = π/ω_μ, a sinc² of the detuning."""
    p = ResponseParams.nominal(rabi_rad, resonance_rad, eps_rf)
    csc = 1 / numpy.sin(p.theta)
    return float(numpy.pi ** 2 / 4 * sinc(numpy.pi / 2 * csc) ** 2)


def xi_cslic(rabi_rad: float, eps_rf: float, t_s: float) -> float:
    """Efficiency of the compensated spin-lock.

    The prefactor (f₋² − f₊²)/(f₋² + f₊²) turns negative beyond ε = -1,
    where the sequence matches the reversed spin-lock sense.
    """
    _check_rabi(rabi_rad)
    p = ResponseParams(rabi_rad, 0.0, eps_rf, t_s)
    f_plus, f_minus = p.f_plus, p.f_minus

    prefactor = (f_minus**2 - f_plus**2) / (f_minus**2 + f_plus**2)
    scale = numpy.sqrt(sinc(f_minus) ** 2 + sinc(f_plus) ** 2)
    return float(prefactor * numpy.sin(0.5 * rabi_rad * scale * t_s) ** 2)


def xi_cslic_nominal(rabi_rad: float, eps_rf: float) -> float:
    return xi_cslic(rabi_rad, eps_rf, numpy.pi / rabi_rad)
