import enum
import numpy

from typing import Dict, NamedTuple

from spincraft import errors


class Variant(enum.Enum):
    """Spin-lock analogue with a known matching condition."""

    AB = "AB"
    PHIP = "PHIP"
    AAXX_sum = "AAXX_sum"
    AAXX_diff = "AAXX_diff"
    NOVEL = "NOVEL"


class MatchingCondition(NamedTuple):
    """Matching condition of a spin-lock analogue.

    Attributes:
        variant -- name of the analogue
        transition -- the driven transition
        matched_nut_hz -- nutation frequency that satisfies the matching
        rabi_hz -- driving Rabi frequency ω_μ/2π
        resonance_hz -- modulation frequency Ω_μ/2π
    """

    variant: str
    transition: str
    matched_nut_hz: float
    rabi_hz: float
    resonance_hz: float

    def asdict(self) -> Dict:
        return self._asdict()


def _required(couplings: Dict[str, float], *names: str):
    missing = [name for name in names if name not in couplings]
    if missing:
        raise errors.ParameterError(
            "couplings", sorted(couplings), f"missing {', '.join(missing)}")
    return [float(couplings[name]) for name in names]


def _ab(c):
    delta, j = _required(c, "delta_hz", "j_hz")
    # ω_μ = √2πΔ, Ω_μ = 2πJ
    return "S0 <-> T+-", delta / numpy.sqrt(2), j


def _phip(c):
    j_is, j_is_prime, j_ii = _required(
        c, "j_is_hz", "j_is_prime_hz", "j_ii_hz")
    # ω_μ = π(J_IS - J_I'S)/2, Ω_μ = 2πJ_II
    return "aS S0I <-> bS T+-I", (j_is - j_is_prime) / 4, j_ii


def _aaxx(sign):
    def row(c):
        j_ax, j_ax_prime, j_aa, j_xx = _required(
            c, "j_ax_hz", "j_ax_prime_hz", "j_aa_hz", "j_xx_hz")
        # ω_μ = π(J_AX - J_AX')/√2, Ω_μ = 2π(J_AA ± J_XX')
        transition = ("T+-A T0X <-> S0A S0X" if sign > 0 else
                      "T+-A S0X <-> S0A T0X")
        return (transition, (j_ax - j_ax_prime) / (2 * numpy.sqrt(2)),
                j_aa + sign * j_xx)
    return row


def _novel(c):
    j_en, larmor = _required(c, "j_en_hz", "larmor_hz")
    # ω_μ = πJ_en/2, Ω_μ = ω0 of the nucleus
    return "ae bn <-> be an", j_en / 4, larmor


_rows = {
    Variant.AB: _ab,
    Variant.PHIP: _phip,
    Variant.AAXX_sum: _aaxx(+1),
    Variant.AAXX_diff: _aaxx(-1),
    Variant.NOVEL: _novel,
}


def matching_catalog(variant, **couplings: float) -> MatchingCondition:
    """Return the matching condition of the analogue for the couplings.

    The rf amplitude matches the modulation frequency, the Rabi frequency
    of the transfer is given by the driving term.
    """
    try:
        variant = Variant(variant)
    except ValueError:
        raise errors.ParameterError(
            "variant", variant, "expected one of " +
            ", ".join(v.value for v in Variant))

    transition, rabi_hz, resonance_hz = _rows[variant](couplings)
    return MatchingCondition(variant=variant.value,
                             transition=transition,
                             matched_nut_hz=abs(resonance_hz),
                             rabi_hz=rabi_hz,
                             resonance_hz=resonance_hz)
