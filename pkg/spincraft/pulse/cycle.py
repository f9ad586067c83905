"""Cycle strings of the compensated spin-lock.

A cycle string is a sequence of tokens separated by optional whitespace:

    A        flip angle απ at the weak amplitude, phase +x
    B        flip angle απ at the strong amplitude, phase -x
    C1..C3   permutations AABB, ABBA, BBAA
    S1..S3   supercycles C2, C1C2, C1C2C3

The weak amplitude matches J and α = strong/(strong + weak), so that a
quartet of two A and two B elements lasts exactly 1/J.
"""

import numpy

from typing import List, Optional, Tuple

from spincraft import errors
from spincraft.pulse.sequence import CslicParams, PulseSegment, Sequence


elements = {
    "C1": "AABB",
    "C2": "ABBA",
    "C3": "BBAA",
}

supercycles = {
    "S1": ["C2"],
    "S2": ["C1", "C2"],
    "S3": ["C1", "C2", "C3"],
}


def tokenize(text: str) -> List[Tuple[int, str]]:
    """Split the cycle string into (offset, token) pairs."""
    tokens, position = [], 0
    while position < len(text):
        char = text[position]
        if char.isspace():
            position += 1
            continue
        if char in "AB":
            tokens.append((position, char))
            position += 1
            continue
        if char in "CS":
            end = position + 1
            while end < len(text) and text[end].isdigit():
                end += 1
            token = text[position:end]
            if token not in elements and token not in supercycles:
                raise errors.CycleSyntaxError(text, position, token)
            tokens.append((position, token))
            position = end
            continue
        raise errors.CycleSyntaxError(text, position, char)

    if not tokens:
        raise errors.CycleSyntaxError(text, 0, "")
    return tokens


def expand_cycle(text: str) -> str:
    """Expand the cycle string into the plain A/B letters."""
    letters = []
    for _, token in tokenize(text):
        if token in supercycles:
            letters.extend(elements[c] for c in supercycles[token])
        elif token in elements:
            letters.append(elements[token])
        else:
            letters.append(token)
    return "".join(letters)


def resolve_amplitudes(weak_nut_hz: float, strong_nut_hz: Optional[float],
                       alpha: Optional[float]) -> Tuple[float, float]:
    """Return (strong amplitude, alpha), completing the missing one."""
    if not weak_nut_hz > 0:
        raise errors.ParameterError("weak_nut_hz", weak_nut_hz,
                                    "must be positive")
    params = CslicParams.new(weak_nut_hz, alpha=alpha,
                             strong_nut_hz=strong_nut_hz)
    return params.strong_nut_hz, params.alpha


def parse_cycle(text: str, weak_nut_hz: float,
                strong_nut_hz: Optional[float] = None,
                alpha: Optional[float] = None,
                channel: str = "H", phase_rad: float = 0.0) -> Sequence:
    """Build the sequence described by a cycle string.

    Either the strong amplitude or alpha may be omitted, it is then derived
    from the other one.
    """
    letters = expand_cycle(text)
    strong_nut_hz, alpha = resolve_amplitudes(
        weak_nut_hz, strong_nut_hz, alpha)

    a = PulseSegment.new(channel, weak_nut_hz, 0.0,
                         alpha / (2 * weak_nut_hz))
    b = PulseSegment.new(channel, strong_nut_hz, numpy.pi,
                         alpha / (2 * strong_nut_hz))

    segments = [a if letter == "A" else b for letter in letters]
    params = dict(cycle=text, expansion=letters, j_hz=weak_nut_hz,
                  alpha=alpha, strong_nut_hz=strong_nut_hz,
                  phase_rad=phase_rad, channel=channel)
    seq = Sequence(segments, name=f"cycle:{text.strip()}", params=params)
    return seq.scaled_phase(phase_rad)


def cycle_count(text: str) -> int:
    """Number of primitive A/B quartets in the cycle string."""
    return max(1, len(expand_cycle(text)) // 4)


def repeat_cycle(text: str, n_cycles: int, weak_nut_hz: float,
                 strong_nut_hz: Optional[float] = None,
                 alpha: Optional[float] = None,
                 channel: str = "H", phase_rad: float = 0.0) -> Sequence:
    """Repeat the cycle string so that it holds about n_cycles quartets."""
    if n_cycles < 1:
        raise errors.ParameterError("n_cycles", n_cycles, "must be positive")

    repetitions = max(1, int(numpy.floor(n_cycles / cycle_count(text) + 0.5)))
    seq = parse_cycle(text, weak_nut_hz, strong_nut_hz, alpha,
                      channel, phase_rad)
    seq = seq * repetitions
    seq.params.update(repetitions=repetitions)
    return seq
