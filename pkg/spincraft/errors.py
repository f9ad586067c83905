class SpincraftError(Exception):
    """Base class of the library errors.

    Attributes:
        usage -- true when the error is caused by invalid user input
    """

    usage = False


class SpinIndexError(SpincraftError, IndexError):
    """Exception raised for a spin index outside of the spin system.

    Attributes:
        index -- requested spin index (1-based)
        num_spins -- number of spins in the system
    """

    def __init__(self, index: int, num_spins: int):
        self.index = index
        self.num_spins = num_spins

    def __str__(self):
        return "Spin index {0} is out of range 1..{1}".format(
            self.index, self.num_spins)


class DimensionError(SpincraftError, ValueError):
    """Exception raised for operators of incompatible dimensions.

    Attributes:
        expected_dim -- dimension required by the operation
        actual_dim -- dimension of the given operand
    """

    def __init__(self, expected_dim, actual_dim):
        self.expected_dim = expected_dim
        self.actual_dim = actual_dim

    def __str__(self):
        return "Dimension is {0}, while {1} is given".format(
            self.expected_dim, self.actual_dim)


class HermiticityError(SpincraftError, ValueError):
    """Exception raised when a Hermitian operator is required."""

    def __init__(self, deviation: float):
        self.deviation = deviation

    def __str__(self):
        return f"Operator is not Hermitian, max|M - M†| = {self.deviation:.3g}"


class UnitarityError(SpincraftError, ValueError):
    """Exception raised when a unitary operator is required."""

    def __init__(self, deviation: float):
        self.deviation = deviation

    def __str__(self):
        return f"Operator is not unitary, max|M†M - 1| = {self.deviation:.3g}"


class OrthogonalityError(SpincraftError, ValueError):
    """Exception raised for overlapping states of a transition."""

    def __init__(self, overlap: complex):
        self.overlap = overlap

    def __str__(self):
        return f"States are not orthogonal, |<a|b>| = {abs(self.overlap):.3g}"


class ChannelError(SpincraftError, KeyError):
    """Exception raised for a channel the spin system does not carry."""

    usage = True

    def __init__(self, channel: str, known=()):
        self.channel = channel
        self.known = tuple(known)

    def __str__(self):
        return "Channel '{0}' is unknown, expected one of {1}".format(
            self.channel, ", ".join(self.known) or "none")


class ParameterError(SpincraftError, ValueError):
    """Exception raised for an out-of-range parameter.

    Attributes:
        name -- parameter name
        value -- given value
        reason -- the violated requirement
    """

    usage = True

    def __init__(self, name: str, value, reason: str):
        self.name = name
        self.value = value
        self.reason = reason

    def __str__(self):
        return f"Invalid {self.name}={self.value!r}: {self.reason}"


class CycleSyntaxError(SpincraftError, ValueError):
    """Exception raised for a malformed cycle string.

    Attributes:
        text -- the parsed text
        position -- character offset of the offending token
        token -- the offending token
    """

    usage = True

    def __init__(self, text: str, position: int, token: str):
        self.text = text
        self.position = position
        self.token = token

    def __str__(self):
        if not self.token:
            return "Cycle is empty"
        return "Unexpected token '{0}' at offset {1} in '{2}'".format(
            self.token, self.position, self.text)


class SequenceError(SpincraftError, ValueError):
    """Exception raised for an empty or malformed pulse sequence."""

    def __init__(self, reason: str):
        self.reason = reason

    def __str__(self):
        return f"Invalid sequence: {self.reason}"


class ConfigError(SpincraftError, ValueError):
    """Exception raised for an invalid configuration file."""

    usage = True

    def __init__(self, path, reason: str):
        self.path = path
        self.reason = reason

    def __str__(self):
        return f"Configuration {self.path}: {self.reason}"
