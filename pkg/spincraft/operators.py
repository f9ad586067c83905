"""Operator algebra of small spin-1/2 systems.

Matrices are dense and expressed in the Zeeman product basis with spin 1 as
the slowest index and |α> before |β>. Operators and states are immutable,
every arithmetic operation returns a new value.
"""

import enum
import itertools
import numpy

from typing import Dict, List, Optional, Sequence, Tuple, Union

from spincraft import errors


max_spins = 6

hermitian_tolerance = 1e-12
unitary_tolerance = 1e-10
norm_tolerance = 1e-12
orthogonality_tolerance = 1e-10


class Role(enum.Enum):
    """Role tag of an operator, validated on construction."""

    Hermitian = "hermitian"
    Unitary = "unitary"
    Generic = "generic"


class Axis(enum.Enum):

    X = "x"
    Y = "y"
    Z = "z"


_pauli = {
    Axis.X: numpy.array([[0, 0.5], [0.5, 0]], dtype=complex),
    Axis.Y: numpy.array([[0, -0.5j], [0.5j, 0]], dtype=complex),
    Axis.Z: numpy.array([[0.5, 0], [0, -0.5]], dtype=complex),
}


def _frozen(array: numpy.ndarray) -> numpy.ndarray:
    array.setflags(write=False)
    return array


def _check_dim(dim: int) -> None:
    if dim < 1 or dim & (dim - 1):
        raise errors.DimensionError("a power of two", dim)


def hermitian_deviation(matrix: numpy.ndarray) -> float:
    """Largest deviation of the matrix from its adjoint, relative to the
    largest element when that exceeds one."""
    scale = max(1.0, float(numpy.max(numpy.abs(matrix), initial=0.0)))
    return float(numpy.max(numpy.abs(matrix - matrix.conj().T),
                           initial=0.0)) / scale


def unitary_deviation(matrix: numpy.ndarray) -> float:
    eye = numpy.eye(matrix.shape[0])
    return float(numpy.max(numpy.abs(matrix.conj().T @ matrix - eye),
                           initial=0.0))


class Operator:
    """Dense complex operator on a 2^N dimensional spin space.

    Attributes:
        matrix -- read-only complex matrix
        role -- validated role of the operator
    """

    __slots__ = ("_matrix", "_role")

    def __init__(self, matrix, role: Union[Role, str] = Role.Generic):
        matrix = numpy.array(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise errors.DimensionError("a square matrix", matrix.shape)
        _check_dim(matrix.shape[0])

        role = Role(role)
        if role is Role.Hermitian:
            deviation = hermitian_deviation(matrix)
            if deviation >= hermitian_tolerance:
                raise errors.HermiticityError(deviation)
        elif role is Role.Unitary:
            deviation = unitary_deviation(matrix)
            if deviation >= unitary_tolerance:
                raise errors.UnitarityError(deviation)

        self._matrix = _frozen(matrix)
        self._role = role

    @classmethod
    def hermitian(cls, matrix) -> "Operator":
        """Symmetrize the matrix and tag the result as Hermitian.

        Products such as U H U† are Hermitian only up to rounding, the
        symmetrization removes the residue.
        """
        matrix = numpy.asarray(matrix, dtype=complex)
        return cls(0.5 * (matrix + matrix.conj().T), Role.Hermitian)

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(numpy.eye(dim), Role.Hermitian)

    @classmethod
    def zeros(cls, dim: int) -> "Operator":
        return cls(numpy.zeros((dim, dim)), Role.Hermitian)

    @property
    def matrix(self) -> numpy.ndarray:
        return self._matrix

    @property
    def role(self) -> Role:
        return self._role

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @property
    def num_spins(self) -> int:
        return self.dim.bit_length() - 1

    def is_hermitian(self, atol: float = hermitian_tolerance) -> bool:
        return hermitian_deviation(self._matrix) < atol

    def is_unitary(self, atol: float = unitary_tolerance) -> bool:
        return unitary_deviation(self._matrix) < atol

    def _check_same_dim(self, other: "Operator") -> None:
        if self.dim != other.dim:
            raise errors.DimensionError(self.dim, other.dim)

    def dag(self) -> "Operator":
        return Operator(self._matrix.conj().T, self._role)

    def trace(self) -> complex:
        return complex(numpy.trace(self._matrix))

    def inner(self, other: "Operator") -> complex:
        """Hilbert-Schmidt product Tr{A† B}."""
        self._check_same_dim(other)
        return complex(numpy.vdot(self._matrix, other._matrix))

    def norm(self) -> float:
        return float(numpy.linalg.norm(self._matrix))

    def commutator(self, other: "Operator") -> "Operator":
        self._check_same_dim(other)
        a, b = self._matrix, other._matrix
        return Operator(a @ b - b @ a)

    def conjugate(self, u: "Operator") -> "Operator":
        """Return U A U†, Hermitian operators stay Hermitian."""
        self._check_same_dim(u)
        matrix = u._matrix @ self._matrix @ u._matrix.conj().T
        if self._role is Role.Hermitian:
            return Operator.hermitian(matrix)
        return Operator(matrix)

    def kron(self, other: "Operator") -> "Operator":
        role = self._role if self._role is other._role else Role.Generic
        return Operator(numpy.kron(self._matrix, other._matrix), role)

    def expectation(self, state: "StateVector") -> complex:
        if state.dim != self.dim:
            raise errors.DimensionError(self.dim, state.dim)
        v = state.amplitudes
        return complex(numpy.vdot(v, self._matrix @ v))

    def apply(self, state: "StateVector") -> numpy.ndarray:
        """Return the (unnormalized) vector A|v>."""
        if state.dim != self.dim:
            raise errors.DimensionError(self.dim, state.dim)
        return self._matrix @ state.amplitudes

    def allclose(self, other: "Operator", atol: float = 1e-12) -> bool:
        self._check_same_dim(other)
        return bool(numpy.allclose(self._matrix, other._matrix,
                                   rtol=0, atol=atol))

    def __add__(self, other: "Operator") -> "Operator":
        self._check_same_dim(other)
        role = Role.Hermitian if (self._role is other._role is
                                  Role.Hermitian) else Role.Generic
        return Operator(self._matrix + other._matrix, role)

    def __sub__(self, other: "Operator") -> "Operator":
        return self + (-other)

    def __neg__(self) -> "Operator":
        role = Role.Generic if self._role is Role.Unitary else self._role
        return Operator(-self._matrix, role)

    def __mul__(self, scalar: complex) -> "Operator":
        if isinstance(scalar, Operator):
            return NotImplemented
        role = Role.Generic
        if self._role is Role.Hermitian and numpy.isreal(scalar):
            role = Role.Hermitian
        return Operator(self._matrix * scalar, role)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Operator":
        return self * (1.0 / scalar)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_same_dim(other)
        role = Role.Unitary if (self._role is other._role is
                                Role.Unitary) else Role.Generic
        return Operator(self._matrix @ other._matrix, role)

    def __repr__(self) -> str:
        return f"<Operator dim={self.dim} role={self._role.value}>"


class StateVector:
    """Normalized state vector of a spin system."""

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes):
        amplitudes = numpy.array(amplitudes, dtype=complex).reshape(-1)
        _check_dim(amplitudes.size)

        norm = numpy.linalg.norm(amplitudes)
        if abs(norm - 1.0) >= norm_tolerance:
            raise errors.ParameterError("state norm", norm, "must be 1")
        self._amplitudes = _frozen(amplitudes)

    @classmethod
    def normalized(cls, amplitudes) -> "StateVector":
        amplitudes = numpy.asarray(amplitudes, dtype=complex)
        norm = numpy.linalg.norm(amplitudes)
        if norm == 0:
            raise errors.ParameterError("state norm", 0.0, "zero vector")
        return cls(amplitudes / norm)

    @classmethod
    def product(cls, labels: str) -> "StateVector":
        """Build a Zeeman product state from a string of 'a' and 'b'."""
        index = _product_index(labels)
        amplitudes = numpy.zeros(2 ** len(labels), dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @property
    def amplitudes(self) -> numpy.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.size

    def inner(self, other: "StateVector") -> complex:
        """Overlap <self|other>."""
        if self.dim != other.dim:
            raise errors.DimensionError(self.dim, other.dim)
        return complex(numpy.vdot(self._amplitudes, other._amplitudes))

    def outer(self, other: "StateVector") -> numpy.ndarray:
        """Matrix |self><other|."""
        return numpy.outer(self._amplitudes, other._amplitudes.conj())

    def projector(self) -> Operator:
        return Operator.hermitian(self.outer(self))

    def __repr__(self) -> str:
        return f"<StateVector dim={self.dim}>"


def _product_index(labels: str) -> int:
    index = 0
    for label in labels:
        if label not in ("a", "b"):
            raise errors.ParameterError("product label", label,
                                        "expected 'a' or 'b'")
        index = 2 * index + (label == "b")
    return index


def _check_spins(num_spins: int, *indices: int) -> None:
    if not 1 <= num_spins <= max_spins:
        raise errors.SpinIndexError(num_spins, max_spins)
    for index in indices:
        if not 1 <= index <= num_spins:
            raise errors.SpinIndexError(index, num_spins)


def _check_pair(pair: Tuple[int, int], num_spins: int) -> Tuple[int, int]:
    j, k = pair
    _check_spins(num_spins, j, k)
    if j == k:
        raise errors.ParameterError("pair", pair, "indices must differ")
    return j, k


def _embed(matrix: numpy.ndarray, num_spins: int,
           spin_index: int) -> numpy.ndarray:
    left = numpy.eye(2 ** (spin_index - 1))
    right = numpy.eye(2 ** (num_spins - spin_index))
    return numpy.kron(numpy.kron(left, matrix), right)


def angular_momentum(num_spins: int, spin_index: int,
                     axis: Union[Axis, str]) -> Operator:
    """Cartesian angular momentum operator I_{jα} of a single spin."""
    _check_spins(num_spins, spin_index)
    matrix = _embed(_pauli[Axis(axis)], num_spins, spin_index)
    return Operator(matrix, Role.Hermitian)


def total_angular_momentum(num_spins: int, axis: Union[Axis, str],
                           spins: Optional[Sequence[int]] = None) -> Operator:
    """Sum of I_{jα} over the given spins (all spins by default)."""
    spins = range(1, num_spins + 1) if spins is None else spins
    matrix = numpy.zeros((2 ** num_spins,) * 2, dtype=complex)
    for j in spins:
        matrix = matrix + angular_momentum(num_spins, j, axis).matrix
    return Operator(matrix, Role.Hermitian)


def scalar_product(num_spins: int, j: int, k: int) -> Operator:
    """Isotropic coupling operator I_j·I_k."""
    _check_pair((j, k), num_spins)
    matrix = sum(angular_momentum(num_spins, j, axis).matrix @
                 angular_momentum(num_spins, k, axis).matrix
                 for axis in Axis)
    return Operator.hermitian(matrix)


def exchange_operator(num_spins: int, j: int, k: int) -> Operator:
    """Permutation of spins j and k, P = 1/2 + 2 I_j·I_k."""
    matrix = 0.5 * numpy.eye(2 ** num_spins) + \
        2 * scalar_product(num_spins, j, k).matrix
    return Operator.hermitian(matrix)


def _pair_state(num_spins: int, pair: Tuple[int, int],
                spectators: str, terms: Dict[str, float]) -> StateVector:
    j, k = pair
    amplitudes = numpy.zeros(2 ** num_spins, dtype=complex)
    for pair_labels, coefficient in terms.items():
        labels, others = [], iter(spectators)
        for spin in range(1, num_spins + 1):
            if spin == j:
                labels.append(pair_labels[0])
            elif spin == k:
                labels.append(pair_labels[1])
            else:
                labels.append(next(others))
        amplitudes[_product_index("".join(labels))] += coefficient
    return StateVector(amplitudes)


def singlet_triplet_basis(pair: Tuple[int, int], num_spins: int,
                          spectators: Optional[str] = None
                          ) -> List[StateVector]:
    """Return [S0, T+, T0, T-] of the pair.

    Spins outside of the pair are put into the product state given by
    `spectators` (all |α> by default).
    """
    pair = _check_pair(pair, num_spins)
    if spectators is None:
        spectators = "a" * (num_spins - 2)
    if len(spectators) != num_spins - 2:
        raise errors.ParameterError("spectators", spectators,
                                    f"expected {num_spins - 2} labels")

    r = 1 / numpy.sqrt(2)
    return [
        _pair_state(num_spins, pair, spectators, {"ab": r, "ba": -r}),
        _pair_state(num_spins, pair, spectators, {"aa": 1.0}),
        _pair_state(num_spins, pair, spectators, {"ab": r, "ba": r}),
        _pair_state(num_spins, pair, spectators, {"bb": 1.0}),
    ]


singlet_triplet_labels = ("S0", "T+", "T0", "T-")


def single_transition_op(a: StateVector, b: StateVector,
                         component: str = "x",
                         phase: Optional[float] = None) -> Operator:
    """Fictitious spin-1/2 operator of the transition |a> <-> |b>.

    The component is one of "x", "y", "z", "identity" or "phase"; the last
    one requires the phase angle φ and gives cos φ I_x + sin φ I_y.
    """
    overlap = a.inner(b)
    if abs(overlap) >= orthogonality_tolerance:
        raise errors.OrthogonalityError(overlap)

    ab, ba = a.outer(b), b.outer(a)
    if component == "x":
        matrix = 0.5 * (ab + ba)
    elif component == "y":
        matrix = (ab - ba) / 2j
    elif component == "z":
        matrix = 0.5 * (a.outer(a) - b.outer(b))
    elif component == "identity":
        matrix = a.outer(a) + b.outer(b)
    elif component == "phase":
        if phase is None:
            raise errors.ParameterError("phase", phase, "required")
        matrix = (numpy.cos(phase) * 0.5 * (ab + ba) +
                  numpy.sin(phase) * (ab - ba) / 2j)
    else:
        raise errors.ParameterError("component", component,
                                    "expected x, y, z, phase or identity")
    return Operator.hermitian(matrix)


def singlet_order_op(pair: Tuple[int, int], num_spins: int) -> Operator:
    """Singlet order Q_SO = -(4/3) I_j·I_k of the pair."""
    j, k = _check_pair(pair, num_spins)
    return Operator.hermitian(-4 / 3 * scalar_product(num_spins, j, k).matrix)


def transition_decomposition(operator: Operator, pair: Tuple[int, int],
                             num_spins: int,
                             spectators: Optional[str] = None
                             ) -> Dict[str, Dict[str, float]]:
    """Project the operator onto the single-transition operators of the
    singlet/triplet transitions of the pair.

    Returns a mapping like {"S0,T+": {"x": .., "y": .., "z": ..}, ..}.
    """
    basis = singlet_triplet_basis(pair, num_spins, spectators)
    states = dict(zip(singlet_triplet_labels, basis))

    coefficients = {}
    for first, second in itertools.combinations(singlet_triplet_labels, 2):
        a, b = states[first], states[second]
        components = {}
        for component in ("x", "y", "z"):
            o = single_transition_op(a, b, component)
            components[component] = o.inner(operator).real / o.inner(o).real
        coefficients[f"{first},{second}"] = components
    return coefficients
