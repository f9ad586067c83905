import inspect
import numpy
import os

from typing import Optional, Sequence, Union

from spincraft import errors


threads_env = "SPINCRAFT_THREADS"


def filter_callable_arguments(callable, **kwargs):
    argnames = inspect.getfullargspec(callable)
    return {k: v for k, v in kwargs.items() if k in argnames.args}


def parse_range(text: Union[str, Sequence[float]],
                name: str = "range",
                count: Optional[int] = None) -> numpy.ndarray:
    """Parse "start:stop:count" into an inclusive grid.

    The count may be left out ("start:stop") when a default count is given.
    A list of numbers is returned as an array unchanged, a single number
    yields a one-point grid.
    """
    if isinstance(text, str) and text.count(":") == 1 and count is not None:
        text = f"{text}:{count}"

    if not isinstance(text, str):
        values = numpy.atleast_1d(numpy.asarray(text, dtype=float))
        if values.size == 0:
            raise errors.ParameterError(name, text, "empty grid")
        return values

    parts = text.split(":")
    try:
        if len(parts) == 1:
            return numpy.array([float(parts[0])])
        if len(parts) != 3:
            raise ValueError(text)
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise errors.ParameterError(name, text, "expected start:stop:count")

    if count < 1:
        raise errors.ParameterError(name, text, "count must be positive")
    if count == 1:
        return numpy.array([start])
    return numpy.linspace(start, stop, count)


def default_threads(threads: Optional[int] = None) -> int:
    """Return the number of sweep workers.

    Explicit value wins over the environment, the environment wins over the
    number of available cores.
    """
    if threads is None:
        threads = os.environ.get(threads_env) or os.cpu_count() or 1
    try:
        threads = int(threads)
    except ValueError:
        raise errors.ParameterError("threads", threads, "not an integer")
    if threads < 1:
        raise errors.ParameterError("threads", threads, "must be positive")
    return threads
