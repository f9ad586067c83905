import contextlib
import csv
import json
import pathlib

from typing import IO, Iterator, List, Union

from spincraft import errors
from spincraft.analysis.transfer import EfficiencyCurve, TransferMap


Target = Union[str, pathlib.Path, IO[str]]

map_header = ["offset_hz", "eps_rf", "amplitude"]
curve_header = ["eps_rf", "amplitude"]


def fmt(value: float) -> str:
    """Render a number with nine significant digits."""
    return "{:.9g}".format(value)


@contextlib.contextmanager
def _opened(target: Target, mode: str) -> Iterator[IO[str]]:
    if hasattr(target, "write") or hasattr(target, "read"):
        yield target
        return
    with open(target, mode, encoding="utf-8", newline="") as f:
        yield f


def csv_export(target: Target,
               data: Union[TransferMap, EfficiencyCurve]) -> None:
    """Write a map or a curve as CSV.

    Map rows iterate over the rf error, the offset varies fastest.
    """
    with _opened(target, "w") as f:
        writer = csv.writer(f, lineterminator="\n")
        if isinstance(data, TransferMap):
            writer.writerow(map_header)
            for i, eps in enumerate(data.eps_axis):
                for j, offset in enumerate(data.offset_axis_hz):
                    writer.writerow([fmt(offset), fmt(eps),
                                     fmt(data.amplitude[i, j])])
        else:
            writer.writerow(curve_header)
            for eps, amplitude in zip(data.eps_axis, data.amplitude):
                writer.writerow([fmt(eps), fmt(amplitude)])


def _unique(values: List[float]) -> List[float]:
    return list(dict.fromkeys(values))


def load_csv(target: Target) -> Union[TransferMap, EfficiencyCurve]:
    """Read back a map or a curve written by csv_export."""
    with _opened(target, "r") as f:
        rows = list(csv.reader(f))

    if not rows:
        raise errors.ConfigError(target, "missing CSV header")
    header, rows = rows[0], rows[1:]
    try:
        values = [[float(v) for v in row] for row in rows]
    except ValueError as e:
        raise errors.ConfigError(target, f"malformed CSV value: {e}")

    if header == curve_header:
        return EfficiencyCurve([r[0] for r in values], [r[1] for r in values])
    if header != map_header:
        raise errors.ConfigError(target, f"unknown CSV header {header}")

    offsets = _unique([r[0] for r in values])
    eps = _unique([r[1] for r in values])
    if len(values) != len(offsets) * len(eps):
        raise errors.ConfigError(target, "rows do not form a full grid")

    amplitude = [[r[2] for r in values[i*len(offsets):(i+1)*len(offsets)]]
                 for i in range(len(eps))]
    return TransferMap(offsets, eps, amplitude)


def json_export(target: Target, m: TransferMap) -> None:
    """Write the map with its metadata block as JSON."""
    with _opened(target, "w") as f:
        json.dump(m.asdict(), f, indent=2, sort_keys=True)
        f.write("\n")


def load_json(target: Target) -> TransferMap:
    with _opened(target, "r") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise errors.ConfigError(target, f"malformed JSON: {e}")
    try:
        return TransferMap.from_dict(**data)
    except (KeyError, ValueError) as e:
        raise errors.ConfigError(target, f"malformed map: {e}")
