import humanize
import sys

from typing import IO, Optional


def progress(done: int, total: int, bar_len: int = 30,
             stream: Optional[IO[str]] = None) -> None:
    """Render a progress line of the sweep on the error stream."""
    stream = stream or sys.stderr
    filled_len = int(round(bar_len * done / total)) if total else bar_len
    empty_len = bar_len - filled_len

    bar = "=" * filled_len + " " * empty_len
    done_text = humanize.intcomma(done)
    total_text = humanize.intcomma(total)
    print(f"[{bar}] {done_text}/{total_text}\r", end="", file=stream,
          flush=True)
    if done >= total:
        print("", file=stream, flush=True)
