"""Door detection pipeline: Canny edges, line segments, and a Kohonen SOM classifier."""

from ._doorsom import (
    bench,
    canny,
    detect,
    detect_lines,
    evaluate,
    online_update,
    synth,
    train,
)

__all__ = [
    "bench",
    "canny",
    "detect",
    "detect_lines",
    "evaluate",
    "online_update",
    "synth",
    "train",
]
