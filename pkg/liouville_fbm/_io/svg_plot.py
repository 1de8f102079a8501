from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple, Union

import matplotlib
from matplotlib.figure import Figure

SVG_RC = {"svg.hashsalt": "liouville-fbm", "svg.fonttype": "none"}

Series = Tuple[Sequence[float], Sequence[float]]


def series_id(theta: float) -> str:
    return f"series-theta-{theta:g}"


def structure_function_svg(
    path: Union[str, Path],
    series: Mapping[float, Series],
    title: str = "",
    description: Optional[str] = None,
) -> Path:
    """
    Log-log plot of one structure function per ``theta``. Each line carries
    the element id ``series-theta-<theta>``; the file has no date stamp and
    a fixed hash salt, so equal inputs give equal bytes. ``description`` lands in
    the SVG metadata block.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with matplotlib.rc_context(SVG_RC):
        fig = Figure(figsize=(6.0, 4.0))
        ax = fig.add_subplot()
        for theta in sorted(series):
            h, S = series[theta]
            (line,) = ax.loglog(h, S, marker="o", markersize=3, label=f"theta={theta:g}")
            line.set_gid(series_id(theta))
        ax.set_xlabel("lag h")
        ax.set_ylabel("E||U(t+h) - U(t)||^2")
        if title:
            ax.set_title(title)
        ax.legend()
        metadata = {"Date": None}
        if description:
            metadata["Description"] = description
        fig.savefig(path, format="svg", metadata=metadata)
    return path
