"""Shared helpers for the demo scripts: output folder and optional plotting."""

import os
from pathlib import Path

OUT = Path(os.environ.get("CHAINSURVIVAL_DEMO_OUT", "demo_output"))


def pyplot():
    """Return matplotlib.pyplot on the Agg backend, or None if matplotlib is absent."""
    try:
        import matplotlib
    except ImportError:
        print("(matplotlib not installed: figures skipped)")
        return None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def save(fig, name):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"figure written to {path}")
