"""Shared helpers for the experiment scripts: config overrides and JSON output."""
from __future__ import annotations

import argparse
import dataclasses
from pathlib import Path

from commitment_limits.cli import dumps


def parse_config(cls, description: str):
    """Build an argparse parser from a dataclass and return a populated instance."""
    p = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        kind = type(default)
        if kind is bool:
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, action="store_true", default=default)
        elif kind in (tuple, list):
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=float, nargs="+", default=default)
        else:
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, type=kind, default=default)
    return cls(**vars(p.parse_args()))


def write_json(report: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding="utf-8")
    return path
