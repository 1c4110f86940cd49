"""CSV writers/readers for episode logs, metric summaries and profiles.

Floats are written with shortest round-trip repr so identical runs produce
byte-identical files.
"""
from __future__ import annotations

import csv
from pathlib import Path

from .episode import LOG_COLUMNS, METRIC_NAMES, EpisodeResult, PredictionErrorProfile


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int,)):
        return str(v)
    return repr(float(v))


def write_episode_csv(path: Path, result: EpisodeResult) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LOG_COLUMNS)
        for row in result.rows:
            w.writerow([_fmt(v) for v in row[:-1]] + [str(int(row[-1]))])
    return path


def write_metrics_csv(path: Path, entries: list[tuple[int, int, dict]]) -> Path:
    """entries: (episode index, seed, metrics dict)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("episode", "seed") + METRIC_NAMES)
        for episode, seed, metrics in entries:
            w.writerow([str(episode), str(seed)]
                       + [_fmt(metrics[k]) for k in METRIC_NAMES])
    return path


def read_metrics_csv(path: Path) -> dict[str, list[float]]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        out: dict[str, list[float]] = {}
        for row in reader:
            for key, val in row.items():
                out.setdefault(key, []).append(float(val))
    return out


def write_profile_csv(path: Path, profile: PredictionErrorProfile) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("i", "mean_err", "sd_err"))
        for i in range(profile.N):
            w.writerow([str(i + 1), _fmt(profile.mean_err[i]),
                        _fmt(profile.sd_err[i])])
    return path
