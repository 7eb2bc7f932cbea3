"""Python bindings for the fengshui environmental-sensing pipeline."""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Sequence

from . import _fengshui
from ._fengshui import FengshuiError, channel_names, feature_names, pearson, wh_ratio_score

__all__ = [
    "FengshuiError",
    "channel_names",
    "correlate",
    "default_survey_definition",
    "feature_names",
    "filter_candidates",
    "label_by_mean",
    "load_dataset",
    "loocv",
    "pearson",
    "run_cli",
    "session_features",
    "subset_search",
    "synth_dataset",
    "wellbeing_score",
    "wh_ratio_score",
]

Row = Mapping[str, object]


def _rows(rows: Iterable[Row]) -> str:
    return json.dumps(list(rows))


def _model(model: Mapping[str, object] | None) -> str:
    return "" if model is None else json.dumps(model)


def session_features(meta_text: str, csv_text: str, **options) -> dict:
    """Feature vector for one session given the meta file and sensor CSV contents."""
    return json.loads(_fengshui.session_features(meta_text, csv_text, **options))


def default_survey_definition() -> dict:
    return json.loads(_fengshui.default_survey_definition())


def wellbeing_score(record: Mapping[str, object], definition: Mapping[str, object] | None = None) -> float:
    return _fengshui.wellbeing_score(json.dumps(record), "" if definition is None else json.dumps(definition))


def correlate(rows: Iterable[Row]) -> list[tuple[str, float | None]]:
    return _fengshui.correlate(_rows(rows))


def filter_candidates(coefficients: Sequence[tuple[str, float | None]], threshold: float = 0.2) -> list[str]:
    return _fengshui.filter_candidates(list(coefficients), threshold)


def label_by_mean(rows: Iterable[Row]) -> tuple[list[int], float]:
    return _fengshui.label_by_mean(_rows(rows))


def loocv(rows: Iterable[Row], model: Mapping[str, object] | None = None, features: Sequence[str] = ()) -> dict:
    return json.loads(_fengshui.loocv(_rows(rows), _model(model), list(features)))


def subset_search(
    rows: Iterable[Row],
    candidates: Sequence[str],
    *,
    seed: int,
    model: Mapping[str, object] | None = None,
    cv: str = "loocv",
    jobs: int = 1,
) -> dict:
    return json.loads(_fengshui.subset_search(_rows(rows), list(candidates), _model(model), cv, seed, jobs))


def synth_dataset(
    n_rooms: int,
    *,
    seed: int,
    informative: Mapping[str, float] | None = None,
    noise_std: float = 0.3,
    spike_rate: float = 0.0,
    samples_per_room: int = 1000,
) -> list[dict]:
    pairs = list((informative or {}).items())
    return json.loads(_fengshui.synth_dataset(n_rooms, pairs, noise_std, spike_rate, seed, samples_per_room))


def load_dataset(path: str) -> tuple[list[dict], bool, list[str]]:
    rows, torn, warnings = _fengshui.load_dataset(str(path))
    return json.loads(rows), torn, warnings


def run_cli(*args: str) -> tuple[int, str, str]:
    """Run a CLI subcommand in-process and return (exit code, stdout, stderr)."""
    return _fengshui.run_cli([str(a) for a in args])
