"""Run configured experiments and persist their artifacts.

Artifacts written by :func:`learn` into ``output_dir``:

``result.json``
    versioned record: config echo, target provenance, dataset recipes,
    every trial, the best trial (highest validation accuracy) and summary
    statistics. Only ``created`` varies between identical runs.
``loss_curves.csv``
    columns ``epoch,trial,loss``.
``theta_best.json``
    ``{"n", "d", "pattern", "theta"}`` of the selected trial.

:func:`sweep_dt` writes ``dt_sweep.csv`` with ``dt,max_similarity,mean_similarity``.
"""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, seeding
from .ansatz import Ansatz
from .config import SCHEMA_VERSION, ExperimentConfig, with_overrides
from .datasets import Dataset, make_dataset
from .simcore import check_capacity
from .targets import TargetProcess, rqc_target, xxz_target
from .training import TrialRecord, accuracy, run_experiment, similarity

log = logging.getLogger(__name__)

RESULT_FILE = "result.json"
LOSS_FILE = "loss_curves.csv"
THETA_FILE = "theta_best.json"
SWEEP_FILE = "dt_sweep.csv"


@dataclass
class Setup:
    ansatz: Ansatz
    target: TargetProcess
    training: Dataset
    validation: Dataset


def build_target(cfg: ExperimentConfig) -> TargetProcess:
    params = cfg.target_params()
    return xxz_target(params) if cfg.target_kind == "xxz" else rqc_target(params)


def prepare(cfg: ExperimentConfig) -> Setup:
    check_capacity(cfg.n)
    target = build_target(cfg)
    u = target.unitary
    training = make_dataset(cfg.n, cfg.N, u, seeding.data_rng(cfg.master_seed, "training"),
                            "training", cfg.num_cz, seed=cfg.master_seed)
    validation = make_dataset(cfg.n, cfg.validation_size or cfg.N, u,
                              seeding.data_rng(cfg.master_seed, "validation"),
                              "validation", cfg.num_cz, seed=cfg.master_seed)
    return Setup(Ansatz(cfg.n, cfg.d, cfg.pattern), target, training, validation)


def execute(cfg: ExperimentConfig, setup: Setup | None = None):
    setup = setup or prepare(cfg)
    seeds = seeding.trial_seeds(cfg.master_seed, cfg.trials)
    result = run_experiment(cfg.optimizer, setup.ansatz, setup.training, setup.validation, seeds,
                            setup.target.unitary, progress_every=cfg.progress_every)
    return setup, result


def result_document(cfg: ExperimentConfig, setup: Setup, result) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "code_version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "config": cfg.to_dict(),
        "target": setup.target.provenance(),
        "ansatz": setup.ansatz.to_dict(),
        "datasets": {
            "training": setup.training.to_dict(),
            "validation": setup.validation.to_dict(),
        },
        "best_trial": result.best_index,
        "summary": result.summary,
        "trials": [r.to_dict() for r in result.records],
    }


def write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=2) + "\n")


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def load_trials(doc: dict) -> list:
    return [TrialRecord.from_dict(t) for t in doc["trials"]]


def write_loss_curves(path: Path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "trial", "loss"])
        for rec in records:
            for epoch, value in enumerate(rec.loss_history):
                writer.writerow([epoch, rec.trial_id, repr(value)])


def learn(cfg: ExperimentConfig, output_dir=None) -> dict:
    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    setup, result = execute(cfg)
    doc = result_document(cfg, setup, result)
    write_json(out / RESULT_FILE, doc)
    write_loss_curves(out / LOSS_FILE, result.records)
    write_json(out / THETA_FILE, {**setup.ansatz.to_dict(), "theta": result.best.theta_final})
    log.info("best trial %d: similarity %.5f accuracy %.5f",
             result.best_index, result.best.similarity, result.best.accuracy)
    return doc


def sweep_dt(cfg: ExperimentConfig, dts, output_dir=None) -> list:
    if cfg.target_kind != "xxz":
        raise ValueError("dt sweeps need an xxz target")
    out = Path(output_dir or cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for dt in dts:
        _, result = execute(with_overrides(cfg, dt=float(dt)))
        s = result.summary
        rows.append((float(dt), s["max_similarity"], s["mean_similarity"]))
        log.info("dt %.4f: max similarity %.5f", dt, s["max_similarity"])
    with open(out / SWEEP_FILE, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dt", "max_similarity", "mean_similarity"])
        writer.writerows([repr(v) for v in row] for row in rows)
    return rows


def validate(cfg: ExperimentConfig, theta_doc: dict, round_: int = 1) -> dict:
    """Score saved parameters on a freshly drawn validation set (and against the true target)."""
    saved = Ansatz.from_dict(theta_doc)
    expected = Ansatz(cfg.n, cfg.d, cfg.pattern)
    if saved != expected:
        raise ValueError(f"saved parameters are for {saved.to_dict()}, config describes {expected.to_dict()}")
    theta = np.asarray(theta_doc["theta"], dtype=float)
    if len(theta) != expected.num_params:
        raise ValueError(f"theta has {len(theta)} entries, ansatz needs {expected.num_params}")
    target = build_target(cfg)
    fresh = make_dataset(cfg.n, cfg.validation_size or cfg.N, target.unitary,
                         seeding.revalidation_rng(cfg.master_seed, round_), "validation", cfg.num_cz)
    return {
        "accuracy": accuracy(expected, theta, fresh),
        "similarity": similarity(expected.unitary(theta), target.unitary),
        "validation_size": len(fresh),
        "round": round_,
    }
