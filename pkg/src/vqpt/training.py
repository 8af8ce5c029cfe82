"""Loss, gradients, optimizers and trial orchestration."""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import kernels, seeding, swaptest
from .ansatz import Ansatz, apply_ansatz
from .datasets import Dataset

log = logging.getLogger(__name__)

PLATEAU_TOL = 1e-9
# d/dtheta of A cos(theta/2) + B sin(theta/2) + (frequency-1 terms), from shifts of pi/2 and pi
_HALF_FREQ_COEF = (1.0 - math.sqrt(2.0)) / 4.0


class ExperimentError(RuntimeError):
    pass


@dataclass
class OptimizerConfig:
    method: str = "adam"
    learning_rate: float = 0.01
    max_epochs: int = 2000
    loss_threshold: float = 1e-6
    plateau_patience: int = 200
    gradient_mode: str = "exact"
    overlap_mode: str = "direct"
    shots: Optional[int] = None  # used by swaptest overlaps and parameter-shift gradients

    def __post_init__(self):
        if self.method not in ("adam", "sgd"):
            raise ValueError(f"method must be 'adam' or 'sgd', got {self.method!r}")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be > 0")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.loss_threshold < 0:
            raise ValueError("loss_threshold must be >= 0")
        if self.gradient_mode not in ("exact", "parameter_shift"):
            raise ValueError(f"gradient_mode must be 'exact' or 'parameter_shift', got {self.gradient_mode!r}")
        if self.overlap_mode not in ("direct", "swaptest"):
            raise ValueError(f"overlap_mode must be 'direct' or 'swaptest', got {self.overlap_mode!r}")


@dataclass
class LossReport:
    f: float
    per_state_distances: np.ndarray


@dataclass
class TrialRecord:
    trial_id: int
    trial_seed: int
    epochs_run: int
    loss_history: list
    theta_final: list
    similarity: float
    accuracy: float
    phase_aligned_similarity: float = float("nan")
    stop_reason: str = ""
    failed: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "TrialRecord":
        return cls(**data)


# -- loss and gradients -------------------------------------------------------

def _check(ansatz: Ansatz, theta, dataset: Dataset):
    if len(theta) != ansatz.num_params:
        raise ValueError(f"expected {ansatz.num_params} parameters, got {len(theta)}")
    if dataset.num_qubits != ansatz.num_qubits:
        raise ValueError(f"dataset has {dataset.num_qubits} qubits, ansatz has {ansatz.num_qubits}")


def loss(ansatz: Ansatz, theta, dataset: Dataset, overlap_mode="direct", shots=None, rng=None) -> LossReport:
    """Mean squared distance between circuit outputs and ideal outputs.

    Each distance is 2 - 2 Re <ideal_j|C(theta)|psi_j>; the real overlap is taken
    either directly or through the two-fidelity SWAP-test reconstruction.
    """
    _check(ansatz, theta, dataset)
    outputs = apply_ansatz(ansatz, theta, dataset.inputs)
    if overlap_mode == "direct":
        re = np.einsum("bi,bi->b", dataset.ideal_outputs.conj(), outputs).real
    elif overlap_mode == "swaptest":
        re = swaptest.overlap_re(dataset.ideal_outputs, outputs, shots, rng)
    else:
        raise ValueError(f"unknown overlap mode {overlap_mode!r}")
    distances = 2.0 - 2.0 * re
    return LossReport(float(distances.mean()), distances)


def loss_and_gradient(ansatz: Ansatz, theta, dataset: Dataset):
    """Direct-overlap loss and its adjoint-mode gradient in one sweep."""
    _check(ansatz, theta, dataset)
    ops, fixed = ansatz.program
    overlaps, grad_re = kernels.overlap_grad(
        dataset.inputs, dataset.ideal_outputs, ops, fixed, theta, ansatz.num_params)
    n = len(dataset)
    return float(2.0 - 2.0 * overlaps.real.mean()), -2.0 / n * grad_re


def gradient_exact(ansatz: Ansatz, theta, dataset: Dataset) -> np.ndarray:
    return loss_and_gradient(ansatz, theta, dataset)[1]


def gradient_parameter_shift(ansatz: Ansatz, theta, dataset: Dataset, shots=None, rng=None) -> np.ndarray:
    """Loss gradient from shifted evaluations of the SWAP-test observables.

    ``a`` (a fidelity) only has frequency 1 in each angle, so the +-pi/2 rule is
    exact. ``b = 2 p0 f = |1 + c|^2 / 2`` also carries the frequency-1/2 term
    ``Re c``; a +-pi evaluation pair removes the bias of the +-pi/2 rule on it.
    """
    _check(ansatz, theta, dataset)
    theta = np.asarray(theta, dtype=float)
    ideal = dataset.ideal_outputs

    def observables(shift_k, shift):
        shifted = theta.copy()
        shifted[shift_k] += shift
        outputs = apply_ansatz(ansatz, shifted, dataset.inputs)
        a, p0, f = swaptest.overlap_observables(ideal, outputs, shots, rng)
        return a, 2.0 * p0 * f

    grad = np.zeros(len(theta))
    for k in range(len(theta)):
        a_p, b_p = observables(k, np.pi / 2)
        a_m, b_m = observables(k, -np.pi / 2)
        _, b_pp = observables(k, np.pi)
        _, b_mm = observables(k, -np.pi)
        da = 0.5 * (a_p - a_m)
        db = 0.5 * (b_p - b_m) + _HALF_FREQ_COEF * (b_pp - b_mm)
        d_re = db - 0.5 * da
        grad[k] = -2.0 * d_re.mean()
    return grad


# -- figures of merit ---------------------------------------------------------

def similarity(c: np.ndarray, u: np.ndarray) -> float:
    """1 - ||C - U|| / (2 ||U||) with Frobenius norms; sensitive to global phase."""
    if c.shape != u.shape:
        raise ValueError(f"dimension mismatch: {c.shape} vs {u.shape}")
    return float(1.0 - np.linalg.norm(c - u) / (2.0 * np.linalg.norm(u)))


def phase_aligned_similarity(c: np.ndarray, u: np.ndarray) -> float:
    """``similarity`` after rotating C by the global phase that best matches U."""
    overlap = np.vdot(c, u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return similarity(phase * c, u)


def accuracy(ansatz: Ansatz, theta, validation: Dataset, shots=None, rng=None) -> float:
    """Mean |<ideal_j|C|phi_j>| over the validation set, from SWAP-test fidelities."""
    _check(ansatz, theta, validation)
    outputs = apply_ansatz(ansatz, theta, validation.inputs)
    fid = swaptest.swap_test_fidelities(validation.ideal_outputs, outputs, shots, rng)
    return float(np.sqrt(np.clip(fid, 0.0, 1.0)).mean())


# -- optimizers ---------------------------------------------------------------

class Adam:
    def __init__(self, lr=0.01, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = self.v = None
        self.t = 0

    def step(self, theta, grad):
        if self.m is None:
            self.m = np.zeros_like(theta)
            self.v = np.zeros_like(theta)
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1 ** self.t)
        v_hat = self.v / (1 - self.beta2 ** self.t)
        return theta - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class SGD:
    def __init__(self, lr=0.01):
        self.lr = lr

    def step(self, theta, grad):
        return theta - self.lr * grad


def make_optimizer(config: OptimizerConfig):
    if config.method == "adam":
        return Adam(config.learning_rate)
    return SGD(config.learning_rate)


# -- trials -------------------------------------------------------------------

def _objective(config, ansatz, theta, training, rng):
    """Loss value and gradient per the configured overlap and gradient modes."""
    if config.gradient_mode == "exact" and config.overlap_mode == "direct":
        return loss_and_gradient(ansatz, theta, training)
    f = loss(ansatz, theta, training, config.overlap_mode, config.shots, rng).f
    if config.gradient_mode == "exact":
        grad = gradient_exact(ansatz, theta, training)
    else:
        grad = gradient_parameter_shift(ansatz, theta, training, config.shots, rng)
    return f, grad


def run_trial(config: OptimizerConfig, ansatz: Ansatz, training: Dataset, validation: Dataset,
              trial_seed: int, target: Optional[np.ndarray] = None, theta0=None,
              trial_id: int = 0, progress_every: int = 0) -> TrialRecord:
    """Train one randomly initialized circuit, then score it.

    Stops at ``max_epochs``, when the loss drops below ``loss_threshold``, or
    when the best loss has not improved by more than 1e-9 for
    ``plateau_patience`` epochs. Non-finite values end the trial as failed.
    """
    init_rng, shot_rng = seeding.trial_streams(trial_seed)
    theta = ansatz.init_params(init_rng) if theta0 is None else np.array(theta0, dtype=float)
    optimizer = make_optimizer(config)
    history = []
    best = math.inf
    since_best = 0
    stop = "max_epochs"
    failed = False
    for epoch in range(config.max_epochs):
        f, grad = _objective(config, ansatz, theta, training, shot_rng)
        if not (math.isfinite(f) and np.all(np.isfinite(grad))):
            stop, failed = "non_finite", True
            break
        history.append(f)
        if progress_every and epoch % progress_every == 0:
            log.info("trial %d epoch %d loss %.3e", trial_id, epoch, f)
        if f < config.loss_threshold:
            stop = "threshold"
            break
        if f < best - PLATEAU_TOL:
            best, since_best = f, 0
        else:
            since_best += 1
            if config.plateau_patience and since_best >= config.plateau_patience:
                stop = "plateau"
                break
        theta = optimizer.step(theta, grad)

    if failed or not history:
        return TrialRecord(trial_id, trial_seed, len(history), history, theta.tolist(),
                           float("nan"), float("nan"), stop_reason=stop, failed=True)
    acc = accuracy(ansatz, theta, validation, config.shots, shot_rng)
    sim = aligned = float("nan")
    if target is not None:
        circuit = ansatz.unitary(theta)
        sim = similarity(circuit, target)
        aligned = phase_aligned_similarity(circuit, target)
    return TrialRecord(trial_id, trial_seed, len(history), history, theta.tolist(),
                       sim, acc, aligned, stop)


@dataclass
class ExperimentResult:
    records: list
    best_index: int
    summary: dict = field(default_factory=dict)

    @property
    def best(self) -> TrialRecord:
        return self.records[self.best_index]


def summarize(records) -> dict:
    ok = [r for r in records if not r.failed]
    sims = np.array([r.similarity for r in ok])
    accs = np.array([r.accuracy for r in ok])
    out = {
        "trials": len(records),
        "completed": len(ok),
        "max_similarity": float(sims.max()),
        "mean_similarity": float(sims.mean()),
        "std_similarity": float(sims.std()),
        "max_accuracy": float(accs.max()),
        "mean_accuracy": float(accs.mean()),
    }
    if len(ok) > 1 and sims.std() > 0 and accs.std() > 0:
        out["accuracy_similarity_correlation"] = float(np.corrcoef(accs, sims)[0, 1])
    return out


def thread_count() -> int:
    env = os.environ.get("VQPT_THREADS")
    return max(1, int(env)) if env else (os.cpu_count() or 1)


def run_experiment(config: OptimizerConfig, ansatz: Ansatz, training: Dataset, validation: Dataset,
                   trial_seeds, target: Optional[np.ndarray] = None, threads: Optional[int] = None,
                   progress_every: int = 0) -> ExperimentResult:
    """Run independent trials and select the one with the highest validation accuracy."""
    trial_seeds = list(trial_seeds)
    if not trial_seeds:
        raise ExperimentError("no trials requested")

    def one(item):
        i, seed = item
        return run_trial(config, ansatz, training, validation, seed, target,
                         trial_id=i, progress_every=progress_every)

    threads = threads or thread_count()
    items = list(enumerate(trial_seeds))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(one, items))
    else:
        records = [one(item) for item in items]
    ok = [i for i, r in enumerate(records) if not r.failed]
    if not ok:
        raise ExperimentError(f"all {len(records)} trials failed")
    best = max(ok, key=lambda i: records[i].accuracy)
    return ExperimentResult(records, best, summarize(records))
