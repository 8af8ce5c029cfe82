"""Variational reconstruction of unitary processes with layered parametric circuits."""
from .ansatz import Ansatz, apply_ansatz, build_ansatz
from .datasets import Dataset, StateRecipe, make_dataset, sample_state
from .simcore import CapacityError, GateSpec, apply_gate, circuit_to_unitary, inner_product
from .swaptest import OverlapEstimate, fidelity, generalized_overlap, superposition_state
from .targets import RQCParams, TargetProcess, XXZParams, build_random_circuit, build_xxz_hamiltonian, evolve_unitary
from .training import (
    OptimizerConfig, TrialRecord, accuracy, gradient_exact, gradient_parameter_shift, loss,
    run_experiment, run_trial, similarity,
)

__version__ = "0.1.0"
