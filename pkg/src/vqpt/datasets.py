"""Random product-plus-CZ input states and training/validation sets."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .simcore import GateSpec, apply_gates, basis_state, check_capacity


@dataclass(frozen=True)
class StateRecipe:
    ry_angles: tuple
    cz_pairs: tuple

    def __post_init__(self):
        n = len(self.ry_angles)
        object.__setattr__(self, "ry_angles", tuple(float(a) for a in self.ry_angles))
        object.__setattr__(self, "cz_pairs", tuple((int(c), int(t)) for c, t in self.cz_pairs))
        for c, t in self.cz_pairs:
            if c == t or not (0 <= c < n and 0 <= t < n):
                raise ValueError(f"bad CZ pair {(c, t)} for {n} qubits")

    @property
    def num_qubits(self) -> int:
        return len(self.ry_angles)

    def gates(self):
        out = [GateSpec("Ry", (q,), angle=a) for q, a in enumerate(self.ry_angles)]
        return out + [GateSpec("CZ", pair) for pair in self.cz_pairs]

    def prepare(self) -> np.ndarray:
        return apply_gates(basis_state(self.num_qubits), self.gates())

    def to_dict(self) -> dict:
        return {"ry_angles": list(self.ry_angles), "cz_pairs": [list(p) for p in self.cz_pairs]}

    @classmethod
    def from_dict(cls, data: dict) -> "StateRecipe":
        return cls(tuple(data["ry_angles"]), tuple(tuple(p) for p in data["cz_pairs"]))


def sample_recipe(n: int, rng: np.random.Generator, num_cz: int | None = None) -> StateRecipe:
    angles = rng.uniform(0.0, 2 * np.pi, n)
    pairs = []
    if n > 1:
        for _ in range(n if num_cz is None else num_cz):
            c, t = rng.choice(n, size=2, replace=False)
            pairs.append((c, t))
    return StateRecipe(tuple(angles), tuple(pairs))


def sample_state(n: int, rng: np.random.Generator, num_cz: int | None = None):
    """Ry(uniform [0, 2pi)) on each qubit, then ``num_cz`` (default n) CZs on random distinct pairs."""
    check_capacity(n)
    recipe = sample_recipe(n, rng, num_cz)
    return recipe, recipe.prepare()


@dataclass
class Dataset:
    role: str
    recipes: list
    inputs: np.ndarray  # (N, 2**n)
    ideal_outputs: np.ndarray  # (N, 2**n)
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.role not in ("training", "validation"):
            raise ValueError(f"role must be 'training' or 'validation', got {self.role!r}")
        if not len(self.recipes) == len(self.inputs) == len(self.ideal_outputs):
            raise ValueError("recipes, inputs and ideal outputs differ in length")

    def __len__(self):
        return len(self.recipes)

    @property
    def num_qubits(self) -> int:
        return self.inputs.shape[1].bit_length() - 1

    def to_dict(self) -> dict:
        return {
            "role": self.role,
            "seed": self.seed,
            "recipes": [r.to_dict() for r in self.recipes],
        }

    @classmethod
    def from_dict(cls, data: dict, target: np.ndarray) -> "Dataset":
        """Rebuild states from recipes; ideal outputs are recomputed from ``target``."""
        recipes = [StateRecipe.from_dict(r) for r in data["recipes"]]
        inputs = np.array([r.prepare() for r in recipes])
        return cls(data["role"], recipes, inputs, inputs @ target.T, seed=data.get("seed"))


def make_dataset(n: int, size: int, target: np.ndarray, rng: np.random.Generator,
                 role: str = "training", num_cz: int | None = None, seed: int | None = None) -> Dataset:
    if size < 1:
        raise ValueError(f"dataset size must be >= 1, got {size}")
    check_capacity(n)
    if target.shape != (1 << n, 1 << n):
        raise ValueError(f"target shape {target.shape} does not match {n} qubits")
    recipes = [sample_recipe(n, rng, num_cz) for _ in range(size)]
    inputs = np.array([r.prepare() for r in recipes])
    return Dataset(role, recipes, inputs, inputs @ target.T, seed=seed)
