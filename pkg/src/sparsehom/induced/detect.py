"""Randomised induced-subgraph detection with one-sided error."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graph import Graph
from ..homcount.circuit import build_hom_circuit
from .algebra import BatchPlan, character_values, parity_coefficients
from .recipes import DetectionRecipe

# trials evaluated together; bounds the (gates x columns) work array
TRIAL_BATCH = 8


@dataclass(frozen=True)
class DetectionResult:
    found: bool
    trials_run: int
    hit_trial: int | None = None      # first trial with a nonzero sum

    def __str__(self):
        return "found" if self.found else "not-found"


def trial_labels(seed: int, trials: int, n: int, k: int) -> list[np.ndarray]:
    """Per-trial host labels in Z_2^k, each trial from its own spawned generator."""
    children = np.random.SeedSequence(seed).spawn(trials)
    return [np.random.default_rng(c).integers(0, 1 << k, size=n) for c in children]


def build_plans(recipe: DetectionRecipe, h: Graph) -> list[BatchPlan]:
    plans = []
    for t in recipe.terms:
        c = build_hom_circuit(t.supergraph, t.decomposition, h, t.constraints)
        if c.output is not None:
            plans.append(BatchPlan(c))
    return plans


def detect_induced(recipe: DetectionRecipe, h: Graph, trials: int | None = None,
                   seed: int | None = None) -> DetectionResult:
    """Report whether h has an induced copy of the recipe's pattern.

    "found" is always correct.  "not-found" can be a false negative when
    every trial's random labels happen to cancel a nonzero polynomial.
    """
    trials = recipe.trials if trials is None else trials
    seed = recipe.seed if seed is None else seed
    if trials < 1:
        raise ValueError("need at least one trial")
    k = recipe.dimension
    degree = recipe.pattern.vertex_count
    if h.vertex_count < degree:
        return DetectionResult(False, 0)
    plans = build_plans(recipe, h)
    if not plans:
        # the polynomial is zero as a formal sum: no trial can succeed
        return DetectionResult(False, trials)
    labels = trial_labels(seed, trials, h.vertex_count, k)
    width = 1 << k
    for lo in range(0, trials, TRIAL_BATCH):
        batch = labels[lo:lo + TRIAL_BATCH]
        y = np.concatenate([character_values(lab, k) for lab in batch], axis=1)
        chi = np.zeros(y.shape[1], dtype=np.uint8)
        for p in plans:
            chi += p.evaluate(y)
        coeffs = parity_coefficients(chi.reshape(len(batch), width), k, degree)
        hits = np.flatnonzero(coeffs.any(axis=1))
        if hits.size:
            return DetectionResult(True, lo + int(hits[0]) + 1, lo + int(hits[0]))
    return DetectionResult(False, trials)
