"""A single discretized pursuit automaton (eDGPA) and the two operators that
partially rewind it when the environment changes.

All operations are pure: they return a new :class:`AutomatonState` and never
modify their input.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class AutomatonState:
    p: np.ndarray          # action probabilities
    z: np.ndarray          # selection counts (start at 1)
    r: np.ndarray          # running-mean reward estimates (start at 1)
    delta_step: float      # pursuit quantum 1 / (resolution * N)

    @property
    def n_actions(self) -> int:
        return self.p.shape[0]

    def copy(self) -> "AutomatonState":
        return replace(self, p=self.p.copy(), z=self.z.copy(), r=self.r.copy())

    def same_as(self, other: "AutomatonState") -> bool:
        """Bitwise equality of every field."""
        return (self.delta_step == other.delta_step
                and np.array_equal(self.p, other.p)
                and np.array_equal(self.z, other.z)
                and np.array_equal(self.r, other.r))


def init_automaton(n_actions: int, resolution: int) -> AutomatonState:
    if n_actions < 2:
        raise ValueError(f"an automaton needs at least 2 actions, got {n_actions}")
    if resolution < 1:
        raise ValueError(f"resolution must be at least 1, got {resolution}")
    return AutomatonState(
        p=np.full(n_actions, 1.0 / n_actions),
        z=np.ones(n_actions),
        r=np.ones(n_actions),
        delta_step=1.0 / (resolution * n_actions),
    )


def select_action(state: AutomatonState, rng: np.random.Generator) -> int:
    """Sample an action index with probability ``p[n]``."""
    cdf = np.cumsum(state.p)
    n = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    # guard against landing past the last positive entry through rounding
    n = min(n, state.n_actions - 1)
    while state.p[n] == 0.0:
        n -= 1
    return n


def edgpa_update(state: AutomatonState, chosen: int, feedback: float) -> AutomatonState:
    """One pursuit step after action ``chosen`` earned reward ``feedback``.

    Actions whose estimate is strictly above the chosen one's share ``+delta``;
    those strictly below share ``-delta``; ties are left alone. The chosen
    action absorbs the remainder.
    """
    n_actions = state.n_actions
    if not 0 <= chosen < n_actions:
        raise IndexError(f"action {chosen} outside [0, {n_actions})")
    if feedback < 0:
        raise ValueError(f"feedback must be non-negative, got {feedback}")

    z = state.z.copy()
    r = state.r.copy()
    r[chosen] = (z[chosen] * r[chosen] + feedback) / (z[chosen] + 1.0)
    z[chosen] += 1.0

    better = r > r[chosen]
    worse = r < r[chosen]
    w = int(better.sum())
    delta = state.delta_step
    p = state.p.copy()
    if w:
        p[better] = np.minimum(p[better] + delta / w, 1.0)
    p[worse] = np.maximum(p[worse] - delta / (n_actions - w), 0.0)
    p[chosen] = 0.0
    p[chosen] = 1.0 - p.sum()
    if p[chosen] < 0.0:
        p[chosen] = 0.0
        p /= p.sum()
    return AutomatonState(p=p, z=z, r=r, delta_step=delta)


def smoothing_amount(p: np.ndarray, delta_sigma: float, sigma_old: float,
                     sigma_new: float, phi: float) -> float:
    """Probability mass the smoothing operator moves off the top action."""
    total = sigma_old + sigma_new
    if total <= 0:
        raise ValueError("sigma_old + sigma_new must be positive")
    if delta_sigma < 0 or phi < 0:
        raise ValueError("delta_sigma and phi must be non-negative")
    n_actions = p.shape[0]
    m = int(np.argmax(p))
    psi = min(phi * delta_sigma / total * p[m], 1.0)
    # top may not drop below uniform, and no other action may overtake the old maximum
    runner_up = np.max(np.delete(p, m))
    cap = min(p[m] - 1.0 / n_actions, (n_actions - 1) * (p[m] - runner_up))
    return max(min(psi, cap), 0.0)


def smooth(state: AutomatonState, delta_sigma: float, sigma_old: float,
           sigma_new: float, phi: float) -> AutomatonState:
    """Move mass from the most probable action evenly onto all others.

    The larger the relative change in spread, the closer the output is to
    uniform. A zero change or ``phi == 0`` returns an identical state.
    """
    psi = smoothing_amount(state.p, delta_sigma, sigma_old, sigma_new, phi)
    if psi == 0.0:
        return state.copy()
    m = int(np.argmax(state.p))
    p = state.p + psi / (state.n_actions - 1)
    p[m] = state.p[m] - psi
    p /= p.sum()
    return replace(state, p=p, z=state.z.copy(), r=state.r.copy())


def perturb_estimates(state: AutomatonState, delta_sigma: float,
                      rng: np.random.Generator) -> AutomatonState:
    """Add N(0, delta_sigma) noise (variance) to every reward estimate and
    flatten the selection counts to their mean."""
    if delta_sigma < 0:
        raise ValueError(f"delta_sigma must be non-negative, got {delta_sigma}")
    r = state.r.copy()
    if delta_sigma > 0:
        r += rng.normal(0.0, np.sqrt(delta_sigma), size=r.shape[0])
    z = np.full_like(state.z, state.z.mean())
    return replace(state, p=state.p.copy(), z=z, r=r)


def converged(state: AutomatonState, threshold: float) -> bool:
    return bool(state.p.max() >= threshold)
