"""Non-variational adaptive state preparation.

Each iteration screens the pool for energy derivatives, picks the
operator with the largest magnitude, sets its rotation angle once from
the measured gradient (scaled by the configured gamma rule) and appends
the exact exponential to the state.  No parameter is ever re-optimized;
a hybrid mode hands the accumulated angles to the variational engine
after a fixed number of iterations.
"""

from __future__ import annotations

import math

import numpy as np

from .noise import NoiseModel, perturb_gradients, perturb_parameters
from .pauli import PauliSum, spectral_norm
from .pools import PoolOperator
from .states import (
    StateVector,
    apply_exp,
    apply_pauli_sum,
    energy_gradient,
    energy_second_derivative,
    exact_ground_energy,
    expectation,
)
from .trace import FevalCounter, GammaStrategy, RunTrace, StoppingRule

DESCENT_TOL = 1e-10


def screen_pool(
    state: StateVector,
    h: PauliSum,
    pool: list[PoolOperator] | tuple[PoolOperator, ...],
    counter: FevalCounter,
    gradient_noise=None,
    h_psi: np.ndarray | None = None,
) -> list[tuple[PoolOperator, float]]:
    """Measure the energy derivative of every pool operator (one feval
    each); optional measurement noise perturbs the returned values."""
    if not pool:
        raise ValueError("empty operator pool")
    if h_psi is None:
        h_psi = apply_pauli_sum(h, state.amplitudes)
    grads = [energy_gradient(state, h, op.generator, h_psi=h_psi) for op in pool]
    counter.add(len(pool))
    grads = perturb_gradients(grads, gradient_noise)
    return list(zip(pool, grads))


def select_operator(screened: list[tuple[PoolOperator, float]]) -> tuple[PoolOperator, float]:
    """Entry with the largest gradient magnitude; ties keep the lowest
    pool index."""
    if not screened:
        raise ValueError("nothing screened")
    best = screened[0]
    for entry in screened[1:]:
        if abs(entry[1]) > abs(best[1]):
            best = entry
    return best


def lower_bound_gamma(h_norm: float, op_norm: float) -> float:
    return 1.0 / (4.0 * h_norm * op_norm**2)


def compute_eta(
    state: StateVector,
    h: PauliSum,
    op: PoolOperator,
    gradient: float,
    strategy: GammaStrategy,
    counter: FevalCounter,
    h_norm: float,
    h_psi: np.ndarray | None = None,
) -> tuple[float, dict]:
    """Update angle eta = -gamma * gradient under the configured rule.

    The second-derivative rule measures the curvature for the selected
    operator only (one extra feval) and falls back to a safe gamma when
    the curvature is not negative.
    """
    info: dict = {"variant": strategy.variant}
    if strategy.variant == "constant":
        gamma = strategy.gamma
    elif strategy.variant == "lower_bound":
        if op.norm is None:
            raise ValueError(f"pool operator {op.label} has no cached norm")
        gamma = lower_bound_gamma(h_norm, op.norm)
    else:  # second_derivative
        d2 = energy_second_derivative(state, h, op.generator, h_psi=h_psi)
        counter.add(1)
        info["second_derivative"] = d2
        if d2 < -strategy.curvature_epsilon:
            gamma = -1.0 / d2
        else:
            gamma = strategy.fallback_gamma
            if gamma is None:
                if op.norm is None:
                    raise ValueError(f"pool operator {op.label} has no cached norm")
                gamma = lower_bound_gamma(h_norm, op.norm)
            info["fallback"] = True
    info["gamma"] = gamma
    return -gamma * gradient, info


def gradient_norm(screened: list[tuple[PoolOperator, float]]) -> float:
    return math.sqrt(sum(g * g for _, g in screened))


def nova_run(
    h: PauliSum,
    pool,
    initial: StateVector,
    strategy: GammaStrategy,
    stop: StoppingRule = StoppingRule(),
    noise: NoiseModel | None = None,
    seed: int | None = None,
    counter: FevalCounter | None = None,
    trace: RunTrace | None = None,
    ground_energy: float | None = None,
    algorithm_name: str = "nova",
    config: dict | None = None,
) -> RunTrace:
    """Run the non-variational loop until a stopping rule fires.

    With the lower-bound gamma in a noiseless run, the per-step energy
    reduction is checked against gradient^2 / (8 |H| |A|^2) and a
    violation raises, since the bound is a mathematical guarantee.
    """
    counter = counter or FevalCounter()
    noise = noise or NoiseModel()
    if ground_energy is None:
        ground_energy = exact_ground_energy(h)[0]
    h_norm = spectral_norm(h)
    energy = expectation(initial, h)
    if trace is None:
        trace = RunTrace(algorithm_name, seed, dict(config or {}), energy, ground_energy)
    state = initial
    status = "operator_cap"
    while trace.n_operators < stop.max_operators:
        h_psi = apply_pauli_sum(h, state.amplitudes)
        screened = screen_pool(state, h, pool, counter, noise.gradient, h_psi=h_psi)
        if gradient_norm(screened) < stop.gradient_norm_threshold:
            status = "converged_gradient"
            break
        op, grad = select_operator(screened)
        eta, info = compute_eta(state, h, op, grad, strategy, counter, h_norm, h_psi=h_psi)
        applied_eta = float(perturb_parameters(np.array([eta]), noise.rotation)[0])
        state = apply_exp(state, op.generator, applied_eta, mode="exact_dense")
        new_energy = expectation(state, h)
        counter.add(1)
        trace.record(op.label, grad, applied_eta, new_energy, counter.count)
        if strategy.variant == "lower_bound" and not (noise.has_rotation or noise.has_gradient):
            bound = info["gamma"] / 2.0 * grad * grad
            if energy - new_energy < bound - DESCENT_TOL:
                raise RuntimeError(
                    f"descent bound violated at iteration {trace.n_operators}: "
                    f"reduction {energy - new_energy!r} < bound {bound!r}"
                )
        energy = new_energy
        if stop.energy_error_target is not None and energy - ground_energy <= stop.energy_error_target:
            status = "reached_energy_target"
            break
    trace.status = status
    return trace


def hybrid_run(
    h: PauliSum,
    pool,
    initial: StateVector,
    strategy: GammaStrategy,
    switch_iteration: int,
    stop: StoppingRule = StoppingRule(),
    vqe_options=None,
    noise: NoiseModel | None = None,
    seed: int | None = None,
    config: dict | None = None,
) -> RunTrace:
    """Non-variational phase for ``switch_iteration`` operators, then the
    variational engine continues with the accumulated angles as the
    initial parameter vector; fevals accumulate across both phases."""
    from .vqe import VqeOptions, adapt_vqe_run, rebuild_state

    if switch_iteration < 0:
        raise ValueError("switch_iteration must be nonnegative")
    counter = FevalCounter()
    ground_energy = exact_ground_energy(h)[0]
    nova_stop = StoppingRule(
        max_operators=min(switch_iteration, stop.max_operators),
        gradient_norm_threshold=stop.gradient_norm_threshold,
        energy_error_target=stop.energy_error_target,
    )
    trace = RunTrace("hybrid", seed, dict(config or {}), expectation(initial, h), ground_energy)
    trace = nova_run(
        h, pool, initial, strategy,
        stop=nova_stop, noise=noise, seed=seed, counter=counter,
        trace=trace, ground_energy=ground_energy,
    )
    trace.switch_at = trace.n_operators
    if trace.status in ("converged_gradient", "reached_energy_target"):
        return trace
    by_label = {op.label: op for op in pool}
    warm_ops = [by_label[rec.label] for rec in trace.records]
    warm_params = [rec.eta for rec in trace.records]
    state = rebuild_state(initial, warm_ops, np.array(warm_params, dtype=float))
    return adapt_vqe_run(
        h, pool, initial, stop,
        options=vqe_options or VqeOptions(),
        noise=noise, seed=seed, counter=counter, trace=trace,
        warm_operators=warm_ops, warm_parameters=warm_params, warm_state=state,
        ground_energy=ground_energy,
    )
