"""Adaptive variational eigensolver with exact cost accounting.

The ansatz grows one pool operator per outer iteration (new parameter
initialized at zero) and all parameters are re-minimized by a dense BFGS
with a strong-Wolfe line search.  BFGS lives in-repo so that every
energy/gradient evaluation is counted explicitly; the inverse-Hessian
estimate can be carried across outer iterations, extended by an identity
row and column for the fresh parameter.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import gradient_norm, screen_pool, select_operator
from .noise import NoiseModel, perturb_parameters
from .pauli import PauliSum
from .pools import PoolOperator
from .states import (
    StateVector,
    apply_pauli_sum,
    exact_ground_energy,
    exp_action,
    expectation,
)
from .trace import FevalCounter, RunTrace, StoppingRule


@dataclass
class VqeOptions:
    recycle_hessian: bool = True
    gradient_tolerance: float = 1e-6
    max_bfgs_iterations: int = 200
    wolfe_c1: float = 1e-4
    wolfe_c2: float = 0.9
    # count a full-gradient sweep as one feval (paper rule) or one per parameter
    count_gradient_per_parameter: bool = False


@dataclass
class Ansatz:
    """Ordered product of generator exponentials on a reference state;
    operator k=0 is applied first."""

    reference: StateVector
    operators: list[PoolOperator]
    parameters: np.ndarray

    def __post_init__(self):
        if len(self.operators) != len(self.parameters):
            raise ValueError("operator and parameter counts differ")

    def state(self) -> StateVector:
        return rebuild_state(self.reference, self.operators, self.parameters)


def rebuild_state(reference: StateVector, operators, parameters) -> StateVector:
    amps = reference.amplitudes
    for op, theta in zip(operators, parameters):
        amps = exp_action(op.generator, float(theta), amps)
    return StateVector(reference.n_qubits, amps)


def ansatz_energy_and_gradient(
    ansatz: Ansatz, h: PauliSum, counter: FevalCounter, options: VqeOptions = VqeOptions()
) -> tuple[float, np.ndarray]:
    """Energy and the full analytic parameter gradient via one forward
    and one backward sweep (two state passes); costs one energy plus one
    gradient estimate on the counter."""
    k = len(ansatz.operators)
    forward = [ansatz.reference.amplitudes]
    for op, theta in zip(ansatz.operators, ansatz.parameters):
        forward.append(exp_action(op.generator, float(theta), forward[-1]))
    psi = forward[-1]
    lam = apply_pauli_sum(h, psi)
    energy = float(np.vdot(psi, lam).real)
    grads = np.empty(k)
    for j in range(k, 0, -1):
        op = ansatz.operators[j - 1]
        u = apply_pauli_sum(op.generator, forward[j])
        grads[j - 1] = -2.0 * float(np.vdot(lam, u).imag)
        if j > 1:
            lam = exp_action(op.generator, -float(ansatz.parameters[j - 1]), lam)
    counter.add(1 + (k if options.count_gradient_per_parameter else 1))
    return energy, grads


def recycle_hessian(previous: np.ndarray | None, new_dimension: int) -> np.ndarray:
    """Embed the previous inverse-Hessian estimate as the leading block;
    the new row/column is the identity row."""
    prev_dim = 0 if previous is None else previous.shape[0]
    if new_dimension != prev_dim + 1:
        raise ValueError(f"expected dimension {prev_dim + 1}, got {new_dimension}")
    out = np.eye(new_dimension)
    if prev_dim:
        out[:prev_dim, :prev_dim] = previous
    return out


@dataclass
class BfgsResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    inv_hessian: np.ndarray
    status: str
    n_evaluations: int = 0


def _zoom(fun_eg, x, p, f0, dphi0, lo, f_lo, dphi_lo, hi, f_hi, c1, c2, max_iters=30):
    evals = 0
    g_best = None
    for _ in range(max_iters):
        span = hi - lo
        if abs(span) < 1e-14:
            break
        # quadratic interpolation on (lo, hi), safeguarded by bisection
        denom = f_hi - f_lo - dphi_lo * span
        alpha = lo - 0.5 * dphi_lo * span * span / denom if denom != 0 else lo + 0.5 * span
        low, high = (lo, hi) if lo < hi else (hi, lo)
        margin = 0.1 * (high - low)
        if not (low + margin <= alpha <= high - margin):
            alpha = lo + 0.5 * span
        f, g = fun_eg(x + alpha * p)
        evals += 1
        dphi = float(g @ p)
        if f > f0 + c1 * alpha * dphi0 or f >= f_lo:
            hi, f_hi = alpha, f
        else:
            if abs(dphi) <= -c2 * dphi0:
                return alpha, f, g, evals
            if dphi * (hi - lo) >= 0:
                hi, f_hi = lo, f_lo
            lo, f_lo, dphi_lo = alpha, f, dphi
            g_best = (alpha, f, g)
    if g_best is not None:
        # sufficient-decrease point without the curvature condition
        return (*g_best, evals)
    return None


def _strong_wolfe(fun_eg, x, p, f0, g0, c1, c2, max_iters=20, alpha_max=64.0):
    dphi0 = float(g0 @ p)
    if dphi0 >= 0:
        return None
    alpha_prev, f_prev, dphi_prev = 0.0, f0, dphi0
    alpha = 1.0
    evals = 0
    for i in range(max_iters):
        f, g = fun_eg(x + alpha * p)
        evals += 1
        dphi = float(g @ p)
        if f > f0 + c1 * alpha * dphi0 or (i > 0 and f >= f_prev):
            zoomed = _zoom(fun_eg, x, p, f0, dphi0, alpha_prev, f_prev, dphi_prev, alpha, f, c1, c2)
            return (*zoomed[:3], evals + zoomed[3]) if zoomed else None
        if abs(dphi) <= -c2 * dphi0:
            return alpha, f, g, evals
        if dphi >= 0:
            zoomed = _zoom(fun_eg, x, p, f0, dphi0, alpha, f, dphi, alpha_prev, f_prev, c1, c2)
            return (*zoomed[:3], evals + zoomed[3]) if zoomed else None
        alpha_prev, f_prev, dphi_prev = alpha, f, dphi
        if alpha >= alpha_max:
            return alpha, f, g, evals
        alpha = min(2.0 * alpha, alpha_max)
    return None


def bfgs_minimize(
    fun_eg,
    x0: np.ndarray,
    inv_hessian: np.ndarray | None = None,
    gradient_tolerance: float = 1e-6,
    max_iterations: int = 200,
    c1: float = 1e-4,
    c2: float = 0.9,
) -> BfgsResult:
    """Dense BFGS with a strong-Wolfe line search.

    ``fun_eg`` returns (value, gradient) and owns any cost accounting.
    Converges on the sup-norm of the gradient; a failed line search
    returns the best point so far with a flagged status.
    """
    x = np.array(x0, dtype=float)
    n = x.size
    identity = np.eye(n)
    hess = identity.copy() if inv_hessian is None else np.array(inv_hessian, dtype=float)
    f, g = fun_eg(x)
    evals = 1
    status = "max_iterations"
    for _ in range(max_iterations):
        if np.max(np.abs(g), initial=0.0) < gradient_tolerance:
            status = "converged"
            break
        p = -hess @ g
        if float(p @ g) >= 0:
            # restored descent direction; estimate had gone bad
            hess = identity.copy()
            p = -g
        result = _strong_wolfe(fun_eg, x, p, f, g, c1, c2)
        if result is None:
            status = "line_search_failure"
            break
        alpha, f_new, g_new, ls_evals = result
        evals += ls_evals
        s = alpha * p
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            rho = 1.0 / sy
            v = identity - rho * np.outer(s, y)
            hess = v @ hess @ v.T + rho * np.outer(s, s)
            hess = 0.5 * (hess + hess.T)
        x = x + s
        f, g = f_new, g_new
    else:
        status = "max_iterations"
    if status == "max_iterations" and np.max(np.abs(g), initial=0.0) < gradient_tolerance:
        status = "converged"
    return BfgsResult(x, f, g, hess, status, evals)


def adapt_vqe_run(
    h: PauliSum,
    pool,
    initial: StateVector,
    stop: StoppingRule = StoppingRule(),
    options: VqeOptions = VqeOptions(),
    noise: NoiseModel | None = None,
    seed: int | None = None,
    counter: FevalCounter | None = None,
    trace: RunTrace | None = None,
    warm_operators=(),
    warm_parameters=(),
    warm_state: StateVector | None = None,
    ground_energy: float | None = None,
    config: dict | None = None,
) -> RunTrace:
    """Grow-select-reoptimize loop.

    Gradient measurement noise only enters pool screening, and rotational
    noise is applied to the optimized parameter vector once per outer
    iteration, never inside BFGS; both match the stated error model.
    """
    counter = counter or FevalCounter()
    noise = noise or NoiseModel()
    if ground_energy is None:
        ground_energy = exact_ground_energy(h)[0]
    operators = list(warm_operators)
    params = np.array(list(warm_parameters), dtype=float)
    state = warm_state if warm_state is not None else rebuild_state(initial, operators, params)
    energy = expectation(state, h)
    if trace is None:
        trace = RunTrace("adapt_vqe", seed, dict(config or {}), energy, ground_energy)
    prev_inv_hessian = np.eye(len(params)) if (options.recycle_hessian and len(params)) else None

    def fun_eg(theta):
        e, grad = ansatz_energy_and_gradient(Ansatz(initial, operators, theta), h, counter, options)
        return e, grad

    status = "operator_cap"
    while trace.n_operators < stop.max_operators:
        screened = screen_pool(state, h, pool, counter, noise.gradient)
        if gradient_norm(screened) < stop.gradient_norm_threshold:
            status = "converged_gradient"
            break
        op, grad = select_operator(screened)
        operators.append(op)
        params = np.append(params, 0.0)
        if options.recycle_hessian:
            inv_hessian = recycle_hessian(prev_inv_hessian, len(params))
        else:
            inv_hessian = np.eye(len(params))
        result = bfgs_minimize(
            fun_eg,
            params,
            inv_hessian,
            gradient_tolerance=options.gradient_tolerance,
            max_iterations=options.max_bfgs_iterations,
            c1=options.wolfe_c1,
            c2=options.wolfe_c2,
        )
        params = result.x
        prev_inv_hessian = result.inv_hessian
        if result.status == "line_search_failure":
            trace.flags.append(f"line_search_failure@{trace.n_operators + 1}")
        params = np.asarray(perturb_parameters(params, noise.rotation), dtype=float)
        state = rebuild_state(initial, operators, params)
        energy = expectation(state, h)
        counter.add(1)
        trace.record(op.label, grad, float(params[-1]), energy, counter.count)
        if stop.energy_error_target is not None and energy - ground_energy <= stop.energy_error_target:
            status = "reached_energy_target"
            break
    trace.status = status
    return trace
