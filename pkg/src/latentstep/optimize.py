"""Seeded initialization and limited-memory BFGS fitting of the model loss.

The minimizer is a standard two-loop-recursion L-BFGS with a strong-Wolfe
line search (sufficient-decrease 1e-4, curvature 0.9). Termination mirrors
the usual library defaults: max-norm of the gradient below grad_tolerance,
or relative function decrease below rel_f_tolerance, or the iteration cap.
Non-finite trial values during the line search shrink the step; if no
admissible step exists the run stops with converged=False.

Fits are deterministic: parameters are drawn from a PCG64 generator seeded
by the config, restarts use consecutive seeds, and the best restart is the
deterministic minimum by (final loss, seed).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .graphs import AdjacencyMatrix, TransitionMatrix, ValidationError
from .model import (
    BipartiteGraph,
    LatentGraph,
    ParameterSet,
    build_bipartite,
    build_latent_graph,
    hard_assignments,
    make_loss_function,
    reconstruct,
    soft_assignments,
)

_WOLFE_C1 = 1e-4
_WOLFE_C2 = 0.9
_MAX_LINE_EVALS = 60


@dataclass(frozen=True)
class FitConfig:
    seed: int = 0
    init_half_width: float = 1e-2
    reg_coefficient: float = 1e-1
    memory: int = 10
    grad_tolerance: float = 1e-5
    rel_f_tolerance: float = 2.2e-9
    max_iterations: int = 15000
    restarts: int = 1

    def __post_init__(self):
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")
        if self.init_half_width <= 0:
            raise ValidationError("init_half_width must be positive")
        if self.reg_coefficient < 0:
            raise ValidationError("reg_coefficient must be non-negative")
        if self.memory < 1:
            raise ValidationError("memory must be >= 1")
        if self.grad_tolerance <= 0 or self.rel_f_tolerance <= 0:
            raise ValidationError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be >= 1")
        if self.restarts < 1:
            raise ValidationError("restarts must be >= 1")


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    trace: np.ndarray
    converged: bool
    iterations: int

    @property
    def final_value(self) -> float:
        return float(self.trace[-1])


@dataclass(frozen=True)
class FitResult:
    params: ParameterSet
    V: BipartiteGraph
    W: LatentGraph
    B: AdjacencyMatrix
    soft: TransitionMatrix
    hard: np.ndarray
    loss_trace: np.ndarray
    final_loss: float
    data_term: float
    converged: bool
    iterations: int
    seed_used: int


def init_params(n: int, m: int, w_trainable: bool, config: FitConfig) -> ParameterSet:
    """I.i.d. uniform draws on (-init_half_width, +init_half_width), PCG64 seeded."""
    if n < 1 or m < 1:
        raise ValidationError("init_params needs n >= 1 and m >= 1")
    rng = np.random.default_rng(config.seed)
    h = config.init_half_width
    V_p = rng.uniform(-h, h, size=(n, m))
    W_p = rng.uniform(-h, h, size=(m, m)) if w_trainable else None
    return ParameterSet(V_p, W_p)


def _line_search(phi, f0: float, slope0: float, alpha0: float):
    """Strong-Wolfe search along a descent direction.

    phi(a) -> (f, slope, gradient) at step a. Returns (a, f, g) meeting
    the Wolfe conditions, or an Armijo-only point when curvature cannot
    be met at numerical precision, or None when no admissible step exists.
    """
    evals = 0

    def take(a):
        nonlocal evals
        evals += 1
        f, slope, g = phi(a)
        if not np.isfinite(f) or not np.isfinite(slope):
            return np.inf, np.nan, g
        return f, slope, g

    def zoom(lo, f_lo, slope_lo, g_lo, hi, f_hi):
        nonlocal evals
        while evals < _MAX_LINE_EVALS:
            h = hi - lo
            if abs(h) < 1e-16 * max(1.0, abs(lo)):
                break
            cand = None
            if np.isfinite(f_hi):
                denom = 2.0 * (f_hi - f_lo - slope_lo * h)
                if denom != 0 and np.isfinite(denom):
                    cand = lo - slope_lo * h * h / denom
            left, right = min(lo, hi), max(lo, hi)
            margin = 0.1 * (right - left)
            if cand is None or not (left + margin <= cand <= right - margin):
                cand = 0.5 * (lo + hi)
            f_c, slope_c, g_c = take(cand)
            if f_c > f0 + _WOLFE_C1 * cand * slope0 or f_c >= f_lo:
                hi, f_hi = cand, f_c
            else:
                if abs(slope_c) <= -_WOLFE_C2 * slope0:
                    return cand, f_c, g_c
                if slope_c * (hi - lo) >= 0:
                    hi, f_hi = lo, f_lo
                lo, f_lo, slope_lo, g_lo = cand, f_c, slope_c, g_c
        # Curvature unattainable; accept sufficient decrease if we have it.
        if lo > 0 and f_lo <= f0 + _WOLFE_C1 * lo * slope0:
            return lo, f_lo, g_lo
        return None

    a_prev, f_prev, slope_prev, g_prev = 0.0, f0, slope0, None
    a = alpha0
    first = True
    while evals < _MAX_LINE_EVALS:
        f_a, slope_a, g_a = take(a)
        if f_a > f0 + _WOLFE_C1 * a * slope0 or (not first and f_a >= f_prev):
            return zoom(a_prev, f_prev, slope_prev, g_prev, a, f_a)
        if abs(slope_a) <= -_WOLFE_C2 * slope0:
            return a, f_a, g_a
        if slope_a >= 0:
            return zoom(a, f_a, slope_a, g_a, a_prev, f_prev)
        a_prev, f_prev, slope_prev, g_prev = a, f_a, slope_a, g_a
        a = 2.0 * a
        first = False
    return None


def minimize(objective, x0, config: FitConfig = FitConfig()) -> MinimizeResult:
    """Limited-memory BFGS with strong-Wolfe line search.

    objective(x) must return (value, gradient); both must be finite at x0.
    The returned trace holds the objective at each accepted iterate,
    starting from x0, and is non-increasing.
    """
    x = np.array(x0, dtype=float).ravel()
    f, g = objective(x)
    g = np.asarray(g, dtype=float)
    if not np.isfinite(f) or not np.isfinite(g).all():
        raise ValidationError("objective is not finite at the starting point")

    trace = [f]
    pairs: list[tuple[np.ndarray, np.ndarray, float]] = []
    converged = False
    iterations = 0

    if np.abs(g).max() <= config.grad_tolerance:
        return MinimizeResult(x, np.array(trace), True, 0)

    while iterations < config.max_iterations:
        # two-loop recursion for p = -H g
        q = g.copy()
        alphas = []
        for s, y, rho in reversed(pairs):
            a_i = rho * (s @ q)
            alphas.append(a_i)
            q -= a_i * y
        if pairs:
            s, y, _ = pairs[-1]
            q *= (s @ y) / (y @ y)
        for (s, y, rho), a_i in zip(pairs, reversed(alphas)):
            b_i = rho * (y @ q)
            q += (a_i - b_i) * s
        p = -q
        slope0 = g @ p
        if not np.isfinite(slope0) or slope0 >= 0:
            pairs.clear()
            p = -g
            slope0 = g @ p

        def phi(a, _p=p, _x=x):
            xa = _x + a * _p
            fa, ga = objective(xa)
            ga = np.asarray(ga, dtype=float)
            return fa, ga @ _p, ga

        alpha0 = 1.0 if pairs else min(1.0, 1.0 / max(1.0, np.abs(g).sum()))
        hit = _line_search(phi, f, slope0, alpha0)
        if hit is None:
            break
        a, f_new, g_new = hit
        x_new = x + a * p

        s = x_new - x
        y = g_new - g
        sy = s @ y
        if np.isfinite(sy) and sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            pairs.append((s, y, 1.0 / sy))
            if len(pairs) > config.memory:
                pairs.pop(0)

        f_prev, x, f, g = f, x_new, f_new, np.asarray(g_new, dtype=float)
        iterations += 1
        trace.append(f)

        if np.abs(g).max() <= config.grad_tolerance:
            converged = True
            break
        if (f_prev - f) <= config.rel_f_tolerance * max(abs(f_prev), abs(f), 1.0):
            converged = True
            break

    return MinimizeResult(x, np.array(trace), converged, iterations)


def _fit_one(fun, n, m, w_trainable, seed, config):
    params0 = init_params(n, m, w_trainable, replace(config, seed=seed))
    return seed, minimize(fun, params0.flatten(), config)


def fit(A: AdjacencyMatrix, latent, config: FitConfig = FitConfig()) -> FitResult:
    """Fit the model to A and keep the best of config.restarts seeded runs.

    latent: a LatentGraph to hold fixed, or an int m to train W jointly.
    Restart seeds are config.seed, config.seed+1, ...; ties in final loss
    resolve toward the lowest seed. LATENTSTEP_THREADS caps how many
    restarts run concurrently (default 1, i.e. sequential).
    """
    fun, n, m, w_trainable = make_loss_function(A, latent, config.reg_coefficient)
    if m > n:
        raise ValidationError(f"latent node count {m} exceeds node count {n}")
    seeds = list(range(config.seed, config.seed + config.restarts))

    workers = 1
    env = os.environ.get("LATENTSTEP_THREADS", "").strip()
    if env:
        try:
            workers = max(1, int(env))
        except ValueError:
            raise ValidationError(f"LATENTSTEP_THREADS is not an integer: {env!r}")
    workers = min(workers, len(seeds))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(
                pool.map(lambda s: _fit_one(fun, n, m, w_trainable, s, config), seeds)
            )
    else:
        runs = [_fit_one(fun, n, m, w_trainable, s, config) for s in seeds]

    seed_used, best = min(runs, key=lambda r: (r[1].final_value, r[0]))

    params = ParameterSet.unflatten(best.x, n, m, w_trainable)
    W = build_latent_graph(params.W_p) if w_trainable else latent
    V = build_bipartite(params.V_p, W)
    B = reconstruct(V, W)
    soft = soft_assignments(V, A.node_labels)
    hard = hard_assignments(soft)

    if config.reg_coefficient > 0:
        fun0, *_ = make_loss_function(A, latent, 0.0)
        data = float(fun0(best.x)[0])
    else:
        data = best.final_value

    return FitResult(
        params=params,
        V=V,
        W=W,
        B=B,
        soft=soft,
        hard=hard,
        loss_trace=best.trace,
        final_loss=best.final_value,
        data_term=data,
        converged=best.converged,
        iterations=best.iterations,
        seed_used=seed_used,
    )
