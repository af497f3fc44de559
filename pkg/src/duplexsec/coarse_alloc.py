"""Coarse power split: maximize the approximate sum secrecy over [0,1]^2.

The decision variable is u = (gamma_a, gamma_b), the fractions of each
budget spent on signal rather than artificial noise. Every tilde rate is
b log2(1 + n u_i / (b c(u))) with c affine in u, so the objective, its
gradient and its Hessian all come out in closed form from the same four
(sign, n, index, a, g) descriptors.

The solver is a safeguarded ascent: take the Newton step whenever it
solves and points uphill, fall back to backtracked gradient steps
otherwise, and clip to the box after every move. Convergence is declared
on the projected-gradient norm so boundary optima (common here: the best
answer often parks one gamma at 0 or 1) terminate cleanly.
"""

import math
from dataclasses import dataclass

import numpy as np

from .approx import coarse_coefficients, ergodic_rate_approx

_LN2 = math.log(2.0)
_ARMIJO = 1e-4


@dataclass
class CoarseSolution:
    u: np.ndarray
    objective_value: float
    iterations: int
    converged: bool
    method: str


def objective(cfg, u):
    """f(u) = r_ba - r_ea + r_ab - r_eb, unclamped. Broadcasts over grids."""
    r = ergodic_rate_approx(cfg, u[0], u[1])
    return r.r_ba - r.r_ea + r.r_ab - r.r_eb


def _terms(cfg):
    """The four rate terms as (sign, n, own index, affine slope a, offset g)."""
    co = coarse_coefficients(cfg)
    return (
        (1.0, cfg.n_bob * cfg.beta_ba * cfg.p_alice, 0, np.array([co.a_ba, 0.0]), co.g_ba),
        (-1.0, cfg.n_eve * cfg.beta_ea * cfg.p_alice, 0, co.a_e, co.g_e),
        (1.0, cfg.n_alice * cfg.beta_ab * cfg.p_bob, 1, np.array([0.0, co.a_ab]), co.g_ab),
        (-1.0, cfg.n_eve * cfg.beta_eb * cfg.p_bob, 1, co.a_e, co.g_e),
    )


def objective_gradient(cfg, u):
    """Analytic gradient of the objective at an interior point."""
    u = np.asarray(u, dtype=float)
    b = cfg.b
    grad = np.zeros(2)
    for sign, n, idx, a, g in _terms(cfg):
        c = float(a @ u) + g
        loaded = b * a.copy()
        loaded[idx] += n
        grad += sign * (b / _LN2) * (loaded / (b * c + n * u[idx]) - b * a / (b * c))
    return grad


def objective_hessian(cfg, u):
    """Analytic Hessian; symmetric by construction."""
    u = np.asarray(u, dtype=float)
    b = cfg.b
    hess = np.zeros((2, 2))
    for sign, n, idx, a, g in _terms(cfg):
        c = float(a @ u) + g
        loaded = b * a.copy()
        loaded[idx] += n
        outer = b * c + n * u[idx]
        hess += sign * (b / _LN2) * (
            -np.outer(loaded, loaded) / outer**2 + np.outer(b * a, b * a) / (b * c) ** 2
        )
    return hess


def _projected_gradient(u, grad):
    """Gradient with the components pointing out of the box zeroed."""
    pg = grad.copy()
    pg[(u <= 0.0) & (grad < 0.0)] = 0.0
    pg[(u >= 1.0) & (grad > 0.0)] = 0.0
    return pg


def _ascend(cfg, u0, max_iter, epsilon):
    u = np.clip(np.asarray(u0, dtype=float), 0.0, 1.0)
    f = float(objective(cfg, u))
    method = "gradient"
    for it in range(max_iter):
        grad = objective_gradient(cfg, u)
        pg = _projected_gradient(u, grad)
        if np.linalg.norm(pg) <= epsilon:
            return CoarseSolution(u, f, it, True, method)
        stepped = False
        # Newton restricted to the coordinates not pinned against the box,
        # so edge optima keep the quadratic convergence of the full step.
        free = ~(((u <= 0.0) & (grad < 0.0)) | ((u >= 1.0) & (grad > 0.0)))
        if free.any():
            h = objective_hessian(cfg, u)
            try:
                d_free = np.linalg.solve(h[np.ix_(free, free)], -grad[free])
            except np.linalg.LinAlgError:
                d_free = None
            if d_free is not None and float(d_free @ grad[free]) > 0.0:
                cand = u.copy()
                cand[free] += d_free
                cand = np.clip(cand, 0.0, 1.0)
                f_cand = float(objective(cfg, cand))
                if f_cand > f:
                    u, f, method, stepped = cand, f_cand, "newton", True
        if not stepped:
            step = 1.0
            for _ in range(31):
                cand = np.clip(u + step * pg, 0.0, 1.0)
                delta = cand - u
                f_cand = float(objective(cfg, cand))
                if f_cand > f + _ARMIJO * float(grad @ delta) and f_cand > f:
                    u, f, method, stepped = cand, f_cand, "gradient", True
                    break
                step *= 0.5
            if not stepped:
                # Line search exhausted: numerically stationary but above
                # epsilon; report the iterate honestly as unconverged.
                return CoarseSolution(u, f, it + 1, False, method)
    grad = objective_gradient(cfg, u)
    converged = np.linalg.norm(_projected_gradient(u, grad)) <= epsilon
    return CoarseSolution(u, f, max_iter, converged, method)


def allocate_coarse(cfg, max_iter=50, epsilon=1e-6, u0=(0.5, 0.5)):
    """Safeguarded Newton/gradient ascent, clipped to the box.

    The surface is routinely multimodal: whichever corner or edge shuts
    the weaker link off can be a boundary-stationary point alongside the
    global optimum, and the origin is one whenever Eve out-receives both
    links at full AN. Ascents therefore run from the requested start, the
    four corners and the center; the best objective wins, ties broken
    toward the lexicographically smallest u.
    """
    starts = [tuple(np.clip(np.asarray(u0, dtype=float), 0.0, 1.0))]
    for extra in ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0), (0.5, 0.5)):
        if extra not in starts:
            starts.append(extra)
    best = None
    for s in starts:
        sol = _ascend(cfg, s, max_iter, epsilon)
        if (
            best is None
            or sol.objective_value > best.objective_value
            or (
                sol.objective_value == best.objective_value
                and tuple(sol.u) < tuple(best.u)
            )
        ):
            best = sol
    return best


def grid_oracle(cfg, n_points):
    """Exhaustive maximizer over an n x n uniform grid (first occurrence)."""
    if n_points < 2:
        raise ValueError("grid needs at least 2 points per axis")
    axis = np.linspace(0.0, 1.0, n_points)
    ga, gb = np.meshgrid(axis, axis, indexing="ij")
    values = objective(cfg, (ga, gb))
    flat = int(np.argmax(values))
    i, j = divmod(flat, n_points)
    u = np.array([axis[i], axis[j]])
    return CoarseSolution(u, float(values[i, j]), 0, True, "grid")
