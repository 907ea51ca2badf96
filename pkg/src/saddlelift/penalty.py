"""Exact and smoothed penalty functions for the constrained saddle program.

For a form [g : g_1..g_s ; h_1..h_r] and weight rho > 0:

    F(x,y; z,rho)  =  g + rho * sum max(g_i, 0) + rho * sum |h_j|
    G(z; x,y,rho)  = -g + rho * sum max(g_i, 0) + rho * sum |h_j|
    G2(z; x,y,rho) = -g + rho * sum max(g_i, 0)^2 + rho * sum h_j^2

and the C^1 smoothed variants with exponent theta > 1:

    F_theta = g + rho * sum max(g_i,0)^theta + rho * sum |h_j|^theta
    G_theta = -g + ...

The gradient of v^theta at v = 0 is taken as exactly 0 (the one-sided limit),
so F_theta / G_theta / G2 are differentiable everywhere.  Box bounds are not
penalized; solvers keep iterates inside the box by projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .forms import SaddleForm, SaddlePoint


@dataclass(frozen=True)
class PenaltyParams:
    rho: float
    theta: float = 1.01

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError("penalty weight rho must be > 0")
        if self.theta <= 1:
            raise ValueError("smoothing exponent theta must be > 1")


def _vals(form: SaddleForm, v: np.ndarray):
    gval = form.g.value(v)
    ivals = np.array([gi.value(v) for gi in form.ineq])
    evals = np.array([hj.value(v) for hj in form.eq])
    return gval, ivals, evals


def total_violation(form: SaddleForm, p: SaddlePoint) -> float:
    """P(p) = sum max(g_i, 0) + sum |h_j|."""
    _, ivals, evals = _vals(form, p.vec)
    return float(np.maximum(ivals, 0.0).sum() + np.abs(evals).sum())


def penalty_f(form: SaddleForm, p: SaddlePoint, rho: float) -> float:
    gval, ivals, evals = _vals(form, p.vec)
    return float(gval + rho * (np.maximum(ivals, 0.0).sum() + np.abs(evals).sum()))


def penalty_g(form: SaddleForm, p: SaddlePoint, rho: float) -> float:
    gval, ivals, evals = _vals(form, p.vec)
    return float(-gval + rho * (np.maximum(ivals, 0.0).sum() + np.abs(evals).sum()))


def _smoothed_terms(form: SaddleForm, v: np.ndarray, rho: float, theta: float):
    """Shared accumulation of rho * sum (g_i+)^theta + rho * sum |h_j|^theta."""
    value = 0.0
    grad = np.zeros(v.size)
    for gi in form.ineq:
        gv = gi.value(v)
        if gv > 0.0:
            gv_, gg = gi.value_grad(v)
            value += rho * gv_**theta
            grad += rho * theta * gv_ ** (theta - 1.0) * gg
    for hj in form.eq:
        hv = hj.value(v)
        if hv != 0.0:
            hv_, hg = hj.value_grad(v)
            value += rho * abs(hv_) ** theta
            grad += rho * theta * abs(hv_) ** (theta - 1.0) * np.sign(hv_) * hg
    return value, grad


def _smoothed_value(form: SaddleForm, v: np.ndarray, rho: float, theta: float) -> float:
    value = 0.0
    for gi in form.ineq:
        gv = gi.value(v)
        if gv > 0.0:
            value += rho * gv**theta
    for hj in form.eq:
        hv = hj.value(v)
        if hv != 0.0:
            value += rho * abs(hv) ** theta
    return value


def penalty_f_theta_value(form: SaddleForm, p: SaddlePoint, rho: float, theta: float) -> float:
    return float(form.g.value(p.vec) + _smoothed_value(form, p.vec, rho, theta))


def penalty_g_theta_value(form: SaddleForm, p: SaddlePoint, rho: float, theta: float) -> float:
    return float(-form.g.value(p.vec) + _smoothed_value(form, p.vec, rho, theta))


def penalty_f_theta(
    form: SaddleForm, p: SaddlePoint, rho: float, theta: float
) -> tuple[float, np.ndarray]:
    """Smoothed F with its full-space gradient."""
    if theta <= 1:
        raise ValueError("smoothing exponent theta must be > 1")
    gval, ggrad = form.g.value_grad(p.vec)
    pv, pg = _smoothed_terms(form, p.vec, rho, theta)
    return float(gval + pv), ggrad + pg


def penalty_g_theta(
    form: SaddleForm, p: SaddlePoint, rho: float, theta: float
) -> tuple[float, np.ndarray]:
    """Smoothed G with its full-space gradient."""
    if theta <= 1:
        raise ValueError("smoothing exponent theta must be > 1")
    gval, ggrad = form.g.value_grad(p.vec)
    pv, pg = _smoothed_terms(form, p.vec, rho, theta)
    return float(-gval + pv), -ggrad + pg


def penalty_g2(form: SaddleForm, p: SaddlePoint, rho: float) -> tuple[float, np.ndarray]:
    """Squared-violation penalty -g + rho*sum max(g_i,0)^2 + rho*sum h_j^2.

    C^1 everywhere, and convex in the z block whenever every g_i is convex
    and every h_j affine there.
    """
    v = p.vec
    gval, ggrad = form.g.value_grad(v)
    value = -gval
    grad = -ggrad
    for gi in form.ineq:
        gv = gi.value(v)
        if gv > 0.0:
            gv_, gg = gi.value_grad(v)
            value += rho * gv_**2
            grad += 2.0 * rho * gv_ * gg
    for hj in form.eq:
        hv, hg = hj.value_grad(v)
        value += rho * hv**2
        grad += 2.0 * rho * hv * hg
    return float(value), grad


def eps_feasible(form: SaddleForm, p: SaddlePoint, eps: float) -> bool:
    """True iff every g_i <= eps, every |h_j| <= eps, and box excess <= eps."""
    if eps <= 0:
        raise ValueError("eps must be > 0")
    v = p.vec
    if form.box.excess(v) > eps:
        return False
    for gi in form.ineq:
        if gi.value(v) > eps:
            return False
    for hj in form.eq:
        if abs(hj.value(v)) > eps:
            return False
    return True
