"""Alternating penalty solver, box-constrained inner minimizer, and probes.

The outer loop alternates two smooth subproblems at penalty weight rho_k:
minimize the smoothed descent penalty over the (x, y) block with z frozen,
then minimize the smoothed ascent penalty over the z block with (x, y)
frozen.  It stops when consecutive iterates move by at most eps and the
current point is eps-feasible; otherwise rho is multiplied by a fixed growth
factor.  The inner solver is projected gradient descent with a spectral step
and monotone backtracking, which keeps every iterate inside the box and the
objective non-increasing.

Also here: multiplier estimation / stationarity residuals for the two
first-order systems (over (x, y) with nonnegative weights on active
inequalities, and over z for the concave direction), plus empirical probes
for penalty exactness and for stability of the optimal value under
constraint right-hand-side perturbations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import lsq_linear

from .forms import FormError, SaddleForm, SaddlePoint, membership
from .penalty import (
    eps_feasible,
    penalty_f,
    penalty_f_theta,
    penalty_f_theta_value,
    penalty_g,
    penalty_g_theta,
    penalty_g_theta_value,
    total_violation,
)

STATUS_CONVERGED = "eps_feasible_converged"
STATUS_RHO_CAP = "rho_cap_reached"
STATUS_MAX_OUTER = "max_outer_reached"


@dataclass(frozen=True)
class InnerParams:
    max_iters: int = 2000
    grad_tol: float = 1e-8
    initial_step: float = 1.0
    backtrack_factor: float = 0.5
    restarts: int = 0
    armijo: float = 1e-4


@dataclass(frozen=True)
class SolverParams:
    eps: float = 1e-6
    rho1: float = 10.0
    growth: float = 100.0
    theta: float = 1.01
    max_outer: int = 30
    rho_cap: float = 1e12
    z_trust: float = 1e4
    inner: InnerParams = field(default_factory=InnerParams)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if self.rho1 < 1:
            raise ValueError("rho1 must be >= 1")
        if self.growth <= 1:
            raise ValueError("growth factor must be > 1")
        if self.theta <= 1:
            raise ValueError("theta must be > 1")
        if self.rho_cap < self.rho1:
            raise ValueError("rho_cap must be >= rho1")


@dataclass(frozen=True)
class InnerResult:
    point: np.ndarray
    value: float
    pg_norm: float
    iterations: int
    converged: bool


def inner_minimize(obj, lower, upper, start, params: InnerParams) -> InnerResult:
    """Projected gradient descent over a box.

    ``obj(p, need_grad)`` returns (value, gradient-or-None).  Iterates stay
    inside [lower, upper]; accepted steps never increase the objective.  The
    spectral (secant) step is safeguarded by monotone backtracking.  When the
    joint step stalls on a penalty ridge (where the smoothed gradient is
    numerically discontinuous and any full-gradient move costs more than it
    gains), a coordinate-refinement sweep takes over: single-coordinate
    backtracking moves cannot pay cross-coordinate ridge costs, so smooth
    coordinates keep descending.  The phases alternate until the gradient
    tolerance, the iteration cap, or no phase makes progress.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    p = np.clip(np.asarray(start, dtype=float), lo, hi)
    f, g = obj(p, True)
    if not math.isfinite(f):
        raise ValueError(f"objective is not finite at the start point ({f})")
    state = {"p": p, "f": f, "g": g, "iters": 0}

    def pg_norm() -> float:
        return float(np.linalg.norm(state["p"] - np.clip(state["p"] - state["g"], lo, hi)))

    def joint_phase() -> str:
        step = params.initial_step
        prev_p = prev_g = None
        while state["iters"] < params.max_iters:
            p, f, g = state["p"], state["f"], state["g"]
            if pg_norm() <= params.grad_tol:
                return "converged"
            state["iters"] += 1
            if prev_p is not None:
                s = p - prev_p
                dy = g - prev_g
                sy = float(s @ dy)
                if sy > 1e-18:
                    step = float(s @ s) / sy
            alpha = min(max(step, 1e-12), 1e10)
            accepted = False
            fq, q = f, p
            for _ in range(80):
                q = np.clip(p - alpha * g, lo, hi)
                d = q - p
                if not d.any():
                    break
                fq = obj(q, False)[0]
                if math.isfinite(fq) and fq <= f + params.armijo * float(g @ d):
                    accepted = True
                    break
                alpha *= params.backtrack_factor
            if not accepted or fq >= f:
                return "stalled"
            prev_p, prev_g = p, g
            state["p"] = q
            state["f"], state["g"] = obj(q, True)
        return "budget"

    def coordinate_phase() -> bool:
        improved_any = False
        dim = state["p"].size
        warm = np.maximum(np.abs(state["p"]), 1.0)
        blocked = np.zeros(dim, dtype=bool)
        for _ in range(60):
            if state["iters"] >= params.max_iters:
                break
            state["iters"] += 1
            p, f, g = state["p"], state["f"], state["g"]
            moved = False
            q = p.copy()
            for i in range(dim):
                gi = g[i]
                if gi == 0.0 or blocked[i]:
                    continue
                alpha = warm[i]
                accepted = False
                for _ in range(30):
                    ti = min(max(q[i] - alpha * gi, lo[i]), hi[i])
                    if ti == q[i]:
                        alpha *= params.backtrack_factor
                        continue
                    old = q[i]
                    q[i] = ti
                    fq = obj(q, False)[0]
                    if math.isfinite(fq) and fq <= f - params.armijo * abs(gi * (ti - old)):
                        f = fq
                        warm[i] = 2.0 * alpha
                        accepted = True
                        moved = True
                        break
                    q[i] = old
                    alpha *= params.backtrack_factor
                if not accepted:
                    blocked[i] = True
            if not moved:
                break
            state["p"] = q
            state["f"], state["g"] = obj(q, True)
            improved_any = True
        return improved_any

    converged = False
    for _ in range(6):
        status = joint_phase()
        if status == "converged":
            converged = True
            break
        if status == "budget":
            break
        if not coordinate_phase():
            break
    return InnerResult(state["p"], state["f"], pg_norm(), state["iters"], converged)


def _lex_less(a: np.ndarray, b: np.ndarray) -> bool:
    for u, v in zip(a, b):
        if u != v:
            return u < v
    return False


def inner_minimize_multistart(
    obj,
    lower,
    upper,
    start,
    params: InnerParams,
    rng: np.random.Generator | None = None,
    window=None,
) -> InnerResult:
    """Best of a warm start plus ``params.restarts`` seeded random starts.

    Lowest objective wins; exact ties go to the lexicographically smallest
    point, so the multistart result is order-independent and reproducible.
    """
    from . import expr as ex

    best = inner_minimize(obj, lower, upper, start, params)
    if params.restarts > 0 and rng is not None:
        if window is None:
            wlo, whi = ex.sample_window(lower, upper)
        else:
            wlo, whi = window
        for _ in range(params.restarts):
            s = rng.uniform(wlo, whi)
            cand = inner_minimize(obj, lower, upper, s, params)
            if cand.value < best.value or (
                cand.value == best.value and _lex_less(cand.point, best.point)
            ):
                best = cand
    return best


# ---------------------------------------------------------------------------
# alternating penalty solver


@dataclass(frozen=True)
class TraceRow:
    k: int
    rho: float
    f_pen: float
    g_pen: float
    violation: float
    step_norm: float
    f_ref: float  # NaN when the form has no reference


@dataclass(frozen=True)
class SolveResult:
    point: SaddlePoint
    status: str
    trace: tuple[TraceRow, ...]
    multipliers: "KktReport | None" = None
    diagnostic: str = ""

    @property
    def converged(self) -> bool:
        return self.status == STATUS_CONVERGED


TRACE_HEADER = "k,rho,F,G,P,step_norm,f_ref"


def trace_to_csv(trace) -> str:
    lines = [TRACE_HEADER]
    for r in trace:
        lines.append(
            f"{r.k},{r.rho:.9g},{r.f_pen:.9g},{r.g_pen:.9g},"
            f"{r.violation:.9g},{r.step_norm:.9g},{r.f_ref:.9g}"
        )
    return "\n".join(lines) + "\n"


def alternating_penalty_solve(
    form: SaddleForm,
    params: SolverParams | None = None,
    start=None,
    seed: int = 0,
    with_multipliers: bool = False,
) -> SolveResult:
    """Run the alternating penalty loop on a form.

    ``start`` may be a SaddlePoint or a raw vector; points outside the box
    are projected in.  With a fixed seed and fixed parameters the trace is
    bit-for-bit reproducible.
    """
    params = params or SolverParams()
    part = form.partition
    lo = form.box.lower_array()
    hi = form.box.upper_array()
    if start is None:
        start = np.zeros(part.total)
    vec = start.vec if isinstance(start, SaddlePoint) else np.asarray(start, dtype=float)
    p = np.clip(vec.astype(float), lo, hi)
    xy = np.arange(part.n + part.m1)
    zz = np.arange(part.n + part.m1, part.total)
    rng = np.random.default_rng(seed)
    trace: list[TraceRow] = []
    status = STATUS_MAX_OUTER
    diagnostic = ""
    theta = params.theta

    for k in range(1, params.max_outer + 1):
        rho = params.rho1 * params.growth ** (k - 1)

        full = p.copy()

        def obj_xy(sub, need_grad):
            full[xy] = sub
            sp = SaddlePoint(part, full)
            if need_grad:
                v, grad = penalty_f_theta(form, sp, rho, theta)
                return v, grad[xy]
            return penalty_f_theta_value(form, sp, rho, theta), None

        res_xy = inner_minimize_multistart(
            obj_xy, lo[xy], hi[xy], p[xy], params.inner, rng
        )
        p2 = p.copy()
        p2[xy] = res_xy.point

        if part.m2 > 0:
            z_lo = np.maximum(lo[zz], p2[zz] - params.z_trust)
            z_hi = np.minimum(hi[zz], p2[zz] + params.z_trust)
            trust_note = (
                "; z trust window active"
                if (z_lo > lo[zz]).any() or (z_hi < hi[zz]).any()
                else ""
            )
            full_z = p2.copy()

            def obj_z(sub, need_grad):
                full_z[zz] = sub
                sp = SaddlePoint(part, full_z)
                if need_grad:
                    v, grad = penalty_g_theta(form, sp, rho, theta)
                    return v, grad[zz]
                return penalty_g_theta_value(form, sp, rho, theta), None

            res_z = inner_minimize_multistart(
                obj_z, z_lo, z_hi, p2[zz], params.inner, rng
            )
            p2[zz] = res_z.point
            diagnostic = (
                f"inner xy: pg={res_xy.pg_norm:.3e} its={res_xy.iterations}; "
                f"inner z: pg={res_z.pg_norm:.3e} its={res_z.iterations}{trust_note}"
            )
        else:
            diagnostic = f"inner xy: pg={res_xy.pg_norm:.3e} its={res_xy.iterations}"

        sp2 = SaddlePoint(part, p2)
        step_norm = float(np.linalg.norm(p2 - p))
        f_ref = form.reference(sp2.x) if form.reference is not None else math.nan
        trace.append(
            TraceRow(
                k=k,
                rho=rho,
                f_pen=penalty_f(form, sp2, rho),
                g_pen=penalty_g(form, sp2, rho),
                violation=total_violation(form, sp2),
                step_norm=step_norm,
                f_ref=f_ref,
            )
        )
        p = p2
        if step_norm <= params.eps and eps_feasible(form, sp2, params.eps):
            status = STATUS_CONVERGED
            break
        if params.rho1 * params.growth**k > params.rho_cap:
            status = STATUS_RHO_CAP
            break

    point = SaddlePoint(part, p)
    multipliers = None
    if with_multipliers and status == STATUS_CONVERGED:
        try:
            multipliers = kkt_residual(form, point, feas_tol=10 * params.eps)
        except (FormError, ValueError):
            multipliers = None
    return SolveResult(point, status, tuple(trace), multipliers, diagnostic)


# ---------------------------------------------------------------------------
# first-order residuals and multiplier estimation


@dataclass(frozen=True)
class KktReport:
    alpha: np.ndarray  # s + r entries: inequality then equality weights, (x,y) system
    beta: np.ndarray  # s + r entries for the z system
    stationarity_residual_xy: float
    stationarity_residual_z: float
    complementarity_residual: float
    sign_violation: float


def _stationarity(target, cols, weights):
    r = target.copy()
    for c, w in zip(cols, weights):
        r += w * c
    return float(np.linalg.norm(r))


def _estimate(target, cols, is_ineq, active):
    """Least squares for  sum w_i col_i = -target  with w >= 0 on active
    inequality columns and w = 0 forced on inactive ones."""
    free_cols = []
    free_idx = []
    lb = []
    for idx, (c, ineq_flag, act) in enumerate(zip(cols, is_ineq, active)):
        if ineq_flag and not act:
            continue
        free_cols.append(c)
        free_idx.append(idx)
        lb.append(0.0 if ineq_flag else -np.inf)
    w = np.zeros(len(cols))
    if not free_cols:
        return w, float(np.linalg.norm(target))
    A = np.column_stack(free_cols)
    b = -target
    sol = lsq_linear(A, b, bounds=(np.array(lb), np.full(len(lb), np.inf)))
    for j, idx in enumerate(free_idx):
        w[idx] = sol.x[j]
    return w, float(np.linalg.norm(A @ sol.x - b))


def kkt_residual(
    form: SaddleForm,
    p: SaddlePoint,
    alpha=None,
    beta=None,
    feas_tol: float = 1e-6,
    act_tol: float = 1e-6,
) -> KktReport:
    """Stationarity residuals of the two first-order systems at ``p``.

    Without ``alpha``/``beta`` the multipliers are estimated by bounded
    least squares over the active constraints (inactive inequality weights
    are forced to zero); with them the residuals of the supplied multipliers
    are reported unchanged.
    """
    rep = membership(form, p, feas_tol)
    if not rep.feasible:
        raise FormError(
            f"kkt_residual needs a feasible point; max violation {rep.max_violation:.3e}"
        )
    part = form.partition
    v = p.vec
    xy = np.arange(part.n + part.m1)
    zz = np.arange(part.n + part.m1, part.total)
    s, r = len(form.ineq), len(form.eq)

    _, ggrad = form.g.value_grad(v)
    gi_vals = np.array([gi.value(v) for gi in form.ineq])
    grads = [gi.value_grad(v)[1] for gi in form.ineq] + [
        hj.value_grad(v)[1] for hj in form.eq
    ]
    is_ineq = [True] * s + [False] * r
    active = [gi_vals[i] >= -act_tol for i in range(s)] + [True] * r

    target_xy = ggrad[xy]  # residual form: grad_xy g + sum w grad_xy c = 0
    cols_xy = [c[xy] for c in grads]
    target_z = -ggrad[zz]  # residual form: -grad_z g + sum w grad_z c = 0
    cols_z = [c[zz] for c in grads]

    if alpha is None:
        alpha, res_xy = _estimate(target_xy, cols_xy, is_ineq, active)
    else:
        alpha = np.asarray(alpha, dtype=float)
        if alpha.shape != (s + r,):
            raise ValueError(f"alpha must have length {s + r}")
        res_xy = _stationarity(target_xy, cols_xy, alpha)
    if beta is None:
        beta, res_z = _estimate(target_z, cols_z, is_ineq, active)
    else:
        beta = np.asarray(beta, dtype=float)
        if beta.shape != (s + r,):
            raise ValueError(f"beta must have length {s + r}")
        res_z = _stationarity(target_z, cols_z, beta)

    comp = 0.0
    sign = 0.0
    for i in range(s):
        comp = max(comp, abs(alpha[i] * gi_vals[i]), abs(beta[i] * gi_vals[i]))
        sign = max(sign, -min(alpha[i], 0.0), -min(beta[i], 0.0))
    return KktReport(alpha, beta, res_xy, res_z, comp, sign)


# ---------------------------------------------------------------------------
# exactness / stability probes


@dataclass(frozen=True)
class ExactnessRow:
    rho: float
    f_at_candidate: float
    f_at_point: float
    f_improved: bool
    g_at_candidate: float
    g_at_point: float
    g_improved: bool

    @property
    def no_improvement(self) -> bool:
        return not (self.f_improved or self.g_improved)


def exactness_probe(
    form: SaddleForm,
    p_star: SaddlePoint,
    rho_list,
    restarts: int = 8,
    seed: int = 0,
    halfwidth: float = 2.0,
    theta: float = 1.01,
    inner: InnerParams | None = None,
    margin: float = 1e-6,
) -> tuple[ExactnessRow, ...]:
    """Multistart search for points beating the exact penalties at ``p_star``.

    For each rho, the descent penalty is searched over the (x, y) block with
    z fixed at p_star (and the ascent penalty over z with (x, y) fixed),
    starting from p_star and ``restarts`` random points within ``halfwidth``
    of it.  Candidates are compared with the exact (nonsmooth) penalties; an
    improvement by more than ``margin`` is evidence against exactness.
    """
    inner = inner or InnerParams(restarts=restarts)
    inner = replace(inner, restarts=restarts)
    part = form.partition
    lo = form.box.lower_array()
    hi = form.box.upper_array()
    xy = np.arange(part.n + part.m1)
    zz = np.arange(part.n + part.m1, part.total)
    rows = []
    for i, rho in enumerate(rho_list):
        rng = np.random.default_rng(seed + i)
        base = p_star.vec.copy()

        def obj_xy(sub, need_grad):
            q = base.copy()
            q[xy] = sub
            sp = SaddlePoint(part, q)
            if need_grad:
                v, grad = penalty_f_theta(form, sp, rho, theta)
                return v, grad[xy]
            return penalty_f_theta_value(form, sp, rho, theta), None

        window = (
            np.maximum(lo[xy], p_star.vec[xy] - halfwidth),
            np.minimum(hi[xy], p_star.vec[xy] + halfwidth),
        )
        res = inner_minimize_multistart(
            obj_xy, lo[xy], hi[xy], p_star.vec[xy], inner, rng, window=window
        )
        cand = base.copy()
        cand[xy] = res.point
        f_cand = penalty_f(form, SaddlePoint(part, cand), rho)
        f_star = penalty_f(form, p_star, rho)

        if part.m2 > 0:
            def obj_z(sub, need_grad):
                q = base.copy()
                q[zz] = sub
                sp = SaddlePoint(part, q)
                if need_grad:
                    v, grad = penalty_g_theta(form, sp, rho, theta)
                    return v, grad[zz]
                return penalty_g_theta_value(form, sp, rho, theta), None

            window_z = (
                np.maximum(lo[zz], p_star.vec[zz] - halfwidth),
                np.minimum(hi[zz], p_star.vec[zz] + halfwidth),
            )
            res_z = inner_minimize_multistart(
                obj_z, lo[zz], hi[zz], p_star.vec[zz], inner, rng, window=window_z
            )
            cand_z = base.copy()
            cand_z[zz] = res_z.point
            g_cand = penalty_g(form, SaddlePoint(part, cand_z), rho)
        else:
            g_cand = penalty_g(form, p_star, rho)
        g_star = penalty_g(form, p_star, rho)

        rows.append(
            ExactnessRow(
                rho=float(rho),
                f_at_candidate=f_cand,
                f_at_point=f_star,
                f_improved=f_cand < f_star - margin,
                g_at_candidate=g_cand,
                g_at_point=g_star,
                g_improved=g_cand < g_star - margin,
            )
        )
    return tuple(rows)


@dataclass(frozen=True)
class StabilityRow:
    eta: np.ndarray
    tau: np.ndarray
    size: float
    base_value: float
    perturbed_value: float
    bound: float
    holds: bool
    ratio: float
    solve_status: str


@dataclass(frozen=True)
class StabilityReport:
    rows: tuple[StabilityRow, ...]
    tightest_rho: float


def shifted_constraints(form: SaddleForm, eta, tau) -> SaddleForm:
    """The form with inequality offsets g_i <= eta_i and equalities h_j = tau_j."""
    eta = np.asarray(eta, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if eta.shape != (len(form.ineq),) or tau.shape != (len(form.eq),):
        raise FormError("perturbation sizes must match the constraint lists")
    return replace(
        form,
        name=f"{form.name}[shifted]",
        ineq=tuple(gi - float(e) for gi, e in zip(form.ineq, eta)),
        eq=tuple(hj - float(t) for hj, t in zip(form.eq, tau)),
        witness=None,
        reference=None,
    )


def stability_probe(
    form: SaddleForm,
    p_star: SaddlePoint,
    perturbations,
    rho: float,
    params: SolverParams | None = None,
    seed: int = 0,
) -> StabilityReport:
    """Solve right-hand-side-perturbed problems and test the value bound
    |g(p*) - g(perturbed optimum)| <= rho * (sum max(eta,0) + sum |tau|)."""
    params = params or SolverParams(max_outer=12)
    base = form.g.value(p_star.vec)
    rows = []
    tightest = 0.0
    for eta, tau in perturbations:
        eta = np.asarray(eta, dtype=float)
        tau = np.asarray(tau, dtype=float)
        size = float(np.maximum(eta, 0.0).sum() + np.abs(tau).sum())
        pert = shifted_constraints(form, eta, tau)
        res = alternating_penalty_solve(pert, params, start=p_star, seed=seed)
        val = form.g.value(res.point.vec)
        diff = abs(base - val)
        bound = rho * size
        holds = diff <= bound + 1e-9
        if size > 0:
            ratio = diff / size
            tightest = max(tightest, ratio)
        else:
            ratio = 0.0 if diff <= 1e-9 else math.inf
        rows.append(
            StabilityRow(
                eta=eta,
                tau=tau,
                size=size,
                base_value=base,
                perturbed_value=val,
                bound=bound,
                holds=holds,
                ratio=ratio,
                solve_status=res.status,
            )
        )
    return StabilityReport(tuple(rows), tightest)
