"""Saddle form data model.

A :class:`SaddleForm` packages a nonconvex/nonsmooth scalar function f of x
as a tuple  [g : g_1..g_s ; h_1..h_r]  over a partitioned variable vector
(x, y, z) on a box S = S1 x S2 x S3, where g is convex in (x, y), concave in
z, every g_i is convex, every h_j is affine.  A *witness* map x -> (y, z)
exhibits a feasible point where g equals f(x); a *reference* evaluator gives
ground-truth f(x).  The witness identity is the load-bearing contract here;
the full constrained minmax identity is never assumed.  It is audited
separately, and divergences land in the known-issues registry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import expr as ex
from .expr import Expr

D2_TOL = 1e-9


class FormError(Exception):
    """A structural invariant of a saddle form is violated."""


class WitnessAbsentError(FormError):
    pass


class WitnessInfeasibleError(FormError):
    """The stored witness breaks feasibility or the value identity."""


@dataclass(frozen=True)
class VarPartition:
    """Dimensions of the x, y, z blocks."""

    n: int
    m1: int
    m2: int

    def __post_init__(self):
        if self.n < 1 or self.m1 < 0 or self.m2 < 0:
            raise FormError("partition requires n >= 1 and m1, m2 >= 0")

    @property
    def total(self) -> int:
        return self.n + self.m1 + self.m2

    @property
    def x_indices(self) -> range:
        return range(0, self.n)

    @property
    def y_indices(self) -> range:
        return range(self.n, self.n + self.m1)

    @property
    def z_indices(self) -> range:
        return range(self.n + self.m1, self.total)

    @property
    def xy_indices(self) -> range:
        return range(0, self.n + self.m1)

    def name_of(self, index: int) -> str:
        if index < 0 or index >= self.total:
            raise FormError(f"index {index} outside partition of size {self.total}")
        if index < self.n:
            return f"x{index}"
        if index < self.n + self.m1:
            return f"y{index - self.n}"
        return f"z{index - self.n - self.m1}"

    def index_of(self, name: str) -> int:
        block, num = name[0], name[1:]
        if not num.isdigit():
            raise KeyError(name)
        i = int(num)
        if block == "x" and i < self.n:
            return i
        if block == "y" and i < self.m1:
            return self.n + i
        if block == "z" and i < self.m2:
            return self.n + self.m1 + i
        raise KeyError(name)


@dataclass(frozen=True)
class Box:
    """Coordinatewise bounds over the full variable vector; +-inf allowed."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise FormError("box bound lengths differ")
        for lo, hi in zip(self.lower, self.upper):
            if lo > hi:
                raise FormError(f"box has lower {lo} > upper {hi}")

    @classmethod
    def whole(cls, dim: int) -> "Box":
        return cls((-math.inf,) * dim, (math.inf,) * dim)

    @classmethod
    def from_blocks(cls, *blocks) -> "Box":
        """Concatenate (lower_list, upper_list) pairs block by block."""
        lower: list[float] = []
        upper: list[float] = []
        for lo, hi in blocks:
            lower.extend(float(v) for v in lo)
            upper.extend(float(v) for v in hi)
        return cls(tuple(lower), tuple(upper))

    @property
    def dim(self) -> int:
        return len(self.lower)

    def lower_array(self) -> np.ndarray:
        return np.array(self.lower, dtype=float)

    def upper_array(self) -> np.ndarray:
        return np.array(self.upper, dtype=float)

    def project(self, p: np.ndarray) -> np.ndarray:
        return np.clip(p, self.lower_array(), self.upper_array())

    def excess(self, p: np.ndarray) -> float:
        """Largest coordinatewise violation of the bounds (0 if inside)."""
        lo = self.lower_array()
        hi = self.upper_array()
        below = np.where(np.isfinite(lo), lo - p, -math.inf)
        above = np.where(np.isfinite(hi), p - hi, -math.inf)
        return float(max(0.0, below.max(initial=-math.inf), above.max(initial=-math.inf)))

    def contains(self, p: np.ndarray, tol: float = 0.0) -> bool:
        return self.excess(np.asarray(p, dtype=float)) <= tol

    def slice(self, indices) -> "Box":
        idx = list(indices)
        return Box(
            tuple(self.lower[i] for i in idx),
            tuple(self.upper[i] for i in idx),
        )


@dataclass(frozen=True)
class SaddlePoint:
    """A full (x, y, z) assignment with partition-aware block accessors."""

    partition: VarPartition
    vec: np.ndarray

    def __post_init__(self):
        v = np.array(self.vec, dtype=float)
        if v.shape != (self.partition.total,):
            raise FormError(
                f"point has shape {v.shape}, partition needs ({self.partition.total},)"
            )
        v.setflags(write=False)
        object.__setattr__(self, "vec", v)

    @classmethod
    def from_blocks(cls, partition: VarPartition, x, y=(), z=()) -> "SaddlePoint":
        v = np.concatenate(
            [np.atleast_1d(np.asarray(b, dtype=float)) if np.size(b) else np.empty(0) for b in (x, y, z)]
        )
        return cls(partition, v)

    @property
    def x(self) -> np.ndarray:
        return self.vec[: self.partition.n]

    @property
    def y(self) -> np.ndarray:
        return self.vec[self.partition.n : self.partition.n + self.partition.m1]

    @property
    def z(self) -> np.ndarray:
        return self.vec[self.partition.n + self.partition.m1 :]


WitnessMap = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
Reference = Callable[[np.ndarray], float]

# semantic declarations carried by a form, set by whoever constructs it and
# spot-checked by sampling when the algebra consumes them
DECLARABLE = ("convex_joint_g", "nonneg", "negative", "positive")


@dataclass(frozen=True)
class SaddleForm:
    name: str
    partition: VarPartition
    box: Box
    g: Expr
    ineq: tuple[Expr, ...] = ()
    eq: tuple[Expr, ...] = ()
    witness: WitnessMap | None = None
    reference: Reference | None = None
    declares: frozenset = frozenset()
    window: Box | None = None

    def __post_init__(self):
        total = self.partition.total
        if self.box.dim != total:
            raise FormError("box dimension does not match partition")
        if self.window is not None and self.window.dim != total:
            raise FormError("window dimension does not match partition")
        for label, e in self.components():
            if e.max_index() >= total:
                raise FormError(f"{label} references index {e.max_index()} >= {total}")
            for node in e.walk():
                if isinstance(node, (ex.Max0, ex.Abs)):
                    raise FormError(
                        f"{label} contains a nonsmooth {type(node).__name__} node; "
                        "forms must be built from differentiable pieces"
                    )
        for j, h in enumerate(self.eq):
            if not h.is_affine():
                raise FormError(f"equality h{j} is not structurally affine")
        unknown = set(self.declares) - set(DECLARABLE)
        if unknown:
            raise FormError(f"unknown declarations {sorted(unknown)}")
        object.__setattr__(self, "ineq", tuple(self.ineq))
        object.__setattr__(self, "eq", tuple(self.eq))
        object.__setattr__(self, "declares", frozenset(self.declares))

    def components(self):
        yield "g", self.g
        for i, gi in enumerate(self.ineq):
            yield f"g{i + 1}", gi
        for j, hj in enumerate(self.eq):
            yield f"h{j + 1}", hj

    @property
    def ineq_linear(self) -> tuple[bool, ...]:
        return tuple(gi.is_affine() for gi in self.ineq)

    def point(self, vec) -> SaddlePoint:
        return SaddlePoint(self.partition, np.asarray(vec, dtype=float))

    def effective_window(self, clip: float = 10.0):
        """Bounded sampling window (lower, upper arrays) over all axes."""
        src = self.window if self.window is not None else self.box
        return ex.sample_window(src.lower_array(), src.upper_array(), clip)

    def sample_x(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo, hi = self.effective_window()
        n = self.partition.n
        return rng.uniform(lo[:n], hi[:n], size=(count, n))

    def declare(self, *decls: str) -> "SaddleForm":
        from dataclasses import replace

        return replace(self, declares=self.declares | set(decls))


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class MembershipReport:
    feasible: bool
    ineq_violation: np.ndarray  # max(g_i, 0) per constraint
    eq_violation: np.ndarray  # |h_j| per constraint
    box_excess: float
    tol: float

    @property
    def max_violation(self) -> float:
        parts = [self.box_excess]
        if self.ineq_violation.size:
            parts.append(float(self.ineq_violation.max()))
        if self.eq_violation.size:
            parts.append(float(self.eq_violation.max()))
        return max(parts)


def membership(form: SaddleForm, p: SaddlePoint, tol: float = D2_TOL) -> MembershipReport:
    """Per-constraint violation report at ``p``."""
    v = p.vec
    try:
        iv = np.array([max(gi.value(v), 0.0) for gi in form.ineq])
    except ex.DomainEvalError as err:
        raise ex.DomainEvalError(f"{err} (while checking membership of {form.name})", err.node)
    ev = np.array([abs(hj.value(v)) for hj in form.eq])
    bx = form.box.excess(v)
    feasible = bx <= tol
    if iv.size:
        feasible = feasible and bool(iv.max() <= tol)
    if ev.size:
        feasible = feasible and bool(ev.max() <= tol)
    return MembershipReport(feasible, iv, ev, bx, tol)


def witness_eval(form: SaddleForm, x, check: bool = True) -> SaddlePoint:
    """Evaluate the witness map at ``x``.

    With ``check`` the returned point is validated: feasible to 1e-9 and the
    value identity |g(x,y,z) - reference(x)| <= 1e-9.  Failures raise
    :class:`WitnessInfeasibleError`, which signals a catalog bug and belongs
    in the known-issues registry.
    """
    if form.witness is None:
        raise WitnessAbsentError(f"form {form.name!r} has no witness map")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if xv.shape != (form.partition.n,):
        raise FormError(f"x has shape {xv.shape}, expected ({form.partition.n},)")
    y, z = form.witness(xv)
    p = SaddlePoint.from_blocks(form.partition, xv, y, z)
    if check:
        rep = membership(form, p, D2_TOL)
        if not rep.feasible:
            raise WitnessInfeasibleError(
                f"witness of {form.name!r} infeasible at x={xv.tolist()}: "
                f"max violation {rep.max_violation:.3e}"
            )
        if form.reference is not None:
            gap = abs(form.g.value(p.vec) - form.reference(xv))
            if gap > D2_TOL:
                raise WitnessInfeasibleError(
                    f"witness identity of {form.name!r} fails at x={xv.tolist()}: "
                    f"|g - f| = {gap:.3e}"
                )
    return p


@dataclass(frozen=True)
class AuditItem:
    label: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class FormAuditReport:
    form: str
    items: tuple[AuditItem, ...]

    @property
    def passed(self) -> bool:
        return all(it.passed for it in self.items)

    def failures(self) -> tuple[AuditItem, ...]:
        return tuple(it for it in self.items if not it.passed)


def validate_form(form: SaddleForm, samples: int = 50, seed: int = 0) -> FormAuditReport:
    """Sampled audit of the declared structure of a form.

    Checks g for convexity over the (x, y) block (z held fixed at sampled
    values) and concavity over the z block, each g_i for convexity on the
    whole box, each h_j for affinity, and the witness identity when a witness
    and reference are present.
    """
    lo, hi = form.effective_window()
    part = form.partition
    items: list[AuditItem] = []

    def run(e: Expr, tag: str, axes, label: str, sd: int):
        try:
            rep = ex.curvature_audit(
                e, lo, hi, tag=tag, samples=samples, seed=sd, axes=axes
            )
        except ex.DomainEvalError as err:
            items.append(AuditItem(label, False, f"domain error during audit: {err}"))
            return
        detail = ""
        if not rep.passed and rep.counterexample is not None:
            u, v, t = rep.counterexample
            detail = f"counterexample u={u.tolist()} v={v.tolist()} t={t}"
        items.append(AuditItem(label, rep.passed, detail))

    run(form.g, ex.CONVEX, list(part.xy_indices), "g convex on (x,y)", seed)
    if part.m2 > 0:
        run(form.g, ex.CONCAVE, list(part.z_indices), "g concave on z", seed + 1)
    for i, gi in enumerate(form.ineq):
        tag = gi.tag if gi.tag in (ex.CONVEX, ex.AFFINE) else ex.CONVEX
        run(gi, tag, None, f"g{i + 1} convex", seed + 2 + i)
    for j, hj in enumerate(form.eq):
        run(hj, ex.AFFINE, None, f"h{j + 1} affine", seed + 100 + j)

    if form.witness is not None and form.reference is not None:
        rng = np.random.default_rng(seed + 1000)
        worst = 0.0
        bad_x = None
        ok = True
        for x in form.sample_x(rng, samples):
            try:
                p = witness_eval(form, x, check=False)
                rep = membership(form, p, D2_TOL)
                gap = abs(form.g.value(p.vec) - form.reference(x))
                err = max(gap, rep.max_violation)
            except (ex.ExprError, FormError) as exc:
                ok = False
                bad_x = x
                worst = math.inf
                break
            if err > max(worst, D2_TOL):
                worst = err
                bad_x = x
        if worst > D2_TOL:
            ok = False
        items.append(
            AuditItem(
                "witness identity",
                ok,
                "" if ok else f"worst error {worst:.3e} at x={np.asarray(bad_x).tolist()}",
            )
        )
    return FormAuditReport(form.name, tuple(items))
