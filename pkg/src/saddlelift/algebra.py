"""Closure operations on saddle forms.

Each operation assembles the lifted objective, constraint lists, box, witness
map, and reference evaluator of the result mechanically from its inputs, so
the witness identity is preserved by construction.  Index bookkeeping is
deterministic: the first operand's y/z blocks come first, then the second
operand's, then any auxiliaries introduced by the operation.

Semantic hypotheses (nonnegativity, sign, joint convexity of the lifted
objective, monotonicity of a composed scalar map) are caller declarations;
they are spot-checked by sampling and a detected violation is a hard error.
"""

from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from . import expr as ex
from .expr import CONVEX, Expr
from .forms import Box, FormError, SaddleForm, VarPartition


class HypothesisViolationError(FormError):
    """A declared semantic hypothesis is absent or contradicted by sampling."""


def _require(form: SaddleForm, decl: str, op: str) -> None:
    if decl not in form.declares:
        raise HypothesisViolationError(
            f"{op} needs {form.name!r} declared {decl!r}; "
            f"present declarations: {sorted(form.declares)}"
        )


def _spot_check_sign(form: SaddleForm, decl: str, op: str, samples: int = 25, seed: int = 7):
    """Sample the reference over the x window and verify a declared sign."""
    if form.reference is None:
        return
    rng = np.random.default_rng(seed)
    for x in form.sample_x(rng, samples):
        r = form.reference(x)
        bad = (
            (decl == "nonneg" and r < -1e-9)
            or (decl == "negative" and r > -1e-12)
            or (decl == "positive" and r < 1e-12)
        )
        if bad:
            raise HypothesisViolationError(
                f"{op}: declaration {decl!r} of {form.name!r} fails at "
                f"x={x.tolist()} with value {r}"
            )


def _spot_check_joint_convexity(form: SaddleForm, op: str, samples: int = 25, seed: int = 11):
    lo, hi = form.effective_window()
    rep = ex.curvature_audit(form.g, lo, hi, tag=CONVEX, samples=samples, seed=seed)
    if not rep.passed:
        raise HypothesisViolationError(
            f"{op}: lifted objective of {form.name!r} is declared jointly convex "
            "but sampling found a counterexample"
        )


def _relocated(form: SaddleForm, y_off: int, z_off: int, new_m1: int):
    """Remap a form's expressions into a larger partition.

    The x block stays at 0..n-1; the y block moves to n+y_off; the z block
    moves to n+new_m1+z_off.
    """
    p = form.partition
    mapping: dict[int, int] = {}
    for j in range(p.m1):
        mapping[p.n + j] = p.n + y_off + j
    for k in range(p.m2):
        mapping[p.n + p.m1 + k] = p.n + new_m1 + z_off + k
    g = form.g.remap(mapping)
    ineq = tuple(e.remap(mapping) for e in form.ineq)
    eq = tuple(e.remap(mapping) for e in form.eq)
    return g, ineq, eq


def _block_bounds(box: Box, part: VarPartition):
    """(lower, upper) lists per block of a box."""
    lo, hi = list(box.lower), list(box.upper)
    n, m1 = part.n, part.m1
    return (
        (lo[:n], hi[:n]),
        (lo[n : n + m1], hi[n : n + m1]),
        (lo[n + m1 :], hi[n + m1 :]),
    )


def _merge_boxes(
    b1: Box,
    p1: VarPartition,
    b2: Box,
    p2: VarPartition,
    aux_y: tuple[list, list],
    aux_z: tuple[list, list],
) -> Box:
    """Shared-x intersection, concatenated y/z blocks, auxiliaries last."""
    (x1l, x1u), (y1l, y1u), (z1l, z1u) = _block_bounds(b1, p1)
    (x2l, x2u), (y2l, y2u), (z2l, z2u) = _block_bounds(b2, p2)
    xl = [max(a, b) for a, b in zip(x1l, x2l)]
    xu = [min(a, b) for a, b in zip(x1u, x2u)]
    return Box.from_blocks(
        (xl, xu),
        (y1l + y2l + aux_y[0], y1u + y2u + aux_y[1]),
        (z1l + z2l + aux_z[0], z1u + z2u + aux_z[1]),
    )


def _merged_window(f1, f2, aux_y, aux_z):
    if f1.window is None and f2.window is None:
        return None
    w1 = f1.window if f1.window is not None else f1.box
    w2 = f2.window if f2.window is not None else f2.box
    return _merge_boxes(w1, f1.partition, w2, f2.partition, aux_y, aux_z)


def _extend_box(box: Box, part: VarPartition, aux_y, aux_z) -> Box:
    (xl, xu), (yl, yu), (zl, zu) = _block_bounds(box, part)
    return Box.from_blocks(
        (xl, xu), (yl + aux_y[0], yu + aux_y[1]), (zl + aux_z[0], zu + aux_z[1])
    )


INF = math.inf


def scaled_sum(f1: SaddleForm, f2: SaddleForm, a1: float, a2: float) -> SaddleForm:
    """Form for a1*f1 + a2*f2 with positive weights."""
    if a1 <= 0 or a2 <= 0:
        raise FormError("scaled_sum requires positive weights")
    p1, p2 = f1.partition, f2.partition
    if p1.n != p2.n:
        raise FormError(
            f"x-dimension mismatch: {f1.name} has n={p1.n}, {f2.name} has n={p2.n}"
        )
    part = VarPartition(p1.n, p1.m1 + p2.m1, p1.m2 + p2.m2)
    g1, in1, eq1 = _relocated(f1, 0, 0, part.m1)
    g2, in2, eq2 = _relocated(f2, p1.m1, p1.m2, part.m1)
    g = ex.add(ex.scale(g1, a1), ex.scale(g2, a2))
    box = _merge_boxes(f1.box, p1, f2.box, p2, ([], []), ([], []))
    window = _merged_window(f1, f2, ([], []), ([], []))

    witness = None
    if f1.witness is not None and f2.witness is not None:
        def witness(x, _w1=f1.witness, _w2=f2.witness):
            y1, z1 = _w1(x)
            y2, z2 = _w2(x)
            return np.concatenate([y1, y2]), np.concatenate([z1, z2])

    reference = None
    if f1.reference is not None and f2.reference is not None:
        reference = lambda x, _r1=f1.reference, _r2=f2.reference: (
            a1 * _r1(x) + a2 * _r2(x)
        )

    return SaddleForm(
        name=f"scaled_sum({f1.name},{f2.name})",
        partition=part,
        box=box,
        g=g,
        ineq=in1 + in2,
        eq=eq1 + eq2,
        witness=witness,
        reference=reference,
        declares=f1.declares & f2.declares & {"convex_joint_g", "nonneg"},
        window=window,
    )


def product(f1: SaddleForm, f2: SaddleForm) -> SaddleForm:
    """Form for f1*f2; needs both lifted objectives jointly convex and both
    functions nonnegative."""
    for f in (f1, f2):
        _require(f, "convex_joint_g", "product")
        _require(f, "nonneg", "product")
        _spot_check_sign(f, "nonneg", "product")
    p1, p2 = f1.partition, f2.partition
    if p1.n != p2.n:
        raise FormError(
            f"x-dimension mismatch: {f1.name} has n={p1.n}, {f2.name} has n={p2.n}"
        )
    part = VarPartition(p1.n, p1.m1 + p2.m1 + 2, p1.m2 + p2.m2 + 1)
    g1, in1, eq1 = _relocated(f1, 0, 0, part.m1)
    g2, in2, eq2 = _relocated(f2, p1.m1, p1.m2, part.m1)
    yh1 = ex.var(p1.n + p1.m1 + p2.m1)
    yh2 = ex.var(p1.n + p1.m1 + p2.m1 + 1)
    zh = ex.var(part.total - 1)
    g = 0.5 * ex.square(yh1 + yh2) - 0.5 * zh
    ineq = (
        ex.square(yh1) + ex.square(yh2) - zh,
        (g1 - yh1).with_tag(CONVEX),
        (g2 - yh2).with_tag(CONVEX),
    ) + in1 + in2
    box = _merge_boxes(
        f1.box, p1, f2.box, p2, ([-INF, -INF], [INF, INF]), ([-INF], [INF])
    )
    window = _merged_window(
        f1, f2, ([-10.0, -10.0], [10.0, 10.0]), ([-10.0], [10.0])
    )

    witness = None
    if all(f.witness is not None and f.reference is not None for f in (f1, f2)):
        def witness(x):
            y1, z1 = f1.witness(x)
            y2, z2 = f2.witness(x)
            v1, v2 = f1.reference(x), f2.reference(x)
            y = np.concatenate([y1, y2, [v1, v2]])
            z = np.concatenate([z1, z2, [v1**2 + v2**2]])
            return y, z

    reference = None
    if f1.reference is not None and f2.reference is not None:
        reference = lambda x: f1.reference(x) * f2.reference(x)

    return SaddleForm(
        name=f"product({f1.name},{f2.name})",
        partition=part,
        box=box,
        g=g,
        ineq=ineq,
        eq=eq1 + eq2,
        witness=witness,
        reference=reference,
        declares=frozenset({"convex_joint_g", "nonneg"}),
        window=window,
    )


RECIPROCAL_MODES = ("negative", "positive")


def reciprocal(f: SaddleForm, mode: str) -> SaddleForm:
    """Reciprocal lift; ``mode`` names the sign of the carried function.

    mode "negative": the input form carries a negative-valued function r and
    the output carries 1/r; mode "positive": the input carries a positive r
    and the output carries -(1/r), the saddle lift of the reciprocal's
    negation.  Either way the output's reference is the value of the new
    lifted objective at the composed witness, where the two auxiliary
    minimizers multiply to one.
    """
    if mode not in RECIPROCAL_MODES:
        raise FormError(f"mode must be one of {RECIPROCAL_MODES}")
    sign_decl = mode
    _require(f, "convex_joint_g", "reciprocal")
    _require(f, sign_decl, "reciprocal")
    _spot_check_sign(f, sign_decl, "reciprocal")
    p = f.partition
    part = VarPartition(p.n, p.m1 + 2, p.m2 + 1)
    g0, in0, eq0 = _relocated(f, 0, 0, part.m1)
    yb1 = ex.var(p.n + p.m1)
    yb2 = ex.var(p.n + p.m1 + 1)
    zb = ex.var(part.total - 1)
    g = yb1 + ex.square(yb1 + yb2) - zb - 2.0 + ex.square(yb1) + ex.square(yb2) - zb
    ineq = (
        ex.square(yb1 + yb2) - zb - 2.0,
        ex.square(yb1) + ex.square(yb2) - zb,
        (g0 + yb2).with_tag(CONVEX),
    ) + in0
    box = _extend_box(f.box, p, ([-INF, -INF], [0.0, 0.0]), ([0.0], [INF]))
    window = None
    if f.window is not None:
        window = _extend_box(f.window, p, ([-10.0, -10.0], [0.0, 0.0]), ([0.0], [10.0]))
    sgn = 1.0 if mode == "negative" else -1.0

    witness = None
    if f.witness is not None and f.reference is not None:
        def witness(x):
            y0, z0 = f.witness(x)
            r = f.reference(x)
            y2v = sgn * r
            y1v = 1.0 / y2v
            y = np.concatenate([y0, [y1v, y2v]])
            z = np.concatenate([z0, [y1v**2 + y2v**2]])
            return y, z

    reference = None
    if f.reference is not None:
        reference = lambda x: 1.0 / (sgn * f.reference(x))

    return SaddleForm(
        name=f"reciprocal({f.name},{mode})",
        partition=part,
        box=box,
        g=g,
        ineq=ineq,
        eq=eq0,
        witness=witness,
        reference=reference,
        declares=frozenset({"convex_joint_g", "negative"}),
        window=window,
    )


def compose_monotone_convex(
    f: SaddleForm, phi: Expr, increasing: bool = True, convex: bool = True
) -> SaddleForm:
    """Form for phi(f(x)) with phi a univariate monotone increasing convex map.

    ``phi`` references variable index 0 as its argument.  The lifted
    objective becomes phi(g); constraints, box, and witness are unchanged.
    """
    if not (increasing and convex):
        raise HypothesisViolationError(
            "compose_monotone_convex requires phi declared increasing and convex"
        )
    if phi.max_index() > 0:
        raise FormError("phi must be univariate over variable index 0")
    lo, hi = np.array([-10.0]), np.array([10.0])
    rep = ex.curvature_audit(phi, lo, hi, tag=CONVEX, samples=25, seed=3)
    if not rep.passed:
        raise HypothesisViolationError("phi fails the sampled convexity check")
    rng = np.random.default_rng(3)
    for t in rng.uniform(-10.0, 10.0, size=25):
        _, dphi = phi.value_grad(np.array([t]))
        if dphi[0] < -1e-9:
            raise HypothesisViolationError(
                f"phi fails the sampled monotonicity check at t={t}"
            )

    g = phi.subst(0, f.g)
    reference = None
    if f.reference is not None:
        reference = lambda x: phi.value(np.array([f.reference(x)]))
    return replace(
        f,
        name=f"compose({f.name})",
        g=g,
        reference=reference,
        declares=f.declares & {"convex_joint_g"},
    )


def power(f: SaddleForm, a: float) -> SaddleForm:
    """Form for f(x)**a, a > 0.

    a = 1 passes the form through untouched; 0 < a < 1 uses the fractional
    lift with two auxiliary minimizers and one maximizer; a > 1 recurses as
    product(f, power(f, a - 1)).
    """
    if a <= 0:
        raise FormError("power requires a > 0")
    if a == 1.0:
        return f
    if a > 1.0:
        return product(f, power(f, a - 1.0))
    _require(f, "convex_joint_g", "power")
    _require(f, "nonneg", "power")
    _spot_check_sign(f, "nonneg", "power")
    _spot_check_joint_convexity(f, "power")
    p = f.partition
    part = VarPartition(p.n, p.m1 + 2, p.m2 + 1)
    g0, in0, eq0 = _relocated(f, 0, 0, part.m1)
    yb1 = ex.var(p.n + p.m1)
    yb2 = ex.var(p.n + p.m1 + 1)
    zb = ex.var(part.total - 1)
    g = yb1 + ex.rpow(yb1, 2.0 / a) - zb + ex.square(yb2) - zb
    ineq = (
        ex.rpow(yb1, 2.0 / a) - zb,
        ex.square(yb2) - zb,
        (g0 - yb2).with_tag(CONVEX),
    ) + in0
    box = _extend_box(f.box, p, ([0.0, 0.0], [INF, INF]), ([0.0], [INF]))
    window = None
    if f.window is not None:
        window = _extend_box(f.window, p, ([0.0, 0.0], [10.0, 10.0]), ([0.0], [10.0]))

    witness = None
    if f.witness is not None and f.reference is not None:
        def witness(x):
            y0, z0 = f.witness(x)
            r = f.reference(x)
            y1v = r**a
            y = np.concatenate([y0, [y1v, r]])
            z = np.concatenate([z0, [max(y1v ** (2.0 / a), r**2)]])
            return y, z

    reference = None
    if f.reference is not None:
        reference = lambda x: f.reference(x) ** a

    return SaddleForm(
        name=f"power({f.name},{a})",
        partition=part,
        box=box,
        g=g,
        ineq=ineq,
        eq=eq0,
        witness=witness,
        reference=reference,
        declares=frozenset({"convex_joint_g", "nonneg"}),
        window=window,
    )
