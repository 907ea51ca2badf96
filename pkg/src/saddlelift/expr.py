"""Differentiable scalar expressions over a flat variable vector.

Every scalar function handled by this package (saddle objectives, constraint
left-hand sides, penalty ingredients) is an immutable expression tree built
from the node types below.  Evaluation is exact recursive arithmetic; the
gradient is the exact chain rule.  Curvature is *declared* metadata attached
to each node and checked empirically by sampling, never inferred symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable

import numpy as np

CONVEX = "convex"
CONCAVE = "concave"
AFFINE = "affine"
NONE = "none"

_TAGS = (CONVEX, CONCAVE, AFFINE, NONE)


class ExprError(Exception):
    """Base class for expression failures."""


class DimensionError(ExprError):
    pass


class DomainEvalError(ExprError):
    """Evaluation outside a node's domain (log of non-positive, etc.)."""

    def __init__(self, message: str, node: "Expr"):
        super().__init__(message)
        self.node = node


class NondifferentiableError(ExprError):
    """Gradient requested at a kink of a nonsmooth node."""

    def __init__(self, message: str, node: "Expr"):
        super().__init__(message)
        self.node = node


class ParseError(ExprError):
    def __init__(self, message: str, line: int = 1, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class Expr:
    """Immutable expression node.  Subclasses are frozen dataclasses."""

    tag: str

    # -- evaluation ---------------------------------------------------------

    def value(self, point: np.ndarray) -> float:
        """Exact value at ``point``; raises on domain violations."""
        p = np.asarray(point, dtype=float)
        if p.ndim != 1:
            raise DimensionError(f"expected 1-d point, got shape {p.shape}")
        if self.max_index() >= p.size:
            raise DimensionError(
                f"expression references index {self.max_index()} "
                f"but point has dimension {p.size}"
            )
        return float(self._val(p))

    def value_batch(self, points: np.ndarray) -> np.ndarray:
        """Lenient vectorized value over ``points`` of shape (dim, N).

        Out-of-domain entries become NaN instead of raising; callers treat
        NaN as infeasible.
        """
        with np.errstate(all="ignore"):
            out = self._val_batch(np.asarray(points, dtype=float))
        return np.broadcast_to(out, points.shape[1:]).astype(float)

    def value_grad(self, point: np.ndarray) -> tuple[float, np.ndarray]:
        """Value and exact gradient (length ``len(point)``) at ``point``."""
        p = np.asarray(point, dtype=float)
        if self.max_index() >= p.size:
            raise DimensionError(
                f"expression references index {self.max_index()} "
                f"but point has dimension {p.size}"
            )
        v, g = self._vg(p)
        return float(v), g

    # -- structure ----------------------------------------------------------

    def children(self) -> tuple["Expr", ...]:
        return ()

    def max_index(self) -> int:
        """Largest variable index referenced, or -1 for constants."""
        m = -1
        for c in self.children():
            m = max(m, c.max_index())
        return m

    def is_affine(self) -> bool:
        """Structural affinity (decidable without sampling)."""
        return False

    def remap(self, mapping: dict[int, int]) -> "Expr":
        """New expression with every variable index sent through ``mapping``."""
        raise NotImplementedError

    def subst(self, index: int, sub: "Expr") -> "Expr":
        """Replace references to variable ``index`` with expression ``sub``."""
        raise NotImplementedError

    def with_tag(self, tag: str) -> "Expr":
        if tag not in _TAGS:
            raise ValueError(f"unknown curvature tag {tag!r}")
        return replace(self, tag=tag)

    def walk(self) -> Iterable["Expr"]:
        yield self
        for c in self.children():
            yield from c.walk()

    # hooks implemented by subclasses
    def _val(self, p):  # strict, scalar point
        raise NotImplementedError

    def _val_batch(self, p):  # lenient, (dim, N) points
        raise NotImplementedError

    def _vg(self, p):  # (value, gradient)
        raise NotImplementedError

    # -- sugar (scalar-only products; there is no general product node) ------

    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            return other
        return Const(float(other))

    def __add__(self, other):
        return add(self, self._coerce(other))

    def __radd__(self, other):
        return add(self._coerce(other), self)

    def __sub__(self, other):
        return add(self, neg(self._coerce(other)))

    def __rsub__(self, other):
        return add(self._coerce(other), neg(self))

    def __neg__(self):
        return neg(self)

    def __mul__(self, c):
        if isinstance(c, Expr):
            return NotImplemented
        return scale(self, float(c))

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# node types


@dataclass(frozen=True)
class Const(Expr):
    c: float
    tag: str = AFFINE

    def _val(self, p):
        return self.c

    def _val_batch(self, p):
        return np.full(p.shape[1:], self.c)

    def _vg(self, p):
        return self.c, np.zeros(p.size)

    def is_affine(self):
        return True

    def remap(self, mapping):
        return self

    def subst(self, index, sub):
        return self


@dataclass(frozen=True)
class Var(Expr):
    index: int
    tag: str = AFFINE

    def _val(self, p):
        return p[self.index]

    def _val_batch(self, p):
        return p[self.index]

    def _vg(self, p):
        g = np.zeros(p.size)
        g[self.index] = 1.0
        return p[self.index], g

    def max_index(self):
        return self.index

    def is_affine(self):
        return True

    def remap(self, mapping):
        return replace(self, index=mapping.get(self.index, self.index))

    def subst(self, index, sub):
        return sub if index == self.index else self


@dataclass(frozen=True)
class Affine(Expr):
    """Sparse affine combination  sum_i coeff_i * v_i + offset."""

    terms: tuple[tuple[int, float], ...]
    offset: float = 0.0
    tag: str = AFFINE

    def _val(self, p):
        acc = self.offset
        for i, c in self.terms:
            acc += c * p[i]
        return acc

    def _val_batch(self, p):
        acc = np.full(p.shape[1:], self.offset)
        for i, c in self.terms:
            acc = acc + c * p[i]
        return acc

    def _vg(self, p):
        g = np.zeros(p.size)
        acc = self.offset
        for i, c in self.terms:
            acc += c * p[i]
            g[i] += c
        return acc, g

    def max_index(self):
        return max((i for i, _ in self.terms), default=-1)

    def is_affine(self):
        return True

    def remap(self, mapping):
        return replace(
            self,
            terms=tuple((mapping.get(i, i), c) for i, c in self.terms),
        )

    def subst(self, index, sub):
        if all(i != index for i, _ in self.terms):
            return self
        kept = tuple((i, c) for i, c in self.terms if i != index)
        parts: list[Expr] = [Affine(kept, self.offset)]
        for i, c in self.terms:
            if i == index:
                parts.append(Scale(sub, c))
        return Sum(tuple(parts))


def _unary_remap(node, mapping):
    return replace(node, child=node.child.remap(mapping))


def _unary_subst(node, index, sub):
    return replace(node, child=node.child.subst(index, sub))


@dataclass(frozen=True)
class Sum(Expr):
    parts: tuple[Expr, ...]
    tag: str = NONE

    def _val(self, p):
        return sum(c._val(p) for c in self.parts)

    def _val_batch(self, p):
        acc = np.zeros(p.shape[1:])
        for c in self.parts:
            acc = acc + c._val_batch(p)
        return acc

    def _vg(self, p):
        v = 0.0
        g = np.zeros(p.size)
        for c in self.parts:
            cv, cg = c._vg(p)
            v += cv
            g += cg
        return v, g

    def children(self):
        return self.parts

    def is_affine(self):
        return all(c.is_affine() for c in self.parts)

    def remap(self, mapping):
        return replace(self, parts=tuple(c.remap(mapping) for c in self.parts))

    def subst(self, index, sub):
        return replace(self, parts=tuple(c.subst(index, sub) for c in self.parts))


@dataclass(frozen=True)
class Scale(Expr):
    child: Expr
    c: float
    tag: str = NONE

    def _val(self, p):
        return self.c * self.child._val(p)

    def _val_batch(self, p):
        return self.c * self.child._val_batch(p)

    def _vg(self, p):
        v, g = self.child._vg(p)
        return self.c * v, self.c * g

    def children(self):
        return (self.child,)

    def is_affine(self):
        return self.child.is_affine()

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Square(Expr):
    child: Expr
    tag: str = NONE

    def _val(self, p):
        v = self.child._val(p)
        return v * v

    def _val_batch(self, p):
        v = self.child._val_batch(p)
        return v * v

    def _vg(self, p):
        v, g = self.child._vg(p)
        return v * v, 2.0 * v * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class IntPow(Expr):
    child: Expr
    k: int
    tag: str = NONE

    def __post_init__(self):
        if self.k < 1 or int(self.k) != self.k:
            raise ValueError("integer power requires k >= 1")

    def _val(self, p):
        return self.child._val(p) ** self.k

    def _val_batch(self, p):
        return self.child._val_batch(p) ** self.k

    def _vg(self, p):
        v, g = self.child._vg(p)
        return v**self.k, self.k * v ** (self.k - 1) * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class RealPow(Expr):
    """child ** a for real a > 0, defined on child >= 0 only."""

    child: Expr
    a: float
    tag: str = NONE

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("real power requires exponent a > 0")

    def _val(self, p):
        v = self.child._val(p)
        if v < 0:
            raise DomainEvalError(f"real power of negative value {v}", self)
        return v**self.a

    def _val_batch(self, p):
        v = self.child._val_batch(p)
        return np.where(v < 0, np.nan, np.abs(v) ** self.a)

    def _vg(self, p):
        v, g = self.child._vg(p)
        if v < 0:
            raise DomainEvalError(f"real power of negative value {v}", self)
        if v == 0.0:
            if self.a < 1.0:
                raise NondifferentiableError(
                    f"real power {self.a} not differentiable at 0", self
                )
            dv = 1.0 if self.a == 1.0 else 0.0
            return 0.0, dv * g
        return v**self.a, self.a * v ** (self.a - 1.0) * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Exp(Expr):
    child: Expr
    tag: str = NONE

    def _val(self, p):
        return math.exp(self.child._val(p))

    def _val_batch(self, p):
        return np.exp(self.child._val_batch(p))

    def _vg(self, p):
        v, g = self.child._vg(p)
        e = math.exp(v)
        return e, e * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Log(Expr):
    child: Expr
    tag: str = NONE

    def _val(self, p):
        v = self.child._val(p)
        if v <= 0:
            raise DomainEvalError(f"log of non-positive value {v}", self)
        return math.log(v)

    def _val_batch(self, p):
        v = self.child._val_batch(p)
        return np.where(v <= 0, np.nan, np.log(np.where(v <= 0, 1.0, v)))

    def _vg(self, p):
        v, g = self.child._vg(p)
        if v <= 0:
            raise DomainEvalError(f"log of non-positive value {v}", self)
        return math.log(v), g / v

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Sin(Expr):
    """sin of an affine argument (the only trigonometric node needed)."""

    child: Expr
    tag: str = NONE

    def __post_init__(self):
        if not self.child.is_affine():
            raise ValueError("sin node requires an affine argument")

    def _val(self, p):
        return math.sin(self.child._val(p))

    def _val_batch(self, p):
        return np.sin(self.child._val_batch(p))

    def _vg(self, p):
        v, g = self.child._vg(p)
        return math.sin(v), math.cos(v) * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Max0(Expr):
    """max(child, 0); used only when assembling penalties, never in forms."""

    child: Expr
    tag: str = NONE

    def _val(self, p):
        return max(self.child._val(p), 0.0)

    def _val_batch(self, p):
        return np.maximum(self.child._val_batch(p), 0.0)

    def _vg(self, p):
        v, g = self.child._vg(p)
        if v == 0.0:
            raise NondifferentiableError("max-with-zero kink at 0", self)
        if v > 0:
            return v, g
        return 0.0, 0.0 * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


@dataclass(frozen=True)
class Abs(Expr):
    """Absolute value; used only when assembling penalties, never in forms."""

    child: Expr
    tag: str = NONE

    def _val(self, p):
        return abs(self.child._val(p))

    def _val_batch(self, p):
        return np.abs(self.child._val_batch(p))

    def _vg(self, p):
        v, g = self.child._vg(p)
        if v == 0.0:
            raise NondifferentiableError("abs kink at 0", self)
        return abs(v), math.copysign(1.0, v) * g

    def children(self):
        return (self.child,)

    remap = _unary_remap
    subst = _unary_subst


# ---------------------------------------------------------------------------
# constructors with default curvature tags

def _derived_tag(node: Expr) -> str:
    """Structural tag where one is forced; NONE elsewhere."""
    if node.is_affine():
        return AFFINE
    if isinstance(node, (Square, Exp, Max0, Abs)) and node.child.is_affine():
        return CONVEX
    if isinstance(node, Log) and node.child.is_affine():
        return CONCAVE
    if isinstance(node, IntPow) and node.child.is_affine() and node.k % 2 == 0:
        return CONVEX
    if isinstance(node, RealPow) and node.child.is_affine() and node.a >= 1.0:
        return CONVEX
    if isinstance(node, Sum):
        tags = [c.tag for c in node.parts]
        if all(t in (CONVEX, AFFINE) for t in tags):
            return CONVEX
        if all(t in (CONCAVE, AFFINE) for t in tags):
            return CONCAVE
    if isinstance(node, Scale):
        if node.c >= 0:
            return node.child.tag
        flip = {CONVEX: CONCAVE, CONCAVE: CONVEX, AFFINE: AFFINE, NONE: NONE}
        return flip[node.child.tag]
    return NONE


def _finish(node: Expr, tag: str | None) -> Expr:
    return replace(node, tag=tag if tag is not None else _derived_tag(node))


def const(c: float) -> Expr:
    return Const(float(c))


def var(index: int) -> Expr:
    if index < 0:
        raise ValueError("variable index must be nonnegative")
    return Var(index)


def affine(terms, offset: float = 0.0) -> Expr:
    return Affine(tuple((int(i), float(c)) for i, c in terms), float(offset))


def add(*parts: Expr, tag: str | None = None) -> Expr:
    return _finish(Sum(tuple(parts)), tag)


def scale(child: Expr, c: float, tag: str | None = None) -> Expr:
    return _finish(Scale(child, float(c)), tag)


def neg(child: Expr, tag: str | None = None) -> Expr:
    return scale(child, -1.0, tag)


def square(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Square(child), tag)


def ipow(child: Expr, k: int, tag: str | None = None) -> Expr:
    return _finish(IntPow(child, int(k)), tag)


def rpow(child: Expr, a: float, tag: str | None = None) -> Expr:
    return _finish(RealPow(child, float(a)), tag)


def exp(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Exp(child), tag)


def log(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Log(child), tag)


def sin(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Sin(child), tag)


def max0(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Max0(child), tag)


def absolute(child: Expr, tag: str | None = None) -> Expr:
    return _finish(Abs(child), tag)


# ---------------------------------------------------------------------------
# module-level operations

def eval_expr(e: Expr, point) -> float:
    return e.value(np.asarray(point, dtype=float))


def gradient(e: Expr, point) -> np.ndarray:
    return e.value_grad(np.asarray(point, dtype=float))[1]


def fd_gradient(e: Expr, point, step: float = 1e-5) -> np.ndarray:
    """Central finite differences; the independent oracle for value_grad."""
    p = np.asarray(point, dtype=float)
    g = np.zeros(p.size)
    for i in range(p.size):
        hi = p.copy()
        lo = p.copy()
        hi[i] += step
        lo[i] -= step
        g[i] = (e.value(hi) - e.value(lo)) / (2.0 * step)
    return g


@dataclass(frozen=True)
class CurvatureReport:
    tag: str
    passed: bool
    pairs_checked: int
    counterexample: tuple[np.ndarray, np.ndarray, float] | None = None


def sample_window(lower, upper, clip: float = 10.0):
    """Bounded per-axis sampling ranges for a possibly unbounded box.

    Unbounded ends are clipped to +-``clip``.  A half-line lying entirely
    outside the default window keeps a band of width 2*clip anchored at its
    finite end.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    lo = np.where(np.isfinite(lower), lower, -clip)
    hi = np.where(np.isfinite(upper), upper, clip)
    fix_lo = (lo > hi) & np.isfinite(lower)
    hi = np.where(fix_lo, lo + 2 * clip, hi)
    fix_hi = (lo > hi) & np.isfinite(upper)
    lo = np.where(fix_hi, hi - 2 * clip, lo)
    return lo, hi


def curvature_audit(
    e: Expr,
    lower,
    upper,
    tag: str | None = None,
    samples: int = 100,
    seed: int = 0,
    axes=None,
    tol: float = 1e-9,
    clip: float = 10.0,
) -> CurvatureReport:
    """Empirical midpoint check of a declared curvature tag.

    Draws ``samples`` pairs (u, v) in the (clipped) box, varying only
    ``axes`` when given, and tests the blend inequality at t in
    {1/4, 1/2, 3/4}.  The first violated pair is returned as counterexample.
    """
    tag = e.tag if tag is None else tag
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if tag == NONE:
        return CurvatureReport(tag, True, 0)
    lo, hi = sample_window(lower, upper, clip)
    rng = np.random.default_rng(seed)
    dim = lo.size
    axes = list(range(dim)) if axes is None else list(axes)
    checked = 0
    attempts = 0
    while checked < samples and attempts < samples * 20:
        attempts += 1
        base = rng.uniform(lo, hi)
        u = base.copy()
        v = base.copy()
        u[axes] = rng.uniform(lo[axes], hi[axes])
        v[axes] = rng.uniform(lo[axes], hi[axes])
        try:
            fu = e.value(u)
            fv = e.value(v)
            for t in (0.25, 0.5, 0.75):
                mid = t * u + (1.0 - t) * v
                fm = e.value(mid)
                blend = t * fu + (1.0 - t) * fv
                if tag == CONVEX and fm > blend + tol:
                    return CurvatureReport(tag, False, checked, (u, v, t))
                if tag == CONCAVE and fm < blend - tol:
                    return CurvatureReport(tag, False, checked, (u, v, t))
                if tag == AFFINE and abs(fm - blend) > tol:
                    return CurvatureReport(tag, False, checked, (u, v, t))
        except DomainEvalError:
            continue
        checked += 1
    if checked == 0:
        raise DomainEvalError("no in-domain sample pairs found for audit", e)
    return CurvatureReport(tag, True, checked)


# ---------------------------------------------------------------------------
# text grammar:  (+ (sq (aff x0 1 0)) (neg z0))

def _tokenize(text: str):
    tokens = []
    line, col = 1, 0
    word = ""
    word_pos = (1, 0)
    for ch in text:
        col += 1
        if ch == "\n":
            line += 1
            col = 0
        if ch in "()" or ch.isspace():
            if word:
                tokens.append((word, word_pos))
                word = ""
            if ch in "()":
                tokens.append((ch, (line, col)))
        else:
            if not word:
                word_pos = (line, col)
            word += ch
    if word:
        tokens.append((word, word_pos))
    return tokens


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def parse_sexpr(text: str, resolve: Callable[[str], int]) -> Expr:
    """Parse the textual expression grammar.

    ``resolve`` maps a variable name (``x0``, ``y2``, ``z1``) to its global
    index in the flat variable vector.
    """
    tokens = _tokenize(text)
    pos = 0

    def fail(msg, at):
        raise ParseError(msg, at[0], at[1])

    def need(kind=None):
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of expression", 1, len(text))
        tok, at = tokens[pos]
        pos += 1
        if kind is not None and tok != kind:
            fail(f"expected {kind!r}, found {tok!r}", at)
        return tok, at

    def number():
        tok, at = need()
        if not _is_number(tok):
            fail(f"expected a number, found {tok!r}", at)
        return float(tok)

    def expr():
        nonlocal pos
        tok, at = need()
        if tok == ")":
            fail("unexpected ')'", at)
        if tok != "(":
            if _is_number(tok):
                return Const(float(tok))
            try:
                return Var(resolve(tok))
            except KeyError:
                fail(f"unknown variable {tok!r}", at)
        head, hat = need()
        if head == "const":
            node = Const(number())
        elif head == "aff":
            items = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                items.append(need())
            if len(items) % 2 != 1:
                fail("aff expects var/coeff pairs plus a trailing offset", hat)
            terms = []
            for vtok, ctok in zip(items[:-1:2], items[1::2]):
                name, nat = vtok
                if not _is_number(ctok[0]):
                    fail(f"expected coefficient, found {ctok[0]!r}", ctok[1])
                try:
                    terms.append((resolve(name), float(ctok[0])))
                except KeyError:
                    fail(f"unknown variable {name!r}", nat)
            if not _is_number(items[-1][0]):
                fail(f"expected offset, found {items[-1][0]!r}", items[-1][1])
            node = Affine(tuple(terms), float(items[-1][0]))
        elif head == "+":
            parts = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                parts.append(expr())
            node = _finish(Sum(tuple(parts)), None)
        elif head == "*":
            c = number()
            node = scale(expr(), c)
        elif head == "neg":
            node = neg(expr())
        elif head == "sq":
            node = square(expr())
        elif head == "pow":
            child = expr()
            node = ipow(child, int(number()))
        elif head == "rpow":
            child = expr()
            node = rpow(child, number())
        elif head == "exp":
            node = exp(expr())
        elif head == "log":
            node = log(expr())
        elif head == "sin":
            node = sin(expr())
        elif head == "max0":
            node = max0(expr())
        elif head == "abs":
            node = absolute(expr())
        elif head == "tag":
            tok, tat = need()
            if tok not in _TAGS:
                fail(f"unknown curvature tag {tok!r}", tat)
            node = expr().with_tag(tok)
        else:
            fail(f"unknown operator {head!r}", hat)
        need(")")
        return node

    node = expr()
    if pos != len(tokens):
        fail("trailing tokens after expression", tokens[pos][1])
    return node


def _num(v: float) -> str:
    return repr(float(v))


def to_sexpr(e: Expr, name_of: Callable[[int], str]) -> str:
    """Serialize to the text grammar; inverse of :func:`parse_sexpr`."""

    def basic(node: Expr) -> str:
        if isinstance(node, Const):
            return _num(node.c)
        if isinstance(node, Var):
            return name_of(node.index)
        if isinstance(node, Affine):
            bits = []
            for i, c in node.terms:
                bits.append(name_of(i))
                bits.append(_num(c))
            bits.append(_num(node.offset))
            return "(aff " + " ".join(bits) + ")"
        if isinstance(node, Sum):
            return "(+ " + " ".join(emit(c) for c in node.parts) + ")"
        if isinstance(node, Scale):
            if node.c == -1.0:
                return f"(neg {emit(node.child)})"
            return f"(* {_num(node.c)} {emit(node.child)})"
        if isinstance(node, Square):
            return f"(sq {emit(node.child)})"
        if isinstance(node, IntPow):
            return f"(pow {emit(node.child)} {node.k})"
        if isinstance(node, RealPow):
            return f"(rpow {emit(node.child)} {_num(node.a)})"
        if isinstance(node, Exp):
            return f"(exp {emit(node.child)})"
        if isinstance(node, Log):
            return f"(log {emit(node.child)})"
        if isinstance(node, Sin):
            return f"(sin {emit(node.child)})"
        if isinstance(node, Max0):
            return f"(max0 {emit(node.child)})"
        if isinstance(node, Abs):
            return f"(abs {emit(node.child)})"
        raise TypeError(f"unknown node {type(node).__name__}")

    def emit(node: Expr) -> str:
        body = basic(node)
        if node.tag != _derived_tag(node):
            return f"(tag {node.tag} {body})"
        return body

    return emit(e)
