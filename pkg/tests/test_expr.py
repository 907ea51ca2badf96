"""Expression engine: evaluation, gradients vs finite differences, curvature
audits, and the text grammar."""

import math

import numpy as np
import pytest

from saddlelift import expr as ex


def test_square_at_3():
    e = ex.square(ex.var(0))
    assert e.value(np.array([3.0])) == 9.0


def test_affine_eval():
    e = ex.affine([(0, 2.0), (1, -1.0)], 1.0)
    assert e.value(np.array([1.0, 1.0])) == 2.0


def _g41():
    # y + y^4 - z + x^2 - z over (x, y, z)
    y, z = ex.var(1), ex.var(2)
    return y + ex.ipow(y, 4) - z + ex.square(ex.var(0)) - z


def test_g41_value():
    assert _g41().value(np.array([1.0, 1.0, 0.0])) == 3.0


def test_g41_gradient_at_origin():
    _, g = _g41().value_grad(np.zeros(3))
    np.testing.assert_allclose(g, [0.0, 1.0, -2.0])


def test_g1_gradient_at_origin():
    g1 = ex.ipow(ex.var(1), 4) - ex.var(2)
    _, g = g1.value_grad(np.zeros(3))
    np.testing.assert_allclose(g, [0.0, 0.0, -1.0])


def test_constant_gradient_is_zero():
    _, g = ex.const(7.0).value_grad(np.zeros(4))
    np.testing.assert_array_equal(g, np.zeros(4))


def test_dimension_mismatch():
    with pytest.raises(ex.DimensionError):
        ex.var(3).value(np.zeros(2))


def test_domain_errors():
    with pytest.raises(ex.DomainEvalError):
        ex.log(ex.var(0)).value(np.array([-1.0]))
    with pytest.raises(ex.DomainEvalError):
        ex.rpow(ex.var(0), 0.5).value(np.array([-1.0]))


def test_kink_gradients_raise():
    with pytest.raises(ex.NondifferentiableError):
        ex.absolute(ex.var(0)).value_grad(np.array([0.0]))
    with pytest.raises(ex.NondifferentiableError):
        ex.max0(ex.var(0)).value_grad(np.array([0.0]))
    with pytest.raises(ex.NondifferentiableError):
        ex.rpow(ex.var(0), 0.5).value_grad(np.array([0.0]))


def test_real_pow_gradient_at_zero_for_a_above_one():
    v, g = ex.rpow(ex.var(0), 2.5).value_grad(np.array([0.0]))
    assert v == 0.0 and g[0] == 0.0


def _node_zoo():
    x0, x1 = ex.var(0), ex.var(1)
    aff = ex.affine([(0, 0.7), (1, -0.3)], 0.2)
    return [
        ex.const(2.5),
        aff,
        ex.add(ex.square(x0), x1),
        ex.scale(ex.square(aff), -1.5),
        ex.ipow(aff, 3),
        ex.rpow(ex.square(x0) + 0.5, 1.7),
        ex.exp(ex.scale(x1, 0.4)),
        ex.log(ex.square(x0) + 1.2),
        ex.sin(aff),
        ex.max0(aff),
        ex.absolute(aff),
    ]


def test_gradient_matches_central_differences():
    # every node type, 100 random interior points, relative tolerance 1e-6
    rng = np.random.default_rng(0)
    for e in _node_zoo():
        for _ in range(100):
            p = rng.uniform(-3.0, 3.0, size=2)
            try:
                _, g = e.value_grad(p)
            except ex.NondifferentiableError:
                continue
            fd = ex.fd_gradient(e, p, step=1e-5)
            np.testing.assert_allclose(g, fd, rtol=1e-6, atol=1e-6)


def test_eval_is_deterministic():
    e = ex.add(*_node_zoo()[:5])
    p = np.array([0.37, -1.22])
    vals = {e.value(p) for _ in range(10)}
    assert len(vals) == 1


def test_curvature_audit_square_convex():
    rep = ex.curvature_audit(
        ex.square(ex.var(0)), [-10.0], [10.0], tag=ex.CONVEX, samples=100
    )
    assert rep.passed


def test_curvature_audit_sin_half_concave_on_0_2pi():
    e = ex.sin(ex.affine([(0, 0.5)]))
    rep = ex.curvature_audit(e, [0.0], [2 * math.pi], tag=ex.CONCAVE, samples=100)
    assert rep.passed


def test_curvature_audit_square_tagged_concave_fails():
    rep = ex.curvature_audit(
        ex.square(ex.var(0)), [-10.0], [10.0], tag=ex.CONCAVE, samples=100
    )
    assert not rep.passed
    assert rep.counterexample is not None
    u, v, t = rep.counterexample
    e = ex.square(ex.var(0))
    mid = t * u + (1 - t) * v
    assert e.value(mid) < t * e.value(u) + (1 - t) * e.value(v)


def test_curvature_audit_affine_band():
    rep = ex.curvature_audit(
        ex.affine([(0, 2.0)], -1.0), [-5.0], [5.0], tag=ex.AFFINE, samples=50
    )
    assert rep.passed


def test_default_tags():
    aff = ex.affine([(0, 1.0)], 0.0)
    assert aff.tag == ex.AFFINE
    assert ex.square(aff).tag == ex.CONVEX
    assert ex.exp(aff).tag == ex.CONVEX
    assert ex.log(aff).tag == ex.CONCAVE
    assert ex.neg(ex.log(aff)).tag == ex.CONVEX
    assert ex.add(ex.square(aff), aff).tag == ex.CONVEX


def test_remap_and_subst():
    e = ex.square(ex.var(0)) + ex.var(2)
    r = e.remap({0: 1, 2: 4})
    assert r.value(np.array([0.0, 3.0, 0.0, 0.0, 5.0])) == 14.0
    phi = ex.exp(ex.var(0))
    comp = phi.subst(0, ex.square(ex.var(1)))
    assert comp.value(np.array([0.0, 2.0])) == pytest.approx(math.exp(4.0))


def _names(i):
    return ["x0", "x1", "y0", "z0"][i]


def _resolve(name):
    return {"x0": 0, "x1": 1, "y0": 2, "z0": 3}[name]


def test_grammar_round_trip():
    exprs = [
        ex.add(ex.square(ex.affine([(0, 1.0)], 0.0)), ex.neg(ex.var(3))),
        ex.rpow(ex.var(2), 4.0) - ex.var(3),
        (ex.neg(ex.sin(ex.affine([(0, 0.5)]))) + ex.var(3)).with_tag(ex.CONVEX),
        ex.scale(ex.log(ex.affine([(1, 1.0)], 2.0)), -3.0),
        ex.ipow(ex.var(2), 4),
    ]
    for e in exprs:
        text = ex.to_sexpr(e, _names)
        back = ex.parse_sexpr(text, _resolve)
        assert back == e, text


def test_grammar_example():
    e = ex.parse_sexpr("(+ (sq (aff x0 1 0)) (neg z0))", _resolve)
    assert e.value(np.array([3.0, 0.0, 0.0, 2.0])) == 7.0


def test_parse_errors_carry_position():
    with pytest.raises(ex.ParseError):
        ex.parse_sexpr("(sq", _resolve)
    with pytest.raises(ex.ParseError) as err:
        ex.parse_sexpr("(sq w9)", _resolve)
    assert "w9" in str(err.value)
