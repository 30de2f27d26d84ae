"""Flat register programs for fast pointwise evaluation of expression sets.

A `Tape` compiles a list of expression trees over a fixed variable ordering
into a linear instruction stream with common subexpressions shared.  The
instruction stream is executed either by the compiled Cython kernel
(`riemcheck._tapeval`) or by the pure backend in `riemcheck._pytape`; the
backend is chosen once at import time (set RIEMCHECK_PURE=1 to force the
pure one).

Batch evaluation takes an (npoints, nvars) array and returns (npoints, nexprs).
Out-of-domain inputs produce non-finite outputs instead of exceptions; the
tree evaluator in `nodes.evaluate` is the path that reports the offending
subtree.
"""

from __future__ import annotations

import os

import numpy as np

from . import nodes
from .nodes import Binary, Const, Expr, Pow, Unary, Var

OP_LOADV = 0
OP_LOADC = 1
OP_NEG = 2
OP_EXP = 3
OP_LOG = 4
OP_SIN = 5
OP_COS = 6
OP_SQRT = 7
OP_ADD = 8
OP_SUB = 9
OP_MUL = 10
OP_DIV = 11
OP_POWC = 12

_UNARY_OPS = {"neg": OP_NEG, "exp": OP_EXP, "log": OP_LOG,
              "sin": OP_SIN, "cos": OP_COS, "sqrt": OP_SQRT}
_BINARY_OPS = {"add": OP_ADD, "sub": OP_SUB, "mul": OP_MUL, "div": OP_DIV}

_compiled = None
if os.environ.get("RIEMCHECK_PURE", "") not in ("1", "true", "yes"):
    try:
        from riemcheck import _tapeval as _compiled
    except ImportError:
        _compiled = None

from riemcheck import _pytape as _pure

BACKEND = "compiled" if _compiled is not None else "pure"


def backend_name() -> str:
    return BACKEND


def have_compiled_kernel() -> bool:
    try:
        from riemcheck import _tapeval  # noqa: F401
        return True
    except ImportError:
        return False


class Tape:
    """Compiled evaluation program for `exprs` over the ordered `var_names`."""

    def __init__(self, exprs, var_names):
        self.var_names = tuple(var_names)
        self.nvars = len(self.var_names)
        var_index = {name: i for i, name in enumerate(self.var_names)}
        if len(var_index) != self.nvars:
            raise nodes.ExprError("duplicate variable names in tape ordering")

        ops, dst, a, b = [], [], [], []
        consts = []
        const_ix = {}
        reg_of = {}

        def cix(v):
            i = const_ix.get(v)
            if i is None:
                i = len(consts)
                consts.append(v)
                const_ix[v] = i
            return i

        def emit(e: Expr) -> int:
            k = e.key()
            r = reg_of.get(k)
            if r is not None:
                return r
            if isinstance(e, Const):
                ops.append(OP_LOADC); a.append(cix(e.value)); b.append(0)
            elif isinstance(e, Var):
                try:
                    vi = var_index[e.name]
                except KeyError:
                    raise nodes.ExprError(
                        f"expression uses variable '{e.name}' not in tape ordering"
                    ) from None
                ops.append(OP_LOADV); a.append(vi); b.append(0)
            elif isinstance(e, Unary):
                ra = emit(e.arg)
                ops.append(_UNARY_OPS[e.op]); a.append(ra); b.append(0)
            elif isinstance(e, Binary):
                ra, rb = emit(e.a), emit(e.b)
                ops.append(_BINARY_OPS[e.op]); a.append(ra); b.append(rb)
            elif isinstance(e, Pow):
                ra = emit(e.base)
                ops.append(OP_POWC); a.append(ra); b.append(cix(e.exponent))
            else:
                raise nodes.ExprError(f"unknown node {e!r}")
            r = len(ops) - 1
            dst.append(r)
            reg_of[k] = r
            return r

        self.out_regs = np.asarray([emit(nodes.as_expr(e)) for e in exprs],
                                   dtype=np.intc)
        self.nout = len(self.out_regs)
        self.code = np.asarray(ops, dtype=np.intc)
        self.dst = np.asarray(dst, dtype=np.intc)
        self.a = np.asarray(a, dtype=np.intc)
        self.b = np.asarray(b, dtype=np.intc)
        self.consts = np.asarray(consts, dtype=np.float64)
        self.nregs = len(ops)

    def __len__(self):
        return self.nout

    def evaluate(self, points) -> np.ndarray:
        """points: (npoints, nvars) -> values (npoints, nout)."""
        X = np.ascontiguousarray(points, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.nvars:
            raise ValueError(f"expected points of shape (P, {self.nvars})")
        out = np.empty((X.shape[0], self.nout), dtype=np.float64)
        if _compiled is not None:
            _compiled.eval_batch(self.code, self.a, self.b, self.consts,
                                 self.nregs, X, self.out_regs, out)
        else:
            _pure.eval_batch(self.code, self.a, self.b, self.consts,
                             self.nregs, X, self.out_regs, out)
        return out

    def evaluate_at(self, x) -> np.ndarray:
        """Single point (nvars,) -> (nout,); avoids batch overhead in loops."""
        x = np.ascontiguousarray(x, dtype=np.float64)
        out = np.empty(self.nout, dtype=np.float64)
        if _compiled is not None:
            _compiled.eval_one(self.code, self.a, self.b, self.consts,
                               self.nregs, x, self.out_regs, out)
        else:
            _pure.eval_one(self.code, self.a, self.b, self.consts,
                           self.nregs, x, self.out_regs, out)
        return out
