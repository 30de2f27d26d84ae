"""Pure-Python execution of tape programs.

Mirrors the compiled kernel in `_tapeval.pyx` instruction for instruction.
Batch evaluation is numpy-vectorized over points; the single-point path uses
plain floats, which is faster for the small per-step calls made by the
geodesic integrator.
"""

from __future__ import annotations

import math

import numpy as np

_OP_LOADV, _OP_LOADC, _OP_NEG, _OP_EXP, _OP_LOG, _OP_SIN, _OP_COS, \
    _OP_SQRT, _OP_ADD, _OP_SUB, _OP_MUL, _OP_DIV, _OP_POWC = range(13)


def eval_batch(code, a, b, consts, nregs, X, out_regs, out):
    P = X.shape[0]
    regs = [None] * nregs
    with np.errstate(all="ignore"):
        for i in range(len(code)):
            op = code[i]
            if op == _OP_LOADV:
                regs[i] = X[:, a[i]]
            elif op == _OP_LOADC:
                regs[i] = np.full(P, consts[a[i]])
            elif op == _OP_NEG:
                regs[i] = -regs[a[i]]
            elif op == _OP_EXP:
                regs[i] = np.exp(regs[a[i]])
            elif op == _OP_LOG:
                regs[i] = np.log(regs[a[i]])
            elif op == _OP_SIN:
                regs[i] = np.sin(regs[a[i]])
            elif op == _OP_COS:
                regs[i] = np.cos(regs[a[i]])
            elif op == _OP_SQRT:
                regs[i] = np.sqrt(regs[a[i]])
            elif op == _OP_ADD:
                regs[i] = regs[a[i]] + regs[b[i]]
            elif op == _OP_SUB:
                regs[i] = regs[a[i]] - regs[b[i]]
            elif op == _OP_MUL:
                regs[i] = regs[a[i]] * regs[b[i]]
            elif op == _OP_DIV:
                regs[i] = regs[a[i]] / regs[b[i]]
            else:
                regs[i] = np.power(regs[a[i]], consts[b[i]])
        for j, r in enumerate(out_regs):
            out[:, j] = regs[r]
    return out


def eval_one(code, a, b, consts, nregs, x, out_regs, out):
    regs = [0.0] * nregs
    for i in range(len(code)):
        op = code[i]
        if op == _OP_LOADV:
            regs[i] = x[a[i]]
        elif op == _OP_LOADC:
            regs[i] = consts[a[i]]
        elif op == _OP_NEG:
            regs[i] = -regs[a[i]]
        elif op == _OP_EXP:
            regs[i] = math.exp(regs[a[i]])
        elif op == _OP_LOG:
            v = regs[a[i]]
            regs[i] = math.log(v) if v > 0.0 else math.nan
        elif op == _OP_SIN:
            regs[i] = math.sin(regs[a[i]])
        elif op == _OP_COS:
            regs[i] = math.cos(regs[a[i]])
        elif op == _OP_SQRT:
            v = regs[a[i]]
            regs[i] = math.sqrt(v) if v >= 0.0 else math.nan
        elif op == _OP_ADD:
            regs[i] = regs[a[i]] + regs[b[i]]
        elif op == _OP_SUB:
            regs[i] = regs[a[i]] - regs[b[i]]
        elif op == _OP_MUL:
            regs[i] = regs[a[i]] * regs[b[i]]
        elif op == _OP_DIV:
            d = regs[b[i]]
            regs[i] = regs[a[i]] / d if d != 0.0 else math.nan
        else:
            try:
                regs[i] = math.pow(regs[a[i]], consts[b[i]])
            except (ValueError, OverflowError):
                regs[i] = math.nan
    for j, r in enumerate(out_regs):
        out[j] = regs[r]
    return out
