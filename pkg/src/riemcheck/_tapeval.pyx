# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled tape-evaluation kernel.

Executes the register programs produced by `riemcheck.expr.tape.Tape`.
Domain faults (log of non-positive, 0/0, ...) follow C99 semantics and
surface as NaN/inf in the output; callers treat non-finite residuals as
failures.
"""

from libc.math cimport exp, log, sin, cos, sqrt, pow, NAN

import numpy as np

DEF LOADV = 0
DEF LOADC = 1
DEF NEG = 2
DEF EXPOP = 3
DEF LOGOP = 4
DEF SINOP = 5
DEF COSOP = 6
DEF SQRTOP = 7
DEF ADD = 8
DEF SUB = 9
DEF MUL = 10
DEF DIV = 11
DEF POWC = 12


cdef inline void _run(const int[::1] code, const int[::1] a, const int[::1] b,
                      const double[::1] consts, const double* x,
                      double* regs) nogil:
    cdef Py_ssize_t i, k = code.shape[0]
    cdef int op
    for i in range(k):
        op = code[i]
        if op == LOADV:
            regs[i] = x[a[i]]
        elif op == LOADC:
            regs[i] = consts[a[i]]
        elif op == NEG:
            regs[i] = -regs[a[i]]
        elif op == EXPOP:
            regs[i] = exp(regs[a[i]])
        elif op == LOGOP:
            regs[i] = log(regs[a[i]])
        elif op == SINOP:
            regs[i] = sin(regs[a[i]])
        elif op == COSOP:
            regs[i] = cos(regs[a[i]])
        elif op == SQRTOP:
            regs[i] = sqrt(regs[a[i]])
        elif op == ADD:
            regs[i] = regs[a[i]] + regs[b[i]]
        elif op == SUB:
            regs[i] = regs[a[i]] - regs[b[i]]
        elif op == MUL:
            regs[i] = regs[a[i]] * regs[b[i]]
        elif op == DIV:
            regs[i] = regs[a[i]] / regs[b[i]]
        elif op == POWC:
            regs[i] = pow(regs[a[i]], consts[b[i]])
        else:
            regs[i] = NAN


def eval_batch(const int[::1] code, const int[::1] a, const int[::1] b,
               const double[::1] consts, int nregs,
               const double[:, ::1] X, const int[::1] out_regs,
               double[:, ::1] out):
    cdef Py_ssize_t P = X.shape[0]
    cdef Py_ssize_t m = out_regs.shape[0]
    cdef Py_ssize_t p, j
    regs_arr = np.empty(nregs, dtype=np.float64)
    cdef double[::1] regs = regs_arr
    with nogil:
        for p in range(P):
            _run(code, a, b, consts, &X[p, 0], &regs[0])
            for j in range(m):
                out[p, j] = regs[out_regs[j]]
    return None


def eval_one(const int[::1] code, const int[::1] a, const int[::1] b,
             const double[::1] consts, int nregs,
             const double[::1] x, const int[::1] out_regs,
             double[::1] out):
    cdef Py_ssize_t m = out_regs.shape[0]
    cdef Py_ssize_t j
    regs_arr = np.empty(nregs, dtype=np.float64)
    cdef double[::1] regs = regs_arr
    with nogil:
        _run(code, a, b, consts, &x[0], &regs[0])
        for j in range(m):
            out[j] = regs[out_regs[j]]
    return None
