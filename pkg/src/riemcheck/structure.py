"""Almost complex structures: Hermitian compatibility, the Kaehler
(parallelism) condition, anti-invariance of distributions, and the B/C and
P/Q splits of J-images.

A structure can be declared on the coordinate basis or on a named orthonormal
frame; both are converted once into a coordinate (1,1) tensor, so every check
below is a tensor contraction at sample points.
"""

from __future__ import annotations

import numpy as np

from .expr import Const, as_expr
from .geometry import (
    GeometryError,
    MetricField,
    TensorField,
    _add,
    _mul,
    covariant_derivative_tensor,
    sym_zeros,
)


class StructureError(GeometryError):
    pass


class AlmostComplexStructure:
    """J as a coordinate (1,1) tensor, J[i, j] = (J d_j)^i.

    `from_frame` builds the coordinate tensor from an action matrix on an
    orthonormal frame: action[b, a] is the coefficient of E_b in J E_a.  The
    dual coframe uses the metric, so a metric is required in frame mode.
    """

    def __init__(self, chart, mat, basis_mode="coords"):
        mat = np.asarray(mat, dtype=object)
        if mat.shape != (chart.dim, chart.dim):
            raise StructureError(f"J on {chart.name} must be {chart.dim}x{chart.dim}")
        self.chart = chart
        self.basis_mode = basis_mode
        self.mat = np.empty(mat.shape, dtype=object)
        for i, j in np.ndindex(mat.shape):
            self.mat[i, j] = as_expr(mat[i, j])
        self._tensor = TensorField(chart, (1, 1), self.mat)

    @classmethod
    def from_frame(cls, g: MetricField, frame_fields, action):
        """Build from J E_a = sum_b action[b, a] E_b over an orthonormal
        frame: J^i_j = sum_{a,b} action[b,a] E_b^i (g E_a)_j."""
        chart = g.chart
        n = chart.dim
        fields = list(frame_fields)
        if len(fields) != n:
            raise StructureError("frame mode needs a full frame")
        action = np.asarray(action, dtype=object)
        if action.shape != (n, n):
            raise StructureError("action matrix must be square over the frame")
        flats = []
        for f in fields:
            flat = []
            for j in range(n):
                acc = Const(0.0)
                for k in range(n):
                    acc = _add(acc, _mul(g.mat[j, k], f.comps[k]))
                flat.append(g._simp(acc))
            flats.append(flat)
        mat = sym_zeros((n, n))
        for a in range(n):
            for b in range(n):
                c = as_expr(action[b, a])
                for i in range(n):
                    for j in range(n):
                        mat[i, j] = _add(mat[i, j],
                                         _mul(c, _mul(fields[b].comps[i], flats[a][j])))
        for i, j in np.ndindex(n, n):
            mat[i, j] = g._simp(mat[i, j])
        return cls(chart, mat, basis_mode="frame")

    def tensor(self) -> TensorField:
        return self._tensor

    def values(self, points) -> np.ndarray:
        return self._tensor.values(points)

    def value_at(self, x) -> np.ndarray:
        return self._tensor.value_at(x)

    def apply(self, x, vec) -> np.ndarray:
        return self.value_at(x) @ np.asarray(vec, dtype=float)


# -- pointwise checks -----------------------------------------------------------

def square_residual(J: AlmostComplexStructure, points) -> float:
    """max |J^2 + I| over the sample points."""
    Jv = J.values(points)
    n = J.chart.dim
    return float(np.max(np.abs(np.einsum("pij,pjk->pik", Jv, Jv) + np.eye(n))))


def hermitian_residual(g: MetricField, J: AlmostComplexStructure, points) -> float:
    """max over points and orthonormal-frame pairs of |g(JX, JY) - g(X, Y)|.

    Implemented as the coordinate-tensor residual |J^T g J - g| measured in
    an orthonormal frame (i.e. scaled by g^{-1}), which bounds the frame-pair
    form of the statement.
    """
    pts = np.atleast_2d(points)
    Jv = J.values(pts)
    G = g.values(pts)
    JgJ = np.einsum("pia,pij,pjb->pab", Jv, G, Jv)
    worst = 0.0
    for p in range(len(pts)):
        # scale-free comparison: conjugate by the inverse Cholesky factor
        L = np.linalg.cholesky(G[p])
        Li = np.linalg.inv(L)
        diff = Li @ (JgJ[p] - G[p]) @ Li.T
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def kahler_residual(g: MetricField, J: AlmostComplexStructure, points):
    """max over points and orthonormal-frame pairs of |(nabla_X J) Y|_g; also
    returns the worst point index."""
    nj = nabla_J(g, J)
    pts = np.atleast_2d(points)
    NJ = nj.values(pts)  # (p, k, l, j):  (nabla_{d_l} J)^k_j
    G = g.values(pts)
    worst, wp = 0.0, 0
    for p in range(len(pts)):
        # rows of inv(cholesky(G)) form a g-orthonormal frame
        Li = np.linalg.inv(np.linalg.cholesky(G[p]))
        vecs = [Li[a, :] for a in range(Li.shape[0])]
        for X in vecs:
            M = np.einsum("klj,l->kj", NJ[p], X)
            for Y in vecs:
                W = M @ Y
                nrm = float(np.sqrt(abs(W @ G[p] @ W)))
                if nrm > worst:
                    worst, wp = nrm, p
    return worst, wp


def nabla_J(g: MetricField, J: AlmostComplexStructure) -> TensorField:
    """(nabla J)[k, l, j] = (nabla_{d_l} J)(d_j)^k."""
    return covariant_derivative_tensor(g, J.tensor())


def anti_invariant_residual_source(mg, J: AlmostComplexStructure, points):
    """max |g_M(J u_a, u_b)| over vertical pairs; 'degenerate' when the
    kernel is zero-dimensional."""
    pts = np.atleast_2d(points)
    worst, wp = 0.0, 0
    degenerate = True
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        if len(sp.vertical) == 0:
            continue
        degenerate = False
        G = mg.gM.value_at(x)
        Jv = J.value_at(x)
        JV = (Jv @ sp.vertical.T).T
        res = np.abs(np.einsum("ai,ij,bj->ab", JV, G, sp.vertical))
        m = float(np.max(res))
        if m > worst:
            worst, wp = m, idx
    return worst, wp, degenerate


def anti_invariant_residual_target(mg, Jp: AlmostComplexStructure, points):
    """max |g_N(J' F_*X_a, F_*X_b)| over range pairs; degenerate when the
    range is zero-dimensional."""
    pts = np.atleast_2d(points)
    worst, wp = 0.0, 0
    degenerate = True
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        if len(sp.range) == 0:
            continue
        degenerate = False
        G = mg.gN.value_at(sp.y)
        Jv = Jp.value_at(sp.y)
        JR = (Jv @ sp.range.T).T
        res = np.abs(np.einsum("ai,ij,bj->ab", JR, G, sp.range))
        m = float(np.max(res))
        if m > worst:
            worst, wp = m, idx
    return worst, wp, degenerate


# -- sub-split frames and decompositions -------------------------------------------

def mu_frame_at(mg, J: AlmostComplexStructure, x, tol=1e-9):
    """Orthonormal basis of mu = orthogonal complement of J(ker F_*) inside
    (ker F_*)^perp at x (declared mu frame is used verbatim when present)."""
    sp = mg.split_at(x)
    if mg.frames.mu is not None:
        return np.array([f.value_at(x) for f in mg.frames.mu])
    G = mg.gM.value_at(x)
    Jv = J.value_at(x)
    jker = (Jv @ sp.vertical.T).T if len(sp.vertical) else np.zeros((0, len(x)))
    out = []
    for h in sp.horizontal:
        w = h.copy()
        for u in jker:
            w = w - (u @ G @ w) / (u @ G @ u) * u
        for u in out:
            w = w - (u @ G @ w) * u
        n2 = float(w @ G @ w)
        if n2 > tol:
            out.append(w / np.sqrt(n2))
    return np.array(out) if out else np.zeros((0, len(x)))


def nu_frame_at(mg, Jp: AlmostComplexStructure, x, tol=1e-9):
    """Orthonormal basis of nu = complement of J'(range F_*) inside
    (range F_*)^perp at F(x)."""
    sp = mg.split_at(x)
    if mg.frames.nu is not None:
        return np.array([f.value_at(sp.y) for f in mg.frames.nu])
    G = mg.gN.value_at(sp.y)
    Jv = Jp.value_at(sp.y)
    jrange = (Jv @ sp.range.T).T if len(sp.range) else np.zeros((0, len(sp.y)))
    out = []
    for e in sp.normal:
        w = e.copy()
        for u in jrange:
            w = w - (u @ G @ w) / (u @ G @ u) * u
        for u in out:
            w = w - (u @ G @ w) * u
        n2 = float(w @ G @ w)
        if n2 > tol:
            out.append(w / np.sqrt(n2))
    return np.array(out) if out else np.zeros((0, len(sp.y)))


class BCDecomposition:
    def __init__(self, BX, CX, remainder):
        self.BX = BX
        self.CX = CX
        self.remainder = remainder


class PQDecomposition:
    def __init__(self, PD, QD, remainder):
        self.PD = PD
        self.QD = QD
        self.remainder = remainder


def decompose_BC(mg, J: AlmostComplexStructure, X, x, tol=1e-8) -> BCDecomposition:
    """JX = BX + CX with BX vertical and CX in mu, for horizontal X at x.
    Raises StructureError when JX leaves ker + mu beyond `tol` (anti-
    invariance violation)."""
    x = np.asarray(x, dtype=float)
    sp = mg.split_at(x)
    G = mg.gM.value_at(x)
    JX = J.value_at(x) @ np.asarray(X, dtype=float)
    BX = _project(JX, sp.vertical, G)
    mu = mu_frame_at(mg, J, x)
    CX = _project(JX, mu, G)
    rem = JX - BX - CX
    rnorm = float(np.sqrt(abs(rem @ G @ rem)))
    if rnorm > tol:
        raise StructureError(
            f"anti-invariance violation: J X leaves ker + mu (residual {rnorm:.3e})")
    return BCDecomposition(BX, CX, rem)


def decompose_PQ(mg, Jp: AlmostComplexStructure, D, x, tol=1e-8) -> PQDecomposition:
    """J'D = PD + QD with PD in range F_* and QD in nu, for normal D at F(x)."""
    x = np.asarray(x, dtype=float)
    sp = mg.split_at(x)
    G = mg.gN.value_at(sp.y)
    D = np.asarray(D, dtype=float)
    dres = D - _project(D, sp.normal, G)
    if float(np.sqrt(abs(dres @ G @ dres))) > tol:
        raise StructureError("decompose_PQ: D is not normal at this point")
    JD = Jp.value_at(sp.y) @ D
    PD = _project(JD, sp.range, G)
    nu = nu_frame_at(mg, Jp, x)
    QD = _project(JD, nu, G)
    rem = JD - PD - QD
    rnorm = float(np.sqrt(abs(rem @ G @ rem)))
    if rnorm > tol:
        raise StructureError(
            f"J'D leaves range + nu (residual {rnorm:.3e})")
    return PQDecomposition(PD, QD, rem)


def _project(v, frame_rows, G):
    if len(frame_rows) == 0:
        return np.zeros_like(v)
    coef = np.einsum("ai,ij,j->a", frame_rows, G, v)
    return coef @ frame_rows
