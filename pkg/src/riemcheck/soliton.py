"""Ricci-soliton residuals, coefficient fitting, Einstein and conformal
checks, and the two Clairaut conditions.

Every check returns plain data (residuals, fitted coefficients, per-sample
values, worst-point provenance); verdict assembly against tolerances happens
in the suite layer.
"""

from __future__ import annotations

import numpy as np

from .expr import Expr, as_expr, differentiate
from .geometry import (
    GeometryError,
    MetricField,
    VectorField,
    gradient,
    hessian,
    lie_derivative_metric,
)
from .rmap import MapGeometry, MapError


class SolitonError(GeometryError):
    pass


class SolitonConfig:
    """alpha-Ricci-soliton data: exactly one of a potential vector field xi
    or a potential function f (gradient case); alpha must be nonzero; lam may
    be the string "solve"."""

    def __init__(self, g: MetricField, xi: VectorField | None = None,
                 f: Expr | None = None, alpha: float = 1.0, lam="solve"):
        if (xi is None) == (f is None):
            raise SolitonError("exactly one of xi / f must be given")
        if alpha == 0.0:
            raise SolitonError("alpha must be nonzero")
        self.g = g
        self.xi = xi
        self.f = as_expr(f) if f is not None else None
        self.alpha = float(alpha)
        self.lam = lam if lam == "solve" else float(lam)
        # symmetric (0,2) parts: L-term is Hess f in the gradient case,
        # otherwise (1/2) L_xi g
        if self.f is not None:
            self._half_lie = hessian(g, self.f)
            self._half_lie_scale = 1.0
        else:
            self._half_lie = lie_derivative_metric(g, xi)
            self._half_lie_scale = 0.5
        self._ric = g.ricci()

    def term_values(self, points):
        """(half_lie, alpha*ric, g) values at points, each (P, n, n)."""
        pts = np.atleast_2d(points)
        L = self._half_lie.values(pts) * self._half_lie_scale
        R = self._ric.values(pts) * self.alpha
        G = self.g.values(pts)
        return L, R, G


def _pair_frames(g: MetricField, points, restriction):
    """Orthonormal frame rows per point: the restriction frame evaluated, or
    a Cholesky frame of the full tangent space."""
    pts = np.atleast_2d(points)
    out = []
    if restriction:
        for x in pts:
            out.append(np.array([f.value_at(x) for f in restriction]))
    else:
        for x in pts:
            Li = np.linalg.inv(np.linalg.cholesky(g.value_at(x)))
            out.append(Li)
    return pts, out


def soliton_residual(cfg: SolitonConfig, restriction=None, points=None, lam=None):
    """Max |1/2 (L_xi g)(X,Y) + alpha Ric(X,Y) + lam g(X,Y)| over points and
    frame pairs.  Returns (residual, worst_point_index, per-point max)."""
    lam = cfg.lam if lam is None else lam
    if lam == "solve":
        raise SolitonError("soliton_residual needs a concrete lambda (use solve_lambda)")
    pts, frames = _pair_frames(cfg.g, points, restriction)
    L, R, G = cfg.term_values(pts)
    E = L + R + float(lam) * G
    worst, wp = -1.0, 0
    permax = []
    for p, fr in enumerate(frames):
        vals = np.abs(np.einsum("ai,ij,bj->ab", fr, E[p], fr))
        m = float(np.max(vals)) if vals.size else 0.0
        permax.append(m)
        if m > worst:
            worst, wp = m, p
    return worst, wp, np.array(permax)


def solve_lambda(cfg: SolitonConfig, restriction=None, points=None):
    """Least-squares lambda over all point/pair samples plus the spread of
    per-sample lambdas (samples with |g(X,Y)| below 1e-8 are excluded from
    the spread; an all-degenerate sample set is an error)."""
    pts, frames = _pair_frames(cfg.g, points, restriction)
    L, R, G = cfg.term_values(pts)
    nums, dens = [], []
    for p, fr in enumerate(frames):
        num = np.einsum("ai,ij,bj->ab", fr, L[p] + R[p], fr).ravel()
        den = np.einsum("ai,ij,bj->ab", fr, G[p], fr).ravel()
        nums.append(num)
        dens.append(den)
    num = np.concatenate(nums)
    den = np.concatenate(dens)
    mask = np.abs(den) > 1e-8
    if not np.any(mask):
        raise SolitonError("solve_lambda: all sampled g(X,Y) vanish (underdetermined)")
    lam = -float(num[mask] @ den[mask]) / float(den[mask] @ den[mask])
    per_sample = -num[mask] / den[mask]
    spread = float(np.max(np.abs(per_sample - lam)))
    return lam, spread, per_sample


def fit_einstein(ric_vals, g_vals, frame_rows):
    """Fit lambda minimizing |Ric + lam g| on the span of `frame_rows` per
    point; returns (lam, residual).  ric_vals/g_vals: (P,k,k) already
    restricted to the frame, or (P,n,n) with frame contraction applied here."""
    rs, gs = [], []
    for p in range(len(ric_vals)):
        fr = frame_rows[p]
        rs.append(np.einsum("ai,ij,bj->ab", fr, ric_vals[p], fr).ravel())
        gs.append(np.einsum("ai,ij,bj->ab", fr, g_vals[p], fr).ravel())
    r = np.concatenate(rs)
    g = np.concatenate(gs)
    denom = float(g @ g)
    if denom < 1e-20:
        raise SolitonError("fit_einstein: degenerate restriction")
    lam = -float(r @ g) / denom
    residual = float(np.max(np.abs(r + lam * g)))
    return lam, residual


def check_conformal(g: MetricField, X: VectorField, restriction=None, points=None,
                    mu_prime=None):
    """Fit a pointwise conformal factor phi(p) minimizing |(L_X g) - phi g|
    on the restricted span.  Returns (phi samples, residual, mu_residual)
    where mu_residual is |1/2 L_X g + mu' g| when mu_prime is given."""
    LX = lie_derivative_metric(g, X)
    pts, frames = _pair_frames(g, points, restriction)
    Lv = LX.values(pts)
    Gv = g.values(pts)
    phis = []
    residual = 0.0
    mu_residual = 0.0
    for p, fr in enumerate(frames):
        lv = np.einsum("ai,ij,bj->ab", fr, Lv[p], fr)
        gv = np.einsum("ai,ij,bj->ab", fr, Gv[p], fr)
        denom = float(np.sum(gv * gv))
        phi = float(np.sum(lv * gv)) / denom if denom > 1e-20 else 0.0
        phis.append(phi)
        residual = max(residual, float(np.max(np.abs(lv - phi * gv))))
        if mu_prime is not None:
            mu_residual = max(mu_residual,
                              float(np.max(np.abs(0.5 * lv + mu_prime * gv))))
    return np.array(phis), residual, mu_residual


class ClairautConfig:
    """Dilation data for a Clairaut check: side 'source' carries f on M
    (r~ = e^f), side 'target' carries g on N (s~ = e^g)."""

    def __init__(self, mg: MapGeometry, side: str, dilation: Expr):
        if side not in ("source", "target"):
            raise SolitonError("side must be 'source' or 'target'")
        self.mg = mg
        self.side = side
        self.dilation = as_expr(dilation)


def check_clairaut_source(cc: ClairautConfig, points):
    """Residual of T(U, V) + g_M(U, V) grad f over vertical frame pairs, plus
    a separate fiber-umbilicity residual (fit of T(U,V) = g(U,V) H)."""
    if cc.side != "source":
        raise SolitonError("check_clairaut_source needs a source-side config")
    mg = cc.mg
    gradf = gradient(mg.gM, cc.dilation)
    T = mg.oneill_T()
    pts = np.atleast_2d(points)
    worst, wp = -1.0, 0
    umb_worst = 0.0
    saw_kernel = False
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        V = sp.vertical
        if len(V) == 0:
            continue
        saw_kernel = True
        GM = mg.gM.value_at(x)
        Tv = np.einsum("kij,ai,bj->abk", T.value_at(x), V, V)
        gv = np.einsum("ai,ij,bj->ab", V, GM, V)
        gf = gradf.value_at(x)
        diff = Tv + gv[:, :, None] * gf[None, None, :]
        norms = np.sqrt(np.abs(np.einsum("abk,kl,abl->ab", diff, GM, diff)))
        m = float(np.max(norms))
        if m > worst:
            worst, wp = m, idx
        # umbilicity: H = trace(T)/r0, residual of T - g H
        H = np.einsum("abk,ab->k", Tv, np.eye(len(V))) / len(V)
        udiff = Tv - gv[:, :, None] * H[None, None, :]
        unorm = np.sqrt(np.abs(np.einsum("abk,kl,abl->ab", udiff, GM, udiff)))
        umb_worst = max(umb_worst, float(np.max(unorm)))
    if not saw_kernel:
        raise MapError("check_clairaut_source: empty kernel at all sample points")
    return worst, wp, umb_worst


def check_clairaut_target(cc: ClairautConfig, points):
    """Residuals of  S_D F_*X + D(g) F_*X  over normal-frame D and range
    F_*X, and of  (nabla F_*)(X, Y) - g_M(X, Y) (-grad^N g)  over horizontal
    pairs.  Returns (shape_residual, umbilical_residual, worst_index)."""
    if cc.side != "target":
        raise SolitonError("check_clairaut_target needs a target-side config")
    mg = cc.mg
    gfun = cc.dilation
    gN = mg.gN
    gradg = gradient(gN, gfun)
    dg = [differentiate(gfun, c) for c in gN.chart.coords]
    shapes = mg.shape_tensors()
    SFF = mg.second_fundamental_form()
    pts = np.atleast_2d(points)
    if not mg.frames.normal:
        raise MapError("check_clairaut_target: trivial (empty) normal bundle")
    from .expr.tape import Tape
    dg_tape = Tape(dg, gN.chart.allvars)
    worst, wp = -1.0, 0
    umb_worst = 0.0
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        GN = gN.value_at(sp.y)
        dgv = dg_tape.evaluate_at(sp.y)
        m = 0.0
        for k, (Sk, _) in enumerate(shapes):
            D = mg.frames.normal[k].value_at(sp.y)
            Dg = float(D @ dgv)  # D(g): directional derivative
            Skv = Sk.value_at(sp.y)
            for V in sp.range:
                w = Skv @ V + Dg * V
                m = max(m, float(np.sqrt(abs(w @ GN @ w))))
        if m > worst:
            worst, wp = m, idx
        # umbilical side: (nabla F_*)(X,Y) = -g_M(X,Y) grad g
        H = sp.horizontal
        if len(H):
            GM = mg.gM.value_at(x)
            Sv = SFF.value_at(x)
            vals = np.einsum("aij,ki,lj->kla", Sv, H, H)
            gm = np.einsum("ki,ij,lj->kl", H, GM, H)
            target = -gradg.value_at(sp.y)
            diff = vals - gm[:, :, None] * target[None, None, :]
            norms = np.sqrt(np.abs(np.einsum("kla,ab,klb->kl", diff, GN, diff)))
            umb_worst = max(umb_worst, float(np.max(norms)))
    return worst, umb_worst, wp


SCALAR_RELATIONS = {
    # id: (lhs description, rhs as a function of the inputs dict)
    "range_soliton": ("s^(range F_*)", lambda v: -v["lam"] * v["r0"]),
    "ker_einstein": ("s^(ker F_*)", lambda v: -v["r0"] * v["lam"]),
    "rangeperp_einstein": ("s^((range F_*)^perp)", lambda v: -(v["Dg"] + v["lam"]) * v["n1"]),
    "range_lagrangian": ("s^(range F_*)", lambda v: -(v["m"] - v["r0"]) * v["lam"]),
}


def scalar_relation(which: str, s_value: float, inputs: dict):
    """|LHS - RHS| with both sides; `inputs` supplies lam, r0 (dim ker),
    n1 (dim normal), m (dim source), Dg (D(g)) as the relation needs."""
    if which not in SCALAR_RELATIONS:
        raise SolitonError(f"unknown scalar relation {which!r}")
    _, rhs_fn = SCALAR_RELATIONS[which]
    rhs = float(rhs_fn(inputs))
    return s_value, rhs, abs(s_value - rhs)
