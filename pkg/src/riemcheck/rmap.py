"""Smooth maps between charts and the Riemannian-map apparatus.

Everything pointwise (pushforward, splittings, isometry residuals, the
second fundamental form, shape operators, the O'Neill tensors T and A and
their covariant derivatives) is built once as expression-valued *coordinate*
tensors and then contracted numerically with frame vectors at sample points;
all of these objects are tensorial in each slot, so coordinate components
determine them completely.

Declared expression-valued adapted frames enable the derivative-level
operations (nabla T, nabla A, trace terms); with per-point numeric frames
only, those operations raise FramesRequired.
"""

from __future__ import annotations

import math

import numpy as np

from .expr import Const, as_expr, differentiate, simplify, substitute
from .expr.nodes import is_const
from .expr.tape import Tape
from .geometry import (
    Chart,
    Frame,
    GeometryError,
    MetricField,
    TensorField,
    VectorField,
    _add,
    _mul,
    _sub,
    covariant_derivative,
    covariant_derivative_tensor,
    orthonormalize,
    sym_zeros,
)


class MapError(GeometryError):
    pass


class FramesRequired(MapError):
    """Raised by operations that need smooth (expression-valued) frames when
    only per-point numeric frames are available."""


class SmoothMap:
    """Component expressions over the source chart, one per target coordinate.

    `section`, when given, is a right inverse N -> M (source-coordinate
    expressions over target coordinates); it is what lets basic fields be
    pushed forward as honest fields on the target.
    """

    def __init__(self, source: Chart, target: Chart, comps, name=None, section=None):
        comps = tuple(as_expr(c) for c in comps)
        if len(comps) != target.dim:
            raise MapError(f"map needs {target.dim} component expressions")
        self.source = source
        self.target = target
        self.comps = comps
        self.name = name or "F"
        self.section = tuple(as_expr(s) for s in section) if section is not None else None
        if self.section is not None and len(self.section) != source.dim:
            raise MapError("section needs one expression per source coordinate")
        jac = np.empty((target.dim, source.dim), dtype=object)
        for a in range(target.dim):
            for i in range(source.dim):
                jac[a, i] = differentiate(comps[a], source.coords[i])
        self.jacobian = jac
        self._tape = None
        self._jtape = None

    def tape(self):
        if self._tape is None:
            self._tape = Tape(self.comps, self.source.coords)
        return self._tape

    def jac_tape(self):
        if self._jtape is None:
            self._jtape = Tape(list(self.jacobian.flat), self.source.coords)
        return self._jtape

    def value_at(self, x) -> np.ndarray:
        return self.tape().evaluate_at(np.asarray(x, dtype=float))

    def values(self, points) -> np.ndarray:
        return self.tape().evaluate(np.atleast_2d(points))

    def jac_at(self, x) -> np.ndarray:
        return self.jac_tape().evaluate_at(np.asarray(x, dtype=float)).reshape(
            self.target.dim, self.source.dim)

    def jac_values(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        return self.jac_tape().evaluate(pts).reshape(
            len(pts), self.target.dim, self.source.dim)

    def pull_expr(self, e):
        """Compose a target-coordinate expression with the map."""
        mapping = dict(zip(self.target.coords, self.comps))
        return simplify(substitute(as_expr(e), mapping))

    def push_expr(self, e):
        """Compose a source-coordinate expression with the section."""
        if self.section is None:
            raise MapError(f"map {self.name} has no declared section")
        mapping = dict(zip(self.source.coords, self.section))
        return simplify(substitute(as_expr(e), mapping))

    def rank_at(self, x, tol=1e-9) -> int:
        sv = np.linalg.svd(self.jac_at(x), compute_uv=False)
        return int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 1.0)))


def pushforward(F: SmoothMap, X, p) -> np.ndarray:
    """(F_* X)^a = (dF^a/dx^i) X^i at the point p."""
    x = F.source.point_to_array(p) if isinstance(p, dict) else np.asarray(p, float)
    Xv = X.value_at(x) if isinstance(X, VectorField) else np.asarray(X, dtype=float)
    return F.jac_at(x) @ Xv


def pushforward_along(F: SmoothMap, Y: VectorField) -> "VectorFieldAlongMap":
    """F_* Y as a section along the map: target components over source
    coordinates."""
    comps = []
    for a in range(F.target.dim):
        acc = Const(0.0)
        for i in range(F.source.dim):
            acc = _add(acc, _mul(F.jacobian[a, i], Y.comps[i]))
        comps.append(simplify(acc))
    return VectorFieldAlongMap(F, comps)


def pushforward_field(F: SmoothMap, X: VectorField, validate_points=None,
                      tol=1e-9) -> VectorField:
    """Push a basic field through the map using the declared section, giving
    an honest vector field on the target chart.  When `validate_points`
    (source points) is given, basic-ness is checked by comparing the pushed
    field at F(p) against the pointwise pushforward."""
    along = pushforward_along(F, X)
    pushed = VectorField(F.target, [F.push_expr(c) for c in along.comps])
    if validate_points is not None:
        pts = np.atleast_2d(validate_points)
        direct = along.values(pts)
        through = pushed.values(F.values(pts))
        gap = float(np.max(np.abs(direct - through))) if len(pts) else 0.0
        if gap > tol * max(1.0, float(np.max(np.abs(direct)))):
            raise MapError(
                f"field {X.name or ''} is not basic: pushforward varies along "
                f"fibers (gap {gap:.3e})")
    return pushed


class TensorAlongMap:
    """Expression array of arbitrary shape over the source chart coordinates
    (used for target-valued tensors like the second fundamental form)."""

    def __init__(self, F: SmoothMap, comps):
        self.map = F
        self.comps = np.asarray(comps, dtype=object)
        self._tape = None

    def tape(self):
        if self._tape is None:
            self._tape = Tape(list(self.comps.flat), self.map.source.coords)
        return self._tape

    def values(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        return self.tape().evaluate(pts).reshape((len(pts),) + self.comps.shape)

    def value_at(self, x) -> np.ndarray:
        return self.tape().evaluate_at(np.asarray(x, dtype=float)).reshape(self.comps.shape)


class VectorFieldAlongMap:
    """Target-coordinate components given as expressions over the source."""

    def __init__(self, F: SmoothMap, comps):
        comps = tuple(as_expr(c) for c in comps)
        if len(comps) != F.target.dim:
            raise MapError("vector along map needs one component per target coordinate")
        self.map = F
        self.comps = comps
        self._tape = None

    def tape(self):
        if self._tape is None:
            self._tape = Tape(self.comps, self.map.source.coords)
        return self._tape

    def values(self, points) -> np.ndarray:
        return self.tape().evaluate(np.atleast_2d(points))

    def value_at(self, x) -> np.ndarray:
        return self.tape().evaluate_at(np.asarray(x, dtype=float))


class AdaptedFrames:
    """Declared expression-valued orthonormal frames for the four canonical
    subbundles, plus optional sub-splits (J ker, mu on the source; J' range,
    nu on the target)."""

    def __init__(self, vertical=(), horizontal=(), range_=(), normal=(),
                 mu=None, nu=None):
        self.vertical = tuple(vertical)
        self.horizontal = tuple(horizontal)
        self.range = tuple(range_)
        self.normal = tuple(normal)
        self.mu = tuple(mu) if mu is not None else None
        self.nu = tuple(nu) if nu is not None else None

    def names(self, group):
        return tuple(f.name or f"{group}{i}" for i, f in enumerate(getattr(self, group)))


class SplitPoint:
    """Numeric adapted frames at one sample point: rows are frame vectors."""

    def __init__(self, x, y, vertical, horizontal, range_, normal):
        self.x = x
        self.y = y
        self.vertical = vertical
        self.horizontal = horizontal
        self.range = range_
        self.normal = normal


class MapGeometry:
    """Bundle of (F, g_M, g_N, declared frames) with write-once caches for
    every derived symbolic tensor the verification suites contract against."""

    def __init__(self, F: SmoothMap, gM: MetricField, gN: MetricField,
                 frames: AdaptedFrames | None = None):
        if F.source is not gM.chart or F.target is not gN.chart:
            raise MapError("map and metrics must share charts")
        self.F = F
        self.gM = gM
        self.gN = gN
        self.frames = frames or AdaptedFrames()
        self._cache = {}

    # -- declared-frame validation -------------------------------------------
    def validate_frames(self, points, tol=1e-9):
        """Orthonormality of each declared frame, kernel membership of the
        vertical frame, horizontality, and range/normal consistency."""
        pts = np.atleast_2d(points)
        fr = self.frames
        problems = []
        if fr.vertical:
            res = Frame(self.gM.chart, fr.vertical).gram_residual(self.gM, pts)
            if res > tol:
                problems.append(f"vertical frame not orthonormal (residual {res:.3e})")
            Jv = self.F.jac_values(pts)
            V = np.stack([f.values(pts) for f in fr.vertical], axis=1)
            push = np.einsum("pai,pki->pka", Jv, V)
            worst = float(np.max(np.abs(push))) if push.size else 0.0
            if worst > tol:
                problems.append(f"vertical frame not in ker F_* (residual {worst:.3e})")
        if fr.horizontal:
            res = Frame(self.gM.chart, fr.horizontal).gram_residual(self.gM, pts)
            if res > tol:
                problems.append(f"horizontal frame not orthonormal (residual {res:.3e})")
            if fr.vertical:
                G = self.gM.values(pts)
                V = np.stack([f.values(pts) for f in fr.vertical], axis=1)
                H = np.stack([f.values(pts) for f in fr.horizontal], axis=1)
                cross = np.einsum("pai,pij,pbj->pab", V, G, H)
                worst = float(np.max(np.abs(cross))) if cross.size else 0.0
                if worst > tol:
                    problems.append(f"vertical/horizontal frames not orthogonal ({worst:.3e})")
        ypts = self.F.values(pts)
        if fr.range:
            res = Frame(self.gN.chart, fr.range).gram_residual(self.gN, ypts)
            if res > tol:
                problems.append(f"range frame not orthonormal along F (residual {res:.3e})")
        if fr.normal:
            res = Frame(self.gN.chart, fr.normal).gram_residual(self.gN, ypts)
            if res > tol:
                problems.append(f"normal frame not orthonormal along F (residual {res:.3e})")
            if fr.range:
                G = self.gN.values(ypts)
                R = np.stack([f.values(ypts) for f in fr.range], axis=1)
                Nf = np.stack([f.values(ypts) for f in fr.normal], axis=1)
                cross = np.einsum("pai,pij,pbj->pab", R, G, Nf)
                worst = float(np.max(np.abs(cross))) if cross.size else 0.0
                if worst > tol:
                    problems.append(f"range/normal frames not orthogonal ({worst:.3e})")
        if problems:
            raise MapError("declared frame validation failed: " + "; ".join(problems))

    # -- per-point splittings ---------------------------------------------------
    def split_at(self, x, tol=1e-9) -> SplitPoint:
        """Numeric adapted frames at x: declared frames are evaluated
        verbatim when present, otherwise computed from the Jacobian by
        SVD/Gram-Schmidt."""
        x = np.asarray(x, dtype=float)
        y = self.F.value_at(x)
        GM = self.gM.value_at(x)
        GN = self.gN.value_at(y)
        J = self.F.jac_at(x)
        fr = self.frames

        if fr.vertical or fr.horizontal:
            vert = np.array([f.value_at(x) for f in fr.vertical]) if fr.vertical \
                else np.zeros((0, self.gM.chart.dim))
            horiz = np.array([f.value_at(x) for f in fr.horizontal]) if fr.horizontal \
                else self._horizontal_complement(GM, vert)
        else:
            ns = _nullspace(J, tol)
            vert = orthonormalize(GM, ns) if len(ns) else np.zeros((0, self.gM.chart.dim))
            horiz = self._horizontal_complement(GM, vert)

        if fr.range:
            rng = np.array([f.value_at(y) for f in fr.range])
        else:
            pushed = (J @ horiz.T).T if len(horiz) else np.zeros((0, self.gN.chart.dim))
            rng = orthonormalize(GN, pushed) if len(pushed) else pushed
        if fr.normal:
            nrm = np.array([f.value_at(y) for f in fr.normal])
        else:
            nrm = _complement(GN, rng)
        return SplitPoint(x, y, vert, horiz, rng, nrm)

    @staticmethod
    def _horizontal_complement(G, vert):
        return _complement(G, vert)

    def rank_report(self, points, tol=1e-9):
        pts = np.atleast_2d(points)
        ranks = sorted({self.F.rank_at(x, tol) for x in pts})
        return ranks

    def require_constant_rank(self, points, tol=1e-9) -> int:
        ranks = self.rank_report(points, tol)
        if len(ranks) != 1:
            raise MapError(f"Jacobian rank changes across sample points: {ranks}")
        return ranks[0]

    # -- symbolic coordinate tensors ---------------------------------------------
    def _projector_from_fields(self, g, fields, chart):
        n = chart.dim
        P = sym_zeros((n, n))
        for f in fields:
            flat = []  # (f^flat)_j = g_jk f^k
            for j in range(n):
                acc = Const(0.0)
                for k in range(n):
                    acc = _add(acc, _mul(g.mat[j, k], f.comps[k]))
                flat.append(acc)
            for i in range(n):
                for j in range(n):
                    P[i, j] = _add(P[i, j], _mul(f.comps[i], flat[j]))
        for i in range(n):
            for j in range(n):
                P[i, j] = g._simp(P[i, j])
        return P

    def projectors(self):
        """(P_V, P_H) on the source chart as (1,1) expression matrices."""
        if "projs" not in self._cache:
            if not self.frames.vertical or not self.frames.horizontal:
                raise FramesRequired(
                    "source projectors need declared vertical and horizontal frames")
            PV = self._projector_from_fields(self.gM, self.frames.vertical, self.F.source)
            PH = self._projector_from_fields(self.gM, self.frames.horizontal, self.F.source)
            self._cache["projs"] = (PV, PH)
        return self._cache["projs"]

    def target_projectors(self):
        """(P_range, P_perp) on the target chart."""
        if "tprojs" not in self._cache:
            if not self.frames.range or not self.frames.normal:
                raise FramesRequired(
                    "target projectors need declared range and normal frames")
            PR = self._projector_from_fields(self.gN, self.frames.range, self.F.target)
            PP = self._projector_from_fields(self.gN, self.frames.normal, self.F.target)
            self._cache["tprojs"] = (PR, PP)
        return self._cache["tprojs"]

    def oneill_T(self) -> TensorField:
        """T[k,i,j] = (T(d_i, d_j))^k."""
        if "T" not in self._cache:
            self._cache["T"] = self._oneill(vertical_direction=True)
        return self._cache["T"]

    def oneill_A(self) -> TensorField:
        """A[k,i,j] = (A(d_i, d_j))^k."""
        if "A" not in self._cache:
            self._cache["A"] = self._oneill(vertical_direction=False)
        return self._cache["A"]

    def _oneill(self, vertical_direction: bool) -> TensorField:
        PV, PH = self.projectors()
        g = self.gM
        n = g.chart.dim
        out = sym_zeros((n, n, n))
        Pdir = PV if vertical_direction else PH
        for i in range(n):
            Di = [Pdir[k, i] for k in range(n)]
            if all(is_const(c, 0.0) for c in Di):
                continue
            for j in range(n):
                Vj = [PV[k, j] for k in range(n)]
                Hj = [PH[k, j] for k in range(n)]
                nv = covariant_derivative(g, Di, Vj)
                nh = covariant_derivative(g, Di, Hj)
                for k in range(n):
                    acc = Const(0.0)
                    for m in range(n):
                        acc = _add(acc, _mul(PH[k, m], nv.comps[m]))
                        acc = _add(acc, _mul(PV[k, m], nh.comps[m]))
                    out[k, i, j] = g._simp(acc)
        return TensorField(g.chart, (1, 2), out)

    def nabla_oneill(self, which: str) -> TensorField:
        """(nabla T)[k, l, i, j] (resp. A): derivative index first among the
        covariant slots, as in geometry.covariant_derivative_tensor."""
        key = f"nabla_{which}"
        if key not in self._cache:
            T = self.oneill_T() if which == "T" else self.oneill_A()
            self._cache[key] = covariant_derivative_tensor(self.gM, T)
        return self._cache[key]

    def second_fundamental_form(self) -> TensorAlongMap:
        """SFF[a, i, j]: target-valued (0,2) tensor over source coordinates,
        (nabla F_*)(d_i, d_j)^a = d_i d_j F^a
        + Gamma'^a_{bc}(F) d_i F^b d_j F^c - Gamma^k_{ij} d_k F^a."""
        if "SFF" not in self._cache:
            F, gM, gN = self.F, self.gM, self.gN
            ns, nt = F.source.dim, F.target.dim
            gamM = gM.christoffel().comps
            gamN = gN.christoffel().comps
            gamN_pulled = np.empty((nt, nt, nt), dtype=object)
            for idx in np.ndindex(nt, nt, nt):
                gamN_pulled[idx] = (Const(0.0) if is_const(gamN[idx], 0.0)
                                    else F.pull_expr(gamN[idx]))
            out = sym_zeros((nt, ns, ns))
            for a in range(nt):
                for i in range(ns):
                    for j in range(i, ns):
                        acc = differentiate(F.jacobian[a, i], F.source.coords[j])
                        for b in range(nt):
                            for c in range(nt):
                                acc = _add(acc, _mul(gamN_pulled[a, b, c],
                                                     _mul(F.jacobian[b, i], F.jacobian[c, j])))
                        for k in range(ns):
                            acc = _sub(acc, _mul(gamM[k, i, j], F.jacobian[a, k]))
                        e = gM._simp(acc)
                        out[a, i, j] = e
                        out[a, j, i] = e
            self._cache["SFF"] = TensorAlongMap(F, out)
        return self._cache["SFF"]

    def shape_tensors(self):
        """Per normal-frame field e_k: the pair (S_k, NF_k) of (1,1) target
        tensors with S_k[a,c] = -(P_range nabla^N_{d_c} e_k)^a (shape
        operator) and NF_k[b,c] = (P_perp nabla^N_{d_c} e_k)^b (normal
        connection coefficients)."""
        if "shape" not in self._cache:
            if not self.frames.normal:
                raise FramesRequired("shape operators need a declared normal frame")
            PR, PP = self.target_projectors()
            gN = self.gN
            n = gN.chart.dim
            shapes = []
            for ek in self.frames.normal:
                S = sym_zeros((n, n))
                NF = sym_zeros((n, n))
                for c in range(n):
                    dc = [Const(1.0) if i == c else Const(0.0) for i in range(n)]
                    ncd = covariant_derivative(gN, dc, list(ek.comps))
                    for a in range(n):
                        accS = Const(0.0)
                        accN = Const(0.0)
                        for m in range(n):
                            accS = _add(accS, _mul(PR[a, m], ncd.comps[m]))
                            accN = _add(accN, _mul(PP[a, m], ncd.comps[m]))
                        S[a, c] = gN._simp(_mul(Const(-1.0), accS))
                        NF[a, c] = gN._simp(accN)
                shapes.append((TensorField(gN.chart, (1, 1), S),
                               TensorField(gN.chart, (1, 1), NF)))
            self._cache["shape"] = shapes
        return self._cache["shape"]


def _nullspace(J, tol=1e-9):
    if J.size == 0:
        return np.zeros((0, J.shape[1]))
    u, s, vt = np.linalg.svd(J)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    return vt[rank:]


def _complement(G, rows):
    """G-orthonormal basis of the orthogonal complement of span(rows)."""
    n = G.shape[0]
    out = list(rows)
    comp = []
    for i in range(n):
        v = np.zeros(n)
        v[i] = 1.0
        w = v.copy()
        for u in out:
            w = w - (u @ G @ w) * u
        norm2 = float(w @ G @ w)
        if norm2 > 1e-18:
            w = w / math.sqrt(norm2)
            out.append(w)
            comp.append(w)
    return np.array(comp) if comp else np.zeros((0, n))


# -- pointwise operations used by the check suites ------------------------------

def isometry_residual(mg: MapGeometry, points) -> tuple[float, int]:
    """max over points and horizontal pairs of
    |g_N(F_*X_a, F_*X_b) - g_M(X_a, X_b)|, with the worst point index."""
    pts = np.atleast_2d(points)
    worst, wp = 0.0, 0
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        if len(sp.horizontal) == 0:
            continue
        J = mg.F.jac_at(x)
        GM = mg.gM.value_at(x)
        GN = mg.gN.value_at(sp.y)
        H = sp.horizontal
        push = (J @ H.T).T
        res = np.abs(np.einsum("ai,ij,bj->ab", push, GN, push)
                     - np.einsum("ai,ij,bj->ab", H, GM, H))
        m = float(np.max(res))
        if m > worst:
            worst, wp = m, idx
    return worst, wp


def sff_values(mg: MapGeometry, points) -> np.ndarray:
    """(P, a, i, j) second-fundamental-form component values."""
    return mg.second_fundamental_form().values(points)


def umbilical_fit(mg: MapGeometry, points):
    """Least-squares mean-curvature fit: H'(p) minimizing
    sum_{a,b} |(nabla F_*)(X_a, X_b) - g_M(X_a, X_b) H'|^2 over the
    horizontal frame.  Returns (residual, H' per point, worst index)."""
    pts = np.atleast_2d(points)
    S = sff_values(mg, pts)
    worst, wp = 0.0, 0
    Hs = []
    for idx, x in enumerate(pts):
        sp = mg.split_at(x)
        H = sp.horizontal
        h = len(H)
        if h == 0:
            Hs.append(np.zeros(mg.gN.chart.dim))
            continue
        GM = mg.gM.value_at(x)
        GN = mg.gN.value_at(sp.y)
        vals = np.einsum("aij,ki,lj->kla", S[idx], H, H)  # (k,l,target)
        gm = np.einsum("ki,ij,lj->kl", H, GM, H)
        denom = float(np.sum(gm * gm))
        Hp = np.einsum("kl,kla->a", gm, vals) / denom
        Hs.append(Hp)
        diff = vals - gm[:, :, None] * Hp[None, None, :]
        norms = np.sqrt(np.abs(np.einsum("kla,ab,klb->kl", diff, GN, diff)))
        m = float(np.max(norms))
        if m > worst:
            worst, wp = m, idx
    return worst, np.array(Hs), wp


def oneill_values(mg: MapGeometry, which, points) -> np.ndarray:
    T = mg.oneill_T() if which == "T" else mg.oneill_A()
    return T.values(points)


def fiber_mean_curvature_at(mg: MapGeometry, x) -> np.ndarray:
    """H = (1/r0) sum_j T(u_j, u_j), a horizontal vector at x."""
    sp = mg.split_at(x)
    r0 = len(sp.vertical)
    if r0 == 0:
        raise MapError("fiber mean curvature needs a nonzero-dimensional kernel")
    Tv = mg.oneill_T().value_at(x)
    return np.einsum("kij,ai,aj->k", Tv, sp.vertical, sp.vertical) / r0
