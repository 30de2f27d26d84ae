"""Chart-level Riemannian geometry.

Symbolic side: Christoffel symbols, Riemann/Ricci/scalar curvature, gradient,
Hessian, divergence and metric Lie derivatives as expression-valued tensors.
Numeric side: seeded sample-point generation, per-point metric values,
Gram-Schmidt orthonormalization and a 4th-order geodesic integrator with
energy monitoring.

Index conventions (documented once, used everywhere):
  * tensor components store contravariant indices first, e.g. a (1,2) tensor
    T has T[a, i, j] = (T(d_i, d_j))^a;
  * riemann(g)[l, i, j, k] = (R(d_i, d_j) d_k)^l with
    R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z;
  * ricci(g)[i, j] = sum_k riemann[k, k, i, j], i.e. Ric(X, Y) is the trace
    of Z -> R(Z, X) Y.  The unit sphere then has Ric = +(n-1) g.
  * the derivative slot of a covariant derivative is the first covariant
    index: (nabla T)[a, l, i, j] = (nabla_{d_l} T)(d_i, d_j)^a.

All field objects are immutable after construction; cached tensors are
write-once.  Per-point evaluations are pure functions.
"""

from __future__ import annotations

import math

import numpy as np

from .expr import (
    Const,
    Expr,
    as_expr,
    differentiate,
    evaluate,
    parse,
    simplify,
    to_str,
)
from .expr.nodes import Add, Div, Mul, Neg, Sub, is_const
from .expr.tape import Tape

CURVATURE_CONVENTION = ("R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z "
                        "- nabla_[X,Y] Z; Ric(X,Y) = trace(Z -> R(Z,X)Y); "
                        "unit sphere has Ric = +(n-1) g")


class GeometryError(Exception):
    pass


class ChartDomainError(GeometryError):
    pass


# -- small symbolic helpers ---------------------------------------------------

def _add(a, b):
    if is_const(a, 0.0):
        return b
    if is_const(b, 0.0):
        return a
    return Add(a, b)


def _sub(a, b):
    if is_const(b, 0.0):
        return a
    if is_const(a, 0.0):
        return Neg(b)
    return Sub(a, b)


def _mul(a, b):
    if is_const(a, 0.0) or is_const(b, 0.0):
        return Const(0.0)
    if is_const(a, 1.0):
        return b
    if is_const(b, 1.0):
        return a
    return Mul(a, b)


def sym_zeros(shape):
    arr = np.empty(shape, dtype=object)
    arr.flat = [Const(0.0)] * arr.size
    return arr


def sym_apply(fn, arr):
    out = np.empty(arr.shape, dtype=object)
    out.flat = [fn(e) for e in arr.flat]
    return out


class Chart:
    """A named coordinate system with optional domain constraints.

    Constraints are (expression, kind) pairs with kind 'nonzero' or
    'positive'; they gate sample-point generation and are offered to the
    simplifier as declared-nonvanishing factors.
    """

    def __init__(self, name, coords, constraints=(), params=()):
        coords = tuple(coords)
        params = tuple(params)
        if len(set(coords + params)) != len(coords) + len(params):
            raise GeometryError(f"chart {name!r}: duplicate coordinate names")
        if len(coords) < 1:
            raise GeometryError(f"chart {name!r}: dimension must be >= 1")
        self.name = name
        self.coords = coords
        self.params = params  # frozen transverse variables of induced geometries
        self.allvars = coords + params
        self.dim = len(coords)
        cons = []
        for c, kind in constraints:
            if kind not in ("nonzero", "positive"):
                raise GeometryError(f"unknown constraint kind {kind!r}")
            cons.append((as_expr(c), kind))
        self.constraints = tuple(cons)

    def __repr__(self):
        return f"<Chart {self.name} dim={self.dim}>"

    def nonvanishing_keys(self):
        return [c for c, _ in self.constraints]

    def parse(self, text, extra=()):
        return parse(text, allowed=self.allvars + tuple(extra))

    def point(self, values) -> dict:
        """Validate and return a point as a coordinate->value mapping."""
        p = {}
        for c in self.coords:
            if c not in values:
                raise ChartDomainError(f"point misses coordinate {c!r} of chart {self.name}")
            p[c] = float(values[c])
        extra = set(values) - set(self.coords)
        if extra:
            raise ChartDomainError(f"point has foreign coordinates {sorted(extra)}")
        self.check_domain(p)
        return p

    def check_domain(self, p):
        for c, kind in self.constraints:
            v = evaluate(c, p)
            if kind == "nonzero" and abs(v) < 1e-12:
                raise ChartDomainError(f"constraint {to_str(c)} != 0 violated")
            if kind == "positive" and v <= 0.0:
                raise ChartDomainError(f"constraint {to_str(c)} > 0 violated")

    def array_to_point(self, x) -> dict:
        return dict(zip(self.coords, (float(v) for v in x)))

    def point_to_array(self, p) -> np.ndarray:
        return np.array([p[c] for c in self.coords], dtype=float)

    def sample_points(self, n, seed, box=(0.1, 1.0)) -> np.ndarray:
        """Seeded uniform samples over box^dim, rejection-filtered through the
        chart constraints.  Returns an (n, dim) array."""
        rng = np.random.default_rng(seed)
        lo, hi = float(box[0]), float(box[1])
        cons_tape = None
        if self.constraints:
            cons_tape = Tape([c for c, _ in self.constraints], self.coords)
        out = np.empty((n, self.dim))
        got = 0
        for _ in range(200):
            cand = rng.uniform(lo, hi, size=(max(n, 8), self.dim))
            if cons_tape is not None:
                vals = cons_tape.evaluate(cand)
                ok = np.ones(len(cand), dtype=bool)
                for j, (_, kind) in enumerate(self.constraints):
                    col = vals[:, j]
                    ok &= (np.abs(col) > 1e-9) if kind == "nonzero" else (col > 1e-9)
                cand = cand[ok]
            take = min(n - got, len(cand))
            out[got:got + take] = cand[:take]
            got += take
            if got == n:
                return out
        raise ChartDomainError(
            f"could not draw {n} sample points satisfying constraints of {self.name}")


class VectorField:
    """Contravariant components (expressions) in the coordinate basis."""

    def __init__(self, chart, comps, name=None):
        comps = tuple(as_expr(c) for c in comps)
        if len(comps) != chart.dim:
            raise GeometryError(
                f"vector field on {chart.name} needs {chart.dim} components, got {len(comps)}")
        self.chart = chart
        self.comps = comps
        self.name = name
        self._tape = None

    def __repr__(self):
        parts = ", ".join(to_str(c) for c in self.comps)
        return f"<VectorField {self.name or ''} ({parts})>"

    def tape(self):
        if self._tape is None:
            self._tape = Tape(self.comps, self.chart.allvars)
        return self._tape

    def values(self, points) -> np.ndarray:
        return self.tape().evaluate(np.atleast_2d(points))

    def value_at(self, x) -> np.ndarray:
        return self.tape().evaluate_at(np.asarray(x, dtype=float))

    def as_array(self):
        arr = np.empty(self.chart.dim, dtype=object)
        arr[:] = list(self.comps)
        return arr


class TensorField:
    """Dense expression-valued tensor with signature (p contravariant,
    q covariant); component array shape is (dim,) * (p + q)."""

    def __init__(self, chart, sig, comps):
        p, q = sig
        comps = np.asarray(comps, dtype=object)
        if comps.shape != (chart.dim,) * (p + q):
            raise GeometryError(
                f"tensor of signature {sig} on {chart.name} needs shape "
                f"{(chart.dim,) * (p + q)}, got {comps.shape}")
        self.chart = chart
        self.sig = (p, q)
        self.comps = comps
        self._tape = None

    def tape(self):
        if self._tape is None:
            self._tape = Tape(list(self.comps.flat), self.chart.allvars)
        return self._tape

    def values(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        flat = self.tape().evaluate(pts)
        return flat.reshape((len(pts),) + self.comps.shape)

    def value_at(self, x) -> np.ndarray:
        return self.tape().evaluate_at(np.asarray(x, dtype=float)).reshape(self.comps.shape)


class Frame:
    """Ordered list of vector fields, optionally flagged orthonormal."""

    def __init__(self, chart, fields, orthonormal=False, names=None):
        self.chart = chart
        self.fields = tuple(fields)
        self.orthonormal = orthonormal
        self.names = tuple(names) if names else tuple(
            f.name or f"E{i}" for i, f in enumerate(self.fields))
        for f in self.fields:
            if f.chart is not chart:
                raise GeometryError("frame fields must share one chart")

    def __len__(self):
        return len(self.fields)

    def values(self, points) -> np.ndarray:
        """(npoints, nfields, dim) frame vectors."""
        pts = np.atleast_2d(points)
        return np.stack([f.values(pts) for f in self.fields], axis=1)

    def gram_residual(self, metric, points) -> float:
        """Max |g(e_i,e_j) - delta_ij| over the sample points."""
        pts = np.atleast_2d(points)
        G = metric.values(pts)
        E = self.values(pts)
        gram = np.einsum("pai,pij,pbj->pab", E, G, E)
        eye = np.eye(len(self.fields))
        return float(np.max(np.abs(gram - eye)))


class MetricField:
    """Symmetric positive-definite (0,2) expression matrix on a chart.

    Curvature tensors are computed symbolically (adjugate inverse, exact for
    the catalog's dimensions) and cached write-once.  Positive definiteness
    is checked at sample points only, never proven globally.
    """

    def __init__(self, chart, mat):
        mat = np.asarray(mat, dtype=object)
        if mat.shape != (chart.dim, chart.dim):
            raise GeometryError(
                f"metric on {chart.name} must be {chart.dim}x{chart.dim}, got {mat.shape}")
        self.chart = chart
        nv = chart.nonvanishing_keys()
        self.mat = np.empty(mat.shape, dtype=object)
        for i in range(chart.dim):
            for j in range(chart.dim):
                self.mat[i, j] = simplify(as_expr(mat[i, j]), nv)
        self._tape = None
        self._cache = {}

    # ---- numeric side ----
    def tape(self):
        if self._tape is None:
            self._tape = Tape(list(self.mat.flat), self.chart.allvars)
        return self._tape

    def values(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        n = self.chart.dim
        return self.tape().evaluate(pts).reshape(len(pts), n, n)

    def value_at(self, x) -> np.ndarray:
        n = self.chart.dim
        return self.tape().evaluate_at(np.asarray(x, dtype=float)).reshape(n, n)

    def inverse_value_at(self, x) -> np.ndarray:
        return np.linalg.inv(self.value_at(x))

    def check_spd(self, points, tol=1e-12):
        """Symmetry and positive definiteness at the given points; raises
        GeometryError on the first offending point."""
        pts = np.atleast_2d(points)
        G = self.values(pts)
        for i, g in enumerate(G):
            if np.max(np.abs(g - g.T)) > tol * max(1.0, float(np.max(np.abs(g)))):
                raise GeometryError(f"metric asymmetric at sample point {pts[i]}")
            try:
                np.linalg.cholesky(g)
            except np.linalg.LinAlgError:
                raise GeometryError(
                    f"metric not positive definite at sample point {pts[i]}") from None

    # ---- symbolic side ----
    def _simp(self, e):
        return simplify(e, self.chart.nonvanishing_keys())

    def det(self) -> Expr:
        if "det" not in self._cache:
            self._cache["det"] = self._simp(_sym_det(self.mat))
        return self._cache["det"]

    def inverse(self) -> np.ndarray:
        """Symbolic inverse via the adjugate; exact for the chart sizes used
        here.  Per-point numeric work should use inverse_value_at instead."""
        if "inv" not in self._cache:
            n = self.chart.dim
            if n > 6:
                raise GeometryError(
                    "symbolic inverse limited to dim <= 6; use inverse_value_at")
            d = self.det()
            if is_const(d, 0.0):
                raise GeometryError("metric is symbolically degenerate (det == 0)")
            inv = np.empty((n, n), dtype=object)
            for i in range(n):
                for j in range(n):
                    minor = _sym_det(np.delete(np.delete(self.mat, i, 0), j, 1))
                    sign = -1.0 if (i + j) % 2 else 1.0
                    inv[j, i] = self._simp(Div(_mul(Const(sign), minor), d))
            self._cache["inv"] = inv
        return self._cache["inv"]

    def christoffel(self):
        if "gamma" not in self._cache:
            self._cache["gamma"] = christoffel(self)
        return self._cache["gamma"]

    def riemann(self):
        if "riemann" not in self._cache:
            self._cache["riemann"] = riemann(self)
        return self._cache["riemann"]

    def ricci(self):
        if "ricci" not in self._cache:
            self._cache["ricci"] = ricci(self)
        return self._cache["ricci"]

    def scalar_curvature(self):
        if "scalar" not in self._cache:
            self._cache["scalar"] = scalar_curvature(self)
        return self._cache["scalar"]


def _sym_det(mat) -> Expr:
    n = mat.shape[0]
    if n == 1:
        return mat[0, 0]
    if n == 2:
        return _sub(_mul(mat[0, 0], mat[1, 1]), _mul(mat[0, 1], mat[1, 0]))
    acc = Const(0.0)
    for j in range(n):
        a = mat[0, j]
        if is_const(a, 0.0):
            continue
        minor = _sym_det(np.delete(np.delete(mat, 0, 0), j, 1))
        term = _mul(a, minor)
        acc = _add(acc, term) if j % 2 == 0 else _sub(acc, term)
    return acc


# -- curvature ----------------------------------------------------------------

def christoffel(g: MetricField) -> TensorField:
    """Levi-Civita connection coefficients, Gamma[k, i, j], symmetric in
    (i, j)."""
    n = g.chart.dim
    coords = g.chart.coords
    ginv = g.inverse()
    dg = np.empty((n, n, n), dtype=object)  # dg[k][i][j] = d_k g_ij
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                d = differentiate(g.mat[i, j], coords[k])
                dg[k, i, j] = d
                dg[k, j, i] = d
    out = sym_zeros((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                acc = Const(0.0)
                for l in range(n):
                    if is_const(ginv[k, l], 0.0):
                        continue
                    inner = _sub(_add(dg[i, j, l], dg[j, i, l]), dg[l, i, j])
                    acc = _add(acc, _mul(ginv[k, l], inner))
                e = g._simp(_mul(Const(0.5), acc))
                out[k, i, j] = e
                out[k, j, i] = e
    return TensorField(g.chart, (1, 2), out)


def riemann(g: MetricField) -> TensorField:
    """Curvature tensor R[l, i, j, k] = (R(d_i, d_j) d_k)^l."""
    n = g.chart.dim
    coords = g.chart.coords
    gam = g.christoffel().comps
    dgam = np.empty((n, n, n, n), dtype=object)  # dgam[a][l][i][j] = d_a Gamma^l_ij
    for a in range(n):
        for l in range(n):
            for i in range(n):
                for j in range(i, n):
                    d = differentiate(gam[l, i, j], coords[a])
                    dgam[a, l, i, j] = d
                    dgam[a, l, j, i] = d
    out = sym_zeros((n, n, n, n))
    for l in range(n):
        for i in range(n):
            for j in range(i + 1, n):  # antisymmetric in (i, j)
                for k in range(n):
                    acc = _sub(dgam[i, l, j, k], dgam[j, l, i, k])
                    for m in range(n):
                        acc = _add(acc, _mul(gam[l, i, m], gam[m, j, k]))
                        acc = _sub(acc, _mul(gam[l, j, m], gam[m, i, k]))
                    e = g._simp(acc)
                    out[l, i, j, k] = e
                    out[l, j, i, k] = g._simp(Neg(e))
    return TensorField(g.chart, (1, 3), out)


def ricci(g: MetricField) -> TensorField:
    """Ric[i, j] = sum_k R[k, k, i, j]; symmetric."""
    n = g.chart.dim
    R = g.riemann().comps
    out = sym_zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            acc = Const(0.0)
            for k in range(n):
                acc = _add(acc, R[k, k, i, j])
            e = g._simp(acc)
            out[i, j] = e
            out[j, i] = e
    return TensorField(g.chart, (0, 2), out)


def scalar_curvature(g: MetricField) -> Expr:
    n = g.chart.dim
    ginv = g.inverse()
    ric = g.ricci().comps
    acc = Const(0.0)
    for i in range(n):
        for j in range(n):
            acc = _add(acc, _mul(ginv[i, j], ric[i, j]))
    return g._simp(acc)


# -- first-order operators ----------------------------------------------------

def gradient(g: MetricField, f: Expr) -> VectorField:
    """(grad f)^j = g^{ij} d_i f."""
    f = as_expr(f)
    n = g.chart.dim
    ginv = g.inverse()
    df = [differentiate(f, c) for c in g.chart.coords]
    comps = []
    for j in range(n):
        acc = Const(0.0)
        for i in range(n):
            acc = _add(acc, _mul(ginv[i, j], df[i]))
        comps.append(g._simp(acc))
    return VectorField(g.chart, comps)


def hessian(g: MetricField, f: Expr) -> TensorField:
    """Hess f(X, Y) = g(nabla_X grad f, Y); components
    d_i d_j f - Gamma^k_ij d_k f."""
    f = as_expr(f)
    n = g.chart.dim
    coords = g.chart.coords
    gam = g.christoffel().comps
    df = [differentiate(f, c) for c in coords]
    out = sym_zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            acc = differentiate(df[i], coords[j])
            for k in range(n):
                acc = _sub(acc, _mul(gam[k, i, j], df[k]))
            e = g._simp(acc)
            out[i, j] = e
            out[j, i] = e
    return TensorField(g.chart, (0, 2), out)


def covariant_derivative(g: MetricField, X, Y) -> VectorField:
    """(nabla_X Y)^k = X^i d_i Y^k + Gamma^k_ij X^i Y^j."""
    Xc = X.comps if isinstance(X, VectorField) else tuple(as_expr(c) for c in X)
    Yc = Y.comps if isinstance(Y, VectorField) else tuple(as_expr(c) for c in Y)
    if isinstance(X, VectorField) and X.chart is not g.chart:
        raise GeometryError("covariant_derivative: X lives on a different chart")
    if isinstance(Y, VectorField) and Y.chart is not g.chart:
        raise GeometryError("covariant_derivative: Y lives on a different chart")
    n = g.chart.dim
    coords = g.chart.coords
    gam = g.christoffel().comps
    comps = []
    for k in range(n):
        acc = Const(0.0)
        for i in range(n):
            acc = _add(acc, _mul(Xc[i], differentiate(Yc[k], coords[i])))
            for j in range(n):
                acc = _add(acc, _mul(gam[k, i, j], _mul(Xc[i], Yc[j])))
        comps.append(g._simp(acc))
    return VectorField(g.chart, comps)


def covariant_derivative_tensor(g: MetricField, T: TensorField) -> TensorField:
    """nabla T for signatures (0,q) and (1,q); the derivative index becomes
    the first covariant slot."""
    p, q = T.sig
    if p not in (0, 1):
        raise GeometryError("covariant_derivative_tensor supports (0,q) and (1,q)")
    n = g.chart.dim
    coords = g.chart.coords
    gam = g.christoffel().comps
    out = sym_zeros((n,) * (p + q + 1))
    for l in range(n):
        for idx in np.ndindex(*T.comps.shape):
            acc = differentiate(T.comps[idx], coords[l])
            if p == 1:
                a, rest = idx[0], idx[1:]
                for m in range(n):
                    acc = _add(acc, _mul(gam[a, l, m], T.comps[(m,) + rest]))
                for pos in range(q):
                    for m in range(n):
                        swapped = (a,) + rest[:pos] + (m,) + rest[pos + 1:]
                        acc = _sub(acc, _mul(gam[m, l, rest[pos]], T.comps[swapped]))
                out[(a, l) + rest] = g._simp(acc)
            else:
                for pos in range(q):
                    for m in range(n):
                        swapped = idx[:pos] + (m,) + idx[pos + 1:]
                        acc = _sub(acc, _mul(gam[m, l, idx[pos]], T.comps[swapped]))
                out[(l,) + idx] = g._simp(acc)
    return TensorField(g.chart, (p, q + 1), out)


def lie_bracket(chart: Chart, X, Y) -> VectorField:
    """[X, Y]^k = X^i d_i Y^k - Y^i d_i X^k."""
    Xc = X.comps if isinstance(X, VectorField) else tuple(as_expr(c) for c in X)
    Yc = Y.comps if isinstance(Y, VectorField) else tuple(as_expr(c) for c in Y)
    comps = []
    for k in range(chart.dim):
        acc = Const(0.0)
        for i in range(chart.dim):
            acc = _add(acc, _mul(Xc[i], differentiate(Yc[k], chart.coords[i])))
            acc = _sub(acc, _mul(Yc[i], differentiate(Xc[k], chart.coords[i])))
        comps.append(simplify(acc, chart.nonvanishing_keys()))
    return VectorField(chart, comps)


def divergence(g: MetricField, X) -> Expr:
    """div X = d_i X^i + Gamma^k_{ki} X^i; agrees with the frame-trace and
    the sqrt-det coordinate formulas."""
    Xc = X.comps if isinstance(X, VectorField) else tuple(as_expr(c) for c in X)
    n = g.chart.dim
    coords = g.chart.coords
    gam = g.christoffel().comps
    acc = Const(0.0)
    for i in range(n):
        acc = _add(acc, differentiate(Xc[i], coords[i]))
        for k in range(n):
            acc = _add(acc, _mul(gam[k, k, i], Xc[i]))
    return g._simp(acc)


def lie_derivative_metric(g: MetricField, X) -> TensorField:
    """(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k; symmetric."""
    Xc = X.comps if isinstance(X, VectorField) else tuple(as_expr(c) for c in X)
    n = g.chart.dim
    coords = g.chart.coords
    out = sym_zeros((n, n))
    dX = [[differentiate(Xc[k], coords[i]) for i in range(n)] for k in range(n)]
    for i in range(n):
        for j in range(i, n):
            acc = Const(0.0)
            for k in range(n):
                acc = _add(acc, _mul(Xc[k], differentiate(g.mat[i, j], coords[k])))
                acc = _add(acc, _mul(g.mat[k, j], dX[k][i]))
                acc = _add(acc, _mul(g.mat[i, k], dX[k][j]))
            e = g._simp(acc)
            out[i, j] = e
            out[j, i] = e
    return TensorField(g.chart, (0, 2), out)


# -- numeric frame utilities ---------------------------------------------------

def orthonormalize(gval: np.ndarray, vectors, tol=1e-10):
    """Gram-Schmidt with inner product gval; `vectors` is (k, n).  Raises on
    rank deficiency.  Returns (k, n) with span preserved."""
    V = np.asarray(vectors, dtype=float)
    out = []
    for v in V:
        w = v.copy()
        for u in out:
            w = w - (u @ gval @ w) * u
        norm2 = float(w @ gval @ w)
        if norm2 <= tol:
            raise GeometryError("orthonormalize: rank deficiency at point")
        out.append(w / math.sqrt(norm2))
    return np.array(out)


def orthonormalize_fields(g: MetricField, fields, p) -> np.ndarray:
    x = g.chart.point_to_array(p) if isinstance(p, dict) else np.asarray(p, float)
    V = np.array([f.value_at(x) for f in fields])
    return orthonormalize(g.value_at(x), V)


# -- geodesics ------------------------------------------------------------------

class Trajectory:
    """Geodesic integration record: times, positions, velocities, and the
    maximum drift of g(xdot, xdot) relative to its initial value."""

    def __init__(self, chart, times, xs, vs, energy_drift, halvings):
        self.chart = chart
        self.times = times
        self.xs = xs
        self.vs = vs
        self.energy_drift = energy_drift
        self.halvings = halvings

    def __len__(self):
        return len(self.times)


def geodesic_integrate(g: MetricField, p0, v0, t_end, dt,
                       record_every=1, energy_tol=1e-8) -> Trajectory:
    """Classical fixed-step RK4 on the geodesic equation with per-step halving
    whenever the step's metric-norm drift exceeds `energy_tol` (relative).

    Raises ChartDomainError if the trajectory leaves the chart domain and
    GeometryError on non-finite state.
    """
    if dt <= 0.0:
        raise GeometryError("geodesic_integrate: dt must be positive")
    chart = g.chart
    n = chart.dim
    x = chart.point_to_array(p0) if isinstance(p0, dict) else np.asarray(p0, dtype=float)
    v = np.asarray(v0, dtype=float)
    if v.shape != (n,) or not np.any(v):
        raise GeometryError("geodesic_integrate: v0 must be a nonzero tangent vector")

    gam_tape = g.christoffel().tape()
    g_tape = g.tape()

    def acc(state):
        xs, vs = state[:n], state[n:]
        gam = gam_tape.evaluate_at(xs).reshape(n, n, n)
        a = -np.einsum("kij,i,j->k", gam, vs, vs)
        return np.concatenate([vs, a])

    def rk4(state, h):
        k1 = acc(state)
        k2 = acc(state + 0.5 * h * k1)
        k3 = acc(state + 0.5 * h * k2)
        k4 = acc(state + h * k3)
        return state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    def energy(state):
        gv = g_tape.evaluate_at(state[:n]).reshape(n, n)
        return float(state[n:] @ gv @ state[n:])

    state = np.concatenate([x, v])
    e0 = energy(state)
    escale = max(abs(e0), 1e-30)
    nfull = int(math.floor(t_end / dt + 1e-12))
    steps = [dt] * nfull
    rem = t_end - nfull * dt
    if rem > 1e-12 * max(1.0, t_end):
        steps.append(rem)
    nsteps = len(steps)
    times = [0.0]
    xs = [state[:n].copy()]
    vs = [state[n:].copy()]
    drift = 0.0
    halvings = 0
    t = 0.0
    for step, dt_step in enumerate(steps):
        sub = 1
        h = dt_step
        prev = state
        for attempt in range(13):
            cand = prev
            ok = True
            for _ in range(sub):
                cand = rk4(cand, h)
                if not np.all(np.isfinite(cand)):
                    ok = False
                    break
            if not ok:
                sub *= 2
                h *= 0.5
                halvings += 1
                continue
            de = abs(energy(cand) - energy(prev)) / escale
            if de <= energy_tol or attempt == 12:
                state = cand
                break
            sub *= 2
            h *= 0.5
            halvings += 1
        if not np.all(np.isfinite(state)):
            raise GeometryError(f"geodesic state became non-finite at t={t}")
        t += dt_step
        try:
            chart.check_domain(chart.array_to_point(state[:n]))
        except ChartDomainError as exc:
            raise ChartDomainError(f"geodesic left chart domain at t={t}: {exc}") from exc
        drift = max(drift, abs(energy(state) - e0) / escale)
        if (step + 1) % record_every == 0 or step == nsteps - 1:
            times.append(t)
            xs.append(state[:n].copy())
            vs.append(state[n:].copy())
    return Trajectory(chart, np.array(times), np.array(xs), np.array(vs),
                      drift, halvings)
