"""Ricci-decomposition identities and theorem-level conclusions.

The left side of every identity comes from the ambient Ricci tensor
(geometry.ricci); the right side is assembled from *restricted* Ricci
tensors of induced metrics, Hessian/gradient terms, O'Neill-derivative
traces, shape-operator terms and normal-bundle curvature, none of which
touch the ambient Ricci.  Agreement is therefore evidence, not tautology.

Restricted Ricci tensors exist only for coordinate-aligned involutive
distributions: the induced metric is the coordinate submatrix with the
transverse coordinates frozen as parameters.  Anything else raises
UnsupportedDistribution.

Terms whose definition the source text leaves open (the pullback-derivative
of the shape operator, adjoint-map directions) follow the product-rule
interpretation documented on `TargetCalculus.nabla_tilde_S` and carry
``"interpreted": True`` in the result rows.
"""

from __future__ import annotations

import numpy as np

from .expr import Const, as_expr, differentiate
from .expr.tape import Tape
from .geometry import (
    Chart,
    GeometryError,
    MetricField,
    VectorField,
    covariant_derivative,
    divergence,
    gradient,
    hessian,
    lie_bracket,
    lie_derivative_metric,
)
from .rmap import MapGeometry, pushforward_field
from .soliton import (
    ClairautConfig,
    SolitonConfig,
    check_clairaut_source,
    check_clairaut_target,
    soliton_residual,
)
from .structure import (
    AlmostComplexStructure,
    anti_invariant_residual_source,
    anti_invariant_residual_target,
    kahler_residual,
    mu_frame_at,
    nu_frame_at,
)


class UnsupportedDistribution(GeometryError):
    pass


def coordinate_alignment(frame_rows_per_point, tol=1e-9):
    """Indices of the coordinate block spanned by the given frame vectors;
    raises UnsupportedDistribution if the span is not a coordinate block of
    matching dimension at every point."""
    support = set()
    k = None
    for rows in frame_rows_per_point:
        if k is None:
            k = len(rows)
        elif len(rows) != k:
            raise UnsupportedDistribution("distribution dimension changes across points")
        for v in rows:
            support.update(int(i) for i in np.flatnonzero(np.abs(v) > tol))
    if k is None or k == 0:
        return ()
    if len(support) != k:
        raise UnsupportedDistribution(
            f"distribution spans coordinates {sorted(support)} but has dimension {k}; "
            "not coordinate-aligned")
    return tuple(sorted(support))


class RestrictedGeometry:
    """Intrinsic geometry of the integral submanifolds of a coordinate-
    aligned distribution: the induced metric is the coordinate submatrix
    with the transverse coordinates frozen as parameters."""

    def __init__(self, parent: MetricField, indices, name=None):
        self.parent = parent
        self.indices = tuple(int(i) for i in indices)
        n = parent.chart.dim
        if (any(i < 0 or i >= n for i in self.indices)
                or len(set(self.indices)) != len(self.indices)):
            raise UnsupportedDistribution(f"bad coordinate index subset {indices}")
        if not self.indices:
            raise UnsupportedDistribution("empty distribution has no intrinsic Ricci")
        others = [i for i in range(n) if i not in self.indices]
        coords = [parent.chart.coords[i] for i in self.indices]
        params = [parent.chart.coords[i] for i in others]
        chart = Chart(name or f"{parent.chart.name}|{'.'.join(coords)}",
                      coords, params=params)
        self.metric = MetricField(chart, parent.mat[np.ix_(self.indices, self.indices)])
        self._perm = list(self.indices) + others

    def reorder(self, parent_points) -> np.ndarray:
        return np.atleast_2d(parent_points)[:, self._perm]

    def ricci_values(self, parent_points) -> np.ndarray:
        return self.metric.ricci().values(self.reorder(parent_points))

    def scalar_values(self, parent_points) -> np.ndarray:
        s = self.metric.scalar_curvature()
        tape = Tape([s], self.metric.chart.allvars)
        return tape.evaluate(self.reorder(parent_points))[:, 0]

    def restrict_vector(self, v, tol=1e-8):
        """Components of v in the distribution block; errors if v sticks out."""
        v = np.asarray(v, dtype=float)
        out_block = [i for i in range(len(v)) if i not in self.indices]
        leak = float(np.max(np.abs(v[out_block]))) if out_block else 0.0
        if leak > tol * max(1.0, float(np.max(np.abs(v)))):
            raise UnsupportedDistribution(
                f"vector leaves the restricted block (leak {leak:.3e})")
        return v[list(self.indices)]


# -- symbolic field calculus on the target chart ------------------------------------

class TargetCalculus:
    """Named symbolic vector-field operations on the target chart, memoized
    by field name; provides the shape-operator and normal-curvature pieces
    of the target-side identities."""

    def __init__(self, mg: MapGeometry, Jp: AlmostComplexStructure | None):
        self.mg = mg
        self.gN = mg.gN
        self.Jp = Jp
        self.PR, self.PP = mg.target_projectors()
        self._memo = {}

    def field(self, name, comps):
        return VectorField(self.gN.chart, comps, name=name)

    def _apply_matrix(self, tag, M, W: VectorField) -> VectorField:
        key = (tag, W.name)
        if key not in self._memo:
            n = self.gN.chart.dim
            comps = []
            for i in range(n):
                acc = Const(0.0)
                for j in range(n):
                    acc = acc + M[i, j] * W.comps[j]
                comps.append(self.gN._simp(acc))
            self._memo[key] = self.field(f"{tag}({W.name})", comps)
        return self._memo[key]

    def J(self, W):
        if self.Jp is None:
            raise UnsupportedDistribution("no target almost complex structure declared")
        return self._apply_matrix("J'", self.Jp.mat, W)

    def proj_range(self, W):
        return self._apply_matrix("Pr", self.PR, W)

    def proj_perp(self, W):
        return self._apply_matrix("Pp", self.PP, W)

    def cov(self, W, Z) -> VectorField:
        key = ("cov", W.name, Z.name)
        if key not in self._memo:
            out = covariant_derivative(self.gN, W, Z)
            out.name = f"cov({W.name},{Z.name})"
            self._memo[key] = out
        return self._memo[key]

    def nperp(self, W, D) -> VectorField:
        """Normal connection: P_perp(nabla_W D)."""
        return self.proj_perp(self.cov(W, D))

    def shape(self, D, V) -> VectorField:
        """S_D V = -P_range(nabla_V D) for normal D and range V."""
        key = ("S", D.name, V.name)
        if key not in self._memo:
            pr = self.proj_range(self.cov(V, D))
            comps = [self.gN._simp(Const(-1.0) * c) for c in pr.comps]
            self._memo[key] = self.field(f"S[{D.name}]({V.name})", comps)
        return self._memo[key]

    def nabla_tilde_S(self, W, D, V) -> VectorField:
        """(nabla~_W S)_D V by the product rule with the pullback connection:
        P_range nabla_W (S_D V) - S_{P_perp nabla_W D} V
        - S_D (P_range nabla_W V).  Interpreted term."""
        key = ("ntS", W.name, D.name, V.name)
        if key not in self._memo:
            a = self.proj_range(self.cov(W, self.shape(D, V)))
            b = self.shape(self.nperp(W, D), V)
            c = self.shape(D, self.proj_range(self.cov(W, V)))
            comps = [self.gN._simp(a.comps[i] - b.comps[i] - c.comps[i])
                     for i in range(self.gN.chart.dim)]
            self._memo[key] = self.field(f"ntS({W.name};{D.name};{V.name})", comps)
        return self._memo[key]

    def r_perp(self, W1, W2, D) -> VectorField:
        """Normal-bundle curvature R^{F perp}(W1, W2) D."""
        key = ("rperp", W1.name, W2.name, D.name)
        if key not in self._memo:
            a = self.nperp(W1, self.nperp(W2, D))
            b = self.nperp(W2, self.nperp(W1, D))
            br = lie_bracket(self.gN.chart, W1, W2)
            br.name = f"[{W1.name},{W2.name}]"
            c = self.nperp(br, D)
            comps = [self.gN._simp(a.comps[i] - b.comps[i] - c.comps[i])
                     for i in range(self.gN.chart.dim)]
            self._memo[key] = self.field(f"Rp({W1.name},{W2.name}){D.name}", comps)
        return self._memo[key]


# -- case ------------------------------------------------------------------------------

class PropositionCase:
    """Full configuration for identity checks; ingredients are built lazily
    and cached write-once."""

    def __init__(self, mg: MapGeometry, J=None, Jp=None, f=None, gfun=None,
                 eta: VectorField | None = None, theta: VectorField | None = None,
                 alpha=1.0, lam=0.0):
        self.mg = mg
        self.J = J
        self.Jp = Jp
        self.f = as_expr(f) if f is not None else None
        self.gfun = as_expr(gfun) if gfun is not None else None
        self.eta = eta
        self.theta = theta
        self.alpha = float(alpha)
        self.lam = lam
        self._cache = {}

    def _get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    def ric_M(self):
        return self._get("ricM", lambda: self.mg.gM.ricci())

    def ric_N(self):
        return self._get("ricN", lambda: self.mg.gN.ricci())

    def hess_f(self):
        if self.f is None:
            raise UnsupportedDistribution("case has no source dilation f")
        return self._get("hessf", lambda: hessian(self.mg.gM, self.f))

    def grad_f(self):
        return self._get("gradf", lambda: gradient(self.mg.gM, self.f))

    def div_grad_f(self):
        return self._get("divgradf", lambda: divergence(self.mg.gM, self.grad_f()))

    def grad_g(self):
        if self.gfun is None:
            raise UnsupportedDistribution("case has no target dilation g")
        return self._get("gradg", lambda: gradient(self.mg.gN, self.gfun))

    def hess_g(self):
        return self._get("hessg", lambda: hessian(self.mg.gN, self.gfun))

    def ker_rg(self, points) -> RestrictedGeometry:
        return self._get("ker_rg", lambda: RestrictedGeometry(
            self.mg.gM, coordinate_alignment(
                [self.mg.split_at(x).vertical for x in np.atleast_2d(points)])))

    def range_rg(self, points) -> RestrictedGeometry:
        return self._get("range_rg", lambda: RestrictedGeometry(
            self.mg.gN, coordinate_alignment(
                [self.mg.split_at(x).range for x in np.atleast_2d(points)])))

    def perp_rg(self, points) -> RestrictedGeometry:
        return self._get("perp_rg", lambda: RestrictedGeometry(
            self.mg.gN, coordinate_alignment(
                [self.mg.split_at(x).normal for x in np.atleast_2d(points)])))

    def tc(self) -> TargetCalculus:
        return self._get("tc", lambda: TargetCalculus(self.mg, self.Jp))

    def dims(self, x):
        sp = self.mg.split_at(x)
        return {"m": self.mg.gM.chart.dim, "n": self.mg.gN.chart.dim,
                "r0": len(sp.vertical), "h": len(sp.horizontal),
                "rank": len(sp.range), "n1": len(sp.normal)}

    # ---- hypothesis gates ----
    def gates(self, points, which, tol=1e-7):
        pts = np.atleast_2d(points)
        return {name: self._gate(name, pts, tol) for name in which}

    def _gate(self, name, pts, tol):
        mg = self.mg
        if name.endswith("_source") and name != "clairaut_source" and self.J is None:
            return (False, "no source structure declared")
        if name.endswith("_target") and name != "clairaut_target" and self.Jp is None:
            return (False, "no target structure declared")
        if name == "kahler_source":
            res, _ = kahler_residual(mg.gM, self.J, pts)
            return (res <= tol, res)
        if name == "kahler_target":
            res, _ = kahler_residual(mg.gN, self.Jp, mg.F.values(pts))
            return (res <= tol, res)
        if name == "anti_invariant_source":
            res, _, degen = anti_invariant_residual_source(mg, self.J, pts)
            return (res <= tol and not degen, res)
        if name == "anti_invariant_target":
            res, _, degen = anti_invariant_residual_target(mg, self.Jp, pts)
            return (res <= tol and not degen, res)
        if name == "clairaut_source":
            if self.f is None:
                return (False, "no source dilation declared")
            res, _, _ = check_clairaut_source(ClairautConfig(mg, "source", self.f), pts)
            return (res <= tol, res)
        if name == "clairaut_target":
            if self.gfun is None:
                return (False, "no target dilation declared")
            res, umb, _ = check_clairaut_target(ClairautConfig(mg, "target", self.gfun), pts)
            return (max(res, umb) <= tol, max(res, umb))
        if name == "lagrangian_source":
            dims = [mu_frame_at(mg, self.J, x).shape[0] for x in pts[:5]]
            return (all(d == 0 for d in dims), max(dims))
        if name == "lagrangian_target":
            dims = [nu_frame_at(mg, self.Jp, x).shape[0] for x in pts[:5]]
            return (all(d == 0 for d in dims), max(dims))
        if name == "totally_geodesic_map":
            S = mg.second_fundamental_form()
            worst = 0.0
            for x in pts:
                sp = mg.split_at(x)
                E = np.vstack([sp.vertical, sp.horizontal])
                GN = mg.gN.value_at(sp.y)
                vals = np.einsum("aij,ki,lj->kla", S.value_at(x), E, E)
                worst = max(worst, float(np.sqrt(np.max(np.abs(
                    np.einsum("kla,ab,klb->kl", vals, GN, vals))))))
            return (worst <= tol, worst)
        if name == "tg_horizontal":
            A = mg.oneill_A()
            worst = 0.0
            for x in pts:
                sp = mg.split_at(x)
                H = sp.horizontal
                GM = mg.gM.value_at(x)
                vals = np.einsum("kij,ai,bj->abk", A.value_at(x), H, H)
                worst = max(worst, float(np.sqrt(np.max(np.abs(
                    np.einsum("abk,kl,abl->ab", vals, GM, vals))))))
            return (worst <= tol, worst)
        if name == "tg_normal":
            tc = self.tc()
            ypts = mg.F.values(pts)
            worst = 0.0
            for ek in mg.frames.normal:
                for el in mg.frames.normal:
                    fld = tc.proj_range(tc.cov(ek, el))
                    worst = max(worst, float(np.max(np.abs(fld.values(ypts)))))
            return (worst <= tol, worst)
        if name == "vertical_potential":
            return self._potential_gate(pts, vertical=True, tol=tol)
        if name == "horizontal_potential":
            return self._potential_gate(pts, vertical=False, tol=tol)
        if name == "source_soliton":
            if self.eta is not None:
                cfg = SolitonConfig(mg.gM, xi=self.eta, alpha=self.alpha, lam=self.lam)
            elif self.f is not None:
                cfg = SolitonConfig(mg.gM, f=self.f, alpha=self.alpha, lam=self.lam)
            else:
                return (False, "no potential declared")
            res, _, _ = soliton_residual(cfg, points=pts)
            return (res <= tol, res)
        if name == "kernel_nontrivial":
            d = self.dims(pts[0])
            return (d["r0"] > 0, d["r0"])
        raise GeometryError(f"unknown gate {name!r}")

    def _potential_gate(self, pts, vertical, tol):
        if self.eta is None:
            return (False, "no potential field declared")
        worst = 0.0
        for x in pts:
            sp = self.mg.split_at(x)
            GM = self.mg.gM.value_at(x)
            v = self.eta.value_at(x)
            frame = sp.horizontal if vertical else sp.vertical
            if len(frame) == 0:
                continue
            worst = max(worst, float(np.max(np.abs(
                np.einsum("ai,ij,j->a", frame, GM, v)))))
        return (worst <= tol, worst)


# -- shared helpers ----------------------------------------------------------------------

def _bc_split(J, X, sp, GM):
    """JX = BX + CX with BX the vertical projection; CX is the remainder."""
    JX = J @ X
    if len(sp.vertical):
        B = np.einsum("ai,ij,j,ak->k", sp.vertical, GM, JX, sp.vertical)
    else:
        B = np.zeros_like(JX)
    return JX, B, JX - B


def _divA_vertical_trace(NAv, u_rows, GM, X, Y):
    """sum_j g((nabla_{u_j} A)(X, Y), u_j)."""
    if len(u_rows) == 0:
        return 0.0
    return float(np.einsum("klij,al,i,j,km,am->", NAv, u_rows, X, Y, GM, u_rows))


def _identity_result(ident, rows, gates, interpreted=False):
    if not rows:
        return {"id": ident, "gates": tuple(gates), "n_pairs": 0,
                "max_residual": 0.0, "worst": None, "rows": [],
                "vacuous": True, "interpreted": interpreted}
    worst = max(rows, key=lambda r: r["residual"])
    return {"id": ident, "gates": tuple(gates), "n_pairs": len(rows),
            "max_residual": worst["residual"], "worst": worst, "rows": rows,
            "vacuous": False, "interpreted": interpreted}


# -- source-side identities (Kaehler source, Clairaut with r~ = e^f) ---------------------

def identity_ric_uv(case: PropositionCase, points):
    """Ric(U,V) = Ric^range(F_*JU, F_*JV) + r Hess f(JU, JV) - divA(JU, JV)
    over vertical frame pairs."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg = case.range_rg(pts)
    ricM, Hf, NA = case.ric_M(), case.hess_f(), mg.nabla_oneill("A")
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        r0 = len(sp.vertical)
        GM = mg.gM.value_at(x)
        ricv, Hv, NAv = ricM.value_at(x), Hf.value_at(x), NA.value_at(x)
        ric_rng = rg.ricci_values(x[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        for a in range(r0):
            for b in range(a, r0):
                U, V = sp.vertical[a], sp.vertical[b]
                JU, JV = Jx @ U, Jx @ V
                lhs = float(U @ ricv @ V)
                t_rng = float(rg.restrict_vector(Jac @ JU) @ ric_rng
                              @ rg.restrict_vector(Jac @ JV))
                t_hess = r0 * float(JU @ Hv @ JV)
                t_div = _divA_vertical_trace(NAv, sp.vertical, GM, JU, JV)
                rhs = t_rng + t_hess - t_div
                rows.append({"point": pi, "pair": (f"u{a+1}", f"u{b+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_range": t_rng, "r_hess_f": t_hess,
                                       "div_A": t_div}})
    return _identity_result("ric_uv", rows,
                            ("kahler_source", "anti_invariant_source", "clairaut_source"))


def identity_ric_ux(case: PropositionCase, points):
    """Mixed vertical/horizontal Ricci identity."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg = case.range_rg(pts)
    ricM, Hf, NA = case.ric_M(), case.hess_f(), mg.nabla_oneill("A")
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        r0 = len(sp.vertical)
        GM = mg.gM.value_at(x)
        ricv, Hv, NAv = ricM.value_at(x), Hf.value_at(x), NA.value_at(x)
        ric_rng = rg.ricci_values(x[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        H = sp.horizontal
        for a in range(r0):
            U = sp.vertical[a]
            JU = Jx @ U
            for i in range(len(H)):
                X = H[i]
                _, BX, CX = _bc_split(Jx, X, sp, GM)
                lhs = float(U @ ricv @ X)
                t1 = -(r0 + 1) * float(BX @ Hv @ JU)
                t2 = _divA_vertical_trace(NAv, sp.vertical, GM, JU, CX)
                t3 = -r0 * float(JU @ Hv @ CX)
                t4 = float(rg.restrict_vector(Jac @ JU) @ ric_rng
                           @ rg.restrict_vector(Jac @ CX))
                t5 = float(np.einsum("klij,cl,ci,j,km,m->", NAv, H, H, JU, GM, BX))
                rhs = t1 + t2 + t3 + t4 + t5
                rows.append({"point": pi, "pair": (f"u{a+1}", f"X{i+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"hess_BX_JU": t1, "div_A_JU_CX": t2,
                                       "r_hess_JU_CX": t3, "ric_range": t4,
                                       "nablaA_frame_trace": t5}})
    return _identity_result("ric_ux", rows,
                            ("kahler_source", "anti_invariant_source", "clairaut_source"))


def identity_ric_xy(case: PropositionCase, points):
    """Horizontal/horizontal Ricci identity (fourteen right-side terms)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg_rng = case.range_rg(pts)
    rg_ker = case.ker_rg(pts)
    ricM, Hf = case.ric_M(), case.hess_f()
    gradf = case.grad_f()
    aux_tape = Tape([case.div_grad_f()]
                    + [differentiate(case.f, c) for c in mg.gM.chart.coords],
                    mg.gM.chart.allvars)
    A, NA = mg.oneill_A(), mg.nabla_oneill("A")
    SFF = mg.second_fundamental_form()
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        r0 = len(sp.vertical)
        GM = mg.gM.value_at(x)
        GN = mg.gN.value_at(sp.y)
        ricv, Hv = ricM.value_at(x), Hf.value_at(x)
        Av, NAv, Sv = A.value_at(x), NA.value_at(x), SFF.value_at(x)
        gf = gradf.value_at(x)
        aux = aux_tape.evaluate_at(x)
        divv, dfv = float(aux[0]), aux[1:]
        norm2 = float(gf @ GM @ gf)
        ric_rng = rg_rng.ricci_values(x[None, :])[0]
        ric_ker = rg_ker.ricci_values(x[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        H, V = sp.horizontal, sp.vertical
        tau = np.einsum("aij,ki,kj->a", Sv, H, H)
        for i in range(len(H)):
            for j in range(i, len(H)):
                X, Y = H[i], H[j]
                _, BX, CX = _bc_split(Jx, X, sp, GM)
                _, BY, CY = _bc_split(Jx, Y, sp, GM)
                lhs = float(X @ ricv @ Y)
                t1 = float(rg_ker.restrict_vector(BX) @ ric_ker
                           @ rg_ker.restrict_vector(BY))
                t2 = -(r0 * norm2 + divv) * float(BX @ GM @ BY)
                AX = np.einsum("kij,li,j->lk", Av, H, BX)
                AY = np.einsum("kij,li,j->lk", Av, H, BY)
                t3 = float(np.einsum("lk,km,lm->", AX, GM, AY))
                t4 = -r0 * float(CX @ Hv @ CY)
                t5 = -r0 * float(CX @ dfv) * float(CY @ dfv)
                if len(V):
                    ACXu = np.einsum("kij,i,aj->ak", Av, CX, V)
                    ACYu = np.einsum("kij,i,aj->ak", Av, CY, V)
                    t6 = float(np.einsum("ak,km,am->", ACXu, GM, ACYu))
                else:
                    t6 = 0.0
                t7 = _divA_vertical_trace(NAv, V, GM, CX, CY)
                t8 = float(rg_rng.restrict_vector(Jac @ CX) @ ric_rng
                           @ rg_rng.restrict_vector(Jac @ CY))
                s1 = np.einsum("aij,li,j->la", Sv, H, CY)
                s2 = np.einsum("aij,i,lj->la", Sv, CX, H)
                t9 = -float(np.einsum("la,ab,lb->", s1, GN, s2))
                sCC = np.einsum("aij,i,j->a", Sv, CX, CY)
                t10 = float(sCC @ GN @ tau)
                t11 = -(r0 + 1) * float(BX @ Hv @ CY)
                t12 = -float(np.einsum("klij,al,i,aj,km,m->", NAv, H, CY, H, GM, BX))
                t13 = -(r0 + 1) * float(BY @ Hv @ CX)
                t14 = -float(np.einsum("klij,al,i,aj,km,m->", NAv, H, CX, H, GM, BY))
                rhs = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10 + t11 + t12 + t13 + t14
                rows.append({"point": pi, "pair": (f"X{i+1}", f"X{j+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_ker": t1, "warp_trace": t2, "A_A": t3,
                                       "r_hess_CC": t4, "r_CXf_CYf": t5, "A_mu": t6,
                                       "div_A_CC": t7, "ric_range": t8, "sff_sff": t9,
                                       "sff_tension": t10, "hess_BX_CY": t11,
                                       "nablaA_CY": t12, "hess_BY_CX": t13,
                                       "nablaA_CX": t14}})
    return _identity_result("ric_xy", rows,
                            ("kahler_source", "anti_invariant_source", "clairaut_source"))


def identity_lric_uv(case, points):
    """Lagrangian reduction: Ric(U,V) = Ric^range(F_*JU, F_*JV)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg = case.range_rg(pts)
    ricM = case.ric_M()
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        ricv = ricM.value_at(x)
        ric_rng = rg.ricci_values(x[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        for a in range(len(sp.vertical)):
            for b in range(a, len(sp.vertical)):
                U, V = sp.vertical[a], sp.vertical[b]
                lhs = float(U @ ricv @ V)
                rhs = float(rg.restrict_vector(Jac @ (Jx @ U)) @ ric_rng
                            @ rg.restrict_vector(Jac @ (Jx @ V)))
                rows.append({"point": pi, "pair": (f"u{a+1}", f"u{b+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_range": rhs}})
    return _identity_result("lric_uv", rows,
                            ("lagrangian_source", "anti_invariant_source",
                             "clairaut_source", "kahler_source"))


def identity_lric_ux(case, points):
    """Lagrangian reduction: Ric(U, X) = 0."""
    mg = case.mg
    pts = np.atleast_2d(points)
    ricM = case.ric_M()
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        ricv = ricM.value_at(x)
        for a in range(len(sp.vertical)):
            for i in range(len(sp.horizontal)):
                lhs = float(sp.vertical[a] @ ricv @ sp.horizontal[i])
                rows.append({"point": pi, "pair": (f"u{a+1}", f"X{i+1}"),
                             "lhs": lhs, "rhs": 0.0, "residual": abs(lhs),
                             "terms": {}})
    return _identity_result("lric_ux", rows,
                            ("lagrangian_source", "anti_invariant_source",
                             "clairaut_source", "kahler_source"))


def identity_lric_xy(case, points):
    """Lagrangian reduction: Ric(X, Y) = Ric^ker(BX, BY)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg_ker = case.ker_rg(pts)
    ricM = case.ric_M()
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        GM = mg.gM.value_at(x)
        ricv = ricM.value_at(x)
        ric_ker = rg_ker.ricci_values(x[None, :])[0]
        Jx = case.J.value_at(x)
        H = sp.horizontal
        for i in range(len(H)):
            for j in range(i, len(H)):
                _, BX, _ = _bc_split(Jx, H[i], sp, GM)
                _, BY, _ = _bc_split(Jx, H[j], sp, GM)
                lhs = float(H[i] @ ricv @ H[j])
                rhs = float(rg_ker.restrict_vector(BX) @ ric_ker
                            @ rg_ker.restrict_vector(BY))
                rows.append({"point": pi, "pair": (f"X{i+1}", f"X{j+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_ker": rhs}})
    return _identity_result("lric_xy", rows,
                            ("lagrangian_source", "anti_invariant_source",
                             "clairaut_source", "kahler_source"))


def identity_cor_ric_xy(case, points):
    """Totally geodesic corollary: Ric(X,Y) = Ric^ker(BX,BY)
    - (r |grad f|^2 + div grad f) g(BX,BY) - r Hess f(CX,CY)
    + Ric^range(F_*CX, F_*CY) - r CX(f) CY(f)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    rg_rng = case.range_rg(pts)
    rg_ker = case.ker_rg(pts)
    ricM, Hf = case.ric_M(), case.hess_f()
    gradf = case.grad_f()
    aux_tape = Tape([case.div_grad_f()]
                    + [differentiate(case.f, c) for c in mg.gM.chart.coords],
                    mg.gM.chart.allvars)
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        r0 = len(sp.vertical)
        GM = mg.gM.value_at(x)
        ricv, Hv = ricM.value_at(x), Hf.value_at(x)
        gf = gradf.value_at(x)
        aux = aux_tape.evaluate_at(x)
        divv, dfv = float(aux[0]), aux[1:]
        norm2 = float(gf @ GM @ gf)
        ric_rng = rg_rng.ricci_values(x[None, :])[0]
        ric_ker = rg_ker.ricci_values(x[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        H = sp.horizontal
        for i in range(len(H)):
            for j in range(i, len(H)):
                _, BX, CX = _bc_split(Jx, H[i], sp, GM)
                _, BY, CY = _bc_split(Jx, H[j], sp, GM)
                lhs = float(H[i] @ ricv @ H[j])
                t1 = float(rg_ker.restrict_vector(BX) @ ric_ker
                           @ rg_ker.restrict_vector(BY))
                t2 = -(r0 * norm2 + divv) * float(BX @ GM @ BY)
                t3 = -r0 * float(CX @ Hv @ CY)
                t4 = float(rg_rng.restrict_vector(Jac @ CX) @ ric_rng
                           @ rg_rng.restrict_vector(Jac @ CY))
                t5 = -r0 * float(CX @ dfv) * float(CY @ dfv)
                rhs = t1 + t2 + t3 + t4 + t5
                rows.append({"point": pi, "pair": (f"X{i+1}", f"X{j+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_ker": t1, "warp_trace": t2,
                                       "r_hess_CC": t3, "ric_range": t4,
                                       "r_CXf_CYf": t5}})
    return _identity_result("cor_ric_xy", rows,
                            ("totally_geodesic_map", "tg_horizontal",
                             "anti_invariant_source", "clairaut_source",
                             "kahler_source"))


# -- target-side identities (Kaehler target, Clairaut with s~ = e^g) ---------------------

def _target_frames(case):
    tc = case.tc()
    mg = case.mg
    Fj = list(mg.frames.range)
    Ek = list(mg.frames.normal)
    return tc, Fj, Ek


def identity_ric_fxfy(case: PropositionCase, points):
    """Ric(F_*X, F_*Y) = Ric^perp(J'F_*X, J'F_*Y)
    + (m - r) g_N(grad g, nperp_{J'F_*X} J'F_*Y) over range pairs."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    rg_perp = case.perp_rg(pts)
    ricN = case.ric_N()
    gradg = case.grad_g()
    d = case.dims(pts[0])
    mr = d["m"] - d["r0"]
    rows = []
    JF = [tc.J(f) for f in Fj]
    nperp_fields = {(a, b): tc.nperp(JF[a], JF[b])
                    for a in range(len(Fj)) for b in range(len(Fj))}
    for pi, x in enumerate(pts):
        # all target quantities are evaluated at y = F(x)
        y = mg.F.value_at(x)
        GN = mg.gN.value_at(y)
        ricv = ricN.value_at(y)
        ric_perp = rg_perp.ricci_values(y[None, :])[0]
        gg = gradg.value_at(y)
        for a in range(len(Fj)):
            Fa = Fj[a].value_at(y)
            JFa = JF[a].value_at(y)
            for b in range(a, len(Fj)):
                Fb = Fj[b].value_at(y)
                JFb = JF[b].value_at(y)
                lhs = float(Fa @ ricv @ Fb)
                t1 = float(rg_perp.restrict_vector(JFa) @ ric_perp
                           @ rg_perp.restrict_vector(JFb))
                np_ab = nperp_fields[(a, b)].value_at(y)
                t2 = mr * float(gg @ GN @ np_ab)
                rhs = t1 + t2
                rows.append({"point": pi, "pair": (f"F{a+1}", f"F{b+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_perp": t1, "grad_nperp": t2}})
    return _identity_result("ric_fxfy", rows,
                            ("kahler_target", "anti_invariant_target",
                             "clairaut_target", "tg_normal"))


def identity_ric_fxe(case: PropositionCase, points):
    """Mixed range/normal Ricci identity with shape-derivative terms."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    rg_perp = case.perp_rg(pts)
    ricN = case.ric_N()
    gradg = case.grad_g()
    d = case.dims(pts[0])
    mr = d["m"] - d["r0"]
    JF = [tc.J(f) for f in Fj]
    PE = [tc.proj_range(tc.J(e)) for e in Ek]
    QE = [tc.proj_perp(tc.J(e)) for e in Ek]
    rows = []
    for pi, x in enumerate(pts):
        y = mg.F.value_at(x)
        GN = mg.gN.value_at(y)
        ricv = ricN.value_at(y)
        ric_perp = rg_perp.ricci_values(y[None, :])[0]
        gg = gradg.value_at(y)
        for a in range(len(Fj)):
            Fa = Fj[a].value_at(y)
            JFa_v = JF[a].value_at(y)
            for k in range(len(Ek)):
                E = Ek[k].value_at(y)
                lhs = float(Fa @ ricv @ E)
                t1 = float(rg_perp.restrict_vector(JFa_v) @ ric_perp
                           @ rg_perp.restrict_vector(QE[k].value_at(y)))
                t2 = 0.0
                t3 = 0.0
                for j in range(len(Fj)):
                    fjv = Fj[j].value_at(y)
                    t2 += float(tc.nabla_tilde_S(PE[k], JF[a], Fj[j]).value_at(y)
                                @ GN @ fjv)
                    t3 -= float(tc.nabla_tilde_S(Fj[j], JF[a], PE[k]).value_at(y)
                                @ GN @ fjv)
                t4 = mr * float(gg @ GN @ tc.nperp(QE[k], JF[a]).value_at(y))
                t5 = 0.0
                for kk in range(len(Ek)):
                    ekv = Ek[kk].value_at(y)
                    t5 -= float(tc.r_perp(PE[k], Ek[kk], JF[a]).value_at(y)
                                @ GN @ ekv)
                rhs = t1 + t2 + t3 + t4 + t5
                rows.append({"point": pi, "pair": (f"F{a+1}", f"e{k+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_perp_Q": t1, "ntS_PE": t2,
                                       "ntS_Fj": t3, "grad_nperp": t4,
                                       "r_perp": t5}})
    return _identity_result("ric_fxe", rows,
                            ("kahler_target", "anti_invariant_target",
                             "clairaut_target", "tg_normal"), interpreted=True)


def identity_ric_de(case: PropositionCase, points):
    """Normal/normal Ricci identity with shape-derivative and normal-
    curvature terms."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    rg_rng = case.range_rg(pts)
    rg_perp = case.perp_rg(pts)
    ricN = case.ric_N()
    gradg = case.grad_g()
    hessg = case.hess_g()
    dg_tape = Tape([differentiate(case.gfun, c) for c in mg.gN.chart.coords],
                   mg.gN.chart.allvars)
    d = case.dims(pts[0])
    mr = d["m"] - d["r0"]
    PD = [tc.proj_range(tc.J(e)) for e in Ek]
    QD = [tc.proj_perp(tc.J(e)) for e in Ek]
    rows = []
    for pi, x in enumerate(pts):
        y = mg.F.value_at(x)
        GN = mg.gN.value_at(y)
        ricv = ricN.value_at(y)
        ric_rng = rg_rng.ricci_values(y[None, :])[0]
        ric_perp = rg_perp.ricci_values(y[None, :])[0]
        gg = gradg.value_at(y)
        Hg = hessg.value_at(y)
        dgv = dg_tape.evaluate_at(y)
        norm2 = float(gg @ GN @ gg)
        Ekv = [e.value_at(y) for e in Ek]
        hess_trace = sum(float(e @ Hg @ e) for e in Ekv)
        n1 = len(Ek)
        for k in range(len(Ek)):
            for l in range(k, len(Ek)):
                D, E = Ekv[k], Ekv[l]
                PDv, QDv = PD[k].value_at(y), QD[k].value_at(y)
                PEv, QEv = PD[l].value_at(y), QD[l].value_at(y)
                lhs = float(D @ ricv @ E)
                t1 = float(rg_rng.restrict_vector(PDv) @ ric_rng
                           @ rg_rng.restrict_vector(PEv))
                t2 = -float(PDv @ GN @ PEv) * (n1 * norm2 + hess_trace)
                t3 = t4 = t6 = t7 = 0.0
                for j in range(len(Fj)):
                    fjv = Fj[j].value_at(y)
                    t3 += float(tc.nabla_tilde_S(PD[k], QD[l], Fj[j]).value_at(y)
                                @ GN @ fjv)
                    t4 -= float(tc.nabla_tilde_S(Fj[j], QD[l], PD[k]).value_at(y)
                                @ GN @ fjv)
                    t6 += float(tc.nabla_tilde_S(PD[l], QD[k], Fj[j]).value_at(y)
                                @ GN @ fjv)
                    t7 -= float(tc.nabla_tilde_S(Fj[j], QD[k], PD[l]).value_at(y)
                                @ GN @ fjv)
                t5 = t8 = 0.0
                for kk in range(len(Ek)):
                    ekv = Ekv[kk]
                    t5 -= float(tc.r_perp(PD[k], Ek[kk], QD[l]).value_at(y)
                                @ GN @ ekv)
                    t8 -= float(tc.r_perp(PD[l], Ek[kk], QD[k]).value_at(y)
                                @ GN @ ekv)
                t9 = float(rg_perp.restrict_vector(QDv) @ ric_perp
                           @ rg_perp.restrict_vector(QEv))
                t10 = -mr * (float(QDv @ dgv) * float(QEv @ dgv)
                             + float(QDv @ Hg @ QEv))
                rhs = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10
                rows.append({"point": pi, "pair": (f"e{k+1}", f"e{l+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_range_PP": t1, "warp_PP": t2,
                                       "ntS_PD_QE": t3, "ntS_Fj_QE": t4,
                                       "rperp_PD_QE": t5, "ntS_PE_QD": t6,
                                       "ntS_Fj_QD": t7, "rperp_PE_QD": t8,
                                       "ric_perp_QQ": t9, "warp_QQ": t10}})
    return _identity_result("ric_de", rows,
                            ("kahler_target", "anti_invariant_target",
                             "clairaut_target", "tg_normal"), interpreted=True)


def identity_lric_fxfy(case, points):
    """Lagrangian reduction: Ric(F_*X, F_*Y) = Ric^perp(J'F_*X, J'F_*Y)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    rg_perp = case.perp_rg(pts)
    ricN = case.ric_N()
    JF = [tc.J(f) for f in Fj]
    rows = []
    for pi, x in enumerate(pts):
        y = mg.F.value_at(x)
        ricv = ricN.value_at(y)
        ric_perp = rg_perp.ricci_values(y[None, :])[0]
        for a in range(len(Fj)):
            for b in range(a, len(Fj)):
                lhs = float(Fj[a].value_at(y) @ ricv @ Fj[b].value_at(y))
                rhs = float(rg_perp.restrict_vector(JF[a].value_at(y)) @ ric_perp
                            @ rg_perp.restrict_vector(JF[b].value_at(y)))
                rows.append({"point": pi, "pair": (f"F{a+1}", f"F{b+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_perp": rhs}})
    return _identity_result("lric_fxfy", rows,
                            ("lagrangian_target", "anti_invariant_target",
                             "clairaut_target", "kahler_target"))


def identity_lric_fxe(case, points):
    """Lagrangian reduction of the mixed identity: only the interpreted
    shape-derivative and normal-curvature terms survive."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    ricN = case.ric_N()
    JF = [tc.J(f) for f in Fj]
    PE = [tc.proj_range(tc.J(e)) for e in Ek]
    rows = []
    for pi, x in enumerate(pts):
        y = mg.F.value_at(x)
        GN = mg.gN.value_at(y)
        ricv = ricN.value_at(y)
        for a in range(len(Fj)):
            Fa = Fj[a].value_at(y)
            for k in range(len(Ek)):
                E = Ek[k].value_at(y)
                lhs = float(Fa @ ricv @ E)
                t2 = t3 = 0.0
                for j in range(len(Fj)):
                    fjv = Fj[j].value_at(y)
                    t2 += float(tc.nabla_tilde_S(PE[k], JF[a], Fj[j]).value_at(y)
                                @ GN @ fjv)
                    t3 -= float(tc.nabla_tilde_S(Fj[j], JF[a], PE[k]).value_at(y)
                                @ GN @ fjv)
                t5 = 0.0
                for kk in range(len(Ek)):
                    t5 -= float(tc.r_perp(PE[k], Ek[kk], JF[a]).value_at(y)
                                @ GN @ Ek[kk].value_at(y))
                rhs = t2 + t3 + t5
                rows.append({"point": pi, "pair": (f"F{a+1}", f"e{k+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ntS_PE": t2, "ntS_Fj": t3, "r_perp": t5}})
    return _identity_result("lric_fxe", rows,
                            ("lagrangian_target", "anti_invariant_target",
                             "clairaut_target", "kahler_target"), interpreted=True)


def identity_lric_de(case, points):
    """Lagrangian reduction: Ric(D, E) = Ric^range(PD, PE)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    tc, Fj, Ek = _target_frames(case)
    rg_rng = case.range_rg(pts)
    ricN = case.ric_N()
    PD = [tc.proj_range(tc.J(e)) for e in Ek]
    rows = []
    for pi, x in enumerate(pts):
        y = mg.F.value_at(x)
        ricv = ricN.value_at(y)
        ric_rng = rg_rng.ricci_values(y[None, :])[0]
        for k in range(len(Ek)):
            for l in range(k, len(Ek)):
                lhs = float(Ek[k].value_at(y) @ ricv @ Ek[l].value_at(y))
                rhs = float(rg_rng.restrict_vector(PD[k].value_at(y)) @ ric_rng
                            @ rg_rng.restrict_vector(PD[l].value_at(y)))
                rows.append({"point": pi, "pair": (f"e{k+1}", f"e{l+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"ric_range_PP": rhs}})
    return _identity_result("lric_de", rows,
                            ("lagrangian_target", "anti_invariant_target",
                             "clairaut_target", "kahler_target"))


IDENTITIES = {
    "ric_uv": identity_ric_uv,
    "ric_ux": identity_ric_ux,
    "ric_xy": identity_ric_xy,
    "lric_uv": identity_lric_uv,
    "lric_ux": identity_lric_ux,
    "lric_xy": identity_lric_xy,
    "cor_ric_xy": identity_cor_ric_xy,
    "ric_fxfy": identity_ric_fxfy,
    "ric_fxe": identity_ric_fxe,
    "ric_de": identity_ric_de,
    "lric_fxfy": identity_lric_fxfy,
    "lric_fxe": identity_lric_fxe,
    "lric_de": identity_lric_de,
}


def verify_identity(case: PropositionCase, ident: str, points):
    """Dispatch an identity check; returns the per-pair rows with a term
    breakdown, the max residual, and the gate names to evaluate."""
    try:
        fn = IDENTITIES[ident]
    except KeyError:
        raise GeometryError(f"unknown identity {ident!r}") from None
    return fn(case, points)


# -- theorem-level checks -----------------------------------------------------------------

def verify_alpha_soliton_on_range(case: PropositionCase, points):
    """Residual of  1/2 (L_W g_N) + (1/r) Ric^range + (lam/r) g_N  on the
    F_*(J ker) frame with W = F_*(grad f), plus the cross-pipeline
    bookkeeping that ties it to the source soliton residual."""
    mg = case.mg
    pts = np.atleast_2d(points)
    d = case.dims(pts[0])
    r0 = d["r0"]
    if r0 == 0:
        return {"id": "alpha_soliton_range", "vacuous": True, "n_pairs": 0,
                "max_residual": 0.0, "rows": [], "worst": None,
                "gates": ("kernel_nontrivial",), "alpha": None, "beta": None}
    rg = case.range_rg(pts)
    W = pushforward_field(mg.F, case.grad_f(), validate_points=pts[:5])
    W.name = "F*(grad f)"
    LW = lie_derivative_metric(mg.gN, W)
    ricM = case.ric_M()
    Hf = case.hess_f()
    NA = mg.nabla_oneill("A")
    if case.eta is not None:
        Leta = lie_derivative_metric(mg.gM, case.eta)
    else:
        Leta = None
    lam = float(case.lam)
    alpha, beta = 1.0 / r0, lam / r0
    rows = []
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        y = sp.y
        GM = mg.gM.value_at(x)
        GN = mg.gN.value_at(y)
        LWv = LW.values(y[None, :])[0]
        ric_rng = rg.ricci_values(y[None, :])[0]
        ricv = ricM.value_at(x)
        Hv = Hf.value_at(x)
        NAv = NA.value_at(x)
        Letav = Leta.value_at(x) if Leta is not None else None
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        for a in range(r0):
            for b in range(a, r0):
                U, V = sp.vertical[a], sp.vertical[b]
                JU, JV = Jx @ U, Jx @ V
                FJU, FJV = Jac @ JU, Jac @ JV
                lie_term = 0.5 * float(FJU @ LWv @ FJV)
                ric_term = alpha * float(rg.restrict_vector(FJU) @ ric_rng
                                         @ rg.restrict_vector(FJV))
                met_term = beta * float(FJU @ GN @ FJV)
                range_residual = lie_term + ric_term + met_term
                # cross-pipeline bookkeeping
                S = ((0.5 * float(U @ Letav @ V) if Letav is not None else 0.0)
                     + case.alpha * float(U @ ricv @ V) + lam * float(U @ GM @ V))
                t_div = _divA_vertical_trace(NAv, sp.vertical, GM, JU, JV)
                ident_gap = (float(U @ ricv @ V)
                             - (float(rg.restrict_vector(FJU) @ ric_rng
                                      @ rg.restrict_vector(FJV))
                                + r0 * float(JU @ Hv @ JV) - t_div))
                push_gap = (r0 * float(JU @ Hv @ JV)
                            - 0.5 * r0 * float(FJU @ LWv @ FJV))
                metric_gap = lam * (float(U @ GM @ V) - float(FJU @ GN @ FJV))
                lie_eta = 0.5 * float(U @ Letav @ V) if Letav is not None else 0.0
                bookkeeping = abs(S - r0 * range_residual
                                  - (lie_eta + ident_gap + push_gap - t_div
                                     + metric_gap))
                rows.append({"point": pi, "pair": (f"u{a+1}", f"u{b+1}"),
                             "lhs": range_residual, "rhs": 0.0,
                             "residual": abs(range_residual),
                             "terms": {"half_lie_W": lie_term,
                                       "alpha_ric_range": ric_term,
                                       "beta_metric": met_term,
                                       "source_residual": S,
                                       "identity_gap": ident_gap,
                                       "pushforward_gap": push_gap,
                                       "div_A": t_div,
                                       "bookkeeping_gap": bookkeeping}})
    out = _identity_result("alpha_soliton_range", rows,
                           ("source_soliton", "tg_horizontal", "kernel_nontrivial",
                            "kahler_source", "anti_invariant_source",
                            "clairaut_source"))
    out["alpha"], out["beta"] = alpha, beta
    return out


def verify_ric_lie_relation(case: PropositionCase, points, vacuous_tol=1e-12):
    """Ric^range(F_*JU, F_*CX) = (r/2)(L_{F_*(grad f)} g_N)(F_*JU, F_*CX)
    over (vertical, horizontal) pairs; vacuous when every CX vanishes
    (Lagrangian case)."""
    mg = case.mg
    pts = np.atleast_2d(points)
    d = case.dims(pts[0])
    r0 = d["r0"]
    rg = case.range_rg(pts)
    W = pushforward_field(mg.F, case.grad_f(), validate_points=pts[:5])
    W.name = "F*(grad f)"
    LW = lie_derivative_metric(mg.gN, W)
    rows = []
    saw_mu = False
    for pi, x in enumerate(pts):
        sp = mg.split_at(x)
        GM = mg.gM.value_at(x)
        y = sp.y
        LWv = LW.values(y[None, :])[0]
        ric_rng = rg.ricci_values(y[None, :])[0]
        Jac = mg.F.jac_at(x)
        Jx = case.J.value_at(x)
        for a in range(r0):
            JU = Jx @ sp.vertical[a]
            FJU = Jac @ JU
            for i in range(len(sp.horizontal)):
                _, _, CX = _bc_split(Jx, sp.horizontal[i], sp, GM)
                if float(np.max(np.abs(CX))) <= vacuous_tol:
                    continue
                saw_mu = True
                FCX = Jac @ CX
                lhs = float(rg.restrict_vector(FJU) @ ric_rng
                            @ rg.restrict_vector(FCX))
                rhs = 0.5 * r0 * float(FJU @ LWv @ FCX)
                rows.append({"point": pi, "pair": (f"u{a+1}", f"X{i+1}"),
                             "lhs": lhs, "rhs": rhs, "residual": abs(lhs - rhs),
                             "terms": {"half_r_lie_W": rhs}})
    out = _identity_result("ric_lie", rows,
                           ("horizontal_potential", "tg_horizontal",
                            "kahler_source", "anti_invariant_source",
                            "clairaut_source"))
    out["vacuous"] = not saw_mu
    return out
