"""Built-in example catalog.

Each entry is a complete spec-file text; `catalog run NAME` goes through
exactly the same loading path as user files.  The two six-dimensional
anti-invariant configurations carry audit lists that exercise every
identity check and feed the discrepancy ledger; the synthetic entries are
the positive controls."""

from .specfile import load_spec

PAPER_31 = """
# anti-invariant Clairaut configuration on a hyperbolic-warp 6-manifold
version 1

manifold M
  coords x1 x2 x3 x4 x5 x6
  constraint nonzero x1
  constraint nonzero x2
  constraint nonzero x3
  constraint nonzero x4
  constraint nonzero x5
  constraint nonzero x6
  metric diag exp(-2*x4), exp(-2*x4), exp(-2*x4), 1, 1, 1
end

manifold N
  coords y1 y2 y3 y4 y5 y6
  metric diag 1, exp(-2*y4), 1, 1, exp(-2*y4), 1
end

map F
  source M
  target N
  components x5, x2, 0, x4, 0, x6
  section 0.5, y2, 0.5, y4, y1, y6
end

frames F
  vertical U1 = exp(x4), 0, 0, 0, 0, 0
  vertical U2 = 0, 0, exp(x4), 0, 0, 0
  horizontal X1 = 0, exp(x4), 0, 0, 0, 0
  horizontal X2 = 0, 0, 0, 1, 0, 0
  horizontal X3 = 0, 0, 0, 0, 1, 0
  horizontal X4 = 0, 0, 0, 0, 0, 1
  range e2p = 0, exp(y4), 0, 0, 0, 0
  range e4p = 0, 0, 0, 1, 0, 0
  range e1p = 1, 0, 0, 0, 0, 0
  range e6p = 0, 0, 0, 0, 0, 1
  normal e3p = 0, 0, 1, 0, 0, 0
  normal e5p = 0, 0, 0, 0, exp(y4), 0
  mu X3 X4
end

structure J
  manifold M
  frame U1 U2 X1 X2 X3 X4
  action U1 = X1
  action U2 = X2
  action X1 = -U1
  action X2 = -U2
  action X3 = X4
  action X4 = -X3
end

function f on M = -x4

vectorfield Z1 on M = frame 0.3*U1 - 0.2*U2 + 0.5*X1 + 0.4*X2 + 0.1*X3 - 0.6*X4
vectorfield Z2 on M = frame 0.7*U1 + 0.1*U2 - 0.3*X1 + 0.2*X2 + 0.5*X3 + 0.4*X4
vectorfield Z3 on M = frame -0.2*U1 + 0.6*U2 + 0.1*X1 - 0.5*X2 + 0.3*X3 + 0.2*X4

check
  seed 7
  points 100
  tol 1e-8
  box 0.1 1.0
  suite metric riemannian_map anti_invariant hermitian clairaut_source umbilical oneill fiber_curvature
  audit kahler ricci_values soliton_solve ric_uv ric_ux ric_xy lric_uv alpha_soliton_range ric_lie scalar_relations einstein_ker
  clairaut source f
  soliton field Z1 alpha 1 lambda solve
  restrict Z2 Z3
  expect ricci U1 U1 3
  expect ricci U2 U2 1
  expect ricci U1 U2 -1
  expect ricci X1 X1 -2
  expect ricci X2 X2 -2
  expect lambda -27.05
end
"""

PAPER_41 = """
# anti-invariant Clairaut configuration into a warped 6-manifold
version 1

manifold M
  coords x1 x2 x3 x4 x5 x6
  constraint nonzero x1
  constraint nonzero x2
  constraint nonzero x3
  constraint nonzero x4
  constraint nonzero x5
  constraint nonzero x6
  metric diag 1, 1, exp(2*x5), exp(2*x5), 1, exp(2*x5)
end

manifold N
  coords y1 y2 y3 y4 y5 y6
  metric diag 1, 1, exp(2*y5), 1, 1, exp(2*y5)
end

map F
  source M
  target N
  components 0, x2, 0, 0, x5, 0
  section 0.5, y2, 0.5, 0.5, y5, 0.5
end

frames F
  vertical U1 = 1, 0, 0, 0, 0, 0
  vertical U2 = 0, 0, exp(-x5), 0, 0, 0
  vertical U3 = 0, 0, 0, exp(-x5), 0, 0
  vertical U4 = 0, 0, 0, 0, 0, exp(-x5)
  horizontal X1 = 0, 1, 0, 0, 0, 0
  horizontal X2 = 0, 0, 0, 0, 1, 0
  range e2p = 0, 1, 0, 0, 0, 0
  range e5p = 0, 0, 0, 0, 1, 0
  normal e1p = 1, 0, 0, 0, 0, 0
  normal e3p = 0, 0, exp(-y5), 0, 0, 0
  normal e4p = 0, 0, 0, 1, 0, 0
  normal e6p = 0, 0, 0, 0, 0, exp(-y5)
end

structure Jp
  manifold N
  frame e1p e2p e3p e4p e5p e6p
  action e1p = e2p
  action e2p = -e1p
  action e3p = e4p
  action e4p = -e3p
  action e5p = e6p
  action e6p = -e5p
end

# the engine-computed horizontal second fundamental form vanishes, so the
# dilation built from it is the zero function
function gfun on N = 0

check
  seed 7
  points 100
  tol 1e-8
  box 0.1 1.0
  suite metric riemannian_map anti_invariant hermitian clairaut_target umbilical oneill
  audit kahler ric_fxfy ric_fxe ric_de lric_fxfy lric_de scalar_relations einstein_range einstein_perp
  clairaut target gfun
end
"""

EUCLIDEAN_KAHLER = """
# flat complex plane pair with the constant structure
version 1

manifold M
  coords x1 x2 x3 x4
  metric diag 1, 1, 1, 1
end

structure J
  manifold M
  row 0, -1, 0, 0
  row 1, 0, 0, 0
  row 0, 0, 0, -1
  row 0, 0, 1, 0
end

vectorfield zero on M = 0, 0, 0, 0

check
  seed 7
  points 60
  tol 1e-8
  suite metric hermitian kahler einstein soliton
  soliton field zero alpha 1 lambda 0
end
"""

GAUSSIAN_SOLITON = """
# Euclidean 3-space with the dilation potential: lambda = -c exactly
version 1

manifold M
  coords x1 x2 x3
  metric diag 1, 1, 1
end

vectorfield xi on M = 0.5*x1, 0.5*x2, 0.5*x3

check
  seed 7
  points 60
  tol 1e-8
  suite metric soliton soliton_solve einstein
  soliton field xi alpha 1 lambda solve
  expect lambda -0.5
end
"""

SPHERE_2 = """
# unit 2-sphere: Einstein with Ric = g; oriented surfaces are Kaehler
version 1

manifold S
  coords theta phi
  metric diag 1, sin(theta)^2
end

vectorfield e1 on S = 1, 0
vectorfield e2 on S = 0, 1/sin(theta)
vectorfield zero on S = 0, 0

structure J
  manifold S
  frame e1 e2
  action e1 = e2
  action e2 = -e1
end

check
  seed 7
  points 60
  tol 1e-8
  box 0.3 1.2
  suite metric hermitian kahler einstein soliton_solve geodesic
  soliton field zero alpha 1 lambda solve
  expect lambda -1
  geodesic from 1.5707963267948966,0 dir 0,1 t 6.283185307179586 dt 1e-3 monitor none
end
"""

HYPERBOLIC_2 = """
# hyperbolic plane in horospherical coordinates: Ric = -g
version 1

manifold H
  coords x t
  metric diag exp(-2*t), 1
end

vectorfield zero on H = 0, 0

check
  seed 7
  points 60
  tol 1e-8
  suite metric einstein soliton_solve
  soliton field zero alpha 1 lambda solve
  expect lambda 1
end
"""

REVOLUTION_SURFACE = """
# surface of revolution du^2 + (2+sin u)^2 dv^2 with its classical dilation
version 1

manifold S
  coords u v
  metric diag 1, (2+sin(u))^2
end

manifold B
  coords w
  metric diag 1
end

map P
  source S
  target B
  components u
  section w, 0.2
end

frames P
  vertical V1 = 0, 1/(2+sin(u))
  horizontal H1 = 1, 0
  range R1 = 1
end

function f on S = log(2+sin(u))

check
  seed 7
  points 60
  tol 1e-8
  suite metric riemannian_map clairaut_source fiber_curvature oneill geodesic
  clairaut source f
  geodesic from 0.3,0.2 dir 0.6,0.25 t 10 dt 0.001 monitor clairaut
end
"""

WARPED_CLAIRAUT = """
# synthetic warped submersion: T(U,V) = -g(U,V) grad f by construction
version 1

manifold M
  coords x1 x2 x3 x4
  metric diag exp(2*(0.3*x3*x4)), exp(2*(0.3*x3*x4)), 1, 1
end

manifold B
  coords y1 y2
  metric diag 1, 1
end

map W
  source M
  target B
  components x3, x4
  section 0.5, 0.5, y1, y2
end

frames W
  vertical U1 = exp(-(0.3*x3*x4)), 0, 0, 0
  vertical U2 = 0, exp(-(0.3*x3*x4)), 0, 0
  horizontal X1 = 0, 0, 1, 0
  horizontal X2 = 0, 0, 0, 1
  range R1 = 1, 0
  range R2 = 0, 1
end

structure J
  manifold M
  frame U1 U2 X1 X2
  action U1 = X1
  action U2 = X2
  action X1 = -U1
  action X2 = -U2
end

function f on M = 0.3*x3*x4

vectorfield eta on M = frame 0.2*U1

check
  seed 7
  points 60
  tol 1e-8
  suite metric riemannian_map anti_invariant hermitian clairaut_source fiber_curvature oneill
  audit kahler ric_uv lric_uv alpha_soliton_range scalar_relations
  clairaut source f
  soliton field eta alpha 1 lambda 0.3
end
"""

FLAT_LAGRANGIAN = """
# flat Lagrangian projection: every Lagrangian reduction holds exactly
version 1

manifold M
  coords x1 x2 x3 x4
  metric diag 1, 1, 1, 1
end

manifold N
  coords y1 y2 y3 y4
  metric diag 1, 1, 1, 1
end

map L
  source M
  target N
  components x3, x4, 0, 0
  section 0, 0, y1, y2
end

frames L
  vertical U1 = 1, 0, 0, 0
  vertical U2 = 0, 1, 0, 0
  horizontal X1 = 0, 0, 1, 0
  horizontal X2 = 0, 0, 0, 1
  range R1 = 1, 0, 0, 0
  range R2 = 0, 1, 0, 0
  normal E1 = 0, 0, 1, 0
  normal E2 = 0, 0, 0, 1
end

structure J
  manifold M
  row 0, 0, -1, 0
  row 0, 0, 0, -1
  row 1, 0, 0, 0
  row 0, 1, 0, 0
end

structure Jp
  manifold N
  row 0, 0, -1, 0
  row 0, 0, 0, -1
  row 1, 0, 0, 0
  row 0, 1, 0, 0
end

function f on M = 0
function gfun on N = 0
vectorfield zero on M = 0, 0, 0, 0

check
  seed 7
  points 60
  tol 1e-8
  suite metric riemannian_map anti_invariant hermitian kahler clairaut_source clairaut_target umbilical oneill soliton lric_uv lric_ux lric_xy lric_fxfy lric_fxe lric_de ric_uv ric_ux ric_xy cor_ric_xy ric_fxfy ric_fxe ric_de alpha_soliton_range ric_lie scalar_relations einstein_ker einstein_range einstein_perp
  clairaut source f
  clairaut target gfun
  soliton field zero alpha 1 lambda 0
end
"""

POLAR_KAHLER = """
# flat C^2 with circle fibers of a Lagrangian plane: every hypothesis of the
# source-side identities genuinely holds and the dilation is nonconstant
version 1

manifold M
  coords r t a b
  constraint positive r
  metric diag 1, r^2, 1, 1
end

manifold N
  coords y1 y2 y3
  metric diag 1, 1, 1
end

map P
  source M
  target N
  components r, a, b
  section y1, 0.7, y2, y3
end

frames P
  vertical u1 = 0, 1/r, 0, 0
  horizontal X1 = 1, 0, 0, 0
  horizontal X2 = 0, 0, 1, 0
  horizontal X3 = 0, 0, 0, 1
  range R1 = 1, 0, 0
  range R2 = 0, 1, 0
  range R3 = 0, 0, 1
end

structure J
  manifold M
  frame u1 X1 X2 X3
  action u1 = -sin(t)*X2 + cos(t)*X3
  action X1 = cos(t)*X2 + sin(t)*X3
  action X2 = sin(t)*u1 - cos(t)*X1
  action X3 = -cos(t)*u1 - sin(t)*X1
end

function f on M = log(r)

check
  seed 7
  points 60
  tol 1e-8
  suite metric riemannian_map anti_invariant hermitian kahler clairaut_source fiber_curvature oneill ric_uv ric_ux
  audit ric_xy ric_lie
  clairaut source f
end
"""

CATALOG = {
    "paper-3.1": PAPER_31,
    "paper-4.1": PAPER_41,
    "euclidean-kahler": EUCLIDEAN_KAHLER,
    "gaussian-soliton": GAUSSIAN_SOLITON,
    "sphere-2": SPHERE_2,
    "hyperbolic-2": HYPERBOLIC_2,
    "revolution-surface": REVOLUTION_SURFACE,
    "warped-clairaut": WARPED_CLAIRAUT,
    "flat-lagrangian": FLAT_LAGRANGIAN,
    "polar-kahler": POLAR_KAHLER,
}


def names():
    return sorted(CATALOG)


def load(name):
    try:
        text = CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; available: "
                       f"{', '.join(names())}") from None
    return load_spec(text, name=name)
