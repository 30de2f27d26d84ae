"""Spec-file parsing, validation errors with line references, and the
resolved object graph."""

import numpy as np
import pytest

from riemcheck.catalog import CATALOG, load, names
from riemcheck.specfile import SpecError, load_spec

MINI = """
version 1

manifold M
  coords x1 x2
  metric diag 1, 1
end

manifold N
  coords y1
  metric diag 1
end

map F
  source M
  target N
  components x1
end

frames F
  vertical V = 0, 1
  horizontal H = 1, 0
  range R = 1
end

function f on M = x1^2
vectorfield W on M = x2, -x1
vectorfield C on M = frame 0.5*V - 2*H

check
  seed 3
  points 20
  tol 1e-9
  suite metric riemannian_map
  clairaut source f
end
"""


def test_mini_spec_resolves():
    cfg = load_spec(MINI, name="mini")
    assert set(cfg.charts) == {"M", "N"}
    assert cfg.the_map().name == "F"
    assert cfg.check["seed"] == 3 and cfg.check["points"] == 20
    assert cfg.check["clairaut"] == {"source": "f"}
    f = cfg.function("M", "f")
    from riemcheck.expr import evaluate
    assert evaluate(f, {"x1": 3.0, "x2": 0.0}) == 9.0
    W = cfg.field("M", "W")
    assert np.allclose(W.value_at(np.array([0.5, 0.25])), [0.25, -0.5])
    C = cfg.field("M", "C")  # 0.5*V - 2*H with V=(0,1), H=(1,0)
    assert np.allclose(C.value_at(np.array([0.1, 0.2])), [-2.0, 0.5])


def test_mini_spec_runs():
    from riemcheck.suites import run_suite
    report = run_suite(load_spec(MINI, name="mini"))
    assert report.exit_code() == 0
    assert {c.id for c in report.checks} == {"metric", "riemannian_map"}


def test_malformed_metric_names_block():
    bad = MINI.replace("metric diag 1, 1", "metric diag 1, 1, 1")
    with pytest.raises(SpecError) as err:
        load_spec(bad)
    assert any("M" in p and "metric" in p for p in err.value.problems)


def test_unknown_identifier_carries_line():
    bad = MINI.replace("function f on M = x1^2", "function f on M = zz + 1")
    with pytest.raises(SpecError) as err:
        load_spec(bad)
    assert any("zz" in p for p in err.value.problems)


def test_unresolved_map_reference():
    bad = MINI.replace("source M", "source QQ")
    with pytest.raises(SpecError) as err:
        load_spec(bad)
    assert any("unresolved" in p for p in err.value.problems)


def test_nonlinear_frame_combo_rejected():
    bad = MINI.replace("frame 0.5*V - 2*H", "frame V*V")
    with pytest.raises(SpecError) as err:
        load_spec(bad)
    assert any("linear" in p or "non-field" in p for p in err.value.problems)


def test_unterminated_block():
    with pytest.raises(SpecError) as err:
        load_spec("manifold M\n  coords x1\n  metric diag 1")
    assert any("unterminated" in p for p in err.value.problems)


def test_unknown_check_key():
    bad = MINI.replace("seed 3", "sneed 3")
    with pytest.raises(SpecError) as err:
        load_spec(bad)
    assert any("sneed" in p for p in err.value.problems)


# -- catalog ----------------------------------------------------------------------

def test_catalog_names_complete():
    assert set(names()) == {
        "paper-3.1", "paper-4.1", "euclidean-kahler", "gaussian-soliton",
        "sphere-2", "hyperbolic-2", "revolution-surface", "warped-clairaut",
        "flat-lagrangian", "polar-kahler"}


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_catalog_entries_load(name):
    cfg = load(name)
    assert cfg.name == name
    assert cfg.check["suite"], f"{name} declares no suite"


def test_catalog_unknown_name():
    with pytest.raises(KeyError):
        load("paper-9.9")


def test_paper31_catalog_content():
    cfg = load("paper-3.1")
    M = cfg.charts["M"]
    assert M.dim == 6 and len(M.constraints) == 6
    F = cfg.the_map()
    x = np.array([0.2, 0.3, 0.4, 0.5, 0.6, 0.7])
    assert np.allclose(F.value_at(x), [0.6, 0.3, 0.0, 0.5, 0.0, 0.7])
    assert cfg.structure_on("M") is not None
    f = cfg.function("M", "f")
    from riemcheck.expr import evaluate
    assert evaluate(f, M.array_to_point(x)) == -0.5


def test_paper41_catalog_content():
    cfg = load("paper-4.1")
    F = cfg.the_map()
    x = np.array([0.2, 0.3, 0.4, 0.5, 0.6, 0.7])
    assert np.allclose(F.value_at(x), [0.0, 0.3, 0.0, 0.0, 0.6, 0.0])
    assert cfg.structure_on("N") is not None


def test_catalog_exercises_every_identity():
    # meta-test: every identity id is exercised by at least one catalog entry
    from riemcheck.propcheck import IDENTITIES
    covered = set()
    for name in names():
        ck = load(name).check
        covered.update(ck["suite"])
        covered.update(ck["audit"])
    missing = (set(IDENTITIES) | {"alpha_soliton_range", "ric_lie"}) - covered
    assert not missing, f"identities not exercised by any catalog entry: {missing}"


def test_section_right_inverse_property():
    # F(section(y)) must reproduce y on the image coordinates
    for name in ("paper-3.1", "paper-4.1", "flat-lagrangian", "warped-clairaut",
                 "polar-kahler", "revolution-surface"):
        cfg = load(name)
        F = cfg.the_map()
        rng = np.random.default_rng(5)
        for _ in range(3):
            x = rng.uniform(0.2, 0.9, size=F.source.dim)
            y = F.value_at(x)
            from riemcheck.expr import evaluate
            sec = np.array([evaluate(s, F.target.array_to_point(y))
                            for s in F.section])
            assert np.allclose(F.value_at(sec), y, atol=1e-12), name
