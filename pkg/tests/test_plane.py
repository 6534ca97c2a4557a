import math
import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisocrack.bimaterial import BimaterialParams
from anisocrack.errors import DegenerateOperator, InadmissibleParameters, OutOfScope
from anisocrack.mode3_solver import LoadSpecAntiplane, solve_general_antiplane
from anisocrack.plane_solver import (
    LoadSpecPlane,
    forward_identity_residual,
    skew_line_sif,
    skew_sif_sweep,
    solve_general_plane_sym,
    solve_plane_skew_line,
    solve_plane_sym_line,
)
from anisocrack.singular_ops import HalfLineFunction, QuadratureScheme
from conftest import EXAMPLE_PARAMS

SQRT_2_PI = math.sqrt(2.0 / math.pi)


def params(alpha=0.0, **kw):
    base = dict(H11=2.0, H22=5.0, alpha=alpha, delta1=0.3, delta2=-0.2, gamma=0.15)
    base.update(kw)
    return BimaterialParams.from_parameters(**base)


class TestSymmetricLine:
    def test_orthotropic_opening(self):
        bp = params(0.0)
        sol = solve_plane_sym_line(1.3, 0.0, 1.0, bp)
        x = np.array([-0.2, -0.8])
        np.testing.assert_allclose(sol.jump(x)[0], 2 * 2.0 / math.pi * 1.3 * np.arctanh(np.sqrt(-x)), rtol=1e-13)
        np.testing.assert_array_equal(sol.jump(x)[1], 0.0)

    def test_coupling(self):
        al = 0.4
        sol = solve_plane_sym_line(1.0, 0.0, 1.0, params(al))
        x = np.array([-0.3, -0.6])
        expected = -(2 * 5.0 / math.pi) * al * math.sqrt(2.0 / 5.0) * np.arctanh(np.sqrt(-x))
        np.testing.assert_allclose(sol.jump(x)[1], expected, rtol=1e-13)
        assert np.all(sol.jump(x)[1] != 0)

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5])
    def test_K_independent_of_alpha(self, alpha):
        sol = solve_plane_sym_line(1.0, 1.0, 1.0, params(alpha))
        assert sol.K_I == sol.K_II == SQRT_2_PI
        assert sol.K_I == pytest.approx(0.797885, abs=5e-7)

    def test_tractions_material_free(self):
        xp = np.geomspace(1e-3, 100, 11)
        t1 = solve_plane_sym_line(0.7, -1.2, 2.0, params(0.3)).traction(xp)
        t2 = solve_plane_sym_line(0.7, -1.2, 2.0, params(-0.6, H11=9.0, H22=0.5)).traction(xp)
        np.testing.assert_array_equal(t1, t2)
        np.testing.assert_allclose(t1[1], -1.2 / math.pi * np.sqrt(2.0 / xp) / (xp + 2.0), rtol=1e-15)

    def test_K_ordering(self):
        sol = solve_plane_sym_line(1.0, 3.0, 1.0, params(0.2))
        assert sol.K[0] == sol.K_II == pytest.approx(SQRT_2_PI)
        assert sol.K[1] == sol.K_I == pytest.approx(3 * SQRT_2_PI)

    def test_beta_refused(self):
        with pytest.raises(OutOfScope):
            solve_plane_sym_line(1.0, 1.0, 1.0, params(0.2, beta=0.1))


class TestSkewLine:
    def test_orthotropic_K(self):
        bp = params(0.0, gamma=0.0)
        sol = solve_plane_skew_line(1.5, 0.5, 2.0, bp)
        base = math.sqrt(2 / (math.pi * 2.0))
        assert sol.K_I == pytest.approx(-0.2 * base * 0.5, rel=1e-15)
        assert sol.K_II == pytest.approx(0.3 * base * 1.5, rel=1e-15)

    def test_homogeneous_zero(self):
        bp = BimaterialParams.from_parameters(2.0, 5.0, alpha=0.3)
        sol = solve_plane_skew_line(1.0, 1.0, 1.0, bp)
        assert np.all(sol.K == 0)
        assert np.all(sol.jump(np.array([-0.5, -3.0])) == 0)
        assert np.all(sol.traction(np.array([0.5])) == 0)

    def test_example_normalised_value(self):
        al = 0.5
        bp = BimaterialParams.from_parameters(alpha=al, **EXAMPLE_PARAMS)
        sol = solve_plane_skew_line(1.0, 1.0, 1.0, bp)
        Khat = sol.K_I * math.sqrt(math.pi) / (math.sqrt(2) * 0.92)
        direct = (1 + al * (0.72 / 0.92) * math.sqrt(2.01 / 6.98)) / (1 - al * al)
        assert Khat == pytest.approx(direct, rel=1e-14)
        assert Khat == pytest.approx(1.6133, abs=5e-5)

    def test_gamma_step(self):
        bp = params(0.2, gamma=0.4)
        sol = solve_plane_skew_line(1.0, 2.0, 1.0, bp)
        root = math.sqrt(10.0)
        before = sol.jump(np.array([-1.0 + 1e-9]))
        after = sol.jump(np.array([-1.0 - 1e-9]))
        # the arctanh parts are continuous up to their log blow-up, which cancels in the difference
        step = after - before
        np.testing.assert_allclose(step[:, 0], [0.4 * root * 2.0, -0.4 * root * 1.0], rtol=1e-4)
        assert sol.flags

    def test_scope_checks(self):
        with pytest.raises(OutOfScope):
            solve_plane_skew_line(1.0, 1.0, 1.0, params(0.1, beta=0.2))
        with pytest.raises(OutOfScope):
            solve_plane_skew_line(1.0, 1.0, 1.0, params(0.1, lam=0.2))
        with pytest.raises(InadmissibleParameters):
            solve_plane_skew_line(1.0, 1.0, 1.0, replace(params(0.1), alpha=1.2))


class TestResidual:
    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7])
    def test_symmetric_closed_form(self, alpha):
        bp = params(alpha)
        load = LoadSpecPlane.symmetric_line(1.0, -0.6, 1.0)
        rep = forward_identity_residual(solve_plane_sym_line(1.0, -0.6, 1.0, bp), load, bp)
        assert rep.worst < 1e-5

    @pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7])
    def test_skew_closed_form(self, alpha):
        bp = params(alpha)
        load = LoadSpecPlane.skew_line(0.8, 1.1, 1.0)
        rep = forward_identity_residual(solve_plane_skew_line(0.8, 1.1, 1.0, bp), load, bp)
        assert rep.worst < 1e-5

    def test_perturbed(self):
        bp = params(0.3)
        load = LoadSpecPlane.symmetric_line(1.0, 1.0, 1.0)
        sol = solve_plane_sym_line(1.0, 1.0, 1.0, bp)
        bad = replace(sol, djump=tuple(d * 1.1 for d in sol.djump))
        assert forward_identity_residual(bad, load, bp).lower == pytest.approx(0.1, rel=1e-3)

    def test_zero(self):
        bp = params(0.3, beta=0.2)
        zero = solve_plane_sym_line(0.0, 0.0, 1.0, params(0.3))
        rep = forward_identity_residual(zero, LoadSpecPlane(), bp)
        assert rep.lower == 0.0 and rep.upper == 0.0

    def test_pole_refused(self):
        bp = replace(params(0.3), alpha=1.0)
        with pytest.raises(DegenerateOperator):
            forward_identity_residual(solve_plane_sym_line(1, 1, 1, params(0.3)), LoadSpecPlane(), bp)


class TestGeneralSymmetric:
    def test_zero_load(self):
        sol = solve_general_plane_sym(LoadSpecPlane(), params(0.3))
        assert np.all(sol.K == 0)
        assert np.all(sol.jump(np.array([-1.0])) == 0)

    def test_dirac_path(self):
        bp = params(-0.4)
        num = solve_general_plane_sym(LoadSpecPlane.symmetric_line(1.0, 2.0, 1.0), bp)
        cf = solve_plane_sym_line(1.0, 2.0, 1.0, bp)
        x = -np.geomspace(1e-3, 50, 15)
        np.testing.assert_allclose(num.jump(x), cf.jump(x), rtol=1e-12)
        np.testing.assert_allclose(num.K, cf.K, rtol=5e-3)

    def test_mollified_convergence(self):
        bp = params(0.5)
        cf = solve_plane_sym_line(1.0, 1.0, 1.0, bp)
        x = -np.geomspace(1e-3, 50, 200)
        x = x[np.abs(x + 1.0) > 0.3]
        errs = []
        for w in (0.2, 0.1, 0.05):
            g = HalfLineFunction.gaussian(-1.0, -1.0, w)
            sol = solve_general_plane_sym(LoadSpecPlane(sym=(g, g)), bp)
            errs.append(np.linalg.norm(sol.jump(x) - cf.jump(x)) / np.linalg.norm(cf.jump(x)))
        assert errs[0] > errs[1] > errs[2]

    def test_decoupled_matches_antiplane_machinery(self):
        bp = params(0.0)
        g = HalfLineFunction.patch(-1.0, -2.0)
        q = QuadratureScheme(panels=32)
        plane = solve_general_plane_sym(LoadSpecPlane(sym=(g, None)), bp, q)
        anti = solve_general_antiplane(
            LoadSpecAntiplane(sym=g), BimaterialParams.from_parameters(1.0, 1.0, H33=bp.H11, nu=0.0), q
        )
        x, xp = -np.geomspace(1e-2, 20, 10), np.geomspace(1e-2, 20, 10)
        np.testing.assert_allclose(plane.jump(x)[0], anti.jump(x), rtol=1e-12)
        np.testing.assert_allclose(plane.traction(xp)[0], anti.traction(xp), rtol=1e-10)
        np.testing.assert_array_equal(plane.jump(x)[1], 0.0)

    def test_alpha_continuity(self):
        g = HalfLineFunction.patch(-1.0, -1.5)
        load = LoadSpecPlane(sym=(g, g * 0.5))
        q = QuadratureScheme(panels=32)
        x = -np.geomspace(1e-2, 20, 10)
        ref = solve_general_plane_sym(load, params(0.0), q).jump(x)
        diffs = [np.abs(solve_general_plane_sym(load, params(al), q).jump(x) - ref).max() for al in (1e-2, 1e-3, 1e-4)]
        assert diffs[0] > diffs[1] > diffs[2] and diffs[2] < 1e-3

    def test_numeric_residual(self):
        bp = params(0.4)
        g = HalfLineFunction.patch(-1.0, -2.0)
        load = LoadSpecPlane(sym=(g, g * -0.5))
        sol = solve_general_plane_sym(load, bp)
        assert forward_identity_residual(sol, load, bp).worst < 1e-5

    def test_scope(self):
        with pytest.raises(OutOfScope):
            solve_general_plane_sym(LoadSpecPlane.skew_line(1, 1, 1), params(0.2))
        with pytest.raises(OutOfScope):
            solve_general_plane_sym(LoadSpecPlane(), params(0.2, beta=0.1))
        with pytest.raises(DegenerateOperator):
            solve_general_plane_sym(LoadSpecPlane(), replace(params(0.2), alpha=1.0))


class TestSweep:
    def test_alpha_zero_collapses(self):
        table = skew_sif_sweep(2.01, 6.98, 0.72, 0.92, [0.2, 0.5, 1, 2], [0.0])
        for row in table.rows:
            assert row.Khat_I == pytest.approx(1.0, abs=1e-15)
            assert row.Khat_II == pytest.approx(1.0, abs=1e-15)

    def test_large_ratio_limit(self):
        al = 0.6
        _, KI, _ = skew_sif_sweep(2.01, 6.98, 0.72, 0.92, [1e9], [al]).curve(1e9)
        assert KI[0] == pytest.approx(1 / (1 - al * al), rel=1e-8)

    def test_ordering_and_skips(self):
        with warnings.catch_warnings(record=True) as w:
            warnings.simplefilter("always")
            table = skew_sif_sweep(2.01, 6.98, 0.72, 0.92, [2, 0.5], [0.5, -1.0, 0.0, 1.0])
        assert len(table.skipped) == 4 and w
        keys = [(r.ratio, r.alpha) for r in table.rows]
        assert keys == sorted(keys)
        assert table.as_array().shape == (4, 4)

    def test_inadmissible(self):
        with pytest.raises(InadmissibleParameters):
            skew_sif_sweep(2.01, 6.98, 0.0, 0.92, [1], [0])
        with pytest.raises(InadmissibleParameters):
            skew_sif_sweep(2.01, 6.98, 0.72, 0.92, [-1], [0])


@settings(max_examples=40, deadline=None)
@given(
    F1=st.floats(-5, 5),
    F2=st.floats(-5, 5),
    a=st.floats(0.01, 100),
    s=st.floats(0.1, 10),
    alpha=st.floats(-0.9, 0.9),
)
def test_closed_form_linearity_and_scaling(F1, F2, a, s, alpha):
    bp = params(alpha)
    for solver in (solve_plane_sym_line, solve_plane_skew_line):
        base = solver(F1, F2, a, bp)
        np.testing.assert_allclose(solver(F1, F2, s * a, bp).K, base.K / math.sqrt(s), rtol=1e-12, atol=1e-300)
        np.testing.assert_allclose(solver(2 * F1, 2 * F2, a, bp).K, 2 * base.K, rtol=1e-13, atol=1e-300)
        x = np.array([-0.3, -2.5]) * a
        np.testing.assert_allclose(solver(F1, F2, s * a, bp).jump(s * x), base.jump(x), rtol=1e-11, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(-0.95, 0.95), F1=st.floats(0.1, 5), F2=st.floats(0.1, 5))
def test_skew_sif_direct_substitution(alpha, F1, F2):
    K_II, K_I = skew_line_sif(F1, F2, 1.0, 2.01, 6.98, alpha, 0.72, 0.92)
    pref = SQRT_2_PI / (1 - alpha**2)
    assert K_I == pytest.approx(pref * (0.92 * F2 + alpha * 0.72 * F1 * math.sqrt(2.01 / 6.98)), rel=1e-13)
    assert K_II == pytest.approx(pref * (0.72 * F1 + alpha * 0.92 * F2 * math.sqrt(6.98 / 2.01)), rel=1e-13)
