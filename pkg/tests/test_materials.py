import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anisocrack.errors import InvalidMaterial, SingularInput
from anisocrack.materials import (
    MONOCLINIC_ZEROS,
    MaterialSpec,
    reduced_compliance,
    stroh_matrices,
    validate_monoclinic,
)
from conftest import random_monoclinic


def _reduced_oracle(s):
    out = np.zeros((6, 6))
    for i in range(6):
        for j in range(6):
            if i != 2 and j != 2:
                out[i, j] = s[i, j] - s[i, 2] * s[2, j] / s[2, 2]
    return out


class TestReducedCompliance:
    def test_no_coupling_leaves_entries_unchanged(self):
        s = np.diag([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        s[0, 1] = s[1, 0] = -0.3
        s[0, 5] = s[5, 0] = 0.1
        rc = reduced_compliance(MaterialSpec("x", compliance=s))
        keep = [0, 1, 3, 4, 5]
        np.testing.assert_allclose(rc.matrix[np.ix_(keep, keep)], s[np.ix_(keep, keep)], rtol=1e-15)

    def test_isotropic_s11(self):
        E, nu = 3.0, 0.3
        rc = reduced_compliance(MaterialSpec.isotropic(E, nu))
        assert rc.s(1, 1) == pytest.approx((1 - nu**2) / E, rel=1e-14)

    def test_generic_matches_elementwise_oracle(self, rng):
        m = random_monoclinic(rng)
        s = m.compliance_matrix()
        rc = reduced_compliance(m)
        np.testing.assert_allclose(rc.matrix, _reduced_oracle(s), atol=1e-14 * np.abs(s).max())
        assert np.all(rc.matrix[2] == 0.0) and np.all(rc.matrix[:, 2] == 0.0)

    def test_idempotent_on_reduced_input(self, rng):
        m = random_monoclinic(rng)
        sp = reduced_compliance(m).matrix.copy()
        sp[2, 2] = 1.0  # any positive s33 keeps the reduction a no-op
        rc2 = reduced_compliance(MaterialSpec("r", compliance=sp))
        keep = [0, 1, 3, 4, 5]
        np.testing.assert_allclose(rc2.matrix[np.ix_(keep, keep)], sp[np.ix_(keep, keep)], rtol=1e-13)

    def test_invalid_material_rejected(self):
        s = np.eye(6)
        s[3, 5] = 0.5  # breaks the monoclinic zero pattern
        s[5, 3] = 0.5
        with pytest.raises(InvalidMaterial):
            reduced_compliance(MaterialSpec("bad", compliance=s))


class TestStrohMatrices:
    def test_isotropic_pattern(self):
        sm = stroh_matrices(MaterialSpec.isotropic(2.0, 0.25))
        c = MaterialSpec.isotropic(2.0, 0.25).stiffness_matrix()
        np.testing.assert_allclose(np.diag(sm.Q), [c[0, 0], c[5, 5], c[4, 4]])
        assert sm.Q[0, 1] == pytest.approx(0.0, abs=1e-14)
        assert sm.T[0, 1] == pytest.approx(0.0, abs=1e-14)
        assert sm.R[2, 2] == pytest.approx(0.0, abs=1e-14)

    def test_monoclinic_readoff(self, rng):
        m = random_monoclinic(rng)
        c = m.stiffness_matrix()
        sm = stroh_matrices(m)
        assert sm.Q[0, 1] == c[0, 5]
        assert sm.T[0, 1] == c[1, 5]
        assert sm.R[2, 2] == c[3, 4]

    def test_symmetry_and_zero_pattern(self, rng):
        sm = stroh_matrices(random_monoclinic(rng))
        np.testing.assert_array_equal(sm.Q, sm.Q.T)
        np.testing.assert_array_equal(sm.T, sm.T.T)
        assert np.linalg.eigvalsh(sm.T).min() > 0
        for M in (sm.Q, sm.R, sm.T):
            assert np.all(M[:2, 2] == 0.0) and np.all(M[2, :2] == 0.0)

    def test_missing_data_is_singular(self):
        with pytest.raises(SingularInput):
            MaterialSpec("z", compliance=np.zeros((6, 6))).stiffness_matrix()


class TestValidation:
    def test_isotropic_passes(self):
        rep = validate_monoclinic(MaterialSpec.isotropic(1.0, 0.3))
        assert rep.passed and rep.monoclinic_violation == 0.0

    def test_orthotropic_passes(self):
        m = MaterialSpec.orthotropic(10, 4, 3, 1.2, 1.5, 2.0, 0.3, 0.25, 0.2)
        assert validate_monoclinic(m).passed

    def test_injected_c14_fails(self):
        c = MaterialSpec.isotropic(2.5, 0.25).stiffness_matrix().copy()
        c[0, 3] = c[3, 0] = 0.1
        rep = validate_monoclinic(MaterialSpec("c14", stiffness=c))
        assert not rep.passed
        assert rep.monoclinic_violation == pytest.approx(0.1)
        assert rep.worst_entry == (1, 4)

    def test_asymmetric_fails(self):
        c = MaterialSpec.isotropic(2.5, 0.25).stiffness_matrix().copy()
        c[0, 1] += 0.01
        assert not validate_monoclinic(MaterialSpec("asym", stiffness=c)).passed

    def test_indefinite_fails(self):
        c = -np.eye(6)
        assert not validate_monoclinic(MaterialSpec("neg", stiffness=c)).passed

    def test_zero_list_matches_pattern(self):
        assert set(MONOCLINIC_ZEROS) == {(1, 4), (1, 5), (2, 4), (2, 5), (4, 6), (5, 6)}


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_stiffness_compliance_round_trip(seed):
    m = random_monoclinic(np.random.default_rng(seed))
    c = m.stiffness_matrix()
    back = MaterialSpec("rt", compliance=np.linalg.inv(c)).stiffness_matrix()
    np.testing.assert_allclose(back, c, rtol=0, atol=1e-10 * np.abs(c).max())


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_rotation_preserves_monoclinic_pattern(seed):
    m = random_monoclinic(np.random.default_rng(seed))
    rep = validate_monoclinic(m)
    assert rep.passed
    assert rep.monoclinic_violation <= 1e-12 * rep.scale
