import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrelax import channels as ch
from qrelax import state
from qrelax.errors import StructureError, ValidationError

from oracles import kraus_sum, random_density, random_unitary

MATRIX_UNITS = [np.array(m, dtype=complex) for m in ([[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]])]
PLUS = np.full((2, 2), 0.5)
gammas = st.floats(0, 1)


def same_action(a, b, dim=2, atol=1e-12):
    units = []
    for i in range(dim):
        for j in range(dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[i, j] = 1
            units.append(m)
    return all(np.allclose(kraus_sum(a.stack, m), kraus_sum(b.stack, m), atol=atol, rtol=0) for m in units)


class TestAmplitudeDamping:
    def test_zero_is_identity(self, rng):
        c = ch.amplitude_damping(0)
        np.testing.assert_array_equal(c.operators[1], np.zeros((2, 2)))
        rho = random_density(rng, 2)
        np.testing.assert_allclose(ch.apply_channel(c, rho).matrix, rho, atol=1e-15)

    def test_full_decay(self):
        out = ch.apply_channel(ch.amplitude_damping(1), np.diag([0, 1]))
        np.testing.assert_allclose(out.matrix, np.diag([1, 0]), atol=1e-15)

    def test_half_on_plus(self):
        out = ch.apply_channel(ch.amplitude_damping(0.5), PLUS).matrix
        c = math.sqrt(0.5) / 2
        np.testing.assert_allclose(out, [[0.75, c], [c, 0.25]], atol=1e-15)

    def test_half_on_excited(self):
        out = ch.apply_channel(ch.amplitude_damping(0.5), np.diag([0, 1])).matrix
        np.testing.assert_allclose(out, np.diag([0.5, 0.5]), atol=1e-15)

    @pytest.mark.parametrize("g", [-0.1, 1.1, float("nan")])
    def test_domain(self, g):
        with pytest.raises(ValidationError):
            ch.amplitude_damping(g)

    @given(gammas)
    def test_ground_state_fixed(self, g):
        out = ch.apply_channel(ch.amplitude_damping(g), np.diag([1, 0])).matrix
        np.testing.assert_allclose(out, np.diag([1, 0]), atol=1e-15)


class TestPhaseDamping:
    def test_full(self):
        np.testing.assert_allclose(ch.apply_channel(ch.phase_damping(1), PLUS).matrix, np.diag([0.5, 0.5]), atol=1e-15)

    def test_zero(self, rng):
        rho = random_density(rng, 2)
        np.testing.assert_allclose(ch.apply_channel(ch.phase_damping(0), rho).matrix, rho, atol=1e-15)

    def test_coherence_scaling(self):
        out = ch.apply_channel(ch.phase_damping(0.36), PLUS).matrix
        assert out[0, 1] == pytest.approx(0.4, abs=1e-15)

    @given(gammas, st.integers(0, 2**32 - 1))
    def test_populations_exact(self, g, seed):
        rho = random_density(np.random.default_rng(seed), 2)
        out = ch.apply_to_matrix(ch.phase_damping(g), rho)
        np.testing.assert_allclose(np.diag(out), np.diag(rho), rtol=0, atol=1e-15)


class TestRelaxationParams:
    def test_zero_time(self):
        p = ch.relaxation_params(0, 20, 15)
        assert p.gamma_a == 0 and p.gamma_p == 0

    def test_t2_limit(self):
        p = ch.relaxation_params(1, 10, 20)
        assert p.t2_pure == math.inf and p.gamma_p == 0

    def test_figure_regime(self):
        p = ch.relaxation_params(1, 20, 15)
        assert p.t2_pure == pytest.approx(24, rel=1e-15)
        assert p.gamma_a == pytest.approx(1 - math.exp(-1 / 20), rel=1e-14)
        assert p.gamma_p == pytest.approx(1 - math.exp(-1 / 24), rel=1e-14)
        assert math.sqrt(1 - p.gamma_a) == pytest.approx(math.exp(-1 / 40), rel=1e-14)
        assert math.sqrt(1 - p.gamma_p) == pytest.approx(math.exp(-1 / 48), rel=1e-14)

    def test_unphysical(self):
        with pytest.raises(ValidationError, match="unphysical"):
            ch.relaxation_params(1, 10, 25)

    @pytest.mark.parametrize("args", [(-1, 1, 1), (1, 0, 1), (1, 1, 0), (1, -2, 1)])
    def test_domain(self, args):
        with pytest.raises(ValidationError):
            ch.relaxation_params(*args)

    def test_no_relaxation(self):
        p = ch.relaxation_params(1, math.inf, math.inf)
        assert p.gamma_a == 0 and p.gamma_p == 0

    def test_combined_coherence_factor(self):
        # each Kraus pair contributes its own sqrt(1 - gamma) to |0><1|
        p = ch.relaxation_params(0.7, 3.0, 2.0)
        out = ch.apply_to_matrix(ch.relaxation_channel(p), MATRIX_UNITS[1])
        want = math.exp(-0.7 / (2 * 3.0)) * math.exp(-0.7 / (2 * p.t2_pure))
        assert abs(out[0, 1]) == pytest.approx(want, rel=1e-13)


class TestUnitaryAndApply:
    def test_identity(self, rng):
        rho = random_density(rng, 3)
        np.testing.assert_allclose(ch.apply_channel(ch.unitary_channel(np.eye(3)), rho).matrix, rho)

    def test_pauli_x(self):
        out = ch.apply_channel(ch.unitary_channel([[0, 1], [1, 0]]), np.diag([1, 0]))
        np.testing.assert_allclose(out.matrix, np.diag([0, 1]))

    def test_conjugation(self, rng):
        u, rho = random_unitary(rng, 4), random_density(rng, 4)
        np.testing.assert_allclose(ch.apply_channel(ch.unitary_channel(u), rho).matrix, u @ rho @ u.conj().T, atol=1e-14)
        assert ch.completeness_error(ch.unitary_channel(u).stack) < 1e-14

    def test_non_unitary(self):
        with pytest.raises(ValidationError):
            ch.unitary_channel([[1, 1], [0, 1]])

    def test_dim_mismatch(self):
        with pytest.raises(StructureError):
            ch.apply_channel(ch.amplitude_damping(0.2), np.eye(4) / 4)

    def test_incomplete_rejected(self):
        with pytest.raises(ValidationError):
            ch.KrausChannel((np.eye(2), np.eye(2)))

    def test_empty_rejected(self):
        with pytest.raises(StructureError):
            ch.KrausChannel(())


class TestCompose:
    def test_identity_left(self):
        a = ch.amplitude_damping(0.3)
        assert same_action(ch.compose(ch.identity_channel(2), a), a)

    def test_count(self):
        c = ch.compose(ch.amplitude_damping(0), ch.phase_damping(0.2))
        assert len(c) == 4  # zero products are kept

    @given(gammas, gammas)
    def test_amplitude_damping_chain(self, g1, g2):
        c = ch.compose(ch.amplitude_damping(g1), ch.amplitude_damping(g2))
        keep = math.sqrt(1 - g1) * math.sqrt(1 - g2)  # avoids cancellation in 1 - (1-g1)(1-g2)
        want = ch.KrausChannel(([[1, 0], [0, keep]], [[0, math.sqrt(1 - keep * keep)], [0, 0]]))
        assert same_action(c, want)

    def test_order(self, rng):
        a, b = ch.amplitude_damping(0.4), ch.unitary_channel(random_unitary(rng, 2))
        rho = random_density(rng, 2)
        got = ch.apply_channel(ch.compose(a, b), rho).matrix
        want = ch.apply_channel(b, ch.apply_channel(a, rho)).matrix
        np.testing.assert_allclose(got, want, atol=1e-12)

    def test_mismatch(self):
        with pytest.raises(StructureError):
            ch.compose(ch.amplitude_damping(0.1), ch.identity_channel(4))

    @given(gammas, gammas)
    def test_amplitude_phase_commute(self, ga, gp):
        ab = ch.compose(ch.amplitude_damping(ga), ch.phase_damping(gp))
        ba = ch.compose(ch.phase_damping(gp), ch.amplitude_damping(ga))
        assert same_action(ab, ba)


class TestTensor:
    def test_identity(self):
        t = ch.tensor_channel(ch.identity_channel(2), ch.identity_channel(2))
        assert same_action(t, ch.identity_channel(4), dim=4)

    def test_locality(self, rng):
        rb = random_density(rng, 2)
        t = ch.tensor_channel(ch.amplitude_damping(0.3), ch.identity_channel(2))
        out = ch.apply_channel(t, np.kron(np.diag([0, 1]), rb)).matrix
        np.testing.assert_allclose(out, np.kron(np.diag([0.3, 0.7]), rb), atol=1e-15)

    def test_factorizes(self, rng):
        for _ in range(20):
            la = ch.compose(ch.amplitude_damping(rng.random()), ch.phase_damping(rng.random()))
            lb = ch.unitary_channel(random_unitary(rng, 2))
            ra, rb = random_density(rng, 2), random_density(rng, 2)
            got = ch.apply_channel(ch.tensor_channel(la, lb), np.kron(ra, rb)).matrix
            want = np.kron(kraus_sum(la.stack, ra), kraus_sum(lb.stack, rb))
            np.testing.assert_allclose(got, want, atol=1e-14)


@pytest.mark.parametrize("build", ["amplitude", "phase"])
def test_semigroup(build):
    rng = np.random.default_rng(7)
    make = {
        "amplitude": lambda p: ch.amplitude_damping(p.gamma_a),
        "phase": lambda p: ch.phase_damping(p.gamma_p),
    }[build]
    for _ in range(30):
        t1, t2 = rng.random(2) * 3
        T1 = 0.5 + rng.random() * 5
        T2 = T1 * rng.uniform(0.1, 2.0)
        a, b = make(ch.relaxation_params(t1, T1, T2)), make(ch.relaxation_params(t2, T1, T2))
        assert same_action(ch.compose(a, b), make(ch.relaxation_params(t1 + t2, T1, T2)))


@settings(max_examples=200, deadline=None)
@given(ga=gammas, gp=gammas, gb=gammas, seed=st.integers(0, 2**32 - 1))
def test_channel_law(ga, gp, gb, seed):
    c = ch.tensor_channel(ch.compose(ch.amplitude_damping(ga), ch.phase_damping(gp)), ch.amplitude_damping(gb))
    assert ch.completeness_error(c.stack) <= 1e-12
    rho = state.DensityMatrix(random_density(np.random.default_rng(seed), 4))
    out = ch.apply_channel(c, rho)
    assert abs(np.trace(out.matrix).real - 1) <= 1e-12
    assert out.eigenvalues()[0] >= -1e-10
