import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from nosplit.qmath import (
    DensityMatrix,
    Ket,
    density_from_ket,
    eigenvalues_hermitian,
    hermitian_eigvalsh,
    inner_product,
    partial_trace,
    tensor,
    trace_distance,
    von_neumann_entropy,
)

S2 = 1 / math.sqrt(2)
KET0 = Ket.basis(0)
KET1 = Ket.basis(1)
PLUS = Ket.qubit(S2, S2)


def random_ket(rng, dims=(2,)):
    n = math.prod(dims)
    return Ket(dims, rng.normal(size=n) + 1j * rng.normal(size=n))


def random_density(rng, d):
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return DensityMatrix((d,), rho / np.trace(rho).real)


def naive_partial_trace(mat, dims, keep):
    """Index-by-index reference partial trace for two subsystems."""
    da, db = dims
    out = np.zeros((da, da) if keep == 0 else (db, db), dtype=complex)
    for i in range(out.shape[0]):
        for j in range(out.shape[0]):
            for k in range(db if keep == 0 else da):
                if keep == 0:
                    out[i, j] += mat[i * db + k, j * db + k]
                else:
                    out[i, j] += mat[k * db + i, k * db + j]
    return out


complex_amp = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def kets(draw, dims=(2, 2)):
    n = math.prod(dims)
    amps = draw(st.lists(complex_amp, min_size=n, max_size=n))
    return Ket(dims, np.array(amps))


class TestKet:
    def test_dims_must_match(self):
        with pytest.raises(ValueError):
            Ket((2, 2), np.zeros(3))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            Ket((2,), np.array([np.nan, 0]))

    def test_unnormalized_allowed(self):
        k = Ket.qubit(2, 0)
        assert k.norm() == 2.0

    def test_immutable(self):
        with pytest.raises(ValueError):
            KET0.amps[0] = 5


class TestInnerProduct:
    def test_orthogonal_basis(self):
        assert inner_product(KET0, KET1) == 0

    def test_unit_norm(self):
        assert inner_product(PLUS, PLUS) == pytest.approx(1.0, abs=1e-15)

    def test_equatorial_pair(self):
        a = Ket.qubit(S2, S2)
        b = Ket.qubit(S2, 1j * S2)
        assert inner_product(a, b) == pytest.approx(0.5 + 0.5j, abs=1e-15)

    def test_dims_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(KET0, tensor(KET0, KET0))

    @given(kets(), kets())
    def test_conjugate_symmetric(self, a, b):
        assert inner_product(a, b) == pytest.approx(inner_product(b, a).conjugate(), abs=1e-9)

    @given(kets(), kets())
    def test_cauchy_schwarz(self, a, b):
        assert abs(inner_product(a, b)) <= a.norm() * b.norm() * (1 + 1e-12) + 1e-12


class TestTensor:
    def test_basis_product(self):
        np.testing.assert_array_equal(tensor(KET0, KET1).amps, [0, 1, 0, 0])

    def test_plus_plus(self):
        np.testing.assert_allclose(tensor(PLUS, PLUS).amps, [0.5] * 4, atol=1e-15)

    def test_associative(self):
        rng = np.random.default_rng(1)
        a, b, c = (random_ket(rng) for _ in range(3))
        left, right = tensor(tensor(a, b), c), tensor(a, tensor(b, c))
        assert left.dims == right.dims == (2, 2, 2)
        np.testing.assert_allclose(left.amps, right.amps, atol=1e-14)

    @given(kets((2,)), kets((2,)))
    def test_norm_multiplicative(self, a, b):
        assert tensor(a, b).norm() == pytest.approx(a.norm() * b.norm(), rel=1e-12, abs=1e-12)


class TestDensity:
    def test_ket0(self):
        np.testing.assert_array_equal(density_from_ket(KET0).mat, np.diag([1, 0]))

    def test_unnormalized_scaling(self):
        rho = density_from_ket(Ket.qubit(2, 0))
        np.testing.assert_array_equal(rho.mat, np.diag([4, 0]))
        assert rho.trace() == 4

    def test_plus_all_half(self):
        np.testing.assert_allclose(density_from_ket(PLUS).mat, np.full((2, 2), 0.5), atol=1e-15)

    def test_normalize(self):
        rho = density_from_ket(Ket.qubit(3, 4j), normalize=True)
        assert rho.trace() == pytest.approx(1.0, abs=1e-15)

    def test_zero_vector_normalize_fails(self):
        with pytest.raises(ValueError):
            density_from_ket(Ket.qubit(0, 0), normalize=True)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix((2,), np.array([[1, 1], [0, 0]]))

    def test_not_psd_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix((2,), np.diag([1.5, -0.5]))


class TestPartialTrace:
    def test_singlet_is_maximally_mixed(self):
        singlet = Ket((2, 2), np.array([0, S2, -S2, 0]))
        np.testing.assert_allclose(partial_trace(density_from_ket(singlet), [0]).mat, np.eye(2) / 2, atol=1e-15)

    def test_product_state(self):
        rho = density_from_ket(tensor(KET0, PLUS))
        np.testing.assert_allclose(partial_trace(rho, [0]).mat, np.diag([1, 0]), atol=1e-15)

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            partial_trace(density_from_ket(tensor(KET0, KET0)), [2])
        with pytest.raises(ValueError):
            partial_trace(density_from_ket(tensor(KET0, KET0)), [])

    @pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (2, 4)])
    @pytest.mark.parametrize("keep", [0, 1])
    def test_against_naive_loop(self, dims, keep):
        rng = np.random.default_rng(7)
        rho = density_from_ket(random_ket(rng, dims))
        np.testing.assert_allclose(partial_trace(rho, [keep]).mat, naive_partial_trace(rho.mat, dims, keep), atol=1e-13)

    def test_three_party_keep_middle(self):
        rng = np.random.default_rng(3)
        a, b, c = (random_ket(rng) for _ in range(3))
        rho = density_from_ket(tensor(tensor(a, b), c))
        want = density_from_ket(b).mat * a.norm() ** 2 * c.norm() ** 2
        np.testing.assert_allclose(partial_trace(rho, [1]).mat, want, atol=1e-12)

    def test_consistent_with_tensor(self):
        rng = np.random.default_rng(4)
        ra, rb = random_density(rng, 2), random_density(rng, 3)
        joint = DensityMatrix((2, 3), np.kron(ra.mat, rb.mat * 2.5))
        np.testing.assert_allclose(partial_trace(joint, [0]).mat, ra.mat * 2.5, atol=1e-14)

    @given(kets((2, 2, 2)), st.sampled_from([[0], [1], [2], [0, 1], [1, 2], [0, 2]]))
    @hsettings(max_examples=60)
    def test_trace_preserved(self, k, keep):
        rho = density_from_ket(k)
        assert partial_trace(rho, keep).trace() == pytest.approx(rho.trace(), rel=1e-14, abs=1e-14)

    @given(kets((2, 2)))
    def test_schmidt_symmetry(self, k):
        if k.norm() < 1e-3:
            return
        rho = density_from_ket(k, normalize=True)
        sa = von_neumann_entropy(partial_trace(rho, [0]))
        sb = von_neumann_entropy(partial_trace(rho, [1]))
        assert sa == pytest.approx(sb, abs=1e-10)


class TestEigenvalues:
    def test_maximally_mixed(self):
        np.testing.assert_allclose(eigenvalues_hermitian(DensityMatrix((2,), np.eye(2) / 2)), [0.5, 0.5])

    def test_diagonal(self):
        np.testing.assert_allclose(eigenvalues_hermitian(DensityMatrix((2,), np.diag([0.75, 0.25]))), [0.25, 0.75])

    def test_reduced_state_with_half_overlap(self):
        p = 0.5 * np.exp(0.7j)
        rho = DensityMatrix((2,), 0.5 * np.array([[1, p], [np.conj(p), 1]]))
        np.testing.assert_allclose(eigenvalues_hermitian(rho), [0.25, 0.75], atol=1e-15)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            hermitian_eigvalsh(np.array([[1, 1j], [1j, 1]]))

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 8])
    def test_jacobi_against_lapack(self, d):
        rng = np.random.default_rng(d)
        for _ in range(20):
            m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            h = m + m.conj().T
            got = hermitian_eigvalsh(h, method="jacobi")
            np.testing.assert_allclose(got, np.linalg.eigvalsh(h), atol=1e-12)
            assert got.sum() == pytest.approx(np.trace(h).real, abs=1e-10)

    def test_degenerate_spectrum(self):
        rng = np.random.default_rng(11)
        q, _ = np.linalg.qr(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        h = q @ np.diag([0.25, 0.25, 0.25, 0.25]) @ q.conj().T
        np.testing.assert_allclose(hermitian_eigvalsh(0.5 * (h + h.conj().T)), [0.25] * 4, atol=1e-12)

    @given(st.floats(0, 1), st.floats(0, 1), complex_amp)
    def test_closed_form_matches_padded_jacobi(self, a, d, b):
        m2 = np.array([[a, b], [np.conj(b), d]])
        m4 = np.zeros((4, 4), dtype=complex)
        m4[:2, :2] = m2
        m4[2:, 2:] = np.diag([0.3, -0.2])
        closed = hermitian_eigvalsh(m2, method="closed")
        padded = hermitian_eigvalsh(m4, method="jacobi")
        want = np.sort(np.concatenate([closed, [0.3, -0.2]]))
        np.testing.assert_allclose(padded, want, atol=1e-10 * max(1.0, abs(b)))


class TestEntropy:
    def test_pure(self):
        assert von_neumann_entropy(density_from_ket(PLUS)) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert von_neumann_entropy(DensityMatrix((2,), np.eye(2) / 2)) == pytest.approx(1.0, abs=1e-15)

    def test_quarter_three_quarters(self):
        # -(1/4)log2(1/4) - (3/4)log2(3/4)
        want = 0.5 + 0.75 * math.log2(4 / 3)
        assert want == pytest.approx(0.811278, abs=1e-6)
        rho = DensityMatrix((2,), np.diag([0.25, 0.75]))
        assert von_neumann_entropy(rho) == pytest.approx(want, abs=1e-14)

    def test_requires_unit_trace(self):
        with pytest.raises(ValueError):
            von_neumann_entropy(DensityMatrix((2,), np.eye(2)))

    def test_bounded_by_log_dim(self):
        rng = np.random.default_rng(5)
        for d in (2, 4, 8):
            s = von_neumann_entropy(random_density(rng, d))
            assert 0 <= s <= math.log2(d)


class TestTraceDistance:
    def test_identical(self):
        rho = density_from_ket(PLUS)
        assert trace_distance(rho, rho) == 0

    def test_orthogonal(self):
        assert trace_distance(density_from_ket(KET0), density_from_ket(KET1)) == pytest.approx(1.0, abs=1e-15)

    def test_zero_vs_plus(self):
        # difference [[1/2, -1/2], [-1/2, -1/2]] has eigenvalues +-1/sqrt2
        assert trace_distance(density_from_ket(KET0), density_from_ket(PLUS)) == pytest.approx(S2, abs=1e-15)
        assert S2 == pytest.approx(0.707107, abs=1e-6)

    def test_dims_mismatch(self):
        with pytest.raises(ValueError):
            trace_distance(density_from_ket(KET0), density_from_ket(tensor(KET0, KET0)))

    def test_symmetric_and_triangle(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            r, s, t = (random_density(rng, 4) for _ in range(3))
            rs, st_, rt = trace_distance(r, s), trace_distance(s, t), trace_distance(r, t)
            assert rs == pytest.approx(trace_distance(s, r), abs=1e-12)
            assert rt <= rs + st_ + 1e-10
            assert 0 <= rs <= 1
