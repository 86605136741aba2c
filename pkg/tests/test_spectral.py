import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings

from steklov import (
    EmptyBoundaryError,
    GraphError,
    differential,
    dirichlet_energy,
    graph_from_arrays,
    harmonic_extension,
    laplacian,
    normal_derivative,
    rayleigh_quotient,
    steklov_spectrum,
    steklov_system,
)

from strategies import connected_graphs


def oracle_schur(g):
    """Schur complement by explicit inverse (independent of the solver path)."""
    L, _ = laplacian(g)
    b = np.asarray(g.boundary, dtype=np.intp)
    o = np.asarray(g.interior, dtype=np.intp)
    if len(o) == 0:
        return L[np.ix_(b, b)]
    return L[np.ix_(b, b)] - L[np.ix_(b, o)] @ np.linalg.inv(
        L[np.ix_(o, o)]
    ) @ L[np.ix_(o, b)]


def oracle_schur_by_definition(g):
    """Column-by-column from the definition: extend each boundary basis
    vector harmonically and read off the mass-weighted normal derivative."""
    nb = len(g.boundary)
    bidx = np.asarray(g.boundary, dtype=np.intp)
    cols = []
    for i in range(nb):
        f = np.zeros(nb)
        f[i] = 1.0
        u = harmonic_extension(g, f)
        cols.append(g.measures[bidx] * normal_derivative(g, u))
    return np.column_stack(cols)


def oracle_spectrum(g):
    """Generalized symmetric eigensolve, scipy route."""
    S = oracle_schur(g)
    M = np.diag(g.measures[np.asarray(g.boundary, dtype=np.intp)])
    return scipy.linalg.eigh(S, M, eigvals_only=True)


class TestLaplacian:
    def test_k2(self, k2):
        L, m = laplacian(k2)
        assert np.array_equal(L, [[1.0, -1.0], [-1.0, 1.0]])
        assert np.array_equal(m, [1.0, 1.0])

    def test_path3_middle_row(self, path3):
        L, _ = laplacian(path3)
        assert list(L[1]) == [-1.0, 2.0, -1.0]

    def test_weighted_offdiagonal(self):
        g = graph_from_arrays([1.0, 1.0], [0, 1], [(0, 1, 2.5)])
        L, _ = laplacian(g)
        assert L[0, 1] == -2.5
        assert L[0, 0] == 2.5

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs())
    def test_zero_row_sums(self, g):
        L, _ = laplacian(g)
        assert np.allclose(L.sum(axis=1), 0.0, atol=1e-12)


class TestDifferential:
    def test_constant_is_zero(self, c4):
        du = differential(c4, np.full(4, 3.7))
        assert np.all(du.values == 0.0)

    def test_k2_values(self, k2):
        du = differential(k2, [0.0, 1.0])
        assert du.at(0, 1) == 1.0
        assert du.at(1, 0) == -1.0

    def test_non_edge_is_zero(self, path3):
        du = differential(path3, [0.0, 1.0, 5.0])
        assert du.at(0, 2) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_n=6))
    def test_linearity(self, g):
        rng = np.random.default_rng(0)
        u = rng.standard_normal(g.n)
        v = rng.standard_normal(g.n)
        lhs = differential(g, u + v).values
        rhs = differential(g, u).values + differential(g, v).values
        assert np.allclose(lhs, rhs, atol=1e-12)


class TestDirichletEnergy:
    def test_k2_unit(self, k2):
        du = differential(k2, [0.0, 1.0])
        assert dirichlet_energy(k2, du, du) == 1.0

    def test_zero(self, k2):
        du = differential(k2, [2.0, 2.0])
        assert dirichlet_energy(k2, du, du) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_n=7))
    def test_integration_by_parts(self, g):
        # <Delta u, v> = -<du, dv> with the m-weighted vertex inner product
        rng = np.random.default_rng(1)
        u = rng.standard_normal(g.n)
        v = rng.standard_normal(g.n)
        L, m = laplacian(g)
        delta_u = -(L @ u) / m
        lhs = float(np.dot(delta_u * m, v))
        rhs = -dirichlet_energy(g, differential(g, u), differential(g, v))
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))

    @settings(max_examples=40, deadline=None)
    @given(connected_graphs(max_n=7, min_boundary=1))
    def test_green_formula_general(self, g):
        # <Delta u, v>_Omega = -<du, dv> + <du/dn, v>_B for arbitrary u, v
        rng = np.random.default_rng(2)
        u = rng.standard_normal(g.n)
        v = rng.standard_normal(g.n)
        L, m = laplacian(g)
        delta_u = -(L @ u) / m
        iidx = np.asarray(g.interior, dtype=np.intp)
        bidx = np.asarray(g.boundary, dtype=np.intp)
        lhs = float(np.dot(delta_u[iidx] * m[iidx], v[iidx]))
        flux = normal_derivative(g, u)
        rhs = -dirichlet_energy(g, differential(g, u), differential(g, v)) + float(
            np.dot(flux * m[bidx], v[bidx])
        )
        assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs), abs(rhs))


class TestHarmonicExtension:
    def test_path3_midpoint(self, path3):
        u = harmonic_extension(path3, [0.0, 1.0])
        assert u[1] == pytest.approx(0.5, abs=1e-14)

    def test_constants_extend_exactly(self, c4):
        u = harmonic_extension(c4, [2.5, 2.5])
        assert np.allclose(u, 2.5, atol=1e-13)

    def test_c4_interior_averages(self, c4):
        f0, f2 = 0.3, 1.1
        u = harmonic_extension(c4, [f0, f2])
        assert u[1] == pytest.approx((f0 + f2) / 2, abs=1e-13)
        assert u[3] == pytest.approx((f0 + f2) / 2, abs=1e-13)

    def test_empty_interior_is_identity(self, k2):
        u = harmonic_extension(k2, [4.0, -1.0])
        assert list(u) == [4.0, -1.0]

    def test_disconnected_raises(self):
        g = graph_from_arrays([1.0] * 4, [0, 3], [(0, 1, 1.0), (2, 3, 1.0)])
        with pytest.raises(GraphError):
            harmonic_extension(g, [0.0, 1.0])

    def test_empty_boundary_raises(self):
        g = graph_from_arrays([1.0, 1.0], [], [(0, 1, 1.0)])
        with pytest.raises(EmptyBoundaryError):
            harmonic_extension(g, [])

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(max_n=8, min_boundary=1))
    def test_interior_residual_and_max_principle(self, g):
        rng = np.random.default_rng(3)
        f = rng.standard_normal(len(g.boundary))
        u = harmonic_extension(g, f)
        L, m = laplacian(g)
        residual = np.abs((L @ u)[np.asarray(g.interior, dtype=np.intp)])
        degw = max((L[i, i] for i in range(g.n)), default=0.0)
        bound = 1e-10 * max(1.0, float(np.abs(f).max())) * max(1.0, degw)
        assert np.all(residual <= bound)
        slack = 1e-12 * max(1.0, float(np.abs(f).max()))
        assert np.all(u >= f.min() - slack)
        assert np.all(u <= f.max() + slack)


class TestSteklovSystem:
    def test_k2_no_interior(self, k2):
        sys = steklov_system(k2)
        assert np.array_equal(sys.schur, [[1.0, -1.0], [-1.0, 1.0]])
        assert sys.boundary_order == (0, 1)

    def test_path3_by_hand(self, path3):
        sys = steklov_system(path3)
        assert np.allclose(sys.schur, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-14)

    def test_c4_parallel_paths(self, c4):
        sys = steklov_system(c4)
        assert np.allclose(sys.schur, [[1.0, -1.0], [-1.0, 1.0]], atol=1e-14)

    def test_star_matches_oracle(self, star):
        sys = steklov_system(star)
        assert np.allclose(sys.schur, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-14)
        assert np.allclose(sys.schur, oracle_schur(star), atol=1e-13)

    def test_empty_boundary_raises(self):
        g = graph_from_arrays([1.0, 1.0], [], [(0, 1, 1.0)])
        with pytest.raises(EmptyBoundaryError):
            steklov_system(g)

    def test_json_serialization(self, path3):
        doc = steklov_system(path3).to_json_dict(path3)
        assert doc["boundary"] == ["v0", "v2"]
        assert doc["boundary_mass"] == [1.0, 1.0]
        assert doc["schur_row_major"] == pytest.approx([0.5, -0.5, -0.5, 0.5])
        sdoc = steklov_spectrum(path3).to_json_dict(path3)
        assert sdoc["boundary"] == ["v0", "v2"]
        assert sdoc["eigenvalues"] == pytest.approx([0.0, 1.0], abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(max_n=8, min_boundary=1))
    def test_matches_both_oracles(self, g):
        sys = steklov_system(g)
        scale = max(1.0, float(np.abs(sys.schur).max()))
        assert np.allclose(sys.schur, oracle_schur(g), atol=1e-10 * scale)
        assert np.allclose(
            sys.schur, oracle_schur_by_definition(g), atol=1e-10 * scale
        )

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(max_n=8, min_boundary=1))
    def test_type_invariants(self, g):
        sys = steklov_system(g)
        S = sys.schur
        scale = max(1.0, float(np.abs(S).max()))
        assert np.array_equal(S, S.T)
        assert np.abs(S @ np.ones(len(sys.boundary_order))).max() <= 1e-10 * scale
        eig = np.linalg.eigvalsh(S)
        assert eig[0] >= -1e-10 * max(1.0, float(np.abs(eig).max()))


class TestSpectrum:
    def test_k2(self, k2):
        s = steklov_spectrum(k2)
        assert np.allclose(s.eigenvalues, [0.0, 2.0], atol=1e-12)

    def test_path3(self, path3):
        s = steklov_spectrum(path3)
        assert np.allclose(s.eigenvalues, [0.0, 1.0], atol=1e-12)

    def test_single_boundary_vertex(self, path3):
        g = graph_from_arrays([1.0] * 3, [0], [(0, 1, 1.0), (1, 2, 1.0)])
        s = steklov_spectrum(g)
        assert len(s.eigenvalues) == 1
        assert abs(s.eigenvalues[0]) <= 1e-12
        assert s.sigma(1) == pytest.approx(0.0, abs=1e-12)
        assert s.sigma(2) == float("inf")

    def test_sigma_index_validation(self, k2):
        with pytest.raises(IndexError):
            steklov_spectrum(k2).sigma(0)

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(max_n=8, min_boundary=1))
    def test_matches_generalized_oracle(self, g):
        s = steklov_spectrum(g)
        assert len(s.eigenvalues) == len(g.boundary)
        assert np.all(np.diff(s.eigenvalues) >= 0)
        ref = oracle_spectrum(g)
        assert np.allclose(s.eigenvalues, ref, atol=1e-9 * max(1.0, ref[-1]))

    @settings(max_examples=50, deadline=None)
    @given(connected_graphs(max_n=8, min_boundary=2))
    def test_kernel_and_positivity(self, g):
        s = steklov_spectrum(g, with_vectors=True)
        scale = max(1.0, float(s.eigenvalues[-1]))
        assert abs(s.eigenvalues[0]) <= 1e-10 * scale
        assert s.eigenvalues[1] > 0
        # m-orthonormality of returned eigenvectors
        mass = g.measures[np.asarray(g.boundary, dtype=np.intp)]
        gram = s.eigenvectors.T @ (mass[:, None] * s.eigenvectors)
        assert np.allclose(gram, np.eye(len(g.boundary)), atol=1e-9)

    def test_scaling_covariance(self):
        rng = np.random.default_rng(5)
        from conftest import rng_graph

        for c in (3.7, 0.25):
            g = rng_graph(rng, 9, boundary_size=4)
            base = steklov_spectrum(g).eigenvalues
            gw = graph_from_arrays(
                g.measures, g.boundary, [(u, v, w * c) for u, v, w in g.edges]
            )
            scaled_w = steklov_spectrum(gw).eigenvalues
            assert np.allclose(scaled_w, c * base, rtol=1e-10, atol=1e-12)
            gm = graph_from_arrays(
                np.asarray(g.measures) * c, g.boundary, list(g.edges)
            )
            scaled_m = steklov_spectrum(gm).eigenvalues
            assert np.allclose(scaled_m, base / c, rtol=1e-10, atol=1e-12)


class TestRayleigh:
    def test_k2_antisymmetric(self, k2):
        assert rayleigh_quotient(k2, [1.0, -1.0]) == pytest.approx(2.0, abs=1e-13)

    def test_eigenfunction_recovers_sigma2(self, star):
        s = steklov_spectrum(star, with_vectors=True)
        sigma2 = s.eigenvalues[1]
        value = rayleigh_quotient(star, s.eigenvectors[:, 1])
        assert value == pytest.approx(sigma2, rel=1e-9)

    def test_zero_function_rejected(self, k2):
        with pytest.raises(GraphError, match="zero boundary"):
            rayleigh_quotient(k2, [0.0, 0.0])

    @settings(max_examples=30, deadline=None)
    @given(connected_graphs(max_n=7, min_boundary=2))
    def test_variational_lower_bound(self, g):
        rng = np.random.default_rng(7)
        s = steklov_spectrum(g)
        sigma2 = s.sigma(2)
        mass = g.measures[np.asarray(g.boundary, dtype=np.intp)]
        for _ in range(25):
            f = rng.standard_normal(len(g.boundary))
            f -= np.dot(f, mass) / mass.sum()  # m-orthogonal to constants
            if not np.any(np.abs(f) > 1e-12):
                continue
            assert rayleigh_quotient(g, f) >= sigma2 - 1e-9 * max(1.0, sigma2)
