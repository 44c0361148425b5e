import numpy as np
import pytest

from covprop import (
    CorrelationKernel,
    Scheme,
    VarianceProfile,
    build_grid,
    build_initial_covariance,
    build_propagator,
    chordal_distance,
    correlation_row,
    diagonal,
    foar_kernel,
    gc_kernel,
    jacobi_eigenvalues,
    mass_ratio,
    normalized_spectrum,
    polar_scalar_d,
    propagate_polar,
    propagate_traditional,
    timestep_from_cfl,
    trace,
    weighted_trace,
)
from covprop.flow_exact import ExactProfile

TWO_PI = 2.0 * np.pi
T = 3.979


class TestChordalDistance:
    def test_pinned_values(self):
        assert chordal_distance(0.0, 0.0) == 0.0
        assert chordal_distance(0.0, np.pi) == pytest.approx(2.0, abs=1e-15)
        assert chordal_distance(0.0, np.pi / 2) == pytest.approx(np.sqrt(2), abs=1e-15)

    def test_symmetric_and_periodic(self, rng):
        a = rng.uniform(0, TWO_PI, 50)
        b = rng.uniform(0, TWO_PI, 50)
        assert np.allclose(chordal_distance(a, b), chordal_distance(b, a), atol=1e-15)
        assert np.allclose(chordal_distance(a + TWO_PI, b), chordal_distance(a, b),
                           atol=1e-12)

    def test_range(self, rng):
        r = chordal_distance(rng.uniform(-10, 10, 200), rng.uniform(-10, 10, 200))
        assert np.all(r >= 0.0) and np.all(r <= 2.0)


class TestKernels:
    def test_gc_pinned_values(self):
        c = 0.7
        assert gc_kernel(0.0, c) == 1.0
        assert gc_kernel(2 * c, c) == 0.0
        assert gc_kernel(2 * c + 0.1, c) == 0.0
        # both polynomial branches meet at 5/24
        inner = -0.25 + 0.5 + 0.625 - 5 / 3 + 1
        outer = 1 / 12 - 0.5 + 0.625 + 5 / 3 - 5 + 4 - 2 / 3
        assert inner == pytest.approx(5 / 24, abs=1e-15)
        assert outer == pytest.approx(5 / 24, abs=1e-15)
        assert gc_kernel(c, c) == pytest.approx(5 / 24, abs=1e-15)

    def test_gc_short_support_on_grid(self):
        # c=0.05 on the 200-node grid: 0.55 one grid length out, below 0.2
        # after two, entirely zero within four
        dx = TWO_PI / 200
        one = gc_kernel(2 * np.sin(dx / 2), 0.05)
        two = gc_kernel(2 * np.sin(dx), 0.05)
        assert one == pytest.approx(0.5505306596522904, abs=1e-12)
        assert two < 0.2
        assert gc_kernel(2 * np.sin(2 * dx), 0.05) == 0.0

    def test_gc_continuity_near_knots(self):
        c = 0.3
        for knot in (c, 2 * c):
            lo = gc_kernel(knot - 1e-9, c)
            hi = gc_kernel(knot + 1e-9, c)
            assert abs(lo - hi) < 1e-7

    def test_gc_rejects_bad_support(self):
        with pytest.raises(ValueError):
            gc_kernel(0.1, 0.0)
        with pytest.raises(ValueError):
            CorrelationKernel.gaspari_cohn(-1.0)

    def test_foar_pinned_values(self):
        assert foar_kernel(0.0, 0.5) == 1.0
        assert foar_kernel(0.25, 0.25) == pytest.approx(np.exp(-1), abs=1e-15)
        # maximum chordal distance, still strictly positive
        assert foar_kernel(2.0, 0.25) == pytest.approx(np.exp(-8), rel=1e-12)
        assert foar_kernel(2.0, 0.25) > 0.0

    def test_foar_rejects_bad_scale(self):
        with pytest.raises(ValueError):
            foar_kernel(0.1, 0.0)
        with pytest.raises(ValueError):
            CorrelationKernel.foar(-0.5)

    def test_kernel_spec_strings(self):
        assert CorrelationKernel.gaspari_cohn(0.25).spec == "gc:0.25"
        assert CorrelationKernel.foar(0.5).spec == "foar:0.5"
        assert CorrelationKernel.dirac().spec == "dirac"


class TestInitialCovariance:
    def test_dirac_unit_is_identity(self, grid200):
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid200)
        assert np.array_equal(P0.matrix, np.eye(200))
        assert trace(P0) == 200.0

    def test_diagonal_is_squared_sigma(self, grid200):
        P0 = build_initial_covariance(
            CorrelationKernel.gaspari_cohn(1.0), VarianceProfile.sinusoidal(), grid200)
        expected = (np.sin(3 * grid200.nodes) / 3 + 1) ** 2
        assert np.allclose(diagonal(P0), expected, atol=1e-15)

    def test_compact_support_bands(self, grid200):
        c = 0.25
        P0 = build_initial_covariance(
            CorrelationKernel.gaspari_cohn(c), VarianceProfile.unit(), grid200)
        r = chordal_distance(grid200.nodes[:, None], grid200.nodes[None, :])
        assert np.all(P0.matrix[r >= 2 * c] == 0.0)
        assert np.all(P0.matrix[r < 2 * c] > 0.0)

    @pytest.mark.parametrize("kernel", [
        CorrelationKernel.gaspari_cohn(1.0),
        CorrelationKernel.gaspari_cohn(0.05),
        CorrelationKernel.foar(0.5),
        CorrelationKernel.foar(0.03),
        CorrelationKernel.dirac(),
    ])
    def test_positive_semidefinite(self, grid200, kernel):
        P0 = build_initial_covariance(kernel, VarianceProfile.sinusoidal(), grid200)
        ev = np.linalg.eigvalsh(P0.matrix)
        assert ev[0] >= -1e-8 * ev[-1]


@pytest.fixture(scope="module")
def small():
    grid = build_grid(64)
    ts = timestep_from_cfl(1.0, grid)
    return {
        "grid": grid,
        "ts": ts,
        "steps": ts.steps_to(T),
        "M_cn": build_propagator(Scheme.CRANK_NICOLSON, 1.0, grid, ts),
        "U_cn": build_propagator(Scheme.CRANK_NICOLSON, 0.5, grid, ts),
        "U_lw": build_propagator(Scheme.LAX_WENDROFF, 0.5, grid, ts),
    }


class TestPropagation:
    def test_zero_steps_keep_input(self, small):
        grid = small["grid"]
        P0 = build_initial_covariance(
            CorrelationKernel.gaspari_cohn(0.5), VarianceProfile.sinusoidal(), grid)
        assert np.array_equal(
            propagate_traditional(P0, small["M_cn"], 0).matrix, P0.matrix)
        assert np.array_equal(
            propagate_polar(P0, small["U_cn"], grid, 0, small["ts"]).matrix, P0.matrix)

    def test_symmetry_preserved_every_step(self, small):
        grid = small["grid"]
        P0 = build_initial_covariance(
            CorrelationKernel.foar(0.25), VarianceProfile.sinusoidal(), grid)
        devs = []

        def watch(_, P):
            devs.append(np.max(np.abs(P - P.T)))

        propagate_traditional(P0, small["M_cn"], 50, on_step=watch)
        assert max(devs) <= 1e-12

    def test_polar_identity_reproduces_mass_ratio(self, small):
        grid, ts, steps = small["grid"], small["ts"], small["steps"]
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid)
        P = propagate_polar(P0, small["U_cn"], grid, steps, ts)
        d2 = mass_ratio(grid.nodes, steps * ts.dt)
        assert np.max(np.abs(diagonal(P) - d2)) <= 1e-10

    def test_lw_polar_identity_is_dissipative(self, small):
        grid, ts, steps = small["grid"], small["ts"], small["steps"]
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid)
        P = propagate_polar(P0, small["U_lw"], grid, steps, ts)
        d2 = mass_ratio(grid.nodes, steps * ts.dt)
        assert np.all(diagonal(P) < d2)

    def test_polar_demands_half_weight(self, small):
        grid = small["grid"]
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid)
        with pytest.raises(ValueError):
            propagate_polar(P0, small["M_cn"], grid, 3, small["ts"])

    def test_dimension_mismatch(self, small, grid200):
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid200)
        with pytest.raises(ValueError):
            propagate_traditional(P0, small["M_cn"], 1)

    def test_propagated_matrices_stay_psd(self, small):
        grid = small["grid"]
        P0 = build_initial_covariance(
            CorrelationKernel.gaspari_cohn(0.25), VarianceProfile.sinusoidal(), grid)
        P = propagate_traditional(P0, small["M_cn"], 80)
        ev = np.linalg.eigvalsh(P.matrix)
        assert ev[0] >= -1e-10 * ev[-1]

    def test_cn_trace_tracks_exact_variance_quadrature(self, grid200, ts200, propagators):
        # mild-loss regime: long correlation, unit variance
        P0 = build_initial_covariance(
            CorrelationKernel.gaspari_cohn(1.0), VarianceProfile.unit(), grid200)
        steps = ts200.steps_to(T)
        P = propagate_traditional(P0, propagators[(Scheme.CRANK_NICOLSON, 1.0)], steps)
        ones_sq = lambda s: np.ones_like(np.asarray(s, dtype=float))  # noqa: E731
        exact = float(np.sum(ExactProfile(2.0, ones_sq).value(grid200.nodes,
                                                              steps * ts200.dt)))
        assert trace(P) == pytest.approx(exact, rel=0.03)


class TestDiagnostics:
    def test_identity_diagnostics(self):
        eye = np.eye(40)
        assert trace(eye) == 40.0
        spec = normalized_spectrum(eye)
        assert np.allclose(spec.normalized, 1.0)
        row = correlation_row(eye, 7)
        assert row[7] == 1.0 and np.count_nonzero(row) == 1

    def test_weighted_trace(self, grid200):
        P0 = build_initial_covariance(
            CorrelationKernel.dirac(), VarianceProfile.unit(), grid200)
        assert weighted_trace(P0, grid200) == pytest.approx(TWO_PI)

    def test_correlation_row_recovers_kernel(self, grid200):
        kernel = CorrelationKernel.gaspari_cohn(1.0)
        P0 = build_initial_covariance(kernel, VarianceProfile.unit(), grid200)
        row = correlation_row(P0, 150)
        r = chordal_distance(grid200.nodes[150], grid200.nodes)
        assert np.allclose(row, kernel.correlation(r), atol=1e-14)

    def test_correlation_row_rejects_flat_variance(self):
        P = np.eye(10)
        P[3, 3] = 0.0
        with pytest.raises(ValueError):
            correlation_row(P, 0)

    def test_spectrum_sorted_and_normalized(self, rng):
        A = rng.standard_normal((30, 30))
        A = A @ A.T  # PSD
        spec = normalized_spectrum(A)
        assert spec.normalized[0] == 1.0
        assert np.all(np.diff(spec.normalized) <= 1e-15)


class TestJacobi:
    def test_matches_library_eigensolver(self, rng):
        for n in (3, 10, 40):
            A = rng.standard_normal((n, n))
            A = 0.5 * (A + A.T)
            ours = np.sort(jacobi_eigenvalues(A))
            ref = np.sort(np.linalg.eigvalsh(A))
            assert np.max(np.abs(ours - ref)) < 1e-11

    def test_diagonal_matrix_is_fixed_point(self):
        d = np.array([3.0, -1.0, 2.5, 0.0])
        assert np.array_equal(np.sort(jacobi_eigenvalues(np.diag(d))), np.sort(d))

    def test_rejects_nonsymmetric(self, rng):
        with pytest.raises(ValueError):
            jacobi_eigenvalues(rng.standard_normal((5, 5)))

    def test_quartic_against_characteristic_polynomial(self, rng):
        # brute-force oracle: characteristic polynomial roots for 4x4
        for _ in range(20):
            A = rng.standard_normal((4, 4))
            A = 0.5 * (A + A.T)
            coeffs = [1.0]
            Mk = np.zeros((4, 4))
            for k in range(1, 5):
                Mk = A @ (Mk + coeffs[-1] * np.eye(4))
                coeffs.append(-np.trace(Mk) / k)
            ref = np.sort(np.real(np.roots(coeffs)))
            ours = np.sort(jacobi_eigenvalues(A))
            assert np.max(np.abs(ours - ref)) < 1e-10
