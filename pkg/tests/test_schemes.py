import numpy as np
import pytest

from covprop import (
    ExactProfile,
    Scheme,
    VelocityField,
    build_grid,
    build_propagator,
    mass_ratio,
    propagate_state,
    skew_centered_operator,
    timestep_from_cfl,
)

TWO_PI = 2.0 * np.pi
T = 3.979


def constant_field(c0):
    return VelocityField(
        kind="constant",
        speed=lambda x: np.full_like(np.asarray(x, dtype=float), c0),
        speed_derivative=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        speed_second_derivative=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )


class TestGrid:
    def test_default_spacing(self):
        grid = build_grid(200)
        assert grid.dx == pytest.approx(TWO_PI / 200)
        assert grid.nodes[0] == 0.0
        assert len(grid.nodes) == 200

    def test_small_grid(self):
        assert build_grid(8).dx == pytest.approx(np.pi / 4)

    def test_rejects_tiny_grid(self):
        with pytest.raises(ValueError):
            build_grid(7)

    def test_node_150_is_speed_minimum(self):
        grid = build_grid(200)
        assert grid.node_index(1.5 * np.pi) == 150
        assert grid.nodes[150] == pytest.approx(1.5 * np.pi)


class TestTimeStepping:
    def test_unit_cfl(self, grid200):
        ts = timestep_from_cfl(1.0, grid200)
        assert ts.dt == pytest.approx(TWO_PI / 600)
        assert ts.steps_to(T) == 380
        assert 380 * ts.dt == pytest.approx(3.9794, abs=1e-4)

    def test_half_cfl(self, grid200):
        assert timestep_from_cfl(0.5, grid200).dt == pytest.approx(TWO_PI / 1200)

    @pytest.mark.parametrize("lam", [0.0, -0.3, 1.5])
    def test_rejects_bad_cfl(self, grid200, lam):
        with pytest.raises(ValueError):
            timestep_from_cfl(lam, grid200)


class TestSkewOperator:
    def test_exactly_skew(self, grid200):
        A = skew_centered_operator(grid200)
        assert np.max(np.abs(A + A.T)) == 0.0

    def test_constant_speed_annihilates_constants(self):
        grid = build_grid(64)
        A = skew_centered_operator(grid, constant_field(2.0))
        assert np.max(np.abs(A @ np.ones(64))) < 1e-13

    def test_consistency_order(self):
        # Taylor oracle: A q should approach -(v q_x + v'/2 q) at order 2
        q = lambda x: np.sin(2 * x) + 0.3 * np.cos(x)  # noqa: E731
        dq = lambda x: 2 * np.cos(2 * x) - 0.3 * np.sin(x)  # noqa: E731
        errs = []
        for n in (64, 128, 256):
            grid = build_grid(n)
            x = grid.nodes
            target = -((np.sin(x) + 2) * dq(x) + 0.5 * np.cos(x) * q(x))
            errs.append(np.max(np.abs(skew_centered_operator(grid) @ q(x) - target)))
        orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
        assert min(orders) > 1.9


class TestPropagators:
    def test_cn_half_weight_is_orthogonal(self, propagators):
        U = propagators[(Scheme.CRANK_NICOLSON, 0.5)].matrix
        assert np.max(np.abs(U.T @ U - np.eye(200))) <= 1e-12

    def test_lw_half_weight_is_not_orthogonal(self, propagators):
        B = propagators[(Scheme.LAX_WENDROFF, 0.5)].matrix
        assert np.max(np.abs(B.T @ B - np.eye(200))) > 1e-3

    def test_lw_reduces_to_classical_for_constant_speed(self):
        n, c0 = 64, 2.0
        grid = build_grid(n)
        ts = timestep_from_cfl(1.0, grid)
        B = build_propagator(Scheme.LAX_WENDROFF, 0.0, grid, ts,
                             constant_field(c0)).matrix
        nu = c0 * ts.dt / grid.dx
        up = np.roll(np.eye(n), 1, axis=1)  # picks out q_{j+1}
        dn = np.roll(np.eye(n), -1, axis=1)
        classical = (np.eye(n) - 0.5 * nu * (up - dn)
                     + 0.5 * nu**2 * (up - 2 * np.eye(n) + dn))
        assert np.max(np.abs(B - classical)) < 1e-14

    def test_lw_preserves_constants_for_constant_speed(self):
        grid = build_grid(64)
        ts = timestep_from_cfl(1.0, grid)
        B = build_propagator(Scheme.LAX_WENDROFF, 0.0, grid, ts,
                             constant_field(1.7)).matrix
        assert np.max(np.abs(B @ np.ones(64) - 1.0)) < 1e-14

    def test_propagators_stay_bounded(self, propagators):
        # 380-step powers stay modest (CN alpha=1 peaks near 4.2 through
        # non-normal transient growth); guards against the blow-up a
        # wide-stencil Taylor construction would produce here (~1e17)
        for key, prop in propagators.items():
            power = np.linalg.matrix_power(prop.matrix, 380)
            assert np.linalg.norm(power, 2) < 10.0, key

    def test_unknown_scheme_rejected(self, grid200, ts200):
        with pytest.raises(ValueError):
            build_propagator("upwind", 1.0, grid200, ts200)


class TestStatePropagation:
    def test_zero_steps_identity(self, propagators, rng):
        prop = propagators[(Scheme.CRANK_NICOLSON, 1.0)]
        q = rng.standard_normal(200)
        assert np.array_equal(propagate_state(prop, q, 0), q)

    def test_cn_norm_conservation(self, propagators, rng):
        prop = propagators[(Scheme.CRANK_NICOLSON, 0.5)]
        q = rng.standard_normal(200)
        out = propagate_state(prop, q, 380)
        assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(q), abs=1e-10)

    def test_lw_unit_start_matches_mass_ratio(self, propagators, grid200, ts200):
        prop = propagators[(Scheme.LAX_WENDROFF, 1.0)]
        q = propagate_state(prop, np.ones(200), 380)
        exact = mass_ratio(grid200.nodes, 380 * ts200.dt)
        assert np.max(np.abs(q - exact)) <= 2e-2

    def test_second_order_convergence(self):
        f0 = lambda s: np.sin(3 * s) / 3 + 1  # noqa: E731
        for scheme in (Scheme.LAX_WENDROFF, Scheme.CRANK_NICOLSON):
            errs = []
            for n in (200, 400, 800):
                grid = build_grid(n)
                ts = timestep_from_cfl(1.0, grid)
                k = ts.steps_to(T)
                prop = build_propagator(scheme, 1.0, grid, ts)
                q = propagate_state(prop, f0(grid.nodes), k)
                exact = ExactProfile(1.0, f0).value(grid.nodes, k * ts.dt)
                errs.append(np.sqrt(grid.dx * np.sum((q - exact) ** 2)))
            orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
            assert min(orders) >= 1.8, (scheme, errs, orders)

    def test_dimension_mismatch(self, propagators):
        with pytest.raises(ValueError):
            propagate_state(propagators[(Scheme.CRANK_NICOLSON, 1.0)], np.ones(100), 1)
        with pytest.raises(ValueError):
            propagate_state(propagators[(Scheme.CRANK_NICOLSON, 1.0)], np.ones(200), -1)
