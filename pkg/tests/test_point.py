import numpy as np
import pytest

from laplace2d import DivergenceError, SolverConfig, solve
from laplace2d.grid import BoundaryMask, GridSpec, ProblemSpec, ScalarField
from laplace2d.oracle import direct_solution
from laplace2d.point import gauss_seidel_sweep, jacobi_sweep, sor_sweep

from conftest import random_problem


def _single_point(values, dx=1.0, dy=1.0):
    g = GridSpec(3, 3, dx, dy)
    v = np.zeros((3, 3))
    v[2, 1], v[0, 1], v[1, 2], v[1, 0] = values  # east, west, north, south
    return BoundaryMask.rectangle(g, v)


def _reference_gs(psi, mask, omega=1.0):
    """Point-by-point sweep written straight from the update rule."""
    psi = psi.copy()
    b2 = mask.grid.beta ** 2
    m, n = psi.shape
    for j in range(1, n - 1):
        for i in range(1, m - 1):
            if not mask.interior[i, j]:
                continue
            new = (psi[i + 1, j] + psi[i - 1, j] + b2 * (psi[i, j + 1] + psi[i, j - 1])) / (2 * (1 + b2))
            psi[i, j] = (1 - omega) * psi[i, j] + omega * new
    return psi


class TestJacobi:
    @pytest.mark.parametrize("beta", [0.5, 1.0, 3.0])
    def test_constant_is_fixed_point(self, beta):
        g = GridSpec(6, 5, 1.0, 1.0 / beta)
        mask = BoundaryMask.rectangle(g, np.full(g.shape, 2.5))
        new = jacobi_sweep(np.full(g.shape, 2.5), mask)
        assert np.allclose(new, 2.5, rtol=0, atol=1e-15)

    def test_single_point(self):
        mask = _single_point((1.0, 2.0, 3.0, 4.0))
        new = jacobi_sweep(mask.values.copy(), mask)
        assert new[1, 1] == 2.5

    def test_does_not_modify_input(self):
        p = random_problem(np.random.default_rng(0), 6, 6)
        old = p.mask.values.copy()
        snapshot = old.copy()
        jacobi_sweep(old, p.mask)
        assert np.array_equal(old, snapshot)

    def test_fixed_point_is_direct_solution(self):
        p = random_problem(np.random.default_rng(5), 5, 5, dx=1.0, dy=1.0)
        exact = direct_solution(p).values
        assert np.max(np.abs(jacobi_sweep(exact, p.mask) - exact)) <= 1e-10

    def test_scalar_field_in_scalar_field_out(self):
        p = random_problem(np.random.default_rng(1), 5, 5)
        out = jacobi_sweep(p.mask.initial_field(), p.mask)
        assert isinstance(out, ScalarField)


class TestGaussSeidel:
    def test_single_point_matches_jacobi(self):
        mask = _single_point((1.0, 2.0, 3.0, 4.0), 0.5, 0.25)
        a = jacobi_sweep(mask.values.copy(), mask)
        b = gauss_seidel_sweep(mask.values.copy(), mask)
        assert np.array_equal(a, b)

    def test_constant_preserved(self):
        g = GridSpec(5, 7, 0.3, 0.2)
        mask = BoundaryMask.rectangle(g, np.full(g.shape, -1.25))
        psi = np.full(g.shape, -1.25)
        gauss_seidel_sweep(psi, mask)
        assert np.allclose(psi, -1.25, atol=1e-15)

    def test_4x4_matches_scripted_order(self):
        rng = np.random.default_rng(9)
        g = GridSpec(4, 4, 1.0, 0.5)
        mask = BoundaryMask.rectangle(g, rng.normal(size=(4, 4)))
        psi = mask.values.copy()
        psi[1:3, 1:3] = rng.normal(size=(2, 2))
        expected = psi.copy()
        # (1,1) -> (2,1) -> (1,2) -> (2,2), each reading the latest values
        b2 = g.beta ** 2
        d = 2 * (1 + b2)
        for i, j in [(1, 1), (2, 1), (1, 2), (2, 2)]:
            e = expected
            e[i, j] = (e[i + 1, j] + e[i - 1, j] + b2 * (e[i, j + 1] + e[i, j - 1])) / d
        gauss_seidel_sweep(psi, mask)
        assert np.allclose(psi, expected, rtol=0, atol=1e-15)

    def test_matches_reference_on_holey_mask(self):
        p = random_problem(np.random.default_rng(3), 8, 7, holes=4)
        psi = p.mask.values.copy()
        psi[p.mask.interior] = np.random.default_rng(4).normal(size=p.mask.n_interior)
        ref = _reference_gs(psi, p.mask)
        gauss_seidel_sweep(psi, p.mask)
        assert np.allclose(psi, ref, rtol=0, atol=1e-14)


class TestSOR:
    def test_omega_one_is_bitwise_gauss_seidel(self, chamber):
        a = chamber.mask.values.copy()
        b = a.copy()
        for _ in range(25):
            gauss_seidel_sweep(a, chamber.mask)
            sor_sweep(b, chamber.mask, 1.0)
            assert np.array_equal(a, b)

    def test_omega_zero_freezes(self, chamber):
        psi = chamber.mask.values.copy()
        psi[chamber.mask.interior] = 0.3
        before = psi.copy()
        sor_sweep(psi, chamber.mask, 0.0)
        assert np.array_equal(psi, before)

    @pytest.mark.parametrize("omega", [0.7, 1.3, 1.9])
    def test_matches_reference(self, omega):
        p = random_problem(np.random.default_rng(11), 7, 6, holes=2)
        psi = p.mask.values.copy()
        ref = _reference_gs(psi, p.mask, omega)
        sor_sweep(psi, p.mask, omega)
        assert np.allclose(psi, ref, rtol=0, atol=1e-14)

    def test_relaxation_accelerates(self, chamber):
        _, h1 = solve(chamber, SolverConfig(method="sor", omega=1.0))
        _, h2 = solve(chamber, SolverConfig(method="sor", omega=1.75))
        assert h2.iterations < h1.iterations


class TestDriver:
    def test_zero_problem_one_iteration(self):
        g = GridSpec(6, 6, 1.0, 1.0)
        p = ProblemSpec(g, BoundaryMask.rectangle(g))
        for method in ("jacobi", "gs", "sor", "slora", "slorb", "adi"):
            f, h = solve(p, SolverConfig(method=method, omega=1.4))
            assert h.iterations == 1 and h.converged
            assert np.all(f.values == 0.0)

    def test_history_invariants(self, chamber):
        f, h = solve(chamber, SolverConfig(method="gs"))
        assert len(h.errors) == h.iterations
        assert h.converged and h.errors[-1] <= 1e-9
        assert h.wall_time > 0
        assert np.isfinite(f.values).all()

    def test_max_iter_reached(self, chamber):
        f, h = solve(chamber, SolverConfig(method="jacobi", max_iter=10))
        assert not h.converged
        assert h.iterations == 10 == len(h.errors)

    def test_jacobi_gs_ratio(self, chamber):
        _, hj = solve(chamber, SolverConfig(method="jacobi"))
        _, hg = solve(chamber, SolverConfig(method="gs"))
        assert 1.8 <= hj.iterations / hg.iterations <= 2.2

    def test_divergence_detected(self, chamber):
        with pytest.raises(DivergenceError) as info:
            solve(chamber, SolverConfig(method="sor", omega=2.5))
        hist = info.value.history
        assert info.value.iteration <= 100_000
        assert any("unstable" in w for w in hist.warnings)
        assert all(np.isfinite(hist.errors))
        assert not hist.converged

    def test_initial_field_restart(self, chamber):
        f1, h1 = solve(chamber, SolverConfig(method="gs"))
        f2, h2 = solve(chamber, SolverConfig(method="gs"), initial=f1)
        assert h2.iterations < 5
        assert np.max(np.abs(f2.values - f1.values)) < 1e-7

    def test_initial_dirichlet_values_enforced(self, chamber):
        junk = ScalarField(chamber.grid, np.full(chamber.grid.shape, 9.0))
        f, _ = solve(chamber, SolverConfig(method="sor", omega=1.7), initial=junk)
        assert np.array_equal(f.values[~chamber.mask.interior], chamber.mask.values[~chamber.mask.interior])

    @pytest.mark.parametrize("method", ["jacobi", "gs"])
    def test_error_monotone_after_warmup(self, chamber, method):
        _, h = solve(chamber, SolverConfig(method=method))
        e = np.array(h.errors[5:])
        assert np.all(e[1:] <= e[:-1] + 1e-15)

    @pytest.mark.parametrize("method,omega", [("jacobi", 1.0), ("gs", 1.0), ("sor", 1.0)])
    def test_maximum_principle(self, method, omega):
        p = random_problem(np.random.default_rng(21), 9, 8, holes=3)
        lo = p.mask.values[~p.mask.interior].min()
        hi = p.mask.values[~p.mask.interior].max()
        psi = p.mask.values.copy()
        psi[p.mask.interior] = np.random.default_rng(22).uniform(lo, hi, p.mask.n_interior)
        for _ in range(50):
            if method == "jacobi":
                psi = jacobi_sweep(psi, p.mask)
            elif method == "gs":
                gauss_seidel_sweep(psi, p.mask)
            else:
                sor_sweep(psi, p.mask, omega)
            assert psi.min() >= lo - 1e-15 and psi.max() <= hi + 1e-15

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(tol=0)
        with pytest.raises(ValueError):
            SolverConfig(max_iter=0)
        with pytest.raises(ValueError):
            SolverConfig(method="nope")
