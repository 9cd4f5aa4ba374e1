import numpy as np
import pytest

from laplace2d import solve, SolverConfig
from laplace2d.grid import (
    BoundaryMask,
    GridSpec,
    ProblemSpec,
    ScalarField,
    SizingError,
    make_grid,
    paper_chamber_problem,
    symmetric_chamber_problem,
)


class TestMakeGrid:
    def test_chamber_sizing(self):
        g = make_grid(6.0, 4.0, 0.25, 0.25)
        assert (g.m, g.n) == (25, 17)
        assert g.size == 425
        assert g.lx == 6.0 and g.ly == 4.0

    def test_smallest(self):
        g = make_grid(1.0, 1.0, 0.5, 0.5)
        assert (g.m, g.n) == (3, 3)

    def test_anisotropic(self):
        g = make_grid(2.0, 1.0, 0.25, 0.5)
        assert (g.m, g.n) == (9, 3)
        assert g.beta == 0.5

    @pytest.mark.parametrize("args", [(6.1, 4.0, 0.25, 0.25), (6.0, 4.0, 0.0, 0.25), (-1.0, 1.0, 0.5, 0.5)])
    def test_rejects_bad_sizes(self, args):
        with pytest.raises(SizingError):
            make_grid(*args)

    def test_square_domain_square_grid(self):
        for L, d in [(1.0, 0.1), (3.0, 0.25), (2.0, 0.5)]:
            g = make_grid(L, L, d, d)
            assert g.m == g.n

    def test_gridspec_minimum(self):
        with pytest.raises(SizingError):
            GridSpec(2, 5, 1.0, 1.0)


class TestBoundaryMask:
    def test_outer_ring_must_be_dirichlet(self):
        g = GridSpec(4, 4, 1.0, 1.0)
        interior = np.ones((4, 4), dtype=bool)
        with pytest.raises(ValueError, match="outer rectangle"):
            BoundaryMask(g, interior, np.zeros((4, 4)))

    def test_needs_interior_point(self):
        g = GridSpec(3, 3, 1.0, 1.0)
        with pytest.raises(ValueError, match="no interior"):
            BoundaryMask(g, np.zeros((3, 3), dtype=bool), np.zeros((3, 3)))

    def test_nonfinite_value_rejected(self):
        g = GridSpec(3, 3, 1.0, 1.0)
        v = np.zeros((3, 3))
        v[0, 0] = np.inf
        with pytest.raises(ValueError, match="finite"):
            BoundaryMask.rectangle(g, v)

    def test_dimension_mismatch(self):
        g = GridSpec(4, 4, 1.0, 1.0)
        with pytest.raises(ValueError, match="dimensions"):
            BoundaryMask.rectangle(g, np.zeros((3, 4)))

    def test_apply_is_idempotent(self):
        for p in (paper_chamber_problem(), symmetric_chamber_problem(2.0)):
            f = np.random.default_rng(0).normal(size=p.grid.shape)
            once = p.mask.apply(f.copy())
            twice = p.mask.apply(once.copy())
            assert np.array_equal(once, twice)
            assert np.array_equal(once[~p.mask.interior], p.mask.values[~p.mask.interior])

    def test_mask_is_read_only(self, chamber):
        with pytest.raises(ValueError):
            chamber.mask.values[0, 0] = 5.0


class TestChamber:
    def test_layout(self, chamber):
        g, mask = chamber.grid, chamber.mask
        assert (g.m, g.n) == (25, 17)
        assert mask.n_interior == 23 * 15
        assert mask.n_dirichlet == 80
        assert np.all(mask.values[:, 0] == 0.0)
        assert np.all(mask.values[1:-1, -1] == 1.0)
        # gaps next to the bottom corners
        assert mask.values[0, 1] == 0.5 and mask.values[-1, 1] == 0.5
        assert np.all(mask.values[0, 2:] == 1.0) and np.all(mask.values[-1, 2:] == 1.0)

    def test_top_value_scales(self):
        p = paper_chamber_problem(3.0)
        assert p.mask.values[12, 16] == 3.0
        assert p.mask.values[0, 1] == 1.5

    def test_zero_top_value_gives_zero_solution(self):
        p = paper_chamber_problem(0.0)
        assert np.all(p.mask.values == 0.0)
        f, h = solve(p, SolverConfig(method="gs"))
        assert h.iterations == 1 and h.converged
        assert np.all(f.values == 0.0)

    @pytest.mark.parametrize("top", [-2.0, 0.0, 1.0, 7.5])
    def test_dirichlet_count(self, top):
        assert paper_chamber_problem(top).mask.n_dirichlet >= 80
        assert symmetric_chamber_problem(top).mask.n_dirichlet >= 80

    def test_symmetric_mask_mirrors_chamber_bottom(self, chamber, symmetric):
        a, b = chamber.mask.values, symmetric.mask.values
        assert np.array_equal(b[:, -1], a[:, 0])
        assert np.array_equal(b, b[:, ::-1])
        assert np.array_equal(symmetric.mask.interior, symmetric.mask.interior[:, ::-1])

    def test_symmetric_zero(self):
        f, _ = solve(symmetric_chamber_problem(0.0), SolverConfig(method="sor", omega=1.5))
        assert np.all(f.values == 0.0)


def test_problem_grid_must_match_mask(chamber):
    with pytest.raises(ValueError):
        ProblemSpec(GridSpec(5, 5, 1.0, 1.0), chamber.mask)


def test_scalar_field_shape_checked():
    with pytest.raises(ValueError):
        ScalarField(GridSpec(3, 4, 1.0, 1.0), np.zeros((4, 3)))
