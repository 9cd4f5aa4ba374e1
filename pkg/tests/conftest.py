import numpy as np
import pytest

from laplace2d.grid import BoundaryMask, GridSpec, ProblemSpec, paper_chamber_problem, symmetric_chamber_problem


def random_problem(rng, m, n, dx=None, dy=None, holes=0, name="random"):
    """Random Dirichlet values on the outer ring plus ``holes`` interior Dirichlet points."""
    dx = float(rng.choice([0.25, 0.5, 1.0])) if dx is None else dx
    dy = dx * float(rng.choice([0.5, 1.0, 2.0])) if dy is None else dy
    grid = GridSpec(m, n, dx, dy)
    interior = np.zeros((m, n), dtype=bool)
    interior[1:-1, 1:-1] = True
    values = rng.uniform(-1.0, 1.0, size=(m, n))
    if holes:
        cand = np.argwhere(interior)
        for i, j in cand[rng.choice(len(cand), size=min(holes, len(cand) - 1), replace=False)]:
            interior[i, j] = False
    values[interior] = 0.0
    return ProblemSpec(grid, BoundaryMask(grid, interior, values), name)


def max_levels(problem):
    """Deepest hierarchy whose coarsest grid still has an interior point, or 1."""
    from laplace2d.multigrid import build_hierarchy
    from laplace2d.grid import SizingError

    best = 1
    for levels in range(2, 6):
        try:
            build_hierarchy(problem, levels)
        except SizingError:
            break
        best = levels
    return best


@pytest.fixture(scope="session")
def chamber():
    return paper_chamber_problem()


@pytest.fixture(scope="session")
def symmetric():
    return symmetric_chamber_problem()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: dict[int, tuple[str, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    number, title = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _ACCEPTANCE[number] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number:2d}. {title}" + (f"  ({detail})" if detail else ""))
