import pytest

from ganbf.model import ChannelConfig
from ganbf.quadrature import QuadratureSpec
from ganbf.solver import (SolverConfig, solve_bruteforce, solve_goel_negi,
                          solve_iterative, solve_no_an)

# the reference comparison sweep: three channel conditions, thirty budgets
SWEEP_H2 = (0.05, 0.1, 0.2)
SWEEP_PT = tuple(float(p) for p in range(1, 31))


@pytest.fixture(scope="session")
def sweep_battery():
    """All four schemes solved on the full reference sweep (shared, ~minutes)."""
    quad = QuadratureSpec()
    sc = SolverConfig()
    results = {}
    for h2 in SWEEP_H2:
        config = ChannelConfig(n_t=2, h_norm_sq=h2)
        for pt in SWEEP_PT:
            results[(h2, pt)] = {
                "config": config,
                "gan": solve_iterative(config, sc, pt, quad),
                "gn": solve_goel_negi(config, pt, pt / 200.0, quad),
                "no_an": solve_no_an(config, pt, pt / 200.0, quad),
                "brute": solve_bruteforce(config, pt, pt / 200.0, quad),
            }
    return results
