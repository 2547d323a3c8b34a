import pytest

from covert_spc.covertness import QuadratureConfig
from covert_spc.model import Constraints, SystemParams


@pytest.fixture
def params():
    return SystemParams()


@pytest.fixture
def constraints():
    return Constraints()


@pytest.fixture
def quad():
    return QuadratureConfig(100)


@pytest.fixture(scope="session", autouse=True)
def validate_default_quadrature():
    """Default 100-node rule must match adaptive integration at the operating point."""
    import math

    from scipy import integrate, special

    from covert_spc.covertness import avg_detection_error_quadrature
    from covert_spc.model import willie_noise_floor

    p = SystemParams()
    s2, m, n = willie_noise_floor(p), p.lambda_aw, 100

    def f(v):
        u = m * v
        tau = s2 * (s2 + u) / u * math.log1p(u / s2)
        return (special.gammainc(n, n * tau / s2) - special.gammainc(n, n * tau / (s2 + u))) * math.exp(-v)

    ref = 1 - integrate.quad(f, 0, math.inf, epsabs=1e-13, limit=400)[0]
    assert abs(avg_detection_error_quadrature(p, 1.0, n, QuadratureConfig(100)) - ref) < 1e-6
