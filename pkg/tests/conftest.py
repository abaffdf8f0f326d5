import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _fresh_family_cache():
    # family tables are cached per (q, g); tests that monkeypatch kernels need a clean slate
    from ffdensity import densities
    yield
    densities.clear_cache()
