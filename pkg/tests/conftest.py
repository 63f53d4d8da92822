import pytest
from hypothesis import HealthCheck, settings


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase outcomes so the acceptance suite can print a
    # PASS/FAIL line per criterion
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def demo_run(tmp_path_factory):
    """One full pipeline run over the bundled demo dataset."""
    from colorbasis.config import load_config
    from colorbasis.demo import write_demo
    from colorbasis.pipeline import run_pipeline

    root = tmp_path_factory.mktemp("demo")
    config_path = write_demo(root)
    cfg = load_config(config_path)
    manifest = run_pipeline(cfg)
    return cfg, manifest
