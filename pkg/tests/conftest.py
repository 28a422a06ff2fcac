"""Shared pytest configuration"""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: wall-clock checks over whole bundled models (deselect with -m 'not slow')")
