pytest_plugins = ["tooling.pytest.conftest"]
