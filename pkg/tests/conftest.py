import pytest


@pytest.fixture(autouse=True)
def _isolated_store(tmp_path, monkeypatch):
    # every test gets its own result store
    monkeypatch.setenv("LAMBDA_LAB_STORE", str(tmp_path / "store"))
    yield
