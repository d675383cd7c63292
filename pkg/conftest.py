# conftest.py
import json

import pytest

from data.fact_base import load_fact_base


@pytest.fixture(scope="session")
def facts():
    return load_fact_base()


@pytest.fixture
def write_json(tmp_path):
    def _write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return _write
