import json

import pytest

from liouville_fbm._core import configuration
from liouville_fbm._core.errors import ConfigError


@pytest.fixture(autouse=True)
def _reset():
    configuration.reset_configurations()
    yield
    configuration.reset_configurations()


def test_load_and_get_configurations(tmp_path):
    (tmp_path / 'dev.json').write_text(json.dumps({'z_threshold': 3.5, 'workers': 2}))
    configuration.load_configurations(str(tmp_path))
    settings = configuration.get_configurations()
    assert settings.z_threshold == 3.5
    assert settings.workers == 2
    assert settings.jitter_tolerance == 1e-12


def test_app_env_selects_file(tmp_path, monkeypatch):
    (tmp_path / 'ci.json').write_text(json.dumps({'max_memory_mb': 64}))
    monkeypatch.setenv('APP_ENV', 'ci')
    assert configuration.load_configurations(str(tmp_path)).max_memory_mb == 64


def test_load_configurations_file_not_found(tmp_path):
    with pytest.raises(FileNotFoundError):
        configuration.load_configurations(str(tmp_path), 'missing')


def test_unknown_setting_is_a_config_error(tmp_path):
    (tmp_path / 'dev.json').write_text(json.dumps({'foo': 'bar'}))
    with pytest.raises(ConfigError):
        configuration.load_configurations(str(tmp_path), 'dev')


def test_log_level_is_normalized(tmp_path):
    (tmp_path / 'dev.json').write_text(json.dumps({'log_level': 'debug'}))
    assert configuration.load_configurations(str(tmp_path), 'dev').log_level == 'DEBUG'


def test_get_configurations_not_loaded():
    with pytest.raises(Exception):
        configuration.get_configurations()


def test_get_settings_falls_back_to_defaults():
    settings = configuration.get_settings()
    assert settings.z_threshold == 4.0
    assert settings.trace_spans is False
