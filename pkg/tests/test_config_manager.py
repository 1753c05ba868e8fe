import json

from core.config_manager import DEFAULT_BOUND, ENV_BOUND, ConfigManager, XkitSettings


def test_defaults_are_written(tmp_path):
    config = ConfigManager(str(tmp_path))
    path = tmp_path / ConfigManager.CONFIG_FILE
    assert path.exists()
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["enumeration"]["bound"] == DEFAULT_BOUND
    assert config.settings() == XkitSettings()


def test_no_persist_writes_nothing(tmp_path):
    config = ConfigManager(str(tmp_path / "cfg"), persist=False)
    config.update_setting("enumeration.bound", 12)
    assert not (tmp_path / "cfg").exists()
    assert config.enumeration_bound() == 12


def test_dotted_keys(config):
    config.update_setting("laws.seed", 7)
    config.update_setting("new.section.value", "x")
    assert config.get_setting("laws.seed") == 7
    assert config.get_setting("new.section.value") == "x"
    assert config.get_setting("nope.nothing", 3) == 3


def test_saved_values_are_merged_with_defaults(tmp_path):
    (tmp_path / ConfigManager.CONFIG_FILE).write_text(json.dumps({"tensor": {"maxdeg": 3}}), encoding="utf-8")
    settings = ConfigManager(str(tmp_path)).settings()
    assert settings.tensor_maxdeg == 3
    assert settings.law_seed == 1729


def test_broken_file_falls_back_to_defaults(tmp_path):
    (tmp_path / ConfigManager.CONFIG_FILE).write_text("{no json", encoding="utf-8")
    assert ConfigManager(str(tmp_path)).enumeration_bound() == DEFAULT_BOUND


def test_env_bound_overrides(config, monkeypatch):
    monkeypatch.setenv(ENV_BOUND, "64")
    assert config.enumeration_bound() == 64
    assert config.settings().bound == 64


def test_invalid_env_bound_is_ignored(config, monkeypatch, caplog):
    for raw in ("abc", "0", "-3"):
        monkeypatch.setenv(ENV_BOUND, raw)
        assert config.enumeration_bound() == DEFAULT_BOUND
    assert ENV_BOUND in caplog.text


def test_reset_to_defaults(config):
    config.update_setting("cubes.max_dimension", 3)
    config.reset_to_defaults()
    assert config.settings().max_cube_dimension == 6
