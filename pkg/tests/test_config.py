import pytest

from semaps.config import load_config, resolve_config_path
from semaps.errors import ValidationError
from semaps.geo import Viewport
from semaps.ontology import SourceType


class TestConfigFile:
    def test_example_config_loads(self, fixtures_dir):
        config = load_config(fixtures_dir / "semaps.conf")
        assert config.base_namespace == "http://semaps.example/ns#"
        assert config.port == 8080
        assert config.kb_concepts == fixtures_dir / "kb" / "concepts.tsv"
        assert [s.name for s in config.sources] == ["nytimes", "dbpedia"]
        assert all(s.kind == "fixture" and s.enabled for s in config.sources)
        assert config.reliability[SourceType.DIRECT_WITNESS] == 0.8
        config.validate_files()

    def test_disabled_source(self, tmp_path):
        path = tmp_path / "c.conf"
        path.write_text("source.live = remote http://x.example/sparql disabled\n")
        config = load_config(path)
        assert config.sources[0].enabled is False

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "c.conf"
        path.write_text("colour = blue\n")
        with pytest.raises(ValidationError):
            load_config(path)

    def test_bad_value_carries_location(self, tmp_path):
        path = tmp_path / "c.conf"
        path.write_text("expansion_depth = soon\n")
        with pytest.raises(ValidationError) as err:
            load_config(path)
        assert "c.conf:1" in str(err.value)

    def test_missing_referenced_file_fails_validation(self, tmp_path):
        path = tmp_path / "c.conf"
        path.write_text("kb_concepts = nope.tsv\nkb_relations = nope2.tsv\n")
        config = load_config(path)
        with pytest.raises(ValidationError):
            config.validate_files()

    def test_env_var_fallback(self, tmp_path, monkeypatch):
        path = tmp_path / "c.conf"
        path.write_text("listen = 0.0.0.0:9999\n")
        monkeypatch.setenv("SEMAPS_CONFIG", str(path))
        assert resolve_config_path(None) == path
        monkeypatch.delenv("SEMAPS_CONFIG")
        with pytest.raises(ValidationError):
            resolve_config_path(None)


class TestViewport:
    def test_parse_bbox(self):
        viewport = Viewport.parse_bbox("-91.6,36.9,-87.0,42.6")
        assert viewport == Viewport(-91.6, 36.9, -87.0, 42.6)
        assert viewport.center() == pytest.approx((39.75, -89.3))

    def test_parse_bbox_rejects_garbage(self):
        for bad in ("a,b,c,d", "1,2,3", "", "1,2,3,4,5"):
            with pytest.raises(ValidationError):
                Viewport.parse_bbox(bad)

    def test_bounds_checked(self):
        with pytest.raises(ValidationError):
            Viewport(-200, 0, 0, 10)
        with pytest.raises(ValidationError):
            Viewport(0, 20, 10, 10)
