import os
import pytest
from ants_geometry.config import config, load_configuration, RunConfig, ConfigurationError


@pytest.fixture
def restore():
    yield
    load_configuration()


class TestConfig():

    def test_defaults(self):
        cfg = load_configuration()
        assert cfg['seed'] == 2718
        assert cfg['duration'] == 0.1
        assert cfg['tolerances']['drift'] == 1e-8
        assert config() is cfg

    def test_tolerances_merge(self, tmpdir, restore):
        path = os.path.join(str(tmpdir), "extra.yml")
        with open(path, mode='w') as f:
            f.write("seed: 7\ntolerances:\n  drift: 1.0e-6\n")
        cfg = load_configuration(path)
        assert cfg['seed'] == 7
        assert cfg['tolerances']['drift'] == 1e-6
        assert cfg['tolerances']['sum'] == 1e-12

    def test_missing_file_ignored(self, restore):
        cfg = load_configuration("no-such-file.yml")
        assert cfg['seed'] == 2718


class TestRunConfig():

    def test_overrides(self):
        run = RunConfig('verify', seed=5, tolerances={'drift': 1e-4})
        assert run.seed == 5
        assert run.tol('drift') == 1e-4
        assert run.tol('sum') == 1e-12
        assert run.step == 1e-4
        manifest = run.manifest()
        assert manifest['command'] == 'verify'
        assert manifest['mutations'] == []

    def test_mutations(self):
        run = RunConfig('verify', mutations=['structure-constant'])
        assert 'structure-constant' in run.mutations

    def test_invalid(self):
        with pytest.raises(ConfigurationError):
            RunConfig('plot')
        with pytest.raises(ConfigurationError):
            RunConfig('simulate', step=0)
        with pytest.raises(ConfigurationError):
            RunConfig('simulate', format='xml')
