import pytest

from liouville_fbm._core.errors import ConfigError
from liouville_fbm._core.experiment_config import ExperimentConfig, load_experiment_config


def test_defaults_without_sources():
    config = load_experiment_config(environ={})
    assert config == ExperimentConfig()
    assert config.betas == [0.1, 0.3, 0.7, 0.9]


def test_file_values_and_lists(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('# heat run\nbeta=0.75\nthetas=0.0, 0.1\nK_list=64,128\nplot=false\n')
    config = load_experiment_config(str(path), environ={})
    assert config.beta == 0.75
    assert config.thetas == [0.0, 0.1]
    assert config.K_list == [64, 128]
    assert config.plot is False


def test_priority_environment_file_flags(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('n_paths=500\nseed=3\n')
    config = load_experiment_config(
        str(path),
        overrides={'seed': '9', 'beta': None},
        environ={'LFBM_N_PATHS': '100', 'LFBM_K': '16', 'OTHER': 'x'},
    )
    assert config.n_paths == 500
    assert config.seed == 9
    assert config.K == 16


def test_keys_are_case_insensitive(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('k=12\nN_CELLS=32\n')
    config = load_experiment_config(str(path), environ={})
    assert (config.K, config.n_cells) == (12, 32)


@pytest.mark.parametrize('content', ['unknown_key=1\n', 'beta=1.5\n', 'd=3\n', 'y=2.0\n', 'betas=0.2,1.2\n', 'scheme=fft\n',
                                     'lattice_betas=0.5,1.0\n'])
def test_invalid_files_raise_config_error(tmp_path, content):
    path = tmp_path / 'bad.env'
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_experiment_config(str(path), environ={})


def test_missing_file_raises_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_experiment_config(str(tmp_path / 'nope.env'), environ={})


def test_echo_is_plain_json():
    echo = ExperimentConfig(beta=0.3).echo()
    assert echo['beta'] == 0.3
    assert echo['scheme'] == 'cholesky'
    assert echo['operator_path'] is None


def test_lattice_and_golden_keys(tmp_path):
    path = tmp_path / 'run.env'
    path.write_text('lattice_betas=0.5,0.75\ngolden_path=tests/golden/norm_brackets.json\nrecord_golden=false\n')
    config = load_experiment_config(str(path), environ={})
    assert config.lattice_betas == [0.5, 0.75]
    assert config.golden_path == 'tests/golden/norm_brackets.json'
    assert config.record_golden is False
    assert ExperimentConfig().lattice_betas == []
