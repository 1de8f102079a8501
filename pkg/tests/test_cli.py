from pathlib import Path

import pytest

from liouville_fbm._core.app import EXIT_CONFIG_ERROR, EXIT_PASSED
from liouville_fbm._core.cli import build_parser, main
from liouville_fbm._core.command_registry import CommandRegistry
from liouville_fbm._io.json_writer import read_json
from liouville_fbm._io.svg_plot import series_id


def _run(tmp_path, *args):
    out = tmp_path / 'out'
    code = main([*args, '--output-dir', str(out), '--settings-dir', str(tmp_path / 'no-settings')])
    return code, out


def test_every_command_is_registered():
    assert CommandRegistry.names() == [
        'cylindrical', 'fbm-sample', 'frac-apply', 'heat',
        'isometry', 'kernel-variance', 'norm-compare', 'threshold-scan',
    ]


def test_parser_rejects_unknown_commands():
    with pytest.raises(SystemExit) as ex:
        build_parser().parse_args(['simulate'])
    assert ex.value.code == 2


def test_fbm_sample_writes_report(tmp_path):
    code, out = _run(tmp_path, 'fbm-sample', '--beta', '0.3', '--n-cells', '16', '--n-paths', '2000', '--seed', '1')
    assert code == EXIT_PASSED
    report = read_json(out / 'report.json')
    assert report['all_passed'] is True
    assert report['config']['beta'] == 0.3
    assert set(report['artifacts']) == {'paths.csv', 'moments.csv'}
    assert all('pass' in check for check in report['checks'])
    assert (out / 'paths.csv').read_text().startswith('# command=fbm-sample')


def test_reruns_are_byte_identical(tmp_path):
    args = ('fbm-sample', '--beta', '0.7', '--scheme', 'moving_average', '--n-cells', '8', '--n-paths', '50')
    _, out = _run(tmp_path, *args)
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    _, out = _run(tmp_path, *args)
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


def test_frac_apply(tmp_path):
    code, out = _run(tmp_path, 'frac-apply', '--alpha', '0.3', '--function', 'power', '--y', '0.5')
    assert code == EXIT_PASSED
    assert {'frac_apply.csv', 'reconstruction.csv'} <= set(read_json(out / 'report.json')['artifacts'])


def test_threshold_scan(tmp_path):
    code, out = _run(tmp_path, 'threshold-scan', '--betas', '0.15,0.35', '--K-list', '16,64,256')
    assert code == EXIT_PASSED
    rows = read_json(out / 'report.json')['results']['rows']
    assert [row['classification'] for row in rows] == ['divergent', 'convergent']


def test_config_file_and_overrides(tmp_path):
    config = tmp_path / 'run.env'
    config.write_text('betas=0.15,0.35\nK_list=16,64,256\n')
    code, out = _run(tmp_path, 'threshold-scan', '--config', str(config), '--betas', '0.35')
    assert code == EXIT_PASSED
    assert read_json(out / 'report.json')['config']['betas'] == [0.35]


@pytest.mark.parametrize('args', [
    ('fbm-sample', '--beta', '1.5'),
    ('fbm-sample', '--config', 'missing.env'),
    ('norm-compare', '--betas', '0.3,0.7'),
    ('threshold-scan', '--K-list', '4'),
    ('heat', '--n-cells', '16'),
])
def test_invalid_configurations_exit_with_two(tmp_path, args):
    code, out = _run(tmp_path, *args)
    assert code == EXIT_CONFIG_ERROR
    assert not (out / 'report.json').exists()


def test_unknown_config_key(tmp_path):
    config = tmp_path / 'bad.env'
    config.write_text('hurst=0.3\n')
    code, _ = _run(tmp_path, 'isometry', '--config', str(config))
    assert code == EXIT_CONFIG_ERROR


@pytest.mark.slow
def test_heat_with_plot(tmp_path):
    code, out = _run(tmp_path, 'heat', '--K', '32', '--n-cells', '128', '--n-paths', '400', '--thetas', '0.0',
                     '--K-list', '16,64,256', '--plot', 'true')
    assert code == EXIT_PASSED
    svg = (out / 'structure_function.svg').read_text()
    assert series_id(0.0) in svg
    assert read_json(out / 'regularity.json')['command'] == 'heat'


def test_kernel_variance_marks_divergent_pairs(tmp_path):
    code, out = _run(tmp_path, 'kernel-variance', '--betas', '0.5', '--alphas', '0.0,0.1,0.6')
    assert code == EXIT_PASSED
    lattice = read_json(out / 'report.json')['results']['lattice']
    assert [row['status'] for row in lattice] == ['finite', 'finite', 'divergent']


def test_isometry(tmp_path):
    code, out = _run(tmp_path, 'isometry', '--betas', '0.3,0.5,0.7', '--n-cells', '16',
                     '--n-paths', '2000', '--n-functions', '3', '--seed', '4')
    assert code == EXIT_PASSED
    assert 'isometry.csv' in read_json(out / 'report.json')['artifacts']


@pytest.mark.slow
def test_isometry_scores_moving_average_against_its_own_law(tmp_path):
    code, out = _run(tmp_path, 'isometry', '--betas', '0.1,0.9', '--scheme', 'moving_average',
                     '--n-cells', '64', '--n-paths', '20000', '--n-functions', '20', '--seed', '1')
    assert code == EXIT_PASSED
    results = read_json(out / 'report.json')['results']
    assert results['max_abs_z'] <= 4.0
    bias = {row['beta']: row for row in results['cross_scheme']}
    assert set(bias) == {0.1, 0.9}
    assert all(row['scheme'] == 'moving_average' and row['max_abs_relative_bias'] > 0.0 for row in bias.values())
    assert all(r['oracle_variance'] != r['liouville_variance'] for r in results['rows'])


def test_cholesky_isometry_has_no_cross_scheme_bias(tmp_path):
    code, out = _run(tmp_path, 'isometry', '--betas', '0.3', '--n-cells', '8',
                     '--n-paths', '500', '--n-functions', '2')
    assert code == EXIT_PASSED
    assert read_json(out / 'report.json')['results']['cross_scheme'][0]['max_abs_relative_bias'] == 0.0


def test_norm_compare(tmp_path):
    code, out = _run(tmp_path, 'norm-compare', '--betas', '0.2,0.4', '--n-functions', '200')
    assert code == EXIT_PASSED
    assert len(read_json(out / 'report.json')['results']['rows']) == 2


@pytest.mark.slow
def test_norm_compare_checks_the_golden_brackets(tmp_path):
    golden = Path(__file__).parent / 'golden' / 'norm_brackets.json'
    code, out = _run(tmp_path, 'norm-compare', '--betas', '0.2,0.3,0.4', '--n-cells', '256',
                     '--n-functions', '200', '--seed', '20240601', '--golden-path', str(golden))
    assert code == EXIT_PASSED
    checks = {c['name']: c for c in read_json(out / 'report.json')['checks']}
    assert all(checks[f'bracket_golden[beta={b}]']['pass'] for b in ('0.2', '0.3', '0.4'))
    assert all(checks[f'bracket_widening[beta={b}]']['pass'] for b in ('0.2', '0.3', '0.4'))


def test_norm_compare_rejects_a_missing_golden_file(tmp_path):
    code, _ = _run(tmp_path, 'norm-compare', '--betas', '0.3', '--n-cells', '8', '--n-functions', '5',
                   '--golden-path', str(tmp_path / 'missing.json'))
    assert code == EXIT_CONFIG_ERROR


def test_cylindrical(tmp_path):
    code, out = _run(tmp_path, 'cylindrical', '--beta', '0.3', '--n-cells', '8', '--n-paths', '2000',
                     '--n-functions', '5', '--m', '2', '--e', '2')
    assert code == EXIT_PASSED
    assert (out / 'vector_integral.csv').exists()


@pytest.mark.slow
def test_heat_checks_regularity_over_a_beta_theta_lattice(tmp_path):
    code, out = _run(tmp_path, 'heat', '--beta', '0.5', '--lattice-betas', '0.5,0.75', '--thetas', '0.0,0.1',
                     '--K', '64', '--n-cells', '256', '--n-paths', '400', '--K-list', '16,64,256', '--plot', 'false')
    assert code == EXIT_PASSED
    checks = {c['name']: c for c in read_json(out / 'report.json')['checks']}
    assert checks['regularity_monotone_in_beta']['pass']
    assert checks['regularity_monotone_in_theta']['pass']
    assert checks['regularity[beta=0.75,theta=0.1]']['pass']
    rows = read_json(out / 'regularity.json')['rows']
    assert {(r['beta'], r['theta']) for r in rows} == {(0.5, 0.0), (0.5, 0.1), (0.75, 0.0), (0.75, 0.1)}


@pytest.mark.parametrize('beta,classification', [(0.3, 'convergent'), (0.2, 'divergent')])
def test_heat_classifies_existence(tmp_path, beta, classification):
    code, out = _run(tmp_path, 'heat', '--beta', str(beta), '--K', '8', '--n-cells', '32', '--n-paths', '200',
                     '--thetas', '0.0', '--K-list', '16,64,256', '--plot', 'false')
    assert code in (0, 1)
    report = read_json(out / 'report.json')
    assert report['results']['threshold']['classification'] == classification
    rows = read_json(out / 'regularity.json')['rows']
    assert rows[0]['status'] == ('finite' if beta == 0.3 else 'divergent')
    assert not (out / 'structure_function.svg').exists()
