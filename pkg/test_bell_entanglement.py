#!/usr/bin/env python3
"""End-to-end tests for the command-line front end and input parsing."""

import io
import json

import numpy as np
import pandas as pd
import pytest

from bd_states import probs_to_t
from bell_entanglement import (
    EXIT_DOMAIN_ERROR,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    GEOMETRY_COLUMNS,
    GeometryExporter,
    cmd_measure,
    main,
    round_sig,
)
from config import Settings
from exceptions import ConfigError, InputError
from input_validation import InputValidator
from oracle import sample_bd


def run_cli(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def read_csv(text):
    return pd.read_csv(io.StringIO(text))


class TestInputValidator:
    def test_parse_floats(self):
        assert InputValidator.parse_floats(' 0.1, 0.2 ,0.7', 3, 't') == [0.1, 0.2, 0.7]

    @pytest.mark.parametrize('text', ['0.1,0.2', '0.1,x,0.2', '0.1,nan,0.2'])
    def test_parse_floats_rejects(self, text):
        with pytest.raises(InputError):
            InputValidator.parse_floats(text, 3, 't')

    def test_exactly_one_state_flag(self):
        with pytest.raises(InputError):
            InputValidator.parse_state()
        with pytest.raises(InputError):
            InputValidator.parse_state('0.25,0.25,0.25,0.25', '0,0,0')

    def test_unphysical_t_is_input_error(self):
        with pytest.raises(InputError, match='1 - t1 - t2 - t3 >= 0'):
            InputValidator.parse_state(t='0.9,0.9,0.9')

    def test_parse_axis(self):
        assert InputValidator.parse_axis('Z') == (0.0, 0.0, 1.0)
        assert InputValidator.parse_axis('3,0,4') == pytest.approx((0.6, 0.0, 0.8))
        with pytest.raises(InputError):
            InputValidator.parse_axis('0,0,0')

    @pytest.mark.parametrize('text, expected', [('t3=0', (2, 0.0)), ('x = 0.5', (0, 0.5)), ('2=-0.25', (1, -0.25))])
    def test_parse_plane(self, text, expected):
        assert InputValidator.parse_plane(text) == expected

    @pytest.mark.parametrize('text', ['t4=0', 't1', 't1=abc'])
    def test_parse_plane_rejects(self, text):
        with pytest.raises(InputError):
            InputValidator.parse_plane(text)

    def test_validate_grid(self):
        assert InputValidator.validate_grid(2) == 2
        with pytest.raises(InputError):
            InputValidator.validate_grid(1)


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ('BDENT_SEED', 'BDENT_SAMPLES', 'BDENT_GRID_STEP', 'BDENT_WORKERS', 'BDENT_LOG_LEVEL'):
            monkeypatch.delenv(name, raising=False)
        settings = Settings()
        assert (settings.seed, settings.samples, settings.grid_step, settings.workers) == (0, 1000, 0.01, 1)
        assert settings.log_level == 'WARNING'

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv('BDENT_SAMPLES', '20')
        monkeypatch.setenv('BDENT_LOG_LEVEL', 'debug')
        settings = Settings()
        assert settings.samples == 20
        assert settings.log_level == 'DEBUG'

    @pytest.mark.parametrize('name, value', [
        ('BDENT_SAMPLES', 'many'),
        ('BDENT_SAMPLES', '0'),
        ('BDENT_SEED', '-4'),
        ('BDENT_LOG_LEVEL', 'LOUD'),
    ])
    def test_bad_environment(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigError):
            Settings()


class TestMeasure:
    def test_worked_state_json(self, capsys):
        status, out, _ = run_cli(capsys, 'measure', '--p', '0.1,0.1,0.1,0.7', '--json')
        assert status == EXIT_OK
        data = json.loads(out)
        assert data['region'] == 'cell_4'
        assert data['concurrence'] == pytest.approx(0.4, abs=1e-10)
        assert data['eof_nats'] == pytest.approx(0.17344, abs=1e-5)
        assert data['nearest_separable']['t'] == pytest.approx([-1 / 3] * 3, abs=1e-10)
        assert data['hs_distance'] == pytest.approx(0.4 / np.sqrt(3), abs=1e-10)
        assert 'eof_bits' not in data

    def test_json_t_matches_p(self, capsys):
        _, out, _ = run_cli(capsys, 'measure', '--p', '0.1,0.1,0.1,0.7', '--json')
        data = json.loads(out)
        assert probs_to_t(data['input']['p']) == pytest.approx(data['input']['t'], abs=1e-12)

    def test_json_round_trips_on_random_states(self, rng):
        for _ in range(300):
            data = json.loads(cmd_measure(sample_bd(rng), as_json=True))
            for block in (data['input'], data['nearest_separable']):
                assert sum(block['p']) == pytest.approx(1.0, abs=1e-12)
                assert probs_to_t(block['p']) == pytest.approx(block['t'], abs=1e-12)

    def test_emitted_state_is_accepted_back(self, capsys, rng):
        for _ in range(20):
            _, first, _ = run_cli(capsys, 'measure', '--json', '--p', ','.join(repr(x) for x in sample_bd(rng).p))
            emitted = json.loads(first)['input']['p']
            status, second, _ = run_cli(capsys, 'measure', '--json', '--p', ','.join(repr(x) for x in emitted))
            assert status == EXIT_OK
            again = json.loads(second)['input']
            assert again['p'] == pytest.approx(emitted, abs=1e-12)
            assert again['t'] == pytest.approx(json.loads(first)['input']['t'], abs=1e-12)

    def test_center_is_separable(self, capsys):
        status, out, _ = run_cli(capsys, 'measure', '--t', '0,0,0', '--json')
        data = json.loads(out)
        assert status == EXIT_OK
        assert data['region'] == 'separable'
        assert data['concurrence'] == data['eof_nats'] == data['hs_entanglement'] == 0

    def test_log2(self, capsys):
        _, out, _ = run_cli(capsys, 'measure', '--p', '0,0,0,1', '--json', '--log2')
        assert json.loads(out)['eof_bits'] == pytest.approx(1.0)

    def test_text_mode(self, capsys):
        status, out, _ = run_cli(capsys, 'measure', '--t=-0.6,-0.6,-0.6')
        assert status == EXIT_OK
        assert 'cell_4' in out
        assert 'concurrence: 0.4' in out

    def test_unnormalized_probabilities(self, capsys):
        status, out, err = run_cli(capsys, 'measure', '--p', '0.5,0.5,0.5,0.5')
        assert status == EXIT_INPUT_ERROR
        assert out == ''
        assert err.startswith('Error:')

    def test_unphysical_t_names_inequality(self, capsys):
        status, _, err = run_cli(capsys, 'measure', '--t', '0.9,0.9,0.9')
        assert status == EXIT_INPUT_ERROR
        assert '1 - t1 - t2 - t3 >= 0' in err

    def test_both_state_flags_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(['measure', '--p', '0.25,0.25,0.25,0.25', '--t', '0,0,0'])
        assert exc.value.code == 2


class TestNearest:
    def test_only_nearest_fields(self, capsys):
        status, out, _ = run_cli(capsys, 'nearest', '--p', '0.7,0.1,0.1,0.1', '--json')
        data = json.loads(out)
        assert status == EXIT_OK
        assert set(data) == {'input', 'region', 'nearest_separable', 'hs_distance'}
        assert data['region'] == 'cell_1'
        assert data['nearest_separable']['p'] == pytest.approx([0.5, 1 / 6, 1 / 6, 1 / 6], abs=1e-10)

    def test_text_mode(self, capsys):
        status, out, _ = run_cli(capsys, 'nearest', '--p', '0.1,0.1,0.1,0.7')
        assert status == EXIT_OK
        assert 'nearest separable state' in out


class TestLqcc:
    def test_singlet_orthogonal_filters(self, capsys):
        status, out, _ = run_cli(capsys, 'lqcc', '--p', '0,0,0,1', '--a', '0.5', '--m', 'z',
                                 '--b', '0.5', '--n', 'x', '--json')
        data = json.loads(out)
        assert status == EXIT_OK
        assert data['normalization'] == pytest.approx(1.5625)
        assert data['concurrence']['predicted'] == pytest.approx(0.36, abs=1e-12)
        assert data['concurrence']['measured'] == pytest.approx(0.36, abs=1e-9)
        assert data['restricted'] is True
        assert data['entanglement']['measured'] == pytest.approx(0.36, abs=1e-8)
        assert data['entanglement']['kind'] == 'transported'

    def test_equal_filters_keep_bd_output(self, capsys):
        _, out, _ = run_cli(capsys, 'lqcc', '--p', '0,0,0,1', '--a', '0.5', '--b', '0.5', '--json')
        data = json.loads(out)
        assert data['output']['bell_diagonal'] is True
        assert data['output']['t'] == pytest.approx([-1, -1, -1], abs=1e-10)
        assert data['restricted'] is False
        assert 'entanglement' not in data

    def test_identity_params(self, capsys):
        _, out, _ = run_cli(capsys, 'lqcc', '--p', '0.1,0.1,0.1,0.7', '--json')
        data = json.loads(out)
        assert data['output']['t'] == pytest.approx([-0.6, -0.6, -0.6], abs=1e-10)
        assert data['normalization'] == pytest.approx(1.0)
        assert data['concurrence']['predicted'] == pytest.approx(data['concurrence']['input'])

    def test_rotation_moves_vertex(self, capsys):
        _, out, _ = run_cli(capsys, 'lqcc', '--p', '0,0,0,1', '--ua', 'x', '--ua-angle', '3.141592653589793',
                            '--json')
        data = json.loads(out)
        assert data['params']['identity_unitaries'] is False
        assert data['output']['t'] == pytest.approx([-1, 1, 1], abs=1e-10)
        assert data['concurrence']['measured'] == pytest.approx(1.0, abs=1e-9)

    def test_non_invertible_filter(self, capsys):
        status, _, err = run_cli(capsys, 'lqcc', '--p', '0,0,0,1', '--a', '1.0')
        assert status == EXIT_INPUT_ERROR
        assert 'non-invertible' in err

    def test_annihilating_filter_is_domain_error(self, capsys):
        # success weight mu^2 nu^2 = 1e-16 falls below the cutoff
        status, _, err = run_cli(capsys, 'lqcc', '--p', '1,0,0,0', '--mu', '1e-4', '--nu', '1e-4')
        assert status == EXIT_DOMAIN_ERROR
        assert 'annihilates' in err

    def test_text_mode(self, capsys):
        status, out, _ = run_cli(capsys, 'lqcc', '--p', '0,0,0,1', '--a', '0.5', '--n', 'x', '--b', '0.5')
        assert status == EXIT_OK
        assert 'not Bell-diagonal' in out
        assert 'restricted condition t(rho) = t(rho_s): met' in out


class TestGeometry:
    def test_werner_line(self, capsys):
        status, out, _ = run_cli(capsys, 'geometry', '--werner', '--grid', '11')
        frame = read_csv(out)
        assert status == EXIT_OK
        assert list(frame.columns) == GEOMETRY_COLUMNS
        assert len(frame) == 11
        assert frame['concurrence'].iloc[-1] == pytest.approx(1.0)
        assert frame['concurrence'].iloc[3] == 0.0
        assert frame['region'].iloc[-1] == 'cell_4'

    def test_werner_concurrence_formula(self):
        frame = GeometryExporter.werner_line(21)
        x = -frame['t1']
        assert frame['concurrence'].to_numpy() == pytest.approx(np.maximum(0, (3 * x - 1) / 2), abs=1e-12)

    def test_corners(self, capsys):
        _, out, _ = run_cli(capsys, 'geometry', '--grid', '2')
        frame = read_csv(out)
        assert sorted(frame['region']) == ['cell_1', 'cell_2', 'cell_3', 'cell_4']
        assert (frame['concurrence'] == 1).all()

    def test_plane_through_center_is_separable(self, capsys):
        _, out, _ = run_cli(capsys, 'geometry', '--grid', '5', '--plane', 't3=0')
        frame = read_csv(out)
        assert len(frame) == 13
        assert (frame['t3'] == 0).all()
        assert set(frame['region']) == {'separable'}

    def test_plane_outside_tetrahedron(self, capsys):
        status, out, _ = run_cli(capsys, 'geometry', '--grid', '5', '--plane', 't1=2')
        assert status == EXIT_OK
        assert out == 't1,t2,t3,region,concurrence\n'

    def test_full_grid_labels_match_classification(self):
        frame = GeometryExporter.region_grid(9)
        entangled = frame[frame['region'] != 'separable']
        assert (entangled['concurrence'] > 0).all()
        assert (frame.loc[frame['region'] == 'separable', 'concurrence'] <= 1e-12).all()

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / 'werner.csv'
        status, out, _ = run_cli(capsys, 'geometry', '--werner', '--grid', '3', '-o', str(target))
        assert status == EXIT_OK
        assert out == ''
        assert target.read_text().splitlines()[0] == 't1,t2,t3,region,concurrence'

    def test_grid_too_small(self, capsys):
        status, _, _ = run_cli(capsys, 'geometry', '--grid', '1')
        assert status == EXIT_INPUT_ERROR


class TestVerify:
    def test_small_run_exits_zero(self, capsys):
        status, out, _ = run_cli(capsys, 'verify', '--samples', '4', '--grid-step', '0.1')
        data = json.loads(out)
        assert status == EXIT_OK
        assert data['all_passed'] is True
        assert data['config']['sample_count'] == 4

    def test_impossible_tolerance(self, capsys):
        status, out, _ = run_cli(capsys, 'verify', '--samples', '4', '--grid-step', '0.1', '--tolerance', '1e-30')
        assert status == EXIT_VERIFICATION_FAILED
        assert json.loads(out)['all_passed'] is False

    def test_text_table(self, capsys):
        status, out, _ = run_cli(capsys, 'verify', '--samples', '2', '--grid-step', '0.1', '--text')
        assert status == EXIT_OK
        assert 'all checks passed' in out

    def test_bad_grid_step(self, capsys):
        status, _, err = run_cli(capsys, 'verify', '--samples', '2', '--grid-step', '0.03')
        assert status == EXIT_INPUT_ERROR
        assert 'Grid step' in err

    def test_environment_sample_default(self, capsys, monkeypatch):
        monkeypatch.setenv('BDENT_SAMPLES', '3')
        _, out, _ = run_cli(capsys, 'verify', '--grid-step', '0.1')
        assert json.loads(out)['config']['sample_count'] == 3


class TestMain:
    def test_bad_environment_is_input_error(self, capsys, monkeypatch):
        monkeypatch.setenv('BDENT_WORKERS', 'lots')
        status, _, err = run_cli(capsys, 'measure', '--t', '0,0,0')
        assert status == EXIT_INPUT_ERROR
        assert 'BDENT_WORKERS' in err

    def test_unknown_log_level(self, capsys):
        status, _, _ = run_cli(capsys, '--log-level', 'LOUD', 'measure', '--t', '0,0,0')
        assert status == EXIT_INPUT_ERROR

    def test_round_sig(self):
        assert round_sig({'a': [1 / 3, -0.0], 'b': 'x', 'c': 2}) == {'a': [0.333333333333, 0.0], 'b': 'x', 'c': 2}
