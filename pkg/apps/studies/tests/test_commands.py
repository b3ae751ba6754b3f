"""
Tests for the study management commands.
"""
from unittest.mock import MagicMock, patch

import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.qdyn.exceptions import NotBracketedError
from apps.studies.tasks import run_study


class TestStudyCommands:
    """Tests for flags, outputs and exit codes."""

    def test_spectrum_fit_writes_files(self, tmp_path, capsys):
        """spectrum_fit writes the fit and the table it was fitted on."""
        call_command('spectrum_fit', '--out', str(tmp_path), '--set', 's=2.5')
        assert (tmp_path / 'spectrum_fit.json').exists()
        assert (tmp_path / 'spectrum.csv').exists()
        assert 'wrote 2 file(s)' in capsys.readouterr().out

    def test_config_file(self, tmp_path):
        """A run file feeds ising_scan."""
        config = tmp_path / 'ising.cfg'
        config.write_text('# small chains\nN = 8\nlambda_star_min = 1.0\nlambda_star_max = 1.0\n')
        call_command('ising_scan', '--config', str(config), '--out', str(tmp_path / 'out'))
        lines = (tmp_path / 'out' / 'ising_scan.csv').read_text().splitlines()
        assert lines[0] == 'N,lambda_star,delta,t_cut,measure'
        assert len(lines) == 2

    def test_config_error_exit_code(self, tmp_path):
        """Config errors exit with code 2 and point at the line."""
        config = tmp_path / 'bad.cfg'
        config.write_text('s_min = 1\nnot a pair\n')
        with pytest.raises(CommandError) as excinfo:
            call_command('dephasing_scan', '--config', str(config), '--out', str(tmp_path))
        assert excinfo.value.returncode == 2
        assert 'bad.cfg:2' in str(excinfo.value)

    def test_empty_grid_exit_code(self, tmp_path):
        """An empty parameter grid is a usage error."""
        with pytest.raises(CommandError) as excinfo:
            call_command('dephasing_scan', '--out', str(tmp_path), '--set', 's_min=2', '--set', 's_max=1')
        assert excinfo.value.returncode == 2

    def test_diluteness_exit_code(self, tmp_path):
        """A dense condensate fails validation with code 2."""
        with pytest.raises(CommandError) as excinfo:
            call_command('bec_scan', '--out', str(tmp_path), '--set', 'dimension=3', '--set', 'n0=1e25')
        assert excinfo.value.returncode == 2
        assert 'weak-interaction bound' in str(excinfo.value)

    @patch('apps.studies.commands.run', side_effect=NotBracketedError('no switch'))
    def test_numerical_failure_exit_code(self, mock_run, tmp_path):
        """Numerical failures exit with code 3."""
        with pytest.raises(CommandError) as excinfo:
            call_command('bec_scan', '--out', str(tmp_path), '--set', 'dimension=1')
        assert excinfo.value.returncode == 3

    @patch('apps.studies.commands.run_study')
    def test_enqueue(self, mock_task, tmp_path, capsys):
        """--enqueue hands the run to Celery without computing it."""
        mock_task.delay.return_value = MagicMock(id='abc123')
        call_command('mcwf_demo', '--out', str(tmp_path), '--seed', '7', '--threads', '2',
                     '--set', 'n_traj=10', '--enqueue')
        mock_task.delay.assert_called_once_with('mcwf-demo', {'n_traj': '10'}, str(tmp_path), 7, 2)
        assert 'abc123' in capsys.readouterr().out
        assert not (tmp_path / 'mcwf_ensemble.csv').exists()


class TestRunStudyTask:
    """Tests for the Celery task body."""

    def test_runs_inline(self, tmp_path):
        """The task runs a study in-process and reports its files."""
        summary = run_study('spectrum-fit', {'s': '1.5'}, str(tmp_path), 0, 1)
        assert summary['status'] == 'completed'
        assert summary['files'][-1].endswith('spectrum_fit.json')
