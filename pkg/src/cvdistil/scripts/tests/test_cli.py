import pytest

import cvdistil as cvd
from cvdistil import formats
from cvdistil import names
from cvdistil import protocols
from cvdistil import symplectic as sp
from cvdistil.scripts.cli import build_parser, main

CONFIG = """\
protocol = multicopy_squeeze
r = 0.7
p = 0.5
d_over_sigma = [1, 10]
N_list = [2, 3]
grid_points = 16
"""


@pytest.fixture
def config(tmpdir):
    path = tmpdir.join('sweep.cfg')
    path.write(CONFIG)
    return path.strpath


class TestSimulate:

    def test_output(self, tmpdir, config, capsys):
        out = tmpdir.join('sweep.csv')
        assert main(['simulate', config, '--output', out.strpath,
                     '--quiet']) == names.EXIT_OK

        lines = out.read().splitlines()
        assert lines[0] == ','.join(names.CSV_COLUMNS)
        assert len(lines) == 5
        stdout, _ = capsys.readouterr()
        assert stdout.startswith('multicopy_squeeze: 4 points')

    def test_stdout(self, config, capsys):
        assert main(['simulate', config, '--quiet']) == names.EXIT_OK
        stdout, stderr = capsys.readouterr()
        assert stdout.splitlines()[0] == ','.join(names.CSV_COLUMNS)
        assert 'multicopy_squeeze: 4 points' in stderr

    def test_store(self, tmpdir, config):
        with tmpdir.as_cwd():
            assert main(['simulate', config, '--output', 'sweep.csv',
                         '--store', 'run', '--quiet']) == names.EXIT_OK
            run = cvd.Run('run')
            assert len(run.sweep) == 4
            assert run.config.grid_points == 16

    def test_grid_points(self, tmpdir, config):
        with tmpdir.as_cwd():
            assert main(['simulate', config, '--output', 'sweep.csv',
                         '--grid-points', '32', '--store', 'run',
                         '--quiet']) == names.EXIT_OK
            assert cvd.Run('run').config.grid_points == 32

    @pytest.mark.parametrize('extra', [['--grid-points', '4'],
                                       ['--workers', '0']])
    def test_bad_override(self, config, extra):
        assert main(['simulate', config] + extra) == names.EXIT_CONFIG

    def test_bad_config(self, tmpdir):
        path = tmpdir.join('bad.cfg')
        path.write(CONFIG + "colour = blue\n")
        assert main(['simulate', path.strpath]) == names.EXIT_CONFIG

    def test_missing_config(self, tmpdir):
        path = tmpdir.join('missing.cfg').strpath
        assert main(['simulate', path]) == names.EXIT_CONFIG

    def test_engine_failure(self, tmpdir, config, monkeypatch):
        def fail(*args):
            raise ArithmeticError("no convergence")

        monkeypatch.setattr(protocols, 'run_point', fail)
        out = tmpdir.join('sweep.csv')
        assert main(['simulate', config, '--output',
                     out.strpath]) == names.EXIT_ENGINE
        assert not out.check()


class TestMonotone:

    def test_line(self, tmpdir, capsys):
        path = tmpdir.join('tmsv.txt').strpath
        formats.write_state(path, sp.tmsv(0.7))
        assert main(['monotone', 'kappa_ent', path]) == names.EXIT_OK
        stdout, _ = capsys.readouterr()
        assert stdout.startswith('measure=kappa_ent value=4.05519997 ')

    def test_unphysical(self, tmpdir):
        path = tmpdir.join('bad.txt')
        path.write("n_modes 1\n0.5 0\n0 0.5\n")
        assert main(['monotone', 'kappa_squeeze',
                     path.strpath]) == names.EXIT_ENGINE

    def test_malformed(self, tmpdir):
        path = tmpdir.join('bad.txt')
        path.write("n_modes 1\n1 0\n")
        assert main(['monotone', 'm_var', path.strpath]) == names.EXIT_ENGINE

    def test_missing(self, tmpdir):
        path = tmpdir.join('missing.txt').strpath
        assert main(['monotone', 'm_var', path]) == names.EXIT_ENGINE

    def test_unknown_measure(self, tmpdir):
        with pytest.raises(SystemExit) as excinfo:
            main(['monotone', 'purity', tmpdir.join('x.txt').strpath])
        assert excinfo.value.code == 2


class TestValidate:

    def test_oracle(self, capsys):
        assert main(['validate', 'oracle', '--cutoff', '40']) == \
            names.EXIT_OK
        stdout, _ = capsys.readouterr()
        keys = [line.split('=')[0] for line in stdout.splitlines()]
        assert keys == ['conditioned_moments', 'interval_prob', 'overlap']

    def test_hidden(self):
        parser = build_parser()
        assert 'validate' not in parser.format_usage()
        assert 'validate' not in parser.format_help()
        assert 'simulate' in parser.format_help()


def test_no_command(capsys):
    assert main([]) == names.EXIT_CONFIG
    stdout, _ = capsys.readouterr()
    assert 'simulate' in stdout


def test_parser():
    args = build_parser().parse_args(['simulate', 'a.cfg'])
    assert args.workers == 1
    assert args.output is None
    assert args.grid_points is None
