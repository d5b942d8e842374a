#!/usr/bin/env python3
"""
Test the command line entry point
"""

import os
import sys

import pandas as pd
import pytest

# Add parent directory to path for imports
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from chainsim.cli import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_RUNTIME_ERROR, main

TINY_EXPERIMENT = """
topology.ecn_count = 3
topology.tree_depth = 1
topology.tree_fanout = 2
scenario.kind = user_intensive
scenario.request_counts = 2,4
run.algorithms = gbmp,ecmp
run.seeds = 1,2
"""


@pytest.fixture
def tiny_config(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_EXPERIMENT)
    return path


class TestMain:
    """Test main() exit codes and outputs"""

    def test_run_writes_tables(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--config", str(tiny_config), "--out", str(out)]) == EXIT_OK
        frame = pd.read_csv(out / "results.csv")
        assert len(frame) == 2 * 2 * 2
        assert set(frame["algorithm"]) == {"gbmp", "ecmp"}
        assert not (out / "fig_lbi.svg").exists()
        assert "GBMP" in capsys.readouterr().out

    def test_plots_flag(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "-c", str(tiny_config), "-o", str(out), "--plots"]) == EXIT_OK
        assert (out / "fig_acceptance.svg").exists()

    def test_seeds_flag(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert main(["run", "-c", str(tiny_config), "-o", str(out), "--seeds", "3"]) == EXIT_OK
        assert sorted(pd.read_csv(out / "results.csv")["seed"].unique()) == [1, 2, 3]

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("topology.ecn_count = 0\n")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG_ERROR

    def test_missing_config(self, tmp_path):
        assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG_ERROR

    def test_bad_seed_count(self, tiny_config):
        assert main(["run", "-c", str(tiny_config), "--seeds", "0"]) == EXIT_CONFIG_ERROR

    def test_unwritable_output(self, tiny_config, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("not a directory")
        assert main(["run", "-c", str(tiny_config), "-o", str(blocker / "out")]) == \
            EXIT_RUNTIME_ERROR

    def test_print_defaults(self, capsys):
        assert main(["run", "--print-defaults"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "topology.ecn_count = 15" in out
        assert "# run: Sweep and output" in out

    def test_command_required(self):
        with pytest.raises(SystemExit):
            main([])


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
