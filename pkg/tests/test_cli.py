"""
Tests for the command line entry point
"""
import json

import pytest

from app.cli import build_parser, main


class TestParser:
    """Test argument parsing"""

    def test_defaults(self):
        args = build_parser().parse_args(["hj", "3", "1"])
        assert args.format == "text"
        assert args.out is None
        assert (args.n, args.a) == (3, 1)

    def test_rejects_unknown_format(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["--format", "xml", "hj", "3", "1"])

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestCommands:
    """Test each subcommand's output and exit code"""

    def test_hj_text(self, capsys):
        assert main(["hj", "3", "2"]) == 0
        assert capsys.readouterr().out == "1/3(1,2): chain [-2, -2], discrepancies [0, 0]\n"

    def test_hj_json(self, capsys):
        assert main(["--format", "json", "hj", "3", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["self_intersections"] == [-3]
        assert payload["discrepancies"] == ["-1/3"]

    def test_search_json(self, capsys):
        assert main(["--format", "json", "search", "--kd", "2", "--d2", "0"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert [s["combination"] for s in payload["solutions"]] == [
            "1/9E1-1/9E3+2/9C1", "-1/9E1+5/9E3-2/9C1",
        ]

    def test_search_text(self, capsys):
        assert main(["search", "--kd", "2", "--d2", "0"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("K.D = 2, D^2 = 0: 2 class(es)")
        assert "(a, b, c) = (2, 2, 4)" in out

    def test_quotient(self, capsys, data_dir):
        assert main(["--format", "json", "quotient", str(data_dir / "quotient-setup.json")]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["name"] == "Y"
        assert len(payload["basis"]) == 18
        assert payload["named"]["K"][2] == "1"

    def test_lefschetz(self, capsys, data_dir):
        assert main(["lefschetz", str(data_dir / "lefschetz-case.json")]) == 0
        out = capsys.readouterr().out
        assert "e(fixed locus) = 0" in out
        assert "outcome: consistent" in out

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "hj.txt"
        assert main(["--out", str(target), "hj", "3", "1"]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text(encoding="utf-8").startswith("1/3(1,1): chain [-3]")


class TestExitCodes:
    """Test exit codes for invalid input and failing replays"""

    def test_invalid_input_exits_two(self, capsys):
        assert main(["hj", "4", "2"]) == 2
        assert "error: Invalid cyclic quotient type 1/4(1,2)" in capsys.readouterr().err

    def test_missing_file_exits_two(self, capsys, tmp_path):
        assert main(["quotient", str(tmp_path / "missing.json")]) == 2
        assert "file not found" in capsys.readouterr().err

    def test_malformed_case_exits_two(self, capsys, tmp_path):
        case = tmp_path / "case.json"
        case.write_text(json.dumps({"trace": 0, "h20_sign": 3}), encoding="utf-8")
        assert main(["lefschetz", str(case)]) == 2
        assert "h20_sign must be +1 or -1" in capsys.readouterr().err

    @pytest.mark.slow
    @pytest.mark.integration
    def test_replay_builtin_passes(self, capsys):
        assert main(["replay", "cartwright-steger"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("scenario: cartwright-steger")
        assert out.rstrip().endswith("overall: pass")

    @pytest.mark.slow
    @pytest.mark.integration
    def test_replay_negative_control_fails(self, capsys, data_dir):
        assert main(["--format", "json", "replay", str(data_dir / "perturbed-e1e2-12.json")]) == 1
        assert json.loads(capsys.readouterr().out)["overall"] == "fail"

    def test_replay_unknown_scenario_exits_two(self, capsys):
        assert main(["replay", "no-such-scenario"]) == 2
        assert "error: Invalid scenario entry no-such-scenario" in capsys.readouterr().err
