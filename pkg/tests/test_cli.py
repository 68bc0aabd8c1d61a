import json

import pytest

from wgraphs.cli import main

from oracles import bruhat_leq_subword


@pytest.fixture()
def a2_path(system_dir):
    return str(system_dir / "a2.json")


def run(argv):
    return main(argv)


class TestTable:
    def test_pair_count_matches_bruhat_oracle(self, tmp_path, a2_path, systems):
        out = tmp_path / "t.json"
        assert run(["table", "--system", a2_path, "-J", "", "--module", "trivial",
                    "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        a2 = systems["a2"]
        pairs = sum(
            1
            for x in a2.elements()
            for z in a2.elements()
            if bruhat_leq_subword(a2, x, z)
        )
        assert len(data["p"]) == pairs

    def test_byte_stable(self, tmp_path, a2_path):
        one, two = tmp_path / "a.json", tmp_path / "b.json"
        run(["table", "--system", a2_path, "--module", "trivial", "--out", str(one)])
        run(["table", "--system", a2_path, "--module", "trivial", "--out", str(two)])
        assert one.read_bytes() == two.read_bytes()

    def test_flag_jobs_byte_identical(self, tmp_path, system_dir):
        a3 = str(system_dir / "a3.json")
        outs = []
        for jobs in ("1", "4"):
            out = tmp_path / f"mu{jobs}.json"
            assert run(["table", "--system", a3, "--module", "trivial",
                        "--flag", "1;1,2", "--jobs", jobs, "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_hy_jobs_env(self, monkeypatch):
        from wgraphs.hy import default_jobs

        monkeypatch.setenv("HY_JOBS", "3")
        assert default_jobs() == 3
        monkeypatch.setenv("HY_JOBS", "junk")
        assert default_jobs() == 1

    def test_stdout_default(self, capsys, a2_path):
        assert run(["table", "--system", a2_path, "--module", "regular"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert "p" in data and "mu" in data


class TestInduce:
    def test_three_vertex_dot(self, tmp_path, a2_path):
        dot = tmp_path / "g.dot"
        assert run(["induce", "--system", a2_path, "-J", "1", "--module", "sign",
                    "--dot", str(dot)]) == 0
        text = dot.read_text()
        assert text.count("[label=") == 3 + text.count("->")

    def test_json_round_trip_through_cells(self, tmp_path, a2_path):
        graph_file = tmp_path / "kl.json"
        assert run(["induce", "--system", a2_path, "-J", "", "--module", "regular",
                    "--out", str(graph_file)]) == 0
        cells_file = tmp_path / "cells.json"
        assert run(["cells", "--system", a2_path, "--wgraph", str(graph_file),
                    "--out", str(cells_file)]) == 0
        data = json.loads(cells_file.read_text())
        assert data["cells"] == [["e"], ["1", "21"], ["12", "2"], ["121"]]


class TestCells:
    def test_regular_cells(self, tmp_path, a2_path):
        out = tmp_path / "cells.json"
        assert run(["cells", "--system", a2_path, "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["cells"] == [["e"], ["1", "21"], ["12", "2"], ["121"]]

    def test_dot_export(self, tmp_path, a2_path):
        dot = tmp_path / "cells.dot"
        assert run(["cells", "--system", a2_path, "--dot", str(dot),
                    "--out", str(tmp_path / "c.json")]) == 0
        assert "cluster_3" in dot.read_text()


class TestVerify:
    @pytest.mark.parametrize(
        "argv_tail",
        [
            ["--check", "axioms", "-J", "1", "--module", "sign"],
            ["--check", "h-linearity", "-J", "1", "--module", "sign"],
            ["--check", "oracle", "-J", "", "--module", "regular"],
            ["--check", "transitivity", "-J", "", "-K", "1", "--module", "regular"],
            ["--check", "mackey", "-J", "1", "-K", "1", "--module", "sign"],
            ["--check", "mu-factorize", "-J", "", "-K", "1", "--module", "regular"],
            ["--check", "e-nonzero"],
        ],
    )
    def test_checks_pass_on_a2(self, a2_path, argv_tail, capsys):
        assert run(["verify", "--system", a2_path] + argv_tail) == 0
        assert "ok" in capsys.readouterr().out

    def test_oracle_b2(self, system_dir):
        b2 = str(system_dir / "b2.json")
        assert run(["verify", "--system", b2, "--check", "oracle", "-J", "1",
                    "--module", "sign"]) == 0

    def test_failing_check_exits_one(self, tmp_path, a2_path, capsys):
        bad = {
            "J": [1, 2],
            "vertices": ["a", "b"],
            "labels": [[1], [2]],
            "edges": [{"s": 1, "from": "b", "to": "a", "weights": {"0": 1}}],
        }
        graph_file = tmp_path / "bad.json"
        graph_file.write_text(json.dumps(bad))
        code = run(["verify", "--system", a2_path, "--check", "axioms",
                    "--wgraph", str(graph_file)])
        assert code == 1
        assert "FAILED" in capsys.readouterr().out


class TestErrors:
    def test_missing_file(self, capsys):
        assert run(["table", "--system", "/nonexistent/x.json"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_schema_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"rank": 2, "matrix": [[1, 3], [4, 1]]}')
        assert run(["table", "--system", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "symmetric" in err

    def test_bad_generator_in_j(self, a2_path, capsys):
        assert run(["table", "--system", a2_path, "-J", "7"]) == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            run(["table"])  # --system is required
        assert exc.value.code == 2

    def test_module_j_mismatch(self, tmp_path, a2_path, capsys):
        module_file = tmp_path / "m.json"
        module_file.write_text(json.dumps(
            {"J": [1], "rank": 1, "E": {"1": [[1]]}, "X": {}}))
        assert run(["table", "--system", a2_path, "-J", "2",
                    "--module", str(module_file)]) == 2

    def test_regular_requires_empty_j(self, a2_path):
        assert run(["table", "--system", a2_path, "-J", "1",
                    "--module", "regular"]) == 2

    def test_infinite_without_cutoff(self, system_dir, capsys):
        path = str(system_dir / "affine_a1.json")
        assert run(["table", "--system", path, "--module", "regular"]) == 2
        assert "max_length" in capsys.readouterr().err

    def test_infinite_with_cutoff(self, tmp_path, system_dir):
        path = str(system_dir / "affine_a1.json")
        out = tmp_path / "ball.json"
        assert run(["table", "--system", path, "--module", "regular",
                    "--max-length", "4", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert "e|1212" in data["p"]


class TestModuleFiles:
    def test_module_file_input(self, tmp_path, a2_path, systems):
        module_file = tmp_path / "m.json"
        module_file.write_text(json.dumps(
            {"J": [1], "rank": 1, "E": {"1": [[1]]}, "X": {}}))
        out = tmp_path / "t.json"
        assert run(["table", "--system", a2_path, "-J", "1",
                    "--module", str(module_file), "--out", str(out)]) == 0
        builtin_out = tmp_path / "b.json"
        run(["table", "--system", a2_path, "-J", "1", "--module", "sign",
             "--out", str(builtin_out)])
        assert out.read_bytes() == builtin_out.read_bytes()

    def test_wgraph_file_as_module(self, tmp_path, a2_path):
        graph_file = tmp_path / "kl_j.json"
        assert run(["induce", "--system", a2_path, "-J", "", "--module", "regular",
                    "--out", str(graph_file)]) == 0
        # re-induce from the full-group graph at J = S: table over one coset
        out = tmp_path / "t.json"
        assert run(["table", "--system", a2_path, "-J", "1,2",
                    "--module", str(graph_file), "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert list(data["p"]) == ["e|e"]
