import json
import shutil

from argnota.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_golden_strict_silent_success(self, capsys, golden_path):
        code, out, err = run(capsys, "validate", str(golden_path), "--strict")
        assert (code, out, err) == (0, "", "")

    def test_default_mode_is_strict(self, capsys, golden_path, tmp_path):
        data = json.loads(golden_path.read_text())
        data["relations"] = ["M(p2,J(p4,p5))"]
        path = tmp_path / "swapped.json"
        path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert "MatchTypeViolation" in out
        code, out, _ = run(capsys, "validate", str(path), "--permissive")
        assert code == 0
        assert "MatchTypeViolation" not in out

    def test_warnings_do_not_fail(self, capsys, golden_path, tmp_path):
        data = json.loads(golden_path.read_text())
        data["relations"].append("S(p10, p11)")  # duplicate entry
        path = tmp_path / "dup.json"
        path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "validate", str(path), "--strict")
        assert code == 0
        assert "DuplicateRelation" in out

    def test_dangling_ref_reported_not_crashing(self, capsys, golden_path, tmp_path):
        data = json.loads(golden_path.read_text())
        data["relations"].append("S(p1,p99)")
        path = tmp_path / "dangling.json"
        path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert "DanglingPropRef" in out

    def test_missing_file_is_io_failure(self, capsys, tmp_path):
        code, _, err = run(capsys, "validate", str(tmp_path / "absent.json"))
        assert code == 2
        assert "absent.json" in err

    def test_malformed_json_is_format_failure(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{]")
        code, _, err = run(capsys, "validate", str(path))
        assert code == 2


class TestRoles:
    def test_golden_roles_table(self, capsys, golden_path):
        code, out, _ = run(capsys, "roles", str(golden_path))
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "p1 Isolated"
        assert "p6 SubConclusion" in lines
        assert "p8 Conclusion" in lines
        assert "p11 Conclusion" in lines
        assert len(lines) == 11


class TestRender:
    def test_svg_to_stdout(self, capsys, golden_path):
        code, out, _ = run(capsys, "render", str(golden_path))
        assert code == 0
        assert out.startswith("<svg") and out.endswith("</svg>\n")

    def test_dot_to_file(self, capsys, golden_path, tmp_path):
        out_path = tmp_path / "diagram.dot"
        code, out, _ = run(capsys, "render", str(golden_path), "--format", "dot",
                           "--out", str(out_path))
        assert code == 0 and out == ""
        assert out_path.read_text().startswith("digraph")

    def test_stdout_deterministic(self, capsys, golden_path):
        _, first, _ = run(capsys, "render", str(golden_path))
        _, second, _ = run(capsys, "render", str(golden_path))
        assert first == second


class TestParseExpr:
    def test_canonical_echo(self, capsys):
        code, out, _ = run(capsys, "parse-expr", "S(M(J(p4, p5), p2), p6)")
        assert code == 0
        assert out == "S(M(J(p4,p5),p2),p6)\n"

    def test_arity_diagnostic(self, capsys):
        code, out, _ = run(capsys, "parse-expr", "J(p1)")
        assert code == 1
        assert "ArityError" in out


class TestCompare:
    def test_self_comparison(self, capsys, golden_path):
        code, out, _ = run(capsys, "compare", str(golden_path), str(golden_path))
        assert code == 0
        assert "base type kappa: 1.0000" in out
        assert "relation f1: 1.0000" in out
        assert "disagreements: none" in out

    def test_threshold_flag(self, capsys, golden_path):
        code, out, _ = run(capsys, "compare", str(golden_path), str(golden_path),
                           "--threshold", "0.9")
        assert code == 0
        assert "aligned pairs: 11" in out

    def test_directory_pairing(self, capsys, golden_path, tmp_path):
        dir_a = tmp_path / "a"
        dir_b = tmp_path / "b"
        dir_a.mkdir()
        dir_b.mkdir()
        shutil.copy(golden_path, dir_a / "doc.json")
        data = json.loads(golden_path.read_text())
        data["annotator_id"] = "A2"
        (dir_b / "doc.json").write_text(json.dumps(data))
        code, out, _ = run(capsys, "compare", str(dir_a), str(dir_b))
        assert code == 0
        assert "== document_I" in out
        assert "pairs compared: 1" in out

    def test_mixed_file_and_dir_rejected(self, capsys, golden_path, tmp_path):
        code, _, err = run(capsys, "compare", str(golden_path), str(tmp_path))
        assert code == 2


class TestStats:
    def test_golden_summary(self, capsys, golden_path):
        code, out, _ = run(capsys, "stats", str(golden_path))
        assert code == 0
        assert "propositions: 11" in out
        assert "  SM: 4" in out
        assert "  GM-L: 3" in out
        assert "relation nodes: 5" in out
        assert "  Support: 3" in out
        assert "  Match: 2" in out

    def test_directory_mode(self, capsys, golden_path, tmp_path):
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        shutil.copy(golden_path, corpus / "one.json")
        shutil.copy(golden_path, corpus / "two.json")
        code, out, _ = run(capsys, "stats", str(corpus))
        assert code == 0
        assert "documents: 2" in out
        assert "propositions: 22" in out

    def test_empty_directory(self, capsys, tmp_path):
        code, _, err = run(capsys, "stats", str(tmp_path))
        assert code == 2
