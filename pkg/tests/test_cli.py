import io
import json
import subprocess
import sys

import pytest

from pbdom.cli import EXIT_INPUT, EXIT_OK, EXIT_REJECTED, main

from support import DATA


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture()
def php43_files(tmp_path):
    opb = tmp_path / "php43.opb"
    assert run("gen", "php", "4", "3", "-o", str(opb))[0] == EXIT_OK
    pbp = tmp_path / "php43.pbp"
    order = "p21 p22 p23 p11 p12 p13 p31 p32 p33 p41 p42 p43"
    code, _ = run("gen", "breaksym", "--opb", str(opb), "--syms", str(DATA / "php43.sym"),
                  "--order", order, "-o", str(pbp))
    assert code == EXIT_OK
    return opb, pbp


class TestVerify:
    def test_accepts(self, php43_files):
        opb, pbp = php43_files
        code, out = run("verify", str(opb), str(pbp))
        assert code == EXIT_OK and out.splitlines()[0] == "VERIFIED NONE"

    def test_trace_and_stats(self, php43_files):
        opb, pbp = php43_files
        code, out = run("verify", str(opb), str(pbp), "--trace", "--stats")
        lines = out.splitlines()
        assert code == EXIT_OK
        assert "c line 26 dom 26" in lines and "c line 3 pre_order" in lines
        stats = json.loads(lines[-1].removeprefix("c stats "))
        assert stats["rules"]["dom"] == 7

    def test_rejection_names_the_line(self, php43_files, tmp_path):
        opb, pbp = php43_files
        bad = tmp_path / "bad.pbp"
        bad.write_text(pbp.read_text().replace("conclusion NONE", "conclusion UNSAT"))
        code, out = run("verify", str(opb), str(bad))
        assert code == EXIT_REJECTED
        assert out.startswith("REJECTED line ") and "no contradiction" in out

    def test_unchecked_mode(self, php43_files):
        opb, pbp = php43_files
        assert run("verify", str(opb), str(pbp), "--mode", "unchecked")[0] == EXIT_OK

    def test_missing_file(self, tmp_path):
        code, out = run("verify", str(tmp_path / "nope.opb"), str(tmp_path / "nope.pbp"))
        assert code == EXIT_INPUT and out.startswith("ERROR")

    def test_parse_error(self, tmp_path):
        opb = tmp_path / "x.opb"
        opb.write_text("1 x >= ;\n")
        code, out = run("verify", str(opb), str(opb))
        assert code == EXIT_INPUT and "line 1" in out

    def test_formula_count_mismatch(self, php43_files, tmp_path):
        opb, pbp = php43_files
        bad = tmp_path / "bad.pbp"
        bad.write_text(pbp.read_text().replace("f 22", "f 21"))
        assert run("verify", str(opb), str(bad))[0] == EXIT_INPUT

    def test_bad_arguments(self):
        with pytest.raises(SystemExit) as e:
            main(["verify", "--mode", "sloppy", "a", "b"], io.StringIO())
        assert e.value.code == EXIT_INPUT

    def test_safety_oracle(self, tmp_path):
        opb = tmp_path / "k3.opb"
        code, _ = run("gen", "clique", "--graph", str(DATA / "k3.col"), "-o", str(tmp_path / "k3"))
        assert code == EXIT_OK
        code, out = run("verify", str(opb), str(tmp_path / "k3.pbp"), "--safety-oracle", "8")
        assert code == EXIT_OK and out.startswith("VERIFIED OPTIMAL 0")

    def test_safety_oracle_refuses_large_instances(self, php43_files):
        opb, pbp = php43_files
        code, out = run("verify", str(opb), str(pbp), "--safety-oracle", "8")
        assert code == EXIT_INPUT and "limited to 8" in out


class TestGenerate:
    def test_php_flags(self, tmp_path):
        target = tmp_path / "p.opb"
        code, out = run("gen", "php", "--pigeons", "3", "--holes", "2", "-o", str(target))
        assert code == EXIT_OK
        assert target.read_text().splitlines()[0] == "* #variable= 6 #constraint= 9"

    def test_php_needs_sizes(self):
        assert run("gen", "php")[0] == EXIT_INPUT

    def test_breaksym_unknown_order_variable(self, tmp_path):
        opb = tmp_path / "p.opb"
        run("gen", "php", "4", "3", "-o", str(opb))
        code, out = run("gen", "breaksym", "--opb", str(opb), "--syms", str(DATA / "php43.sym"),
                        "--order", "p11 zz")
        assert code == EXIT_INPUT and "zz" in out

    def test_breaksym_equisatisfiable_output(self, tmp_path):
        opb = tmp_path / "p.opb"
        run("gen", "php", "4", "3", "-o", str(opb))
        pbp = tmp_path / "p.pbp"
        code, _ = run("gen", "breaksym", "--opb", str(opb), "--syms", str(DATA / "php43.sym"),
                      "--order", "p21 p22 p23 p11 p12 p13 p31 p32 p33 p41 p42 p43",
                      "--half-support", "--output-kind", "EQUISATISFIABLE", "-o", str(pbp))
        assert code == EXIT_OK
        assert "* #variable= 39 #constraint=136" in pbp.read_text()
        assert run("verify", str(opb), str(pbp))[0] == EXIT_OK

    def test_clique(self, tmp_path):
        code, out = run("gen", "clique", "--graph", str(DATA / "k3.col"),
                        "-o", str(tmp_path / "k3"))
        assert code == EXIT_OK and out.strip() == "optimum 3"
        assert (tmp_path / "k3.opb").exists() and (tmp_path / "k3.pbp").exists()

    def test_clique_bad_graph(self, tmp_path):
        g = tmp_path / "g.col"
        g.write_text("p edge 2 1\ne 1 5\n")
        assert run("gen", "clique", "--graph", str(g))[0] == EXIT_INPUT


def test_module_entry_point(tmp_path):
    target = tmp_path / "p.opb"
    proc = subprocess.run([sys.executable, "-m", "pbdom", "gen", "php", "2", "1", "-o", str(target)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and target.exists()
    proc = subprocess.run([sys.executable, "-m", "pbdom", "verify", str(target), "/nonexistent"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_INPUT
