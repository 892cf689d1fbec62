"""Command-line surface and the suite runner."""

import pytest
from click.testing import CliRunner

from dimerforge.cli import cli
from dimerforge.errors import ConfigError
from dimerforge.generators import grid_graph, hexagon_graph
from dimerforge.planar import dump_graph, load_graph
from dimerforge.report import parse_suite_config, run_suite


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def square_file(tmp_path):
    path = tmp_path / "square.txt"
    path.write_text(dump_graph(grid_graph(2, 2)))
    return str(path)


def invoke(runner, args):
    return runner.invoke(cli, args, standalone_mode=False, catch_exceptions=False)


def test_validate_and_faces(runner, square_file):
    res = invoke(runner, ["validate", square_file])
    assert "V=4 E=4 F=2" in res.output
    res = invoke(runner, ["faces", square_file])
    assert res.output.count("face") == 2


def test_count_and_enumerate(runner, square_file):
    assert invoke(runner, ["count", square_file]).output.strip() == "2"
    out = invoke(runner, ["enumerate", square_file]).output.strip().splitlines()
    assert len(out) == 2
    assert out == sorted(out)


def test_grid_count_and_squarish(runner):
    assert invoke(runner, ["grid-count", "2", "2"]).output.strip() == "36"
    assert invoke(runner, ["squarish", "72"]).output.strip() == "2*6^2"


def test_build_pipeline(runner, square_file, tmp_path):
    from dimerforge.generators import fan_square

    hg = tmp_path / "hg.txt"
    invoke(runner, ["build", "hg", square_file, "-o", str(hg)])
    g = load_graph(hg.read_text())
    assert len(g.vertices) == 9
    plus = tmp_path / "plus.txt"
    invoke(runner, ["build", "plus", square_file, "--path", "0,1,3", "-o", str(plus)])
    assert invoke(runner, ["count", str(plus)]).output.strip() == "3"
    fan = tmp_path / "fan.txt"
    fan.write_text(dump_graph(fan_square()))
    bar = tmp_path / "bar.txt"
    invoke(runner, ["build", "bar", str(fan), "--path", "0,1,3", "-o", str(bar)])
    assert invoke(runner, ["count", str(bar)]).output.strip() == "36"


def test_lenient_reload_of_disconnected_halves(runner, tmp_path):
    # a tree-shaped base: trimming the even path vertices disconnects the
    # halves, which only a lenient reload admits
    from dimerforge.generators import path_graph

    base = tmp_path / "tree.txt"
    base.write_text(dump_graph(path_graph(5)))
    plus = tmp_path / "plus.txt"
    invoke(runner, ["build", "plus", str(base), "--path", "0,1,2,3,4", "-o", str(plus)])
    res = runner.invoke(cli, ["count", str(plus)])
    assert res.exit_code == 1  # strict load rejects the disconnected dump
    assert invoke(runner, ["count", "-L", str(plus)]).output.strip() == "1"


def test_build_trimmed(runner, tmp_path):
    from dimerforge.matchings import count_matchings
    from dimerforge.refine import trimmed_square

    out = tmp_path / "t.txt"
    invoke(runner, ["build", "trimmed", "--n", "3", "--removals", "0,5", "-o", str(out)])
    expected = count_matchings(trimmed_square(3, [(0, 5)]))
    assert invoke(runner, ["count", str(out)]).output.strip() == str(expected)


def test_phi_pipeline(runner, square_file, tmp_path):
    plus = tmp_path / "plus.txt"
    invoke(runner, ["build", "plus", square_file, "--path", "0,1,3", "-o", str(plus)])
    mfile = tmp_path / "mus.txt"
    mfile.write_text(invoke(runner, ["enumerate", str(plus)]).output)
    out = invoke(runner, ["phi", square_file, str(mfile), "--path", "0,1,3"])
    lines = [l for l in out.output.splitlines() if l.strip()]
    assert len(lines) == 3
    # mapping back recovers the originals
    back_file = tmp_path / "back.txt"
    back_file.write_text(out.output)
    back = invoke(runner, ["phi", square_file, str(back_file), "--path", "0,1,3",
                           "--inverse"])
    assert back.output == mfile.read_text()


def test_temperley_pipeline(runner, square_file, tmp_path):
    trees_out = invoke(runner, ["trees", "enumerate", square_file, "--root", "0"])
    tfile = tmp_path / "trees.txt"
    tfile.write_text(trees_out.output)
    mus = invoke(runner, ["temperley", "t2m", square_file, str(tfile), "--root", "0"])
    mfile = tmp_path / "mus.txt"
    mfile.write_text(mus.output)
    back = invoke(runner, ["temperley", "m2t", square_file, str(mfile), "--root", "0"])
    assert back.output == trees_out.output


def test_verify_bijection_commands(runner, square_file, tmp_path):
    res = invoke(runner, ["verify-bijection", "phi", square_file, "--path", "0,1,3"])
    assert res.output.startswith("PASS")
    res = invoke(runner, ["verify-bijection", "temperley", square_file, "--root", "0"])
    assert res.output.startswith("PASS")
    g, plain, prime = hexagon_graph(1)
    hexfile = tmp_path / "hex.txt"
    hexfile.write_text(dump_graph(g))
    res = invoke(runner, ["verify-bijection", "tea", str(hexfile),
                          "--plain", ",".join(map(str, plain)),
                          "--prime", ",".join(map(str, prime))])
    assert res.output.startswith("PASS")


def test_parity_command(runner, square_file):
    res = invoke(runner, ["parity", square_file, "--cycle", "0,1,3,2"])
    assert "total=1 (odd)" in res.output


def test_aztec_commands(runner, tmp_path):
    assert invoke(runner, ["aztec", "formula", "3"]).output.strip() == "60"
    out = invoke(runner, ["aztec", "count", "2"]).output
    assert "T: 4" in out and "Tp: 4" in out
    gfile = tmp_path / "t2.txt"
    invoke(runner, ["aztec", "graph", "2", "T", "-o", str(gfile)])
    assert invoke(runner, ["count", str(gfile)]).output.strip() == "4"
    mfile = tmp_path / "mus.txt"
    mfile.write_text(invoke(runner, ["enumerate", str(gfile)]).output)
    svg = tmp_path / "out.svg"
    res = invoke(runner, ["aztec", "biject", "2", str(mfile), "--svg", str(svg)])
    assert len(res.output.strip().splitlines()) == 4
    assert svg.read_text().startswith("<svg")


def test_gen_commands(runner, tmp_path):
    for kind in ("section2", "symmetric", "tea", "trimmed"):
        out = tmp_path / f"{kind}.txt"
        invoke(runner, ["gen", kind, "--seed", "4", "-o", str(out)])
        body = out.read_text()
        load_graph(body)  # directives live in comments, so plain loading works
        again = tmp_path / f"{kind}2.txt"
        invoke(runner, ["gen", kind, "--seed", "4", "-o", str(again)])
        assert body == again.read_text()


# -- suite ---------------------------------------------------------------------


def test_suite_pass_and_determinism(tmp_path):
    config = """
seed 5
check grid-kasteleyn 2 2
check section2 4
check trimmed-squarish 4
"""
    rep1 = run_suite(config)
    rep2 = run_suite(config)
    assert rep1.passed
    assert rep1.render() == rep2.render()
    assert "seed 5" in rep1.render()


def test_suite_jobs_preserve_order():
    config = "check section2 3\ncheck trimmed-squarish 3\ncheck cycle-parity 3\n"
    serial = run_suite(config, jobs=1, seed=9)
    parallel = run_suite(config, jobs=3, seed=9)
    assert serial.render() == parallel.render()


def test_suite_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse_suite_config("check nonsense 3\n")
    with pytest.raises(ConfigError):
        parse_suite_config("check matchings-file /nonexistent/file.txt\n")
    with pytest.raises(ConfigError):
        parse_suite_config("seed zebra\n")
    with pytest.raises(ConfigError):
        parse_suite_config("frobnicate 1\n")


def test_suite_file_checks(tmp_path):
    gpath = tmp_path / "g.txt"
    gpath.write_text(dump_graph(grid_graph(2, 2)))
    config = f"check matchings-file {gpath} 2\ncheck euler-file {gpath}\n"
    rep = run_suite(config)
    assert rep.passed
    config_bad = f"check matchings-file {gpath} 3\n"
    assert not run_suite(config_bad).passed


def test_suite_cli_exit_codes(runner, tmp_path):
    cfg = tmp_path / "suite.txt"
    cfg.write_text("check grid-kasteleyn 1 1\n")
    res = runner.invoke(cli, ["suite", str(cfg)])
    assert res.exit_code == 0
    cfg.write_text("check unknown-check 1\n")
    res = runner.invoke(cli, ["suite", str(cfg)])
    assert res.exit_code == 2
