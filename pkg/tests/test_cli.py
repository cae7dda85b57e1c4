import json

import pytest
from hypothesis import given, settings, strategies as st

from rurlex import __version__
from rurlex.cli import RurDocument, main

FOUR = "vars: x, y\nfield: QQ\nx^2 - 1\ny^2 - 1\n"
FAT = "vars: x, y\nfield: QQ\nx^2\nx*y\ny^2\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_prime_certified(capsys, write):
    code, out, _ = run(capsys, "solve", write("c.sys", FOUR), "--prime", "65537", "--strategy", "certified")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "rur-doc/1"
    assert doc["field"] == "FF 65537"
    assert len(doc["first"]) == 5


def test_solve_qq_full(capsys, write):
    code, out, _ = run(capsys, "solve", write("f.sys", FAT), "--qq", "--full")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "full"
    assert doc["first"] == ["0", "0", "0", "1"]
    assert doc["dimension"] == 3


def test_solve_text_and_metrics(capsys, write):
    code, out, _ = run(capsys, "solve", write("c.sys", FOUR), "--format", "text", "--metrics", "integer")
    assert code == 0
    assert "first: T^4" in out and "matrix_sparsity" in out and "integer_bitsize" in out


def test_check_and_corruption(capsys, write, tmp_path):
    sys_path = write("c.sys", FOUR)
    out_path = str(tmp_path / "r.json")
    assert run(capsys, "solve", sys_path, "--out", out_path)[0] == 0
    assert run(capsys, "check", sys_path, out_path)[0] == 0
    doc = json.loads(open(out_path).read())
    c = doc["coords"][0]
    c[0] = str(int(c[0]) + 1) if "/" not in c[0] else "1"
    bad = write("bad.json", json.dumps(doc))
    assert run(capsys, "check", sys_path, bad)[0] == 5


def test_exit_codes(capsys, write):
    assert run(capsys, "solve", write("p.sys", "vars: x\nfield: QQ\nx^^2\n"))[0] == 2
    assert run(capsys, "solve", write("n.sys", "vars: x, y\nfield: QQ\nx^2 - 1\n"))[0] == 3
    assert run(capsys, "solve", write("u.sys", "vars: x\nfield: QQ\nx\nx - 1\n"))[0] == 3
    assert run(capsys, "solve", write("m.sys", "vars: x\nfield: QQ\nx\n"), "--prime", "15")[0] == 1


def test_strategy_exhausted_exit_code(capsys, write, monkeypatch):
    import rurlex.rur as rur
    from rurlex.errors import StrategyExhausted

    def boom(*a, **k):
        raise StrategyExhausted("test")
    monkeypatch.setattr(rur, "strategy_certified", boom)
    assert run(capsys, "solve", write("c.sys", FOUR), "--prime", "101")[0] == 4


def test_bench(capsys, tmp_path):
    (tmp_path / "a.sys").write_text(FOUR)
    (tmp_path / "b.sys").write_text(FAT)
    code, out, _ = run(capsys, "bench", str(tmp_path))
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 3
    assert lines[0].split()[:4] == ["system", "D", "type", "strategy"]
    assert lines[1].split()[:3] == ["a", "4", "radical"]
    assert lines[2].split()[:3] == ["b", "3", "non-radical"]


rat = st.fractions(max_denominator=10 ** 6).map(lambda f: str(f))
polys = st.lists(rat, min_size=1, max_size=5)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(any), polys, polys, st.data())
@settings(max_examples=50)
def test_json_round_trip(form, first, f0, data):
    n = len(form)
    doc = RurDocument([f"x{i}" for i in range(n)], form, "QQ", first, f0,
                      [data.draw(polys) for _ in range(n)], data.draw(st.sampled_from(["radical", "full"])),
                      data.draw(st.one_of(st.none(), st.integers(1, 99))))
    assert RurDocument.from_json(doc.to_json()) == doc
    assert doc.version == __version__


def test_rur_document_round_trip_through_rur(capsys, write):
    code, out, _ = run(capsys, "solve", write("c.sys", FOUR))
    doc = RurDocument.from_json(out)
    again = RurDocument.from_rur(doc.to_rur(), doc.variables)
    again.dimension = doc.dimension
    assert again == doc


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert __version__ in capsys.readouterr().out
