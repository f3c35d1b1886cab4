import csv
import io
import json

import pytest

from lzhybrid.cli import BENCH_FIELDS, main
from lzhybrid.corpus import generate


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def corpus(tmp_path):
    path = tmp_path / "c.txt"
    path.write_bytes(generate(2000, copies=4, rate=0.01, seed=1))
    return path


@pytest.fixture
def index(tmp_path, corpus):
    path = tmp_path / "c.hybx"
    code, out = run("build", corpus, path, "--m", 40, "--k", 1)
    assert code == 0
    assert json.loads(out)["n"] == len(corpus.read_bytes())
    return path


def test_build_and_stats(index):
    code, out = run("stats", index)
    assert code == 0
    st = json.loads(out)
    assert st["file_bytes"] == index.stat().st_size
    assert set(st["sections"]) == {"kernel", "L", "L_MK", "first_occ", "suffix_array", "X",
                                   "satellites", "rmq"}


def test_query_tsv(index, corpus, tmp_path):
    text = corpus.read_bytes()
    pat = text[100:110].decode()
    code, out = run("query", index, pat)
    assert code == 0
    rows = [line.split("\t") for line in out.splitlines()]
    assert rows and all(r[0] == "1" and r[3] in ("primary", "secondary") for r in rows)
    assert (101, 110) in {(int(r[1]), int(r[2])) for r in rows}
    pats = tmp_path / "p.txt"
    pats.write_bytes(text[0:5] + b"\n" + text[50:60] + b"\n")
    code, out = run("query", index, "--patterns", pats, "--k", 1)
    assert code == 0
    assert {line.split("\t")[0] for line in out.splitlines()} == {"1", "2"}


def test_verify(index, corpus):
    code, out = run("verify", index, corpus, "--count", 5, "--seed", 2)
    assert code == 0
    assert out.startswith("PASS")


def test_verify_wrong_corpus(index, tmp_path):
    other = tmp_path / "o.txt"
    other.write_bytes(b"ACGT" * 10)
    code, out = run("verify", index, other)
    assert code == 1 and out.startswith("FAIL")


def test_bench(index, corpus):
    code, out = run("bench", index, corpus, "--lengths", "5,10", "--count", 10)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == BENCH_FIELDS
    assert [int(r["m"]) for r in rows] == [5, 10]
    assert all(int(r["patterns"]) == 10 for r in rows)


def test_parse_and_gen(tmp_path):
    path = tmp_path / "g.txt"
    assert run("gen", path, "--size", 100, "--copies", 2, "--seed", 3)[0] == 0
    assert len(path.read_bytes()) >= 190
    code, out = run("parse", path)
    assert code == 0 and out.startswith("L ")
    dump = tmp_path / "p.txt"
    assert run("parse", path, "-o", dump)[0] == 0
    assert dump.read_text() == out


def test_exit_codes(index, tmp_path):
    assert run("query", index, "A" * 41)[0] == 2
    assert run("query", index, "AC", "--k", 2)[0] == 2
    assert run("query", index)[0] == 2
    assert run("nonsense")[0] == 2
    assert run("--help")[0] == 0
    assert run("stats", tmp_path / "missing.hybx")[0] == 3
    bad = tmp_path / "bad.hybx"
    bad.write_bytes(b"NOPE" + index.read_bytes()[4:])
    assert run("stats", bad)[0] == 3
    short = tmp_path / "short.hybx"
    short.write_bytes(index.read_bytes()[:30])
    assert run("stats", short)[0] == 3
    coll = tmp_path / "all.txt"
    coll.write_bytes(bytes(range(256)))
    assert run("build", coll, tmp_path / "x.hybx")[0] == 2
