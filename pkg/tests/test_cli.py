import json

import pytest
from conftest import SUBSET_DICT

from lyricmetrics.cli import main


def run(*argv):
    return main(["--dict", str(SUBSET_DICT), *map(str, argv)])


@pytest.fixture
def broken_corpus(tmp_path):
    data = json.loads((SUBSET_DICT.parent / "excerpt.json").read_text(encoding="utf-8"))
    data["sections"][1]["lines"][2]["kr"] = ""
    path = tmp_path / "broken.json"
    path.write_text(json.dumps([data], ensure_ascii=False), encoding="utf-8")
    return path


def test_validate_exit_codes(sample_corpus_path, broken_corpus, tmp_path, capsys):
    assert run("validate", sample_corpus_path) == 0
    assert run("validate", broken_corpus) == 1
    assert "non-empty-line" in capsys.readouterr().out
    assert run("validate", tmp_path / "missing.json") == 2


def test_metrics_on_broken_corpus_is_data_error(broken_corpus):
    assert run("metrics", broken_corpus, "--which", "scd") == 1


def test_malformed_json_is_usage_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[{", encoding="utf-8")
    assert run("stats", path) == 2


def test_stats_output(sample_corpus_path, tmp_path):
    out = tmp_path / "stats.json"
    assert run("stats", sample_corpus_path, "--out", out) == 0
    stats = json.loads(out.read_text())
    assert stats["songs"] == 10 and stats["total_sections"] == 23 and stats["total_lines"] == 61


def test_stats_empty_corpus(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("[]", encoding="utf-8")
    out = tmp_path / "stats.json"
    assert run("stats", path, "--out", out) == 0
    assert set(json.loads(out.read_text()).values()) == {0}


def test_pho_only_runs_offline(sample_corpus_path, tmp_path):
    out = tmp_path / "pho.csv"
    assert run("metrics", sample_corpus_path, "--which", "pho", "--out", out) == 0
    header, first = out.read_text().splitlines()[:2]
    assert header.startswith("genre,variant,sem_line")
    assert first.split(",")[2] == ""


def test_remote_without_endpoint_is_config_error(sample_corpus_path, tmp_path):
    config = tmp_path / "lyr.toml"
    config.write_text('[backends.embed]\nkind = "remote"\n', encoding="utf-8")
    assert run("--config", config, "metrics", sample_corpus_path, "--which", "sem") == 2


def test_api_key_in_config_is_rejected(sample_corpus_path, tmp_path):
    config = tmp_path / "lyr.toml"
    config.write_text('[backends.nsp]\nkind = "remote"\nendpoint = "http://x"\napi_key = "k"\n', encoding="utf-8")
    assert run("--config", config, "stats", sample_corpus_path) == 2


def test_config_supplies_corpus_and_outputs(sample_corpus_path, tmp_path):
    out = tmp_path / "from-config.csv"
    config = tmp_path / "lyr.toml"
    config.write_text(f'corpus_path = "{sample_corpus_path}"\n[output]\nreport = "{out}"\n', encoding="utf-8")
    assert run("--config", config, "report") == 0
    assert out.read_text().startswith("genre,")


def test_no_corpus_is_usage_error():
    assert run("stats") == 2


def test_bad_arguments_exit_two():
    assert main(["metrics", "--which", "nope"]) == 2
    assert main(["--jobs", "0", "stats", "x"]) == 2


def test_outputs_are_byte_stable(sample_corpus_path, tmp_path):
    def once(tag):
        outs = {}
        for cmd, extra in [
            ("metrics", ["--which", "all", "--per-song", tmp_path / f"per-song-{tag}.csv"]),
            ("report", ["--format", "json"]),
            ("density", []),
            ("preprocess", ["--seed", "11", "--scheme", "lyrics_section"]),
        ]:
            path = tmp_path / f"{cmd}-{tag}.out"
            assert run("--jobs", "3" if tag == "b" else "1", cmd, sample_corpus_path, *extra, "--out", path) == 0
            outs[cmd] = path.read_bytes()
        outs["per-song"] = (tmp_path / f"per-song-{tag}.csv").read_bytes()
        return outs

    assert once("a") == once("b")


def test_preprocess_general_from_tsv(tmp_path):
    tsv = tmp_path / "pairs.tsv"
    tsv.write_text("나는 오늘 밤 걸어\tI walk alone tonight\n", encoding="utf-8")
    out = tmp_path / "general.jsonl"
    assert run("preprocess", tsv, "--scheme", "general_section", "--seed", "3", "--out", out) == 0
    record = json.loads(out.read_text(encoding="utf-8"))
    assert record["target"].startswith("<SYL")
    tsv.write_text("only one column\n", encoding="utf-8")
    assert run("preprocess", tsv, "--scheme", "general_line", "--out", out) == 2
    assert run("preprocess", tsv, "--scheme", "general_line", "--seed", "-1", "--out", out) == 2


def test_jamo_table_flag(sample_corpus_path, tmp_path):
    table = tmp_path / "jamo.tsv"
    table.write_text("ㅇ\tNG\n", encoding="utf-8")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("metrics", sample_corpus_path, "--which", "pho", "--out", a) == 0
    assert run("--jamo-table", table, "metrics", sample_corpus_path, "--which", "pho", "--out", b) == 0
    assert a.read_text() != b.read_text()
