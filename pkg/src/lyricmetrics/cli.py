"""Command-line entry point.

Exit codes: 0 success, 1 data violations, 2 usage / configuration / I/O errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import corpus as corpus_mod
from . import preprocess, pronouncing, report
from . import scd_metrics as scd_mod
from .config import Config, ConfigError, load_config
from .phonetics import DEFAULT_JAMO_TABLE, JamoTable
from .semantics import BackendDataError, BackendError

log = logging.getLogger("lyricmetrics")

EXIT_OK, EXIT_DATA, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _corpus_path(args, config: Config) -> str:
    path = getattr(args, "corpus", None) or config.corpus_path
    if not path:
        raise UsageError("no corpus given (argument or corpus_path in config)")
    return path


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _output(args, config: Config, name: str) -> str | None:
    return getattr(args, "out", None) or config.outputs.get(name)


def _load_corpus(args, config: Config) -> list[corpus_mod.AlignedSong]:
    return corpus_mod.parse_corpus(_read_bytes(_corpus_path(args, config)))


def _backends(config: Config, metrics) -> report.Backends:
    metrics = set(metrics)
    backends = report.Backends()
    if "sem" in metrics:
        backends.embedding = config.build_backend("embed")
        backends.translation = config.build_backend("translate")
    if "nsp" in metrics:
        backends.coherence = config.build_backend("nsp")
    return backends


def _jamo_table(config: Config) -> JamoTable:
    if not config.jamo_table_path:
        return DEFAULT_JAMO_TABLE
    try:
        return JamoTable.from_tsv(config.jamo_table_path)
    except OSError as exc:
        raise UsageError(f"cannot read jamo table {config.jamo_table_path}: {exc.strerror}") from exc


# -- commands ----------------------------------------------------------------


def cmd_validate(args, config: Config) -> int:
    songs = corpus_mod.load_songs(_read_bytes(_corpus_path(args, config)))
    count = 0
    for song in songs:
        for violation in corpus_mod.validate_alignment(song):
            print(violation)
            count += 1
    if count:
        print(f"{count} violation(s) in {len(songs)} song(s)", file=sys.stderr)
        return EXIT_DATA
    print(f"ok: {len(songs)} song(s)", file=sys.stderr)
    return EXIT_OK


def cmd_stats(args, config: Config) -> int:
    stats = corpus_mod.corpus_stats(_load_corpus(args, config))
    _write(json.dumps(asdict(stats), indent=2) + "\n", _output(args, config, "stats"))
    return EXIT_OK


def _report_options(args, config: Config, metrics) -> report.ReportOptions:
    return report.ReportOptions(
        metrics=tuple(metrics),
        official_only=args.official_only or config.official_only,
        pooled=args.pooled or config.pooled,
        jobs=args.jobs or config.jobs,
        jamo_table=_jamo_table(config),
    )


def _emit_report(result: report.MetricReport, args, path: str | None) -> None:
    _write(result.to_json() if args.format == "json" else result.to_csv(), path)


def cmd_metrics(args, config: Config) -> int:
    metrics = report.METRICS if args.which == "all" else (args.which,)
    backends = _backends(config, metrics)
    songs = _load_corpus(args, config)
    options = _report_options(args, config, metrics)
    _emit_report(report.genre_report(songs, backends, options), args, _output(args, config, "metrics"))

    if args.per_song and "scd" in metrics:
        rows = []
        for song in songs:
            src = report.source_language(song)
            generated = song.texts("en" if src == "kr" else "kr")
            series = scd_mod.song_series(song, src, generated)
            if series.pairs:
                rows.append(scd_mod.scd_report(series, song.song_id))
        _write(scd_mod.rows_to_csv(rows), args.per_song)
    return EXIT_OK


def cmd_report(args, config: Config) -> int:
    backends = _backends(config, report.METRICS)
    songs = _load_corpus(args, config)
    options = _report_options(args, config, report.METRICS)
    _emit_report(report.genre_report(songs, backends, options), args, _output(args, config, "report"))
    return EXIT_OK


def cmd_density(args, config: Config) -> int:
    backends = _backends(config, ("sem",))
    songs = _load_corpus(args, config)
    rows = report.density_data(
        songs,
        backends,
        official_only=args.official_only or config.official_only,
        jobs=args.jobs or config.jobs,
    )
    _write(report.density_csv(rows), _output(args, config, "density"))
    return EXIT_OK


def cmd_preprocess(args, config: Config) -> int:
    seed = args.seed if args.seed is not None else config.seed
    syl_mode = "with_syl" if args.syl else "without_syl"
    source = _corpus_path(args, config)
    if args.scheme.startswith("general"):
        if source.endswith((".tsv", ".txt")):
            try:
                records = preprocess.read_sentence_pairs(source)
            except OSError as exc:
                raise UsageError(f"cannot read {source}: {exc.strerror}") from exc
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        else:
            songs = corpus_mod.parse_corpus(_read_bytes(source))
            records = [(line.kr, line.en) for song in songs for line in song.lines]
    else:
        if source.endswith(".tsv"):
            raise UsageError(f"scheme {args.scheme} needs a corpus JSON/JSONL, not a TSV")
        records = corpus_mod.parse_corpus(_read_bytes(source))
        if args.mt_source:
            tr = config.build_backend("translate")
            records = [preprocess.with_machine_source(song, tr) for song in records]

    out = _output(args, config, "preprocess")
    try:
        preprocess.check_seed(seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if out is None or out == "-":
        count = preprocess.emit_training_file(records, args.scheme, syl_mode, seed, sys.stdout)
    else:
        try:
            count = preprocess.emit_training_file(records, args.scheme, syl_mode, seed, out)
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    print(f"wrote {count} record(s)", file=sys.stderr)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lyricmetrics",
        description="Validate aligned bilingual lyric corpora and compute singability metrics.",
    )
    parser.add_argument("--config", help="TOML configuration file")
    parser.add_argument("--dict", dest="dictionary", help=f"CMUdict-format pronouncing dictionary (env {pronouncing.DICT_ENV_VAR})")
    parser.add_argument("--jamo-table", help="TSV overriding jamo phone labels")
    parser.add_argument("--jobs", type=int, default=None, help="songs processed in parallel")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check alignment invariants")
    p.add_argument("corpus", nargs="?")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="dataset statistics as JSON")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    def report_flags(p):
        p.add_argument("corpus", nargs="?")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--pooled", action="store_true", help="average over lines/sections instead of per song")
        p.add_argument("--official-only", action="store_true")

    p = sub.add_parser("metrics", help="per-genre metrics (selected)")
    report_flags(p)
    p.add_argument("--which", choices=("sem", "pho", "scd", "nsp", "all"), default="all")
    p.add_argument("--per-song", help="also write per-song SCD rows as CSV")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("report", help="full per-genre metric report")
    report_flags(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("density", help="per-line similarity values for density plots")
    p.add_argument("corpus", nargs="?")
    p.add_argument("--out")
    p.add_argument("--official-only", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("preprocess", help="training JSONL with <SYL>/<SEP> tokens")
    p.add_argument("corpus", nargs="?", help="corpus JSON/JSONL, or kr<TAB>en TSV for general schemes")
    p.add_argument("--scheme", choices=preprocess.SCHEMES, default="lyrics_section")
    p.add_argument("--syl", dest="syl", action="store_true", default=True)
    p.add_argument("--no-syl", dest="syl", action="store_false")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--mt-source", action="store_true", help="replace the Korean side with machine translations")
    p.set_defaults(func=cmd_preprocess)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        config = load_config(args.config)
        if args.dictionary:
            config.dictionary_path = args.dictionary
        if args.jamo_table:
            config.jamo_table_path = args.jamo_table
        if args.jobs is not None and args.jobs < 1:
            raise UsageError("--jobs must be >= 1")
        if config.dictionary_path:
            try:
                pronouncing.set_default(pronouncing.PronouncingDictionary.from_file(config.dictionary_path))
            except OSError as exc:
                raise UsageError(f"cannot read dictionary {config.dictionary_path}: {exc.strerror}") from exc
        return args.func(args, config)
    except (UsageError, ConfigError, corpus_mod.CorpusParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BackendError, BackendDataError) as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except corpus_mod.AlignmentError as exc:
        for violation in exc.violations:
            print(violation, file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except corpus_mod.CorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
