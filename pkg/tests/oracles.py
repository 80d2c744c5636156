"""Independent reference computations shared by the tests."""

import statistics
from fractions import Fraction

from lyricmetrics.phonetics import pho_profile
from lyricmetrics.scd_metrics import CountPairSeries, error_rate, scd
from lyricmetrics.semantics import (
    HashingCoherenceScorer,
    HashingEmbedding,
    IdentityTranslation,
    coherence_nsp,
    filter_untranslated,
    sem_line,
)
from lyricmetrics.syllable import syllables

EMB, TR, NSP = HashingEmbedding(), IdentityTranslation(), HashingCoherenceScorer()


def bigram_oracle(tokens):
    total = len(tokens) - 1
    seen = set()
    for i in range(total):
        seen.add(tokens[i] + "\x00" + tokens[i + 1])
    return len(seen) / total


def brute_scd(pairs):
    """Exact rational evaluation of the distance formula."""
    total = Fraction(0)
    for s, t in pairs:
        total += Fraction(abs(s - t), s) + Fraction(abs(s - t), t)
    return total / (2 * len(pairs))


def recount(songs, variant):
    """Per-song metrics from the lower-level modules, then plain means."""
    per = []
    for song in songs:
        if variant == "excluded":
            song, _ = filter_untranslated(song)
        if song.n_lines == 0:
            continue
        sem = sem_line(song, EMB, TR)
        src = song.original_language
        tgt = "en" if src == "kr" else "kr"
        counts = CountPairSeries.from_counts(
            [syllables(t) for t in song.texts(src)], [syllables(t) for t in song.texts(tgt)]
        )
        per.append(
            dict(
                sem_line=sem.sem_line,
                sem_sec=sem.sem_sec,
                pho_deg_en=pho_profile(song, "en").pho_deg,
                pho_deg_kr=pho_profile(song, "kr").pho_deg,
                pho_var_en=pho_profile(song, "en").pho_var,
                pho_var_kr=pho_profile(song, "kr").pho_var,
                scd=scd(counts) if counts.pairs else None,
                error_rate=error_rate(counts) if counts.pairs else None,
                nsp=coherence_nsp(song.texts("en"), NSP) if song.n_lines > 1 else None,
            )
        )
    out = {}
    for key in per[0]:
        values = [p[key] for p in per if p[key] is not None]
        out[key] = statistics.fmean(values) if values else None
    return out, len(per)
