"""Stage-based pipeline orchestration.

Stages run in dependency order and communicate exclusively through files
in the output directory, so any stage can be re-run on its own from the
cached upstream artifacts.  Every output is byte-deterministic: fixed
orderings, fixed float formatting, and per-language work merged in
canonical order regardless of the worker-pool size.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .compounds import compound_counts, extract_candidates, score_and_filter
from .config import PipelineConfig
from .errors import DataError, DependencyError, StageError, UndefinedGammaError
from .features import (
    ConcretenessLexicon,
    CorpusSummary,
    EtymologyTable,
    FeatureMatrix,
    assemble_feature_matrix,
    etymology_features,
    pos_features,
    translation_concreteness,
    word_concreteness,
    word_length_feature,
)
from .lexicon import (
    ColorConcept,
    RoundTripRecord,
    TranslationTable,
    load_lexicon,
    load_seeds,
    round_trip,
)
from .segmentation import (
    affix_presence_feature,
    discover_affixes,
    train_segmenter,
)
from .stats import (
    FEATURE_COLUMNS,
    aggregate,
    bootstrap_then_full_aggregate,
    gamma,
    rfe,
    sequence_target,
)
from .wcs import heterogeneity_report, load_wcs

log = logging.getLogger(__name__)

STAGE_ORDER = (
    "ingest",
    "segment",
    "compounds",
    "features",
    "aggregate",
    "gamma",
    "rfe",
    "wcs",
    "report",
)

#: Files each stage produces, relative to the output directory.
STAGE_OUTPUTS = {
    "ingest": ("cache/lexicon_normalized.tsv", "cache/seeds_normalized.tsv", "cache/roundtrips.csv"),
    "segment": ("cache/segmentations.csv", "affixes.csv"),
    "compounds": ("compounds.csv",),
    "features": ("cache/features_base.csv",),
    "aggregate": ("features.csv", "ranking.csv", "ranking_bootstrap.csv"),
    "gamma": ("gamma.csv",),
    "rfe": ("rfe.json",),
    "wcs": ("consensus.csv", "inventory.csv", "heterogeneity.svg"),
    "report": ("summary.md",),
}

NON_AFFIX_COLUMNS = tuple(c for c in FEATURE_COLUMNS if c != "affix-presence")


# ---------------------------------------------------------------------------
# artifact I/O helpers


def _write_text(path: Path, text: str, created: list[Path]):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")
    created.append(path)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _read_csv(path: Path):
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def _need(path: Path) -> Path:
    if not path.exists():
        raise DependencyError(f"missing upstream artifact: {path}")
    return path


def _fmt(value: float) -> str:
    return f"{value:.6f}"


# ---------------------------------------------------------------------------
# cached-artifact readers


def _read_seeds_cache(out: Path) -> list[ColorConcept]:
    path = _need(out / "cache/seeds_normalized.tsv")
    concepts = []
    for line in path.read_text(encoding="utf-8").splitlines():
        term, basic, stage = line.split("\t")
        concepts.append(
            ColorConcept(
                term=term,
                is_basic=basic == "1",
                bk_stage=int(stage) if stage else None,
            )
        )
    return concepts


def _read_lexicon_cache(out: Path) -> TranslationTable:
    path = _need(out / "cache/lexicon_normalized.tsv")
    rows = [tuple(line.split("\t")) for line in path.read_text(encoding="utf-8").splitlines()]
    return TranslationTable.from_rows(rows)


def _read_roundtrips(out: Path) -> dict[str, list[RoundTripRecord]]:
    path = _need(out / "cache/roundtrips.csv")
    _, rows = _read_csv(path)
    records: dict[str, list[RoundTripRecord]] = {}
    for color, lang, word, bts in rows:
        records.setdefault(color, []).append(
            RoundTripRecord(
                color=color,
                language=lang,
                foreign_word=word,
                back_translations=frozenset(json.loads(bts)),
            )
        )
    return records


def _translation_pairs(records: dict[str, list[RoundTripRecord]]) -> dict[str, list[tuple[str, str]]]:
    return {
        color: sorted({(r.language, r.foreign_word) for r in recs})
        for color, recs in records.items()
    }


def _read_segmentations(out: Path) -> dict[tuple[str, str], tuple[str, ...]]:
    path = _need(out / "cache/segmentations.csv")
    _, rows = _read_csv(path)
    return {(lang, word): tuple(json.loads(segs)) for lang, word, segs in rows}


def _read_affixes(out: Path) -> list[dict]:
    path = _need(out / "affixes.csv")
    header, rows = _read_csv(path)
    return [dict(zip(header, row)) for row in rows]


def _read_feature_matrix(out: Path) -> FeatureMatrix:
    path = _need(out / "features.csv")
    header, rows = _read_csv(path)
    columns = tuple(header[1:])
    colors = [row[0] for row in rows]
    values = {col: [] for col in columns}
    for row in rows:
        for col, cell in zip(columns, row[1:]):
            values[col].append(float(cell))
    return FeatureMatrix(colors=colors, columns=columns, values=values)


def _read_accepted_compounds(out: Path) -> set[tuple[str, str]]:
    path = _need(out / "compounds.csv")
    header, rows = _read_csv(path)
    idx = {name: i for i, name in enumerate(header)}
    return {
        (row[idx["language"]], row[idx["word"]])
        for row in rows
        if row[idx["accepted"]] == "1"
    }


# ---------------------------------------------------------------------------
# stages


def stage_ingest(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    table = load_lexicon(cfg.lexicon)
    seeds = load_seeds(cfg.seeds)

    lex_lines = [f"{l}\t{w}\t{g}" for l, w, g in sorted(table.entries)]
    _write_text(out / "cache/lexicon_normalized.tsv", "\n".join(lex_lines) + "\n", created)

    seed_lines = [
        f"{c.term}\t{1 if c.is_basic else 0}\t{c.bk_stage if c.bk_stage is not None else ''}"
        for c in seeds
    ]
    _write_text(out / "cache/seeds_normalized.tsv", "\n".join(seed_lines) + "\n", created)

    rows = []
    for concept in seeds:
        for lang in table.languages():
            for rec in round_trip(table, concept.term, lang):
                rows.append(
                    (
                        rec.color,
                        rec.language,
                        rec.foreign_word,
                        json.dumps(sorted(rec.back_translations)),
                    )
                )
    _write_text(
        out / "cache/roundtrips.csv",
        _csv_text(["color", "language", "foreign_word", "back_translations"], rows),
        created,
    )
    report = table.load_report
    return {
        "lexicon_entries": len(table.entries),
        "lexicon_rows_skipped": report.skipped if report else 0,
        "languages": len(table.languages()),
        "colors": len(seeds),
        "roundtrip_rows": len(rows),
    }


def _train_language(args):
    """Worker for per-language training; top-level for picklability."""
    lang, words, alpha, max_iters, max_segment_len = args
    model = train_segmenter(
        words,
        alpha=alpha,
        max_iters=max_iters,
        language=lang,
        max_segment_len=max_segment_len,
    )
    return lang, model


def stage_segment(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    table = _read_lexicon_cache(out)
    records = _read_roundtrips(out)

    color_words: dict[str, set[str]] = {}
    for recs in records.values():
        for rec in recs:
            color_words.setdefault(rec.language, set()).add(rec.foreign_word)

    jobs = [
        (lang, sorted(table.words_of(lang)), cfg.alpha, cfg.max_iters, cfg.max_segment_len)
        for lang in table.languages()
    ]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_train_language, jobs))
    else:
        results = [_train_language(j) for j in jobs]
    results.sort(key=lambda r: r[0])  # canonical merge order

    seg_rows = []
    affix_rows = []
    thresholds = cfg.affix_thresholds()
    for lang, model in results:
        for word in sorted(model.segmentations):
            seg_rows.append((lang, word, json.dumps(list(model.segmentations[word]))))
        affixes = discover_affixes(
            model,
            sorted(color_words.get(lang, ())),
            sorted(table.words_of(lang)),
            thresholds,
        )
        for a in affixes:
            affix_rows.append(
                (
                    lang,
                    a.form,
                    a.position,
                    a.affix_class,
                    _fmt(a.color_coverage),
                    _fmt(a.global_coverage),
                )
            )
    affix_rows.sort(key=lambda r: (r[0], r[2], r[1]))

    _write_text(
        out / "cache/segmentations.csv",
        _csv_text(["language", "word", "segments"], seg_rows),
        created,
    )
    _write_text(
        out / "affixes.csv",
        _csv_text(
            ["language", "affix", "position", "class", "color_coverage", "global_coverage"],
            affix_rows,
        ),
        created,
    )
    return {"languages_trained": len(results), "affixes": len(affix_rows)}


def stage_compounds(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    table = _read_lexicon_cache(out)
    affixes = _read_affixes(out)

    suffixes_by_lang: dict[str, set[str]] = {}
    for row in affixes:
        if row["position"] == "suffix":
            suffixes_by_lang.setdefault(row["language"], set()).add(row["affix"])

    candidates = []
    for lang in table.languages():
        candidates.extend(
            extract_candidates(table, lang, suffixes_by_lang.get(lang, ()))
        )
    analyses = score_and_filter(candidates, table, cfg.compound_threshold)

    rows = []
    for a in analyses:
        c = a.candidate
        rows.append(
            (
                c.language,
                c.word,
                c.left,
                c.glue,
                c.right,
                a.recipe.left_concept if a.recipe else "",
                a.recipe.right_concept if a.recipe else "",
                str(a.recipe.support if a.recipe else 0),
                "1" if a.accepted else "0",
            )
        )
    _write_text(
        out / "compounds.csv",
        _csv_text(
            ["language", "word", "left", "glue", "right", "left_concept", "right_concept", "support", "accepted"],
            rows,
        ),
        created,
    )
    return {
        "candidates": len(analyses),
        "accepted": sum(1 for a in analyses if a.accepted),
    }


def stage_features(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    seeds = _read_seeds_cache(out)
    records = _read_roundtrips(out)
    translations = _translation_pairs(records)
    accepted = _read_accepted_compounds(out)

    conc = ConcretenessLexicon.load(cfg.concreteness)
    ngram = CorpusSummary.load(cfg.ngram, "ngram")
    treebank = CorpusSummary.load(cfg.treebank, "treebank")
    etym = EtymologyTable.load(cfg.etymology)

    colors = [c.term for c in seeds]
    compound_feats, compound_missing = compound_counts(
        accepted, {c: translations.get(c, []) for c in colors}
    )
    maps: dict[str, dict[str, float | None]] = {col: {} for col in NON_AFFIX_COLUMNS}
    for color in colors:
        recs = records.get(color, [])
        pairs = translations.get(color, [])
        maps["word-concreteness"][color] = word_concreteness(color, conc)
        maps["translation-concreteness"][color] = (
            translation_concreteness(color, recs, conc) if recs else None
        )
        freq, pct = pos_features(color, ngram)
        maps["ngram-frequency"][color] = freq
        maps["ngram-pct-adj"][color] = pct
        _, tb_pct = pos_features(color, treebank)
        maps["penntb-pct-adj"][color] = tb_pct
        if color in compound_missing:
            maps["compound-count"][color] = None
            maps["compound-frequency"][color] = None
        else:
            count, fraction = compound_feats[color]
            maps["compound-count"][color] = float(count)
            maps["compound-frequency"][color] = fraction
        for process, value in etymology_features(color, etym, etym.total(color)).items():
            maps[process][color] = value
        maps["word-length"][color] = word_length_feature(color, pairs)

    rows = []
    for color in colors:
        row = [color, "1" if translations.get(color) else "0"]
        for col in NON_AFFIX_COLUMNS:
            v = maps[col][color]
            row.append("" if v is None else repr(v))
        rows.append(row)
    _write_text(
        out / "cache/features_base.csv",
        _csv_text(["color", "has_translations", *NON_AFFIX_COLUMNS], rows),
        created,
    )
    return {"colors": len(colors)}


def _read_features_base(out: Path):
    path = _need(out / "cache/features_base.csv")
    header, rows = _read_csv(path)
    colors = [r[0] for r in rows]
    has_translations = {r[0]: r[1] == "1" for r in rows}
    maps: dict[str, dict[str, float | None]] = {col: {} for col in NON_AFFIX_COLUMNS}
    for row in rows:
        for col, cell in zip(header[2:], row[2:]):
            maps[col][row[0]] = float(cell) if cell else None
    return colors, has_translations, maps


def stage_aggregate(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    colors, has_translations, maps = _read_features_base(out)
    records = _read_roundtrips(out)
    translations = _translation_pairs(records)
    segmentations = _read_segmentations(out)

    # The affix column is bootstrap-dependent; before the bootstrap it is
    # a placeholder that only contributes its missingness (colors without
    # translations can never receive a score) to the drop rule.
    maps = dict(maps)
    maps["affix-presence"] = {
        c: 0.0 if has_translations.get(c) else None for c in colors
    }
    matrix = assemble_feature_matrix(maps, colors, FEATURE_COLUMNS, cfg.drop_threshold)
    if matrix.dropped:
        log.info(
            "dropped colors (too many missing features): %s",
            ", ".join(f"{c} ({n}/14)" for c, n in matrix.dropped),
        )

    def affix_fn(top10):
        scores, missing = affix_presence_feature(
            matrix.colors,
            translations,
            segmentations,
            top10,
            min_support=cfg.affix_min_support,
        )
        present = [scores[c] for c in matrix.colors if c not in missing]
        med = statistics.median(present) if present else 0.0
        return {c: med if c in missing else scores[c] for c in matrix.colors}

    boot, final, matrix = bootstrap_then_full_aggregate(
        matrix, cfg.negated, cfg.transforms, affix_fn
    )

    feat_rows = [
        [color, *(repr(matrix.values[col][i]) for col in matrix.columns)]
        for i, color in enumerate(matrix.colors)
    ]
    _write_text(
        out / "features.csv",
        _csv_text(["color", *matrix.columns], feat_rows),
        created,
    )

    seeds = {c.term: c for c in _read_seeds_cache(out)}

    def ranking_rows(ranking):
        return [
            (color, str(i + 1), _fmt(score), "1" if seeds[color].is_basic else "0")
            for i, (color, score) in enumerate(zip(ranking.colors, ranking.scores))
        ]

    _write_text(
        out / "ranking.csv",
        _csv_text(["color", "rank", "score", "basic"], ranking_rows(final)),
        created,
    )
    _write_text(
        out / "ranking_bootstrap.csv",
        _csv_text(["color", "rank", "score", "basic"], ranking_rows(boot)),
        created,
    )
    return {
        "colors_ranked": len(matrix.colors),
        "colors_dropped": len(matrix.dropped),
        "dropped": [c for c, _ in matrix.dropped],
        "top_color": final.colors[0],
    }


def _targets_for(matrix: FeatureMatrix, seeds: dict[str, ColorConcept], scope: str):
    basic_flags = [1.0 if seeds[c].is_basic else 0.0 for c in matrix.colors]
    stages = {c.term: c.bk_stage for c in seeds.values() if c.bk_stage is not None}
    is_basic = {c.term: c.is_basic for c in seeds.values()}
    seq = sequence_target(matrix.colors, is_basic, stages)
    if scope == "basic-only":
        idx = [i for i, c in enumerate(matrix.colors) if seeds[c].is_basic]
    else:
        idx = list(range(len(matrix.colors)))
    return basic_flags, seq, idx


def _gamma_or_nan(x, y) -> float:
    try:
        return gamma(x, y).gamma
    except UndefinedGammaError:
        return float("nan")


def stage_gamma(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    matrix = _read_feature_matrix(out)
    seeds = {c.term: c for c in _read_seeds_cache(out)}
    basic_flags, seq, seq_idx = _targets_for(matrix, seeds, cfg.sequence_scope)

    rows = []
    for col in matrix.columns:
        series = matrix.column(col)
        if col in cfg.negated:
            series = [-v for v in series]
        gb = _gamma_or_nan(series, basic_flags)
        gs = _gamma_or_nan([series[i] for i in seq_idx], [seq[i] for i in seq_idx])
        rows.append((col, _fmt(gb), _fmt(gs)))

    ranking = aggregate(matrix, cfg.negated, transforms=cfg.transforms)
    scores = [ranking.scores_by_color[c] for c in matrix.colors]
    gb = _gamma_or_nan(scores, basic_flags)
    gs = _gamma_or_nan([scores[i] for i in seq_idx], [seq[i] for i in seq_idx])
    rows.append(("aggregate", _fmt(gb), _fmt(gs)))

    _write_text(
        out / "gamma.csv",
        _csv_text(["feature", "gamma_basic", "gamma_sequence"], rows),
        created,
    )
    return {
        "gamma_basic_aggregate": gb if gb == gb else None,
        "gamma_sequence_aggregate": gs if gs == gs else None,
    }


def stage_rfe(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    if not cfg.rfe_enabled:
        _write_text(out / "rfe.json", json.dumps({"enabled": False}, indent=2) + "\n", created)
        return {"enabled": False}
    matrix = _read_feature_matrix(out)
    seeds = {c.term: c for c in _read_seeds_cache(out)}
    basic_flags, seq, seq_idx = _targets_for(matrix, seeds, cfg.sequence_scope)

    payload = {"enabled": True}
    for target_name in cfg.rfe_targets:
        if target_name == "basic":
            target = basic_flags
            m = matrix
        else:
            target = [seq[i] for i in seq_idx]
            m = matrix
            if len(seq_idx) != len(matrix.colors):
                m = FeatureMatrix(
                    colors=[matrix.colors[i] for i in seq_idx],
                    columns=matrix.columns,
                    values={
                        col: [matrix.values[col][i] for i in seq_idx]
                        for col in matrix.columns
                    },
                )
        trajectory, best = rfe(m, target, cfg.negated, cfg.transforms)
        payload[target_name] = {
            "trajectory": [
                {"removed_feature": step["removed"], "gamma": step["gamma"]}
                for step in trajectory
            ],
            "best_features": list(best),
            "best_gamma": trajectory[-1]["gamma"],
        }
    _write_text(out / "rfe.json", json.dumps(payload, indent=2, sort_keys=True) + "\n", created)
    return {"targets": list(cfg.rfe_targets)}


def stage_wcs(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    table = load_wcs(cfg.wcs)
    summaries, consensus, inventory, svg = heterogeneity_report(table)
    _write_text(out / "consensus.csv", consensus, created)
    _write_text(out / "inventory.csv", inventory, created)
    _write_text(out / "heterogeneity.svg", svg, created)
    return {
        "languages": len(summaries),
        "responses": len(table.rows),
        "conflicts": table.conflicts,
    }


def stage_report(cfg: PipelineConfig, created: list[Path]) -> dict:
    out = cfg.output_dir
    lines = ["# Color basicness run summary", ""]

    header, rows = _read_csv(_need(out / "ranking.csv"))
    lines += ["## Ranking (top 15)", "", "| rank | color | score | basic |", "| --- | --- | --- | --- |"]
    for row in rows[:15]:
        lines.append(f"| {row[1]} | {row[0]} | {row[2]} | {'yes' if row[3] == '1' else ''} |")
    lines.append("")

    header, rows = _read_csv(_need(out / "gamma.csv"))
    lines += ["## Rank correlations", "", "| feature | vs basic | vs sequence |", "| --- | --- | --- |"]
    for row in rows:
        lines.append(f"| {row[0]} | {row[1]} | {row[2]} |")
    lines.append("")

    header, rows = _read_csv(_need(out / "compounds.csv"))
    idx = {name: i for i, name in enumerate(header)}
    accepted = [r for r in rows if r[idx["accepted"]] == "1"]
    glue_lengths = sorted({len(r[idx["glue"]]) for r in accepted})
    dist = {
        gl: sum(1 for r in accepted if len(r[idx["glue"]]) == gl) for gl in glue_lengths
    }
    lines += ["## Compounds", "", f"accepted analyses: {len(accepted)} of {len(rows)} candidates", ""]
    if dist:
        lines.append("glue length distribution: " + ", ".join(f"{k}: {v}" for k, v in dist.items()))
        lines.append("")

    header, rows = _read_csv(_need(out / "affixes.csv"))
    lines += ["## Affixes", "", "| language | affix | position | class | color cov. | global cov. |", "| --- | --- | --- | --- | --- | --- |"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    lines.append("")

    manifest_path = out / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        dropped = manifest.get("dropped_colors", [])
        if dropped:
            lines += ["## Dropped colors", "", ", ".join(dropped), ""]

    _write_text(out / "summary.md", "\n".join(lines) + "\n", created)
    return {}


STAGE_FUNCS = {
    "ingest": stage_ingest,
    "segment": stage_segment,
    "compounds": stage_compounds,
    "features": stage_features,
    "aggregate": stage_aggregate,
    "gamma": stage_gamma,
    "rfe": stage_rfe,
    "wcs": stage_wcs,
    "report": stage_report,
}


# ---------------------------------------------------------------------------
# manifest and entry points


def _input_digests(cfg: PipelineConfig) -> dict[str, str]:
    out = {}
    for name, path in sorted(cfg.input_paths().items()):
        out[name] = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return out


def _load_manifest(out: Path) -> dict:
    path = out / "manifest.json"
    if path.exists():
        return json.loads(path.read_text(encoding="utf-8"))
    return {}


def _store_manifest(out: Path, manifest: dict, created: list[Path]):
    _write_text(
        out / "manifest.json",
        json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        created,
    )


def run_stage(cfg: PipelineConfig, stage: str) -> dict:
    """Run a single stage against cached upstream artifacts.

    Refuses to mix artifacts produced under a different configuration.
    """
    if stage not in STAGE_FUNCS:
        raise ValueError(f"unknown stage {stage!r}")
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    manifest = _load_manifest(out)
    if manifest.get("config_hash") not in (None, cfg.config_hash()):
        raise DataError(
            "cached artifacts were produced under a different configuration; "
            "re-run the full pipeline"
        )
    created: list[Path] = []
    started = time.perf_counter()
    try:
        counts = STAGE_FUNCS[stage](cfg, created)
    except Exception as e:
        for path in created:
            path.unlink(missing_ok=True)
        raise StageError(stage, e) from e
    manifest.setdefault("stages", {})[stage] = {
        "counts": counts,
        "duration_s": round(time.perf_counter() - started, 6),
    }
    manifest["config_hash"] = cfg.config_hash()
    manifest["input_digests"] = _input_digests(cfg)
    manifest["tool_version"] = __version__
    if stage == "aggregate":
        manifest["dropped_colors"] = counts.get("dropped", [])
    _store_manifest(out, manifest, created)
    return counts


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run every stage in dependency order and write the manifest.

    On failure, every file created by this run is removed before the
    stage error propagates.
    """
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []
    manifest = {
        "tool_version": __version__,
        "config_hash": cfg.config_hash(),
        "input_digests": _input_digests(cfg),
        "stages": {},
        "dropped_colors": [],
    }
    try:
        for stage in STAGE_ORDER:
            started = time.perf_counter()
            counts = STAGE_FUNCS[stage](cfg, created)
            manifest["stages"][stage] = {
                "counts": counts,
                "duration_s": round(time.perf_counter() - started, 6),
            }
            if stage == "aggregate":
                manifest["dropped_colors"] = counts.get("dropped", [])
            # keep the manifest current so later stages (the report reads
            # dropped colors from it) and partial re-runs see fresh state
            _store_manifest(out, manifest, created)
            log.info("stage %s done: %s", stage, counts)
    except Exception as e:
        for path in created:
            path.unlink(missing_ok=True)
        if isinstance(e, StageError):
            raise
        raise StageError(stage, e) from e
    return manifest
