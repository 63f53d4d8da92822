"""Bilingual dictionary ingestion and round-trip translation lookup.

The lexicon is a set of directed edges (language, foreign word, English
gloss) loaded from a headerless TSV.  Forward lookup maps an English term
to the foreign words glossed by it within one language; backward lookup
returns every gloss attached to a (language, word) pair.  Chaining the
two yields the round-trip sense sets that drive most downstream features.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError, EmptyLexiconError

log = logging.getLogger(__name__)


def nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


@dataclass(frozen=True)
class LoadReport:
    rows_read: int
    entries: int
    skipped: int


@dataclass
class TranslationTable:
    """Immutable-after-load store of (language, foreign word, gloss) edges.

    Glosses are lowercased and NFC-normalized; foreign-word case is
    preserved since capitalization can be contrastive in some scripts.
    All query methods are read-only and safe to call concurrently.
    """

    entries: frozenset[tuple[str, str, str]]
    load_report: LoadReport | None = None
    _forward: dict[tuple[str, str], set[str]] = field(init=False, repr=False)
    _backward: dict[tuple[str, str], set[str]] = field(init=False, repr=False)
    _by_language: dict[str, set[str]] = field(init=False, repr=False)

    def __post_init__(self):
        self._forward = {}
        self._backward = {}
        self._by_language = {}
        for lang, word, gloss in self.entries:
            self._forward.setdefault((lang, gloss), set()).add(word)
            self._backward.setdefault((lang, word), set()).add(gloss)
            self._by_language.setdefault(lang, set()).add(word)

    @classmethod
    def from_rows(cls, rows) -> "TranslationTable":
        normalized = set()
        for lang, word, gloss in rows:
            lang = nfc(lang.strip())
            word = nfc(word.strip())
            gloss = nfc(gloss.strip()).lower()
            if lang and word and gloss:
                normalized.add((lang, word, gloss))
        return cls(entries=frozenset(normalized))

    def languages(self) -> list[str]:
        return sorted(self._by_language)

    def words_of(self, lang: str) -> set[str]:
        return set(self._by_language.get(lang, ()))

    def has_word(self, lang: str, word: str) -> bool:
        return word in self._by_language.get(lang, ())


def load_lexicon(path, fmt: str = "tsv") -> TranslationTable:
    """Load a lexicon TSV: ``language<TAB>foreign_word<TAB>english_gloss``.

    Rows with fewer than three non-empty fields are skipped and counted;
    extra columns are ignored.  Raises EmptyLexiconError when no valid
    row remains, and propagates I/O errors for unreadable files.
    """
    if fmt != "tsv":
        raise ValueError(f"unsupported lexicon format {fmt!r}")
    path = Path(path)
    rows = []
    rows_read = 0
    skipped = 0
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            rows_read += 1
            parts = line.split("\t")
            if len(parts) < 3 or not all(p.strip() for p in parts[:3]):
                skipped += 1
                log.warning("%s:%d: malformed lexicon row skipped", path, lineno)
                continue
            rows.append(tuple(parts[:3]))
    table = TranslationTable.from_rows(rows)
    table.load_report = LoadReport(
        rows_read=rows_read, entries=len(table.entries), skipped=skipped
    )
    if not table.entries:
        raise EmptyLexiconError(f"{path}: no valid lexicon rows")
    log.info(
        "%s: %d rows read, %d entries, %d skipped",
        path,
        rows_read,
        len(table.entries),
        skipped,
    )
    return table


def translate(table: TranslationTable, color: str, lang: str) -> set[str]:
    """All foreign words of ``lang`` glossed as ``color`` (possibly empty)."""
    return set(table._forward.get((lang, nfc(color.strip()).lower()), ()))


def back_translate(table: TranslationTable, word: str, lang: str) -> set[str]:
    """All English glosses attached to (lang, word) (possibly empty)."""
    return set(table._backward.get((lang, nfc(word.strip())), ()))


@dataclass(frozen=True)
class ColorConcept:
    """An English seed color term with its basicness status.

    ``bk_stage`` is the acquisition stage, present exactly for basic
    terms.
    """

    term: str
    is_basic: bool
    bk_stage: int | None = None

    def __post_init__(self):
        if self.is_basic and self.bk_stage is None:
            raise ValueError(f"basic color {self.term!r} needs a stage")
        if not self.is_basic and self.bk_stage is not None:
            raise ValueError(f"secondary color {self.term!r} must not carry a stage")
        if self.bk_stage is not None and not 1 <= self.bk_stage <= 7:
            raise ValueError(f"stage out of range for {self.term!r}")


def load_seeds(path, require_eleven_basic: bool = True) -> list[ColorConcept]:
    """Parse the seed color list: one term per line, ``*`` marks basic
    terms and ``@N`` appends the acquisition stage (e.g. ``white*@1``)."""
    path = Path(path)
    concepts: list[ColorConcept] = []
    seen = set()
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        stage = None
        if "@" in line:
            line, _, stage_str = line.rpartition("@")
            try:
                stage = int(stage_str)
            except ValueError:
                raise DataError(f"{path}:{lineno}: bad stage {stage_str!r}")
        is_basic = line.endswith("*")
        if is_basic:
            line = line[:-1]
        term = nfc(line.strip()).lower()
        if not term:
            raise DataError(f"{path}:{lineno}: empty color term")
        if term in seen:
            raise DataError(f"{path}:{lineno}: duplicate color term {term!r}")
        seen.add(term)
        concepts.append(ColorConcept(term=term, is_basic=is_basic, bk_stage=stage))
    basic = sum(1 for c in concepts if c.is_basic)
    if require_eleven_basic and basic != 11:
        raise DataError(f"{path}: expected 11 basic colors, found {basic}")
    return concepts


@dataclass(frozen=True)
class RoundTripRecord:
    """One forward edge plus everything it leads back to.

    ``back_translations`` is the union of glosses of ``foreign_word``
    within the same language.
    """

    color: str
    language: str
    foreign_word: str
    back_translations: frozenset[str]


def round_trip(table: TranslationTable, color: str, lang: str) -> list[RoundTripRecord]:
    """Round-trip records for one color through one language.

    One record per foreign word, ordered by foreign word; the union of
    all back-translation sets is the color's sense set through ``lang``.
    """
    records = []
    for word in sorted(translate(table, color, lang)):
        records.append(
            RoundTripRecord(
                color=color,
                language=lang,
                foreign_word=word,
                back_translations=frozenset(back_translate(table, word, lang)),
            )
        )
    return records


def round_trip_all(table: TranslationTable, colors) -> dict[str, list[RoundTripRecord]]:
    """Round trips for every color through every language in the table."""
    out: dict[str, list[RoundTripRecord]] = {}
    langs = table.languages()
    for color in colors:
        records: list[RoundTripRecord] = []
        for lang in langs:
            records.extend(round_trip(table, color, lang))
        out[color] = records
    return out
