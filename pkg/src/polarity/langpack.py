"""Language-dependent word processing: negation, stopwords and stemming.

A :class:`LanguagePack` bundles the per-language resources.  Packs are read
from a small sectioned text format::

    # comment
    [language]
    es
    [stemmer]
    snowball-spanish
    [negation-rules]
    <marker regex><TAB><skip regex>
    [stopwords]
    de la que el en ...

Stopwords may be given several per line.  Regexes are matched against whole
words, case-insensitively.  Languages without a bundled pack get an empty one
in which every feature is a no-op.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .textproc import EntityAction, ResourceError, remove_diacritics

__all__ = [
    "LangParams",
    "NegationRule",
    "LanguagePack",
    "STEMMERS",
    "BUNDLED_LANGUAGES",
    "load_pack",
    "get_pack",
    "apply_negation",
    "handle_stopwords",
    "stem_words",
    "process_words",
]

STOPWORD_TAG = "_sw"
BUNDLED_LANGUAGES = ("en", "es", "it")
_SECTIONS = ("language", "stemmer", "negation-rules", "stopwords")


@dataclass(frozen=True)
class LangParams:
    stem: bool = False
    neg: bool = False
    sw: EntityAction = EntityAction.NONE

    def __post_init__(self):
        object.__setattr__(self, "sw", EntityAction(self.sw))
        for name in ("stem", "neg"):
            if not isinstance(getattr(self, name), bool):
                raise TypeError(f"{name} must be a bool")


@dataclass(frozen=True)
class NegationRule:
    marker: str
    skip: str = ""

    def __post_init__(self):
        try:
            object.__setattr__(self, "_marker", re.compile(self.marker, re.IGNORECASE))
            object.__setattr__(self, "_skip", re.compile(self.skip, re.IGNORECASE) if self.skip else None)
        except re.error as exc:
            raise ResourceError(f"bad negation rule {self.marker!r}: {exc}") from None

    def is_marker(self, word: str) -> bool:
        return self._marker.fullmatch(word) is not None

    def is_skipped(self, word: str) -> bool:
        return self._skip is not None and self._skip.fullmatch(word) is not None


def _snowball(language: str) -> Callable[[str], str]:
    from nltk.stem.snowball import SnowballStemmer

    return SnowballStemmer(language).stem


def _porter() -> Callable[[str], str]:
    from nltk.stem.porter import PorterStemmer

    return PorterStemmer().stem


STEMMERS: dict[str, Callable[[], Callable[[str], str]]] = {
    "none": lambda: (lambda word: word),
    "porter": _porter,
    "snowball-english": lambda: _snowball("english"),
    "snowball-spanish": lambda: _snowball("spanish"),
    "snowball-italian": lambda: _snowball("italian"),
    "snowball-portuguese": lambda: _snowball("portuguese"),
    "snowball-german": lambda: _snowball("german"),
    "snowball-russian": lambda: _snowball("russian"),
    "snowball-swedish": lambda: _snowball("swedish"),
    "snowball-arabic": lambda: _snowball("arabic"),
}


@functools.lru_cache(maxsize=None)
def _stemmer(stemmer_id: str) -> Callable[[str], str]:
    base = STEMMERS[stemmer_id]()

    @functools.lru_cache(maxsize=65536)
    def stem(word: str) -> str:
        # Porter and Snowball are not projections ("because" -> "becaus" ->
        # "becau"); re-applying until stable makes stems stable under restemming.
        for _ in range(8):
            nxt = base(word)
            if nxt == word:
                break
            word = nxt
        return word

    return stem


@dataclass(frozen=True)
class LanguagePack:
    code: str
    stopwords: frozenset = frozenset()
    rules: tuple = ()
    stemmer_id: str = "none"
    _lookup: frozenset = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        if self.stemmer_id not in STEMMERS:
            raise ResourceError(f"unknown stemmer {self.stemmer_id!r} in pack {self.code!r}")
        words = frozenset(w.lower() for w in self.stopwords)
        object.__setattr__(self, "stopwords", words)
        object.__setattr__(self, "rules", tuple(self.rules))
        # Text may have had its accents stripped before reaching the pack.
        object.__setattr__(self, "_lookup", words | {remove_diacritics(w) for w in words})

    @classmethod
    def empty(cls, code: str = "") -> "LanguagePack":
        return cls(code=code)

    def is_stopword(self, word: str) -> bool:
        return word.lower() in self._lookup

    def is_marker(self, word: str) -> bool:
        return any(rule.is_marker(word) for rule in self.rules)

    def split_fused(self, token: str) -> tuple[str, str] | None:
        """Split ``marker_word`` into its parts, or ``None`` if not fused."""
        start = 0
        while True:
            pos = token.find("_", start)
            if pos <= 0 or pos == len(token) - 1:
                return None
            if self.is_marker(token[:pos]):
                return token[:pos], token[pos + 1:]
            start = pos + 1

    def stem(self, word: str) -> str:
        return _stemmer(self.stemmer_id)(word)

    def dumps(self) -> str:
        lines = [f"[language]\n{self.code}", f"[stemmer]\n{self.stemmer_id}", "[negation-rules]"]
        lines += [f"{r.marker}\t{r.skip}" for r in self.rules]
        lines.append("[stopwords]")
        lines += sorted(self.stopwords)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, code: str = "") -> "LanguagePack":
        section = None
        seen = set()
        stemmer_id = "none"
        rules = []
        stopwords = set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            header = re.fullmatch(r"\s*\[([a-z-]+)\]\s*", line)
            if header:
                section = header.group(1)
                if section not in _SECTIONS:
                    raise ResourceError(f"line {lineno}: unknown section [{section}]")
                if section in seen:
                    raise ResourceError(f"line {lineno}: duplicate section [{section}]")
                seen.add(section)
                continue
            if section is None:
                raise ResourceError(f"line {lineno}: content before any section header")
            if section == "language":
                code = line.strip()
            elif section == "stemmer":
                stemmer_id = line.strip()
            elif section == "negation-rules":
                marker, _, skip = line.partition("\t")
                if not marker.strip():
                    raise ResourceError(f"line {lineno}: empty negation marker")
                rules.append(NegationRule(marker.strip(), skip.strip()))
            else:
                stopwords.update(line.split())
        return cls(code=code, stopwords=frozenset(stopwords), rules=tuple(rules), stemmer_id=stemmer_id)


def load_pack(path: str | Path) -> LanguagePack:
    path = Path(path)
    return LanguagePack.loads(path.read_text(encoding="utf-8"), code=path.stem)


@functools.lru_cache(maxsize=None)
def get_pack(code: str | None) -> LanguagePack:
    """Bundled pack for ``code``; unknown languages get an empty pack."""
    if code in BUNDLED_LANGUAGES:
        text = resources.files("polarity").joinpath(f"data/packs/{code}.pack").read_text("utf-8")
        return LanguagePack.loads(text, code=code)
    return LanguagePack.empty(code or "")


def _is_tag(word: str) -> bool:
    return word.startswith("_")


def apply_negation(words: Sequence[str], pack: LanguagePack) -> list[str]:
    """Fuse each negation marker with the nearest following content word.

    Words matched by the rule's skip pattern (articles, pronouns, copulas)
    between the marker and the content word are dropped::

        ["el", "coche", "no", "es", "bonito"] -> ["el", "coche", "no_bonito"]

    A marker with no content word after it is left as is.
    """
    words = list(words)
    for rule in pack.rules:
        i = 0
        while i < len(words):
            word = words[i]
            if not _is_tag(word) and rule.is_marker(word):
                j = i + 1
                while j < len(words) and rule.is_skipped(words[j]):
                    j += 1
                if j < len(words) and not _is_tag(words[j]) and not pack.is_marker(words[j]) \
                        and pack.split_fused(words[j]) is None:
                    words[i:j + 1] = [f"{word}_{words[j]}"]
            i += 1
    return words


def handle_stopwords(words: Sequence[str], mode: EntityAction | str, pack: LanguagePack) -> list[str]:
    mode = EntityAction(mode)
    if mode is EntityAction.NONE:
        return list(words)
    out = []
    for word in words:
        if _is_tag(word) or not pack.is_stopword(word):
            out.append(word)
        elif mode is EntityAction.GROUP:
            out.append(STOPWORD_TAG)
    return out


def stem_words(words: Sequence[str], pack: LanguagePack) -> list[str]:
    """Stem every word; tags are kept and fused tokens keep their marker."""
    out = []
    for word in words:
        if _is_tag(word):
            out.append(word)
            continue
        fused = pack.split_fused(word)
        if fused is not None:
            out.append(f"{fused[0]}_{pack.stem(fused[1])}")
        else:
            out.append(pack.stem(word))
    return out


def process_words(words: Sequence[str], params: LangParams, pack: LanguagePack) -> list[str]:
    """Word-level stage in its fixed order: negation, stopwords, stemming."""
    words = list(words)
    if params.neg:
        words = apply_negation(words, pack)
    words = handle_stopwords(words, params.sw, pack)
    if params.stem:
        words = stem_words(words, pack)
    return words
