"""Character-level, language-agnostic text transformations.

Every function here is pure.  :func:`normalize` composes the individual
passes in a fixed order::

    url -> usr -> emo -> num -> del-diac -> del-d1 -> lc -> del-punc

Entity handling either removes a match, replaces it with a literal tag
(``_url``, ``_usr``, ``_num``, ``_pos``, ``_neg``, ``_neu``) or leaves it.
"""
from __future__ import annotations

import enum
import re
import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

__all__ = [
    "EntityAction",
    "CrossLangParams",
    "EmoticonMap",
    "ResourceError",
    "remove_diacritics",
    "collapse_repeats",
    "lowercase",
    "remove_punctuation",
    "map_emoticons",
    "handle_entity",
    "normalize",
    "load_emoticons",
    "default_emoticons",
    "ENTITY_TAGS",
    "EMOTICON_TAGS",
]


class ResourceError(ValueError):
    """A data file (emoticon map, language pack) is malformed."""


class EntityAction(str, enum.Enum):
    REMOVE = "remove"
    GROUP = "group"
    NONE = "none"

    def __str__(self) -> str:
        return self.value


ENTITY_TAGS = {"url": "_url", "usr": "_usr", "num": "_num"}
EMOTICON_TAGS = {"pos": "_pos", "neg": "_neg", "neu": "_neu"}

_URL_RE = re.compile(r"(?:https?|ftp)://\S+", re.IGNORECASE)
_USR_RE = re.compile(r"(?<!\w)@\w+")
_NUM_RE = re.compile(r"(?:(?<!\w)[-+])?\d+(?:\.\d+)?")
_ENTITY_RE = {"url": _URL_RE, "usr": _USR_RE, "num": _NUM_RE}

_REPEAT_RE = re.compile(r"(.)\1+", re.DOTALL)
_SPACE_RE = re.compile(r"\s+")

# Upper bound on re-running the pass sequence; real inputs settle in 2-3.
_MAX_ROUNDS = 16


@dataclass(frozen=True)
class CrossLangParams:
    del_d1: bool = False
    del_diac: bool = False
    lc: bool = False
    emo: EntityAction = EntityAction.NONE
    num: EntityAction = EntityAction.NONE
    url: EntityAction = EntityAction.NONE
    usr: EntityAction = EntityAction.NONE
    del_punc: bool = False

    def __post_init__(self):
        for name in ("emo", "num", "url", "usr"):
            object.__setattr__(self, name, EntityAction(getattr(self, name)))
        for name in ("del_d1", "del_diac", "lc", "del_punc"):
            if not isinstance(getattr(self, name), bool):
                raise TypeError(f"{name} must be a bool")


def _boundary_pattern(pattern: str) -> str:
    # Emoticons that start/end with a word character must not touch other
    # word characters, so "xD" is not found inside "boxDrive".
    body = re.escape(pattern)
    if re.match(r"\w", pattern[0]):
        body = r"(?<!\w)" + body
    if re.match(r"\w", pattern[-1]):
        body = body + r"(?!\w)"
    return body


class EmoticonMap:
    """Emoticon pattern -> polarity class (``pos``, ``neg`` or ``neu``)."""

    def __init__(self, mapping: Mapping[str, str]):
        table = {}
        for pattern, klass in mapping.items():
            if not pattern:
                raise ResourceError("emoticon patterns must be non-empty")
            if klass not in EMOTICON_TAGS:
                raise ResourceError(f"unknown emoticon class {klass!r} for {pattern!r}")
            table[pattern] = klass
        self._table = dict(sorted(table.items()))
        if table:
            # Longest first: the regex engine takes the first alternative
            # that matches at a position, which then is the longest one.
            ordered = sorted(table, key=lambda p: (-len(p), p))
            self._regex = re.compile("|".join(_boundary_pattern(p) for p in ordered))
        else:
            self._regex = None

    def __len__(self) -> int:
        return len(self._table)

    def __contains__(self, pattern: object) -> bool:
        return pattern in self._table

    def __getitem__(self, pattern: str) -> str:
        return self._table[pattern]

    def items(self):
        return self._table.items()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EmoticonMap) and self._table == other._table

    def __hash__(self):
        return hash(tuple(self._table.items()))

    @property
    def regex(self) -> re.Pattern | None:
        return self._regex

    def dumps(self) -> str:
        return "".join(f"{p}\t{k}\n" for p, k in self._table.items())

    @classmethod
    def loads(cls, text: str) -> "EmoticonMap":
        mapping = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ResourceError(f"line {lineno}: expected '<pattern>\\t<pos|neg|neu>'")
            pattern, klass = parts[0], parts[1].strip()
            if pattern in mapping and mapping[pattern] != klass:
                raise ResourceError(f"line {lineno}: {pattern!r} mapped twice")
            mapping[pattern] = klass
        return cls(mapping)


def load_emoticons(path: str | Path | None = None) -> EmoticonMap:
    """Read an emoticon map file; ``None`` loads the bundled inventory."""
    if path is None:
        text = resources.files("polarity").joinpath("data/emoticons.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return EmoticonMap.loads(text)


_DEFAULT_EMOTICONS: EmoticonMap | None = None


def default_emoticons() -> EmoticonMap:
    global _DEFAULT_EMOTICONS
    if _DEFAULT_EMOTICONS is None:
        _DEFAULT_EMOTICONS = load_emoticons()
    return _DEFAULT_EMOTICONS


def remove_diacritics(text: str) -> str:
    """Strip combining marks attached to letters ("jamás" -> "jamas")."""
    out = []
    base_is_letter = False
    for ch in unicodedata.normalize("NFD", text):
        if unicodedata.combining(ch):
            if base_is_letter:
                continue
        else:
            base_is_letter = unicodedata.category(ch).startswith("L")
        out.append(ch)
    return unicodedata.normalize("NFC", "".join(out))


def collapse_repeats(text: str) -> str:
    """Replace every run of identical characters by a single one."""
    return _REPEAT_RE.sub(r"\1", text)


def lowercase(text: str) -> str:
    return text.lower()


def remove_punctuation(text: str) -> str:
    # '_' is kept: it is the tag prefix.
    return "".join(
        " " if ch != "_" and unicodedata.category(ch).startswith("P") else ch
        for ch in text
    )


def _replacement(action: EntityAction, tag: str, pad: bool) -> str:
    if action is EntityAction.GROUP:
        return f" {tag} " if pad else tag
    return " " if pad else ""


def map_emoticons(
    text: str,
    action: EntityAction | str,
    emoticons: EmoticonMap | None = None,
    *,
    pad: bool = False,
) -> str:
    """Remove or tag emoticons, scanning left to right with longest match.

    Text inside URLs is never treated as an emoticon.  With ``pad=True`` the
    replacement is surrounded by spaces so tags never fuse with neighbours.
    """
    action = EntityAction(action)
    if action is EntityAction.NONE:
        return text
    emoticons = default_emoticons() if emoticons is None else emoticons
    if emoticons.regex is None:
        return text

    def repl(m: re.Match) -> str:
        return _replacement(action, EMOTICON_TAGS[emoticons[m.group(0)]], pad)

    pieces = []
    last = 0
    for url in _URL_RE.finditer(text):
        pieces.append(emoticons.regex.sub(repl, text[last:url.start()]))
        pieces.append(url.group(0))
        last = url.end()
    pieces.append(emoticons.regex.sub(repl, text[last:]))
    return "".join(pieces)


def handle_entity(text: str, kind: str, action: EntityAction | str, *, pad: bool = False) -> str:
    """Remove, tag or keep URLs (``url``), @-handles (``usr``) or numbers (``num``)."""
    action = EntityAction(action)
    try:
        regex = _ENTITY_RE[kind]
    except KeyError:
        raise ValueError(f"unknown entity kind {kind!r}") from None
    if action is EntityAction.NONE:
        return text
    return regex.sub(_replacement(action, ENTITY_TAGS[kind], pad), text)


def _one_round(text: str, params: CrossLangParams, emoticons: EmoticonMap) -> str:
    text = handle_entity(text, "url", params.url, pad=True)
    text = handle_entity(text, "usr", params.usr, pad=True)
    text = map_emoticons(text, params.emo, emoticons, pad=True)
    text = handle_entity(text, "num", params.num, pad=True)
    if params.del_diac:
        text = remove_diacritics(text)
    if params.del_d1:
        text = collapse_repeats(text)
    if params.lc:
        text = lowercase(text)
    if params.del_punc:
        text = remove_punctuation(text)
    return _SPACE_RE.sub(" ", text).strip()


def normalize(
    text: str,
    params: CrossLangParams,
    emoticons: EmoticonMap | None = None,
) -> str:
    """Apply the enabled passes in their fixed order and tidy whitespace.

    The pass sequence is repeated until the text stops changing.  A later
    pass can expose a match for an earlier one (collapsing ``":--)"`` yields
    the emoticon ``":-)"``, lowercasing ``"Aa"`` yields a collapsible run),
    and repeating makes the result a fixed point, so normalizing twice is the
    same as normalizing once.
    """
    emoticons = default_emoticons() if emoticons is None else emoticons
    current = _one_round(text, params, emoticons)
    for _ in range(_MAX_ROUNDS):
        nxt = _one_round(current, params, emoticons)
        if nxt == current:
            return current
        current = nxt
    raise RuntimeError(f"normalization did not settle for {text!r}")
