"""The searchable configuration space and its neighbourhood structure."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Any, Iterator, Mapping

from ..langpack import LangParams
from ..textproc import CrossLangParams, EntityAction
from ..tokenizer import (
    ALL_TOKEN_TYPES,
    TokenType,
    format_token_types,
    mask_to_types,
    parse_token_types,
    types_to_mask,
)

__all__ = [
    "TransformConfig",
    "space_size",
    "tokenizer_space_size",
    "config_at",
    "iter_space",
    "sample_random",
    "neighbors",
    "tokenizer_neighbors",
    "BOOL_FIELDS",
    "ACTION_FIELDS",
]

_BOOL = (False, True)
_ACTIONS = (EntityAction.REMOVE, EntityAction.GROUP, EntityAction.NONE)

# Searched cross-language fields, in canonical order.  del-punc is not searched.
BOOL_FIELDS = ("del_d1", "del_diac", "lc")
ACTION_FIELDS = ("emo", "num", "url", "usr")
_CROSS_ORDER = ("del_d1", "del_diac", "emo", "num", "url", "usr", "lc")
_LANG_ORDER = ("stem", "neg", "sw")
_MENUS = {
    "del_d1": _BOOL, "del_diac": _BOOL, "lc": _BOOL,
    "emo": _ACTIONS, "num": _ACTIONS, "url": _ACTIONS, "usr": _ACTIONS,
    "stem": _BOOL, "neg": _BOOL, "sw": _ACTIONS,
}
_N_TYPE_SETS = (1 << len(ALL_TOKEN_TYPES)) - 1


def _key(name: str) -> str:
    return name.replace("_", "-")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    return str(value)


def _parse_bool(name: str, value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("yes", "true", "1", "on"):
        return True
    if text in ("no", "false", "0", "off"):
        return False
    raise ValueError(f"{_key(name)}: expected yes/no, got {value!r}")


@dataclass(frozen=True)
class TransformConfig:
    """One point of the search space: text passes, token types, language passes."""

    cross: CrossLangParams
    types: frozenset
    lang: LangParams | None = None

    def __post_init__(self):
        types = frozenset(TokenType(t) for t in self.types)
        if not types:
            raise ValueError("the token-type set must not be empty")
        object.__setattr__(self, "types", types)

    @property
    def fingerprint(self) -> str:
        parts = [f"{_key(f)}={_fmt(getattr(self.cross, f))}" for f in _CROSS_ORDER]
        parts.append(f"del-punc={_fmt(self.cross.del_punc)}")
        parts.append(f"tokenizer={format_token_types(self.types)}")
        if self.lang is not None:
            parts += [f"{f}={_fmt(getattr(self.lang, f))}" for f in _LANG_ORDER]
        return ";".join(parts)

    def __str__(self) -> str:
        return self.fingerprint

    @property
    def in_canonical_space(self) -> bool:
        return not self.cross.del_punc

    def to_dict(self) -> dict:
        """Plain mapping keyed by the parameter names (``del-d1``, ``tokenizer``...)."""
        out: dict[str, Any] = {}
        for f in _CROSS_ORDER:
            v = getattr(self.cross, f)
            out[_key(f)] = v if isinstance(v, bool) else v.value
        out["del-punc"] = self.cross.del_punc
        out["tokenizer"] = format_token_types(self.types).split("+")
        if self.lang is not None:
            out["stem"] = self.lang.stem
            out["neg"] = self.lang.neg
            out["sw"] = self.lang.sw.value
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TransformConfig":
        known = {_key(f) for f in _CROSS_ORDER} | {"del-punc", "tokenizer", *_LANG_ORDER}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        if "tokenizer" not in data:
            raise ValueError("missing parameter: tokenizer")
        cross = {}
        for f in (*_CROSS_ORDER, "del_punc"):
            if _key(f) in data:
                v = data[_key(f)]
                cross[f] = EntityAction(str(v).lower()) if f in ACTION_FIELDS else _parse_bool(f, v)
        lang = None
        if any(k in data for k in _LANG_ORDER):
            lang = LangParams(
                stem=_parse_bool("stem", data.get("stem", False)),
                neg=_parse_bool("neg", data.get("neg", False)),
                sw=EntityAction(str(data.get("sw", "none")).lower()),
            )
        return cls(CrossLangParams(**cross), parse_token_types(data["tokenizer"]), lang)


def tokenizer_space_size() -> int:
    return _N_TYPE_SETS


def _radices(include_lang: bool) -> list[int]:
    radices = [len(_MENUS[f]) for f in _CROSS_ORDER] + [_N_TYPE_SETS]
    if include_lang:
        radices += [len(_MENUS[f]) for f in _LANG_ORDER]
    return radices


def space_size(include_lang: bool = False) -> int:
    """Exact number of configurations in the searchable space."""
    size = 1
    for r in _radices(include_lang):
        size *= r
    return size


def config_at(index: int, include_lang: bool = False) -> TransformConfig:
    """Decode a mixed-radix index in ``[0, space_size)`` into a configuration."""
    if not 0 <= index < space_size(include_lang):
        raise IndexError(f"configuration index {index} out of range")
    digits = []
    for r in reversed(_radices(include_lang)):
        index, d = divmod(index, r)
        digits.append(d)
    digits.reverse()
    cross = {f: _MENUS[f][d] for f, d in zip(_CROSS_ORDER, digits)}
    types = mask_to_types(digits[len(_CROSS_ORDER)] + 1)
    lang = None
    if include_lang:
        rest = digits[len(_CROSS_ORDER) + 1:]
        lang = LangParams(**{f: _MENUS[f][d] for f, d in zip(_LANG_ORDER, rest)})
    return TransformConfig(CrossLangParams(**cross), types, lang)


def iter_space(include_lang: bool = False) -> Iterator[TransformConfig]:
    for i in range(space_size(include_lang)):
        yield config_at(i, include_lang)


def sample_random(n: int, include_lang: bool = False, seed: int = 0) -> list[TransformConfig]:
    """``n`` distinct configurations drawn uniformly without replacement.

    Drawing distinct indices is the same distribution as drawing every field
    uniformly and rejecting repeats, without the slowdown near exhaustion.
    """
    size = space_size(include_lang)
    if not 1 <= n <= size:
        raise ValueError(f"sample size must be in [1, {size}], got {n}")
    rng = random.Random(seed)
    return [config_at(i, include_lang) for i in rng.sample(range(size), n)]


def tokenizer_neighbors(types: frozenset, swap: bool = True) -> list[frozenset]:
    """Token-type sets ``s`` with ``|t | s|`` in {|t|, |t|+1} and ``|t & s|`` in {|t|, |t|-1}.

    These are the sets reachable by adding, removing or (with ``swap``)
    exchanging a single token type; the empty set is excluded.
    """
    t = frozenset(types)
    inside = [x for x in ALL_TOKEN_TYPES if x in t]
    outside = [x for x in ALL_TOKEN_TYPES if x not in t]
    out = [t | {x} for x in outside]
    if len(t) > 1:
        out += [t - {x} for x in inside]
    if swap:
        out += [(t - {x}) | {y} for x in inside for y in outside]
    return sorted(set(out), key=types_to_mask)


def neighbors(config: TransformConfig, swap: bool = True) -> list[TransformConfig]:
    """Configurations differing from ``config`` in exactly one searched parameter.

    Sorted by fingerprint, which fixes the evaluation order.
    """
    out = []
    for f in BOOL_FIELDS:
        out.append(replace(config, cross=replace(config.cross, **{f: not getattr(config.cross, f)})))
    for f in ACTION_FIELDS:
        current = getattr(config.cross, f)
        for value in _ACTIONS:
            if value is not current:
                out.append(replace(config, cross=replace(config.cross, **{f: value})))
    for s in tokenizer_neighbors(config.types, swap=swap):
        out.append(replace(config, types=s))
    if config.lang is not None:
        for f in ("stem", "neg"):
            out.append(replace(config, lang=replace(config.lang, **{f: not getattr(config.lang, f)})))
        for value in _ACTIONS:
            if value is not config.lang.sw:
                out.append(replace(config, lang=replace(config.lang, sw=value)))
    return sorted(out, key=lambda c: c.fingerprint)
