"""Self-contained, versioned model files.

Layout (all integers little-endian)::

    magic          b"POLARITY-MODEL\\n"
    version        u32
    n_sections     u32
    n_sections x   name_len u8 | name | payload_len u64 | payload
    sha256         32 bytes over everything before it

Sections: ``header`` (canonical JSON: configuration, classes, C, metadata),
``pack`` (language pack text), ``emoticons`` (tsv), ``vocabulary`` (JSON
list of ``[term, df]``), ``weights`` and ``intercepts`` (float64).  Writing
is deterministic, so load followed by save reproduces the file byte for byte.
"""
from __future__ import annotations

import hashlib
import io
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..classify import LinearModel
from ..langpack import LanguagePack
from ..modelsel.space import TransformConfig
from ..pipeline import PolarityModel
from ..textproc import EmoticonMap
from ..vectorize import Vocabulary

__all__ = [
    "FORMAT_VERSION",
    "ModelFileError",
    "CorruptModelError",
    "ModelVersionError",
    "ModelFile",
    "dumps",
    "loads",
    "save",
    "load",
]

MAGIC = b"POLARITY-MODEL\n"
FORMAT_VERSION = 1
_SECTIONS = ("header", "pack", "emoticons", "vocabulary", "weights", "intercepts")


class ModelFileError(ValueError):
    pass


class CorruptModelError(ModelFileError):
    pass


class ModelVersionError(ModelFileError):
    pass


@dataclass(eq=False)
class ModelFile:
    model: PolarityModel
    metadata: dict = field(default_factory=dict)  # seed, metric, score, ...


def _canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"),
                      allow_nan=False).encode("utf-8")


def dumps(mf: ModelFile) -> bytes:
    model = mf.model
    linear = model.linear
    vocab = model.vocabulary
    header = {
        "config": model.config.to_dict(),
        "language": model.pack.code,
        "classes": list(linear.classes),
        "C": linear.C,
        "dim": linear.dim,
        "n_docs": vocab.n_docs,
        "metadata": mf.metadata,
    }
    vocab_rows = [[t, int(df)] for t, df in zip(vocab.terms, vocab.doc_freqs)]
    sections = {
        "header": _canonical_json(header),
        "pack": model.pack.dumps().encode("utf-8"),
        "emoticons": model.emoticons.dumps().encode("utf-8"),
        "vocabulary": _canonical_json(vocab_rows),
        "weights": np.ascontiguousarray(linear.weights, dtype="<f8").tobytes(),
        "intercepts": np.ascontiguousarray(linear.intercepts, dtype="<f8").tobytes(),
    }
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<II", FORMAT_VERSION, len(sections)))
    for name in _SECTIONS:
        payload = sections[name]
        encoded = name.encode("ascii")
        buf.write(struct.pack("<B", len(encoded)) + encoded)
        buf.write(struct.pack("<Q", len(payload)))
        buf.write(payload)
    body = buf.getvalue()
    return body + hashlib.sha256(body).digest()


def _read_sections(data: bytes) -> dict:
    if not data.startswith(MAGIC):
        raise CorruptModelError("corrupt model: not a model file")
    if len(data) < len(MAGIC) + 8 + 32:
        raise CorruptModelError("corrupt model: truncated")
    body, digest = data[:-32], data[-32:]
    version, count = struct.unpack_from("<II", body, len(MAGIC))
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"model format version {version} is not supported (expected {FORMAT_VERSION})")
    if hashlib.sha256(body).digest() != digest:
        raise CorruptModelError("corrupt model: checksum mismatch")
    pos = len(MAGIC) + 8
    sections = {}
    try:
        for _ in range(count):
            (name_len,) = struct.unpack_from("<B", body, pos)
            pos += 1
            name = body[pos:pos + name_len].decode("ascii")
            pos += name_len
            (size,) = struct.unpack_from("<Q", body, pos)
            pos += 8
            if pos + size > len(body):
                raise CorruptModelError("corrupt model: section overruns the file")
            sections[name] = body[pos:pos + size]
            pos += size
    except (struct.error, UnicodeDecodeError) as exc:
        raise CorruptModelError(f"corrupt model: {exc}") from None
    if pos != len(body) or set(sections) != set(_SECTIONS):
        raise CorruptModelError("corrupt model: unexpected section layout")
    return sections


def loads(data: bytes) -> ModelFile:
    sections = _read_sections(data)
    try:
        header = json.loads(sections["header"])
        config = TransformConfig.from_dict(header["config"])
        pack = LanguagePack.loads(sections["pack"].decode("utf-8"), code=header["language"])
        emoticons = EmoticonMap.loads(sections["emoticons"].decode("utf-8"))
        rows = json.loads(sections["vocabulary"])
        vocab = Vocabulary({t: df for t, df in rows}, header["n_docs"])
        n_classes, dim = len(header["classes"]), header["dim"]
        weights = np.frombuffer(sections["weights"], dtype="<f8").astype(np.float64)
        intercepts = np.frombuffer(sections["intercepts"], dtype="<f8").astype(np.float64)
        if weights.size != n_classes * dim or len(vocab) != dim:
            raise CorruptModelError("corrupt model: weight shape does not match the vocabulary")
        linear = LinearModel(tuple(header["classes"]), weights.reshape(n_classes, dim), intercepts, header["C"])
    except ModelFileError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModelError(f"corrupt model: {exc}") from None
    model = PolarityModel(config, vocab, linear, pack, emoticons)
    return ModelFile(model, header.get("metadata", {}))


def save(mf: ModelFile, path: str | Path) -> None:
    Path(path).write_bytes(dumps(mf))


def load(path: str | Path) -> ModelFile:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ModelFileError(f"cannot read model {path}: {exc}") from None
    return loads(data)
