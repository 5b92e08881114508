"""Word vectors: text-file loading, lookup, and a remote-endpoint client.

Static per-word vectors keep clustering and keyword suggestion deterministic
and offline. Users who want contextual embeddings can point the client at
any HTTP service speaking the documented JSON protocol.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import IO, Iterable, Union

import numpy as np
import requests

from .errors import (
    DimensionMismatch,
    DuplicateWordWarning,
    EmptyFile,
    ProtocolError,
    TransportError,
    ZeroVector,
)


@dataclass(frozen=True)
class VectorStore:
    dimension: int
    vectors: dict[str, np.ndarray]
    source: str = ""

    def __post_init__(self):
        if self.vectors and self.dimension <= 0:
            raise DimensionMismatch("a non-empty store needs a positive dimension")
        for word, vec in self.vectors.items():
            if len(vec) != self.dimension:
                raise DimensionMismatch(
                    f"vector for {word!r} has length {len(vec)}, expected {self.dimension}"
                )

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_vectors(source: Union[str, IO[str], Iterable[str]], name: str = "") -> VectorStore:
    """Parse the plain-text vector format: an optional ``N D`` header line,
    then ``word f1 ... fD`` rows. Words are lowercased; a duplicate keeps its
    first vector and warns."""
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [line.rstrip("\n") for line in source]

    vectors: dict[str, np.ndarray] = {}
    dimension = None
    start = 0
    for i, line in enumerate(lines):
        if line.strip():
            parts = line.split()
            if len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                dimension = int(parts[1])
                start = i + 1
            break

    for line_no, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        parts = line.split()
        word = parts[0].lower()
        values = parts[1:]
        if dimension is None:
            dimension = len(values)
        if len(values) != dimension:
            raise DimensionMismatch(
                f"line {line_no}: {len(values)} values, expected {dimension}"
            )
        try:
            vec = np.array([float(v) for v in values], dtype=float)
        except ValueError:
            raise DimensionMismatch(f"line {line_no}: non-numeric vector value") from None
        if word in vectors:
            warnings.warn(
                f"duplicate word {word!r} at line {line_no}, keeping first",
                DuplicateWordWarning,
                stacklevel=2,
            )
            continue
        vectors[word] = vec

    if not vectors:
        raise EmptyFile("vector file has no data rows")
    return VectorStore(dimension=dimension, vectors=vectors, source=name)


def load_vectors_path(path) -> VectorStore:
    with open(path, encoding="utf-8") as fh:
        return load_vectors(fh, name=str(path))


def embed_words(store: VectorStore, words: list[str]) -> tuple[np.ndarray, list[str]]:
    """Look up words in input order. Returns the in-vocabulary matrix and the
    out-of-vocabulary words; nothing is silently dropped, so row count plus
    OOV count always equals the input length."""
    rows = []
    oov = []
    for word in words:
        vec = store.vectors.get(word.lower())
        if vec is None:
            oov.append(word)
        else:
            rows.append(vec)
    if rows:
        matrix = np.stack(rows)
    else:
        matrix = np.empty((0, store.dimension), dtype=float)
    return matrix, oov


def cosine(a, b) -> float:
    """Cosine similarity, clamped into [-1, 1] against rounding spill."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector lengths differ: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def fetch_remote(endpoint: str, words: list[str], timeout: float = 30.0) -> VectorStore:
    """POST {"words": [...]} to the endpoint and build a store from the
    response {"dimension": int, "vectors": {word: [...]}}.

    An empty word list short-circuits to an empty store without a request.
    """
    if not words:
        return VectorStore(dimension=0, vectors={}, source=endpoint)
    try:
        response = requests.post(endpoint, json={"words": list(words)}, timeout=timeout)
    except requests.RequestException as exc:
        raise TransportError(str(exc)) from None
    if response.status_code != 200:
        raise TransportError(f"status {response.status_code}", status=response.status_code)
    try:
        body = response.json()
    except ValueError:
        raise ProtocolError("response body is not JSON") from None
    if not isinstance(body, dict) or "dimension" not in body or "vectors" not in body:
        raise ProtocolError('response must carry "dimension" and "vectors"')
    dimension = body["dimension"]
    if not isinstance(dimension, int) or dimension <= 0:
        raise ProtocolError(f"bad dimension {dimension!r}")
    vectors = {}
    for word, values in body["vectors"].items():
        if not isinstance(values, list) or len(values) != dimension:
            raise DimensionMismatch(
                f"vector for {word!r} has length {len(values) if isinstance(values, list) else '?'},"
                f" expected {dimension}"
            )
        vectors[word.lower()] = np.array([float(v) for v in values], dtype=float)
    return VectorStore(dimension=dimension, vectors=vectors, source=endpoint)
