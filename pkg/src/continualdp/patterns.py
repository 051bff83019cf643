"""Continual counting of substrings and of minimal episode occurrences.

Both mechanisms watch a letter stream and maintain one counter channel per
query pattern (all strings over the alphabet of length 1..max_len, ordered
by length then alphabet order).  The substring mechanism marks, at each
step, every query that equals a suffix of the stream read so far, which is
exactly one query per suffix length.  The episode mechanism marks a query
when a minimal occurrence of it (a subsequence match whose window contains
no shorter match window) ends at the current position; at most one minimal
occurrence of a pattern can end at any position, namely the one whose start
is latest.
"""
from __future__ import annotations

import math
from dataclasses import replace

import numpy as np

from .mechanisms import CounterState
from .privacy import NoisePlan, gaussian_constant

__all__ = [
    "EpisodeCounterState",
    "SubstringCounterState",
    "episode_error_bound",
    "pattern_queries",
    "substring_error_bound",
]

_MAX_CHANNELS = 4096


def pattern_queries(alphabet: str, max_len: int) -> list[str]:
    """All strings over ``alphabet`` of length 1..max_len, by length then order."""
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    if len(set(alphabet)) != len(alphabet) or not alphabet:
        raise ValueError(f"alphabet must be nonempty without repeats, got {alphabet!r}")
    queries: list[str] = []
    level = [""]
    for _ in range(max_len):
        level = [q + a for q in level for a in alphabet]
        queries.extend(level)
    return queries


def substring_error_bound(budget, t: int, T: int, alphabet_size: int, max_len: int) -> float:
    """Per-step bound C (1 + ln(t)/pi) l sqrt(ln(6 T |U|^l))."""
    return (
        gaussian_constant(budget)
        * (1.0 + math.log(t) / math.pi)
        * max_len
        * math.sqrt(math.log(6.0 * T * alphabet_size**max_len))
    )


def episode_error_bound(budget, t: int, T: int, alphabet_size: int, max_len: int) -> float:
    """Per-step bound 2 C (1 + ln(t)/pi) l sqrt(|U|^(l-1) l ln(6 T |U|^l))."""
    return (
        2.0
        * gaussian_constant(budget)
        * (1.0 + math.log(t) / math.pi)
        * max_len
        * math.sqrt(alphabet_size ** (max_len - 1) * max_len * math.log(6.0 * T * alphabet_size**max_len))
    )


class _PatternBank:
    """Shared plumbing: one counter channel per query string."""

    def __init__(self, plan: NoisePlan, alphabet: str, max_len: int, sensitivity: float):
        self.alphabet = alphabet
        self.max_len = max_len
        self.queries = pattern_queries(alphabet, max_len)
        if len(self.queries) > _MAX_CHANNELS:
            raise ValueError(f"{len(self.queries)} query channels exceed the {_MAX_CHANNELS} cap")
        self.plan = replace(plan, sensitivity=sensitivity)
        self.t = 0
        self.true_counts = np.zeros(len(self.queries))
        self._channels = [CounterState(self.plan, channel=c) for c in range(len(self.queries))]
        self._query_index = {q: c for c, q in enumerate(self.queries)}

    def push(self, hits: set[str]) -> np.ndarray:
        self.t += 1
        bits = np.zeros(len(self.queries))
        for q in hits:
            bits[self._query_index[q]] = 1.0
        self.true_counts += bits
        return np.array([ch.step(bits[c]) for c, ch in enumerate(self._channels)])


class SubstringCounterState:
    """Noisy counts of every substring of length <= max_len, updated per letter."""

    def __init__(self, plan: NoisePlan, alphabet: str, max_len: int):
        self._bank = _PatternBank(plan, alphabet, max_len, sensitivity=float(max_len))
        self._suffix = ""

    def step(self, letter: str) -> np.ndarray:
        """Ingest one letter and release all query counts."""
        if letter not in self._bank.alphabet:
            raise ValueError(f"letter {letter!r} outside alphabet {self._bank.alphabet!r}")
        self._suffix = (self._suffix + letter)[-self._bank.max_len :]
        hits = {self._suffix[-n:] for n in range(1, len(self._suffix) + 1)}
        return self._bank.push(hits)

    @property
    def queries(self) -> list[str]:
        return self._bank.queries

    @property
    def t(self) -> int:
        return self._bank.t

    @property
    def true_counts(self) -> np.ndarray:
        return self._bank.true_counts


def _latest_occurrence_start(stream: str, pattern: str) -> int | None:
    """Start of the latest subsequence match of ``pattern`` ending exactly at
    the last position of ``stream``, or None."""
    if not stream or stream[-1] != pattern[-1]:
        return None
    pos = len(stream) - 1
    for symbol in reversed(pattern[:-1]):
        pos = stream.rfind(symbol, 0, pos)
        if pos < 0:
            return None
    return pos


def _occurs(stream: str, pattern: str) -> bool:
    it = iter(stream)
    return all(symbol in it for symbol in pattern)


class EpisodeCounterState:
    """Noisy counts of minimal occurrences per episode of length <= max_len.

    ``report`` applies the support threshold to the released counts only;
    noise calibration never depends on it.
    """

    def __init__(self, plan: NoisePlan, alphabet: str, max_len: int, support_threshold: float = 1.0):
        sens = 2.0 * math.sqrt(len(alphabet) ** (max_len - 1) * max_len)
        self._bank = _PatternBank(plan, alphabet, max_len, sensitivity=sens)
        self.support_threshold = support_threshold
        self._stream = ""
        self._last_release: np.ndarray | None = None

    def step(self, letter: str) -> np.ndarray:
        """Ingest one letter and release all episode counts."""
        if letter not in self._bank.alphabet:
            raise ValueError(f"letter {letter!r} outside alphabet {self._bank.alphabet!r}")
        self._stream += letter
        hits = {q for q in self._bank.queries if q[-1] == letter and self._minimal_ends_now(q)}
        self._last_release = self._bank.push(hits)
        return self._last_release

    def _minimal_ends_now(self, pattern: str) -> bool:
        # the latest-start match ending here is minimal exactly when no full
        # match fits strictly inside its window
        start = _latest_occurrence_start(self._stream, pattern)
        if start is None:
            return False
        return not _occurs(self._stream[start:-1], pattern)

    def report(self) -> dict[str, float]:
        """Episodes whose current noisy count reaches the support threshold."""
        if self._last_release is None:
            return {}
        return {
            q: float(c)
            for q, c in zip(self._bank.queries, self._last_release)
            if c >= self.support_threshold
        }

    @property
    def queries(self) -> list[str]:
        return self._bank.queries

    @property
    def t(self) -> int:
        return self._bank.t

    @property
    def true_counts(self) -> np.ndarray:
        return self._bank.true_counts
