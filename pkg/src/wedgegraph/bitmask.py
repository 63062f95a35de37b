"""Dense bitmask over a fixed universe of integer ids.

Backed by an array of uint64 words so the same buffer can be handed to the
compiled kernels, which set bits with atomic fetch-or.
"""

from __future__ import annotations

import numpy as np

_ONE = np.uint64(1)
_SIX3 = np.uint64(63)


def word_count(size: int) -> int:
    return (size + 63) >> 6


def bit_indices(words: np.ndarray, size: int) -> np.ndarray:
    """Ascending positions of all set bits below ``size``."""
    if size == 0:
        return np.empty(0, dtype=np.int64)
    flat = np.unpackbits(words.view(np.uint8), bitorder="little")[:size]
    return np.nonzero(flat)[0].astype(np.int64)


def set_bits(words: np.ndarray, ids: np.ndarray) -> None:
    """Set the given bit positions (duplicates allowed)."""
    if len(ids) == 0:
        return
    ids = np.asarray(ids, dtype=np.uint64)
    np.bitwise_or.at(words, (ids >> np.uint64(6)).astype(np.int64), _ONE << (ids & _SIX3))


class Bitmask:
    __slots__ = ("size", "words")

    def __init__(self, size: int, words: np.ndarray | None = None):
        self.size = int(size)
        if words is None:
            words = np.zeros(word_count(self.size), dtype=np.uint64)
        elif words.shape != (word_count(self.size),) or words.dtype != np.uint64:
            raise ValueError("words buffer does not match bitmask size")
        self.words = words

    @classmethod
    def from_indices(cls, size: int, ids) -> "Bitmask":
        mask = cls(size)
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= size):
            raise IndexError("bit position out of range")
        set_bits(mask.words, ids)
        return mask

    def test(self, i: int) -> bool:
        if not 0 <= i < self.size:
            raise IndexError(f"bit {i} out of range for size {self.size}")
        return bool((self.words[i >> 6] >> np.uint64(i & 63)) & _ONE)

    def set(self, i: int) -> bool:
        """Set bit ``i``; returns True iff it was newly set."""
        if not 0 <= i < self.size:
            raise IndexError(f"bit {i} out of range for size {self.size}")
        w, b = i >> 6, _ONE << np.uint64(i & 63)
        was = bool(self.words[w] & b)
        self.words[w] |= b
        return not was

    def count(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def indices(self) -> np.ndarray:
        return bit_indices(self.words, self.size)

    def copy(self) -> "Bitmask":
        return Bitmask(self.size, self.words.copy())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bitmask):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        return f"Bitmask(size={self.size}, set={self.count()})"
