"""Indexed binary min-heap over integer items with externally stored keys.

Keys live in a caller-owned float array (node values for Fast Marching,
cell values for the heap-cell methods), so a decrease-key is "write the
new key, then sift up". Equal keys are ordered by the smaller item index.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _less(keys, a, b):
    ka = keys[a]
    kb = keys[b]
    return ka < kb or (ka == kb and a < b)


@njit(cache=True)
def _sift_up(heap, pos, keys, slot):
    item = heap[slot]
    while slot > 0:
        parent = (slot - 1) >> 1
        other = heap[parent]
        if not _less(keys, item, other):
            break
        heap[slot] = other
        pos[other] = slot
        slot = parent
    heap[slot] = item
    pos[item] = slot


@njit(cache=True)
def _sift_down(heap, pos, keys, size, slot):
    item = heap[slot]
    while True:
        child = 2 * slot + 1
        if child >= size:
            break
        right = child + 1
        if right < size and _less(keys, heap[right], heap[child]):
            child = right
        other = heap[child]
        if not _less(keys, other, item):
            break
        heap[slot] = other
        pos[other] = slot
        slot = child
    heap[slot] = item
    pos[item] = slot


@njit(cache=True)
def heap_push(heap, pos, keys, size, item):
    """Insert ``item`` (its key already in ``keys``); returns the new size."""
    heap[size] = item
    pos[item] = size
    _sift_up(heap, pos, keys, size)
    return size + 1


@njit(cache=True)
def heap_decrease(heap, pos, keys, item):
    """Restore order after ``keys[item]`` was lowered."""
    _sift_up(heap, pos, keys, pos[item])


@njit(cache=True)
def heap_pop(heap, pos, keys, size):
    """Remove the minimum; returns ``(item, new_size)``."""
    top = heap[0]
    pos[top] = -1
    size -= 1
    if size > 0:
        last = heap[size]
        heap[0] = last
        pos[last] = 0
        _sift_down(heap, pos, keys, size, 0)
    return top, size


class IndexedMinHeap:
    """Min-heap over items ``0..capacity-1`` supporting decrease-key.

    >>> h = IndexedMinHeap(4)
    >>> h.push(2, 1.5); h.push(0, 0.5); h.push(3, 0.5)
    >>> h.pop()
    (0, 0.5)
    """

    def __init__(self, capacity: int, keys: np.ndarray | None = None):
        self.keys = np.full(capacity, np.inf) if keys is None else keys
        self.heap = np.zeros(capacity, dtype=np.int64)
        self.pos = np.full(capacity, -1, dtype=np.int64)
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def __contains__(self, item: int) -> bool:
        return self.pos[item] >= 0

    def push(self, item: int, key: float) -> None:
        if item in self:
            raise KeyError(f"item {item} already in heap")
        self.keys[item] = key
        self.size = heap_push(self.heap, self.pos, self.keys, self.size, item)

    def decrease_key(self, item: int, key: float) -> None:
        if item not in self:
            raise KeyError(f"item {item} not in heap")
        if key > self.keys[item]:
            raise ValueError("decrease_key cannot increase a key")
        self.keys[item] = key
        heap_decrease(self.heap, self.pos, self.keys, item)

    def pop(self) -> tuple[int, float]:
        if self.size == 0:
            raise IndexError("pop from empty heap")
        item, self.size = heap_pop(self.heap, self.pos, self.keys, self.size)
        return int(item), float(self.keys[item])

    def validate(self) -> None:
        """Raise AssertionError if the heap property or back-pointers are broken."""
        for slot in range(self.size):
            item = self.heap[slot]
            assert self.pos[item] == slot, f"back-pointer of {item} is stale"
            if slot:
                parent = self.heap[(slot - 1) // 2]
                kp, ki = self.keys[parent], self.keys[item]
                assert kp < ki or (kp == ki and parent < item), "heap order violated"
        live = set(self.heap[: self.size].tolist())
        assert all((p >= 0) == (i in live) for i, p in enumerate(self.pos)), "orphan back-pointer"
