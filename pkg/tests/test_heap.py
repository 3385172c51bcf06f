import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eikonal_hybrid import IndexedMinHeap


def test_pop_order_and_ties():
    h = IndexedMinHeap(5)
    for item, key in [(4, 1.0), (1, 1.0), (3, 0.5), (0, 2.0)]:
        h.push(item, key)
    h.decrease_key(0, 1.0)
    assert [h.pop() for _ in range(4)] == [(3, 0.5), (0, 1.0), (1, 1.0), (4, 1.0)]
    assert len(h) == 0


def test_misuse():
    h = IndexedMinHeap(3)
    h.push(1, 1.0)
    with pytest.raises(KeyError):
        h.push(1, 0.0)
    with pytest.raises(KeyError):
        h.decrease_key(2, 0.0)
    with pytest.raises(ValueError):
        h.decrease_key(1, 5.0)
    h.pop()
    with pytest.raises(IndexError):
        h.pop()


def test_randomized_stress():
    rng = np.random.default_rng(11)
    cap = 200
    h = IndexedMinHeap(cap)
    shadow = {}
    popped = []
    for _ in range(5000):
        op = rng.integers(3)
        if op == 0:
            item = int(rng.integers(cap))
            if item not in shadow and item not in h:
                key = float(rng.integers(50))  # many ties
                h.push(item, key)
                shadow[item] = key
        elif op == 1 and shadow:
            item = list(shadow)[rng.integers(len(shadow))]
            key = shadow[item] - float(rng.integers(5))
            h.decrease_key(item, key)
            shadow[item] = key
        elif shadow:
            item, key = h.pop()
            expect = min(shadow.items(), key=lambda kv: (kv[1], kv[0]))
            assert (item, key) == expect
            del shadow[item]
            popped.append(item)
        h.validate()
    assert len(h) == len(shadow)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=60))
def test_heap_sorts(keys):
    h = IndexedMinHeap(len(keys))
    for i, k in enumerate(keys):
        h.push(i, k)
    out = [h.pop() for _ in keys]
    assert out == sorted(((i, k) for i, k in enumerate(keys)), key=lambda t: (t[1], t[0]))


def test_docstring_example():
    import doctest

    from eikonal_hybrid import heap

    assert doctest.testmod(heap).failed == 0
