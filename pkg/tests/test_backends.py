"""The compiled and pure kernels must be indistinguishable."""

import random

import pytest

from avlrot import (
    DuplicateKeyError,
    KeyNotFoundError,
    Tree,
    available_backends,
    gen_expensive,
    serialize,
)
from conftest import BACKENDS

needs_both = pytest.mark.skipif(
    len(BACKENDS) < 2, reason="compiled kernel not built"
)


def test_compiled_kernel_is_available():
    # the build is expected to produce it; fail loudly if it vanished
    assert "compiled" in available_backends()


def test_backend_property_reports(backend):
    t = Tree(backend=backend)
    assert t.backend == backend
    t.insert(1)
    assert t.clone().backend == backend
    assert t.truncate().backend == backend


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        Tree(backend="gpu")


def test_frozen_goldens_per_backend(backend):
    t = Tree.from_keys([3, 2, 4, 1], backend=backend)
    assert serialize(t) == "(3;2 (2;1 (1;0 - -) -) (4;0 - -))"
    counters, trace = t.delete(4)
    assert counters.single_rotations == 1 and len(trace) == 1
    counters, trace = t.insert(4)
    assert counters.promotions == 2
    assert serialize(t) == "(2;2 (1;0 - -) (3;1 - (4;0 - -)))"
    with pytest.raises(DuplicateKeyError):
        t.insert(4)
    with pytest.raises(KeyNotFoundError):
        t.delete(99)


@needs_both
def test_lockstep_traces_and_shapes():
    rng = random.Random(20260815)
    a = Tree(backend="compiled")
    b = Tree(backend="pure")
    present = set()
    for step in range(20000):
        key = rng.randrange(0, 160)
        if key in present:
            ra = a.delete(key)
            rb = b.delete(key)
            present.discard(key)
        else:
            ra = a.insert(key)
            rb = b.insert(key)
            present.add(key)
        assert ra == rb, f"step {step}, key {key}"
        if step % 1000 == 0:
            assert a.structurally_equal(b)
            assert a.validate().ok
    assert a.structurally_equal(b)
    assert a.keys() == b.keys() == sorted(present)


@needs_both
def test_violation_reports_agree():
    texts = [
        "(3;5 (2;1 (1;0 - -) -) (4;0 - -))",
        "(1;1 - -)",
        "(1;-3 - -)",
        "(1;1 (2;0 - -) -)",
        "(3;2 (2;1 (1;0 - -) -) (4;0 - -))",
        "-",
    ]
    for text in texts:
        ra = Tree.from_text(text, backend="compiled", validate=False).validate()
        rb = Tree.from_text(text, backend="pure", validate=False).validate()
        assert ra == rb


@needs_both
def test_load_and_family_generation_agree():
    for k in (0, 2, 4, 6, 8):
        a = gen_expensive(k, backend="compiled")
        b = gen_expensive(k, backend="pure")
        assert a.structurally_equal(b)
        assert serialize(a) == serialize(b)


@needs_both
def test_load_rejects_malformed_arrays(backend):
    t = Tree(backend=backend)
    with pytest.raises(ValueError):
        t._k.load([1, 2], [0, 0], [1, 0], [-1, -1], 0)  # cycle
    with pytest.raises(ValueError):
        t._k.load([1, 2], [0, 0], [1, -1], [1, -1], 0)  # double parent
    with pytest.raises(ValueError):
        t._k.load([1, 2], [0, 0], [-1, -1], [-1, -1], 0)  # unreachable node
    with pytest.raises(ValueError):
        t._k.load([1], [0], [5], [-1], 0)  # child out of range
    with pytest.raises(ValueError):
        t._k.load([1], [0], [-1], [-1], 3)  # root out of range