import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from knotpos import _kernels

NB, PY = _kernels.get("numba"), _kernels.get("numpy")


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


@st.composite
def words(draw, max_n=10, max_len=60):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(0, max_len))
    gens = draw(hnp.arrays(np.int64, k, elements=st.integers(1, n - 1)))
    signs = draw(hnp.arrays(np.int64, k, elements=st.sampled_from([-1, 1])))
    return n, gens * signs


@given(words())
def test_track_agrees(w):
    n, letters = w
    assert same(NB.track(n, letters), PY.track(n, letters))


@given(words(), st.data())
def test_restrict_agrees(w, data):
    n, letters = w
    keep = data.draw(hnp.arrays(np.bool_, n))
    assert same(NB.restrict(n, letters, keep), PY.restrict(n, letters, keep))


@given(st.data())
def test_pair_counts_agree(data):
    m = data.draw(st.integers(1, 6))
    k = data.draw(st.integers(0, 50))
    ca = data.draw(hnp.arrays(np.int64, k, elements=st.integers(0, m - 1)))
    cb = data.draw(hnp.arrays(np.int64, k, elements=st.integers(0, m - 1)))
    s = data.draw(hnp.arrays(np.int64, k, elements=st.sampled_from([-1, 1])))
    out = PY.pair_counts(ca, cb, s, m)
    assert same(NB.pair_counts(ca, cb, s, m), out)
    assert (out == out.transpose(1, 0, 2)).all()


@given(st.data())
def test_count_classes_agree(data):
    nv = data.draw(st.integers(1, 30))
    k = data.draw(st.integers(0, 40))
    eu = data.draw(hnp.arrays(np.int64, k, elements=st.integers(0, nv - 1)))
    ev = data.draw(hnp.arrays(np.int64, k, elements=st.integers(0, nv - 1)))
    got = NB.count_classes(nv, eu, ev)
    assert got == PY.count_classes(nv, eu, ev)
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(nv))
    g.add_edges_from(zip(eu.tolist(), ev.tolist()))
    assert got == nx.number_connected_components(g)


@given(st.permutations(list(range(12))))
def test_cycle_labels_agree(perm):
    succ = np.array(perm, dtype=np.int64)
    labels, count = NB.cycle_labels(succ)
    assert same((labels, count), PY.cycle_labels(succ))
    assert all(labels[i] == labels[succ[i]] for i in range(len(succ)))
    assert count == len(set(labels.tolist()))


def test_set_backend_round_trip():
    _kernels.set_backend("numpy")
    assert _kernels.active().name == "numpy"
    _kernels.set_backend(None)
    assert _kernels.active().name == ("numba" if _kernels.numba_enabled() else "numpy")


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.get("cuda")


def test_env_flag_selects_numpy():
    code = "from knotpos import _kernels; print(_kernels.active().name)"
    env = dict(os.environ, KNOTPOS_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
