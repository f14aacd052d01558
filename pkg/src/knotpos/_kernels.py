"""Integer kernels shared by the braid and diagram modules.

Every kernel exists twice: a numba-compiled version and a plain numpy
version. The compiled path is used when numba imports and the
``KNOTPOS_NUMBA`` environment variable is not ``"0"``. Both paths return
identical arrays; tests exercise each explicitly via :func:`get`.
"""
from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None


def _track(n, letters):
    # pos[p] is the strand (labelled by its starting position) currently at p
    k = letters.shape[0]
    pos = np.arange(n, dtype=np.int64)
    pairs = np.empty((k, 2), dtype=np.int64)
    for t in range(k):
        i = abs(letters[t]) - 1
        a = pos[i]
        b = pos[i + 1]
        pairs[t, 0] = a
        pairs[t, 1] = b
        pos[i] = b
        pos[i + 1] = a
    final = np.empty(n, dtype=np.int64)
    for p in range(n):
        final[pos[p]] = p
    return pairs, final


def _restrict(n, letters, keep):
    # zero marks a dropped letter; kept letters are renumbered in place
    k = letters.shape[0]
    pos = np.arange(n, dtype=np.int64)
    out = np.zeros(k, dtype=np.int64)
    for t in range(k):
        j = letters[t]
        i = abs(j) - 1
        a = pos[i]
        b = pos[i + 1]
        if keep[a] and keep[b]:
            idx = 0
            for p in range(i + 1):
                if keep[pos[p]]:
                    idx += 1
            out[t] = idx if j > 0 else -idx
        pos[i] = b
        pos[i + 1] = a
    return out


def _pair_counts_loop(comp_a, comp_b, signs, m):
    # counts[p, q, 0] positive, counts[p, q, 1] negative; symmetric in p, q
    counts = np.zeros((m, m, 2), dtype=np.int64)
    for t in range(signs.shape[0]):
        p = comp_a[t]
        q = comp_b[t]
        s = 0 if signs[t] > 0 else 1
        counts[p, q, s] += 1
        if p != q:
            counts[q, p, s] += 1
    return counts


def _pair_counts_numpy(comp_a, comp_b, signs, m):
    counts = np.zeros((m, m, 2), dtype=np.int64)
    s = (signs < 0).astype(np.int64)
    np.add.at(counts, (comp_a, comp_b, s), 1)
    off = comp_a != comp_b
    np.add.at(counts, (comp_b[off], comp_a[off], s[off]), 1)
    return counts


def _count_classes(nv, eu, ev):
    parent = np.arange(nv, dtype=np.int64)
    classes = nv
    for t in range(eu.shape[0]):
        a = eu[t]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = ev[t]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
            classes -= 1
    return classes


def _cycle_labels(succ):
    n = succ.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    count = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        x = s
        while labels[x] < 0:
            labels[x] = count
            x = succ[x]
        count += 1
    return labels, count


_PY = SimpleNamespace(
    name="numpy",
    track=_track,
    restrict=_restrict,
    pair_counts=_pair_counts_numpy,
    count_classes=_count_classes,
    cycle_labels=_cycle_labels,
)

if numba is not None:
    _jit = numba.njit(cache=True, nogil=True)
    _NB = SimpleNamespace(
        name="numba",
        track=_jit(_track),
        restrict=_jit(_restrict),
        pair_counts=_jit(_pair_counts_loop),
        count_classes=_jit(_count_classes),
        cycle_labels=_jit(_cycle_labels),
    )
else:  # pragma: no cover
    _NB = None


def numba_enabled() -> bool:
    return _NB is not None and os.environ.get("KNOTPOS_NUMBA", "1") != "0"


def get(backend: str | None = None) -> SimpleNamespace:
    """Return the kernel namespace for ``backend`` ("numba", "numpy" or None)."""
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if backend == "numba":
        if _NB is None:
            raise RuntimeError("numba is not available")
        return _NB
    if backend == "numpy":
        return _PY
    raise ValueError(f"unknown kernel backend {backend!r}")


_ACTIVE: SimpleNamespace | None = None


def active() -> SimpleNamespace:
    global _ACTIVE
    if _ACTIVE is None:
        _ACTIVE = get()
    return _ACTIVE


def set_backend(backend: str | None) -> None:
    """Switch the process-wide backend (None re-reads the environment)."""
    global _ACTIVE
    _ACTIVE = get(backend)


def warm_up() -> None:
    """Trigger compilation of every numba kernel on tiny inputs."""
    k = active()
    letters = np.array([1, -1], dtype=np.int64)
    k.track(2, letters)
    k.restrict(2, letters, np.ones(2, dtype=np.bool_))
    z = np.zeros(1, dtype=np.int64)
    k.pair_counts(z, z, np.ones(1, dtype=np.int64), 1)
    k.count_classes(2, z, np.ones(1, dtype=np.int64))
    k.cycle_labels(z)
