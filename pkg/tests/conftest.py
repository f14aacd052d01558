import logging

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from knotpos import _kernels
from knotpos.braid import BraidWord

# numba compiles on first use, which makes per-example deadlines meaningless
settings.register_profile("knotpos", deadline=None)
settings.load_profile("knotpos")


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(None)


@pytest.fixture
def quiet_knotpos():
    logger = logging.getLogger("knotpos")
    old = logger.level
    logger.setLevel(logging.ERROR)
    yield
    logger.setLevel(old)


@st.composite
def braids(draw, max_strands=8, max_length=40, min_strands=2, positive=False):
    n = draw(st.integers(min_strands, max_strands))
    gens = st.integers(1, n - 1)
    letter = gens if positive else st.builds(lambda g, s: g * s, gens, st.sampled_from([1, -1]))
    letters = draw(st.lists(letter, max_size=max_length))
    return BraidWord(n, tuple(letters))


def strand_components(b: BraidWord) -> list[int]:
    """Component index of each starting strand, found by walking the permutation."""
    n = b.strands
    pos = list(range(n))
    for j in b.letters:
        i = abs(j) - 1
        pos[i], pos[i + 1] = pos[i + 1], pos[i]
    final = [0] * n
    for p, s in enumerate(pos):
        final[s] = p
    seen = [False] * n
    cycles = []
    for s in range(n):
        if seen[s]:
            continue
        cyc = []
        x = s
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = final[x]
        cycles.append(cyc)
    cycles.sort(key=min)
    comp = [-1] * n
    for idx, cyc in enumerate(cycles):
        for s in cyc:
            comp[s] = idx
    return comp


def letter_components(b: BraidWord) -> list[tuple[int, int, int]]:
    """(component of left strand, component of right strand, sign) per letter."""
    comp = strand_components(b)
    pos = list(range(b.strands))
    out = []
    for j in b.letters:
        i = abs(j) - 1
        out.append((comp[pos[i]], comp[pos[i + 1]], 1 if j > 0 else -1))
        pos[i], pos[i + 1] = pos[i + 1], pos[i]
    return out


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                if outcome == "passed":
                    detail = props.get("detail", "")
                else:
                    detail = str(rep.longrepr.reprcrash.message).splitlines()[0] if rep.longrepr else ""
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", detail))
    if lines:
        terminalreporter.section("acceptance criteria")
        for n, status, detail in sorted(lines):
            terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
