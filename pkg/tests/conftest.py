from __future__ import annotations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hassepareto.hasse import Instance

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def instances(draw, min_n: int = 1, max_n: int = 6) -> Instance:
    """Random partial orders given by pairs ``i >= j`` (cycles allowed)."""
    n = draw(st.integers(min_n, max_n))
    idx = st.integers(1, n)
    pairs = draw(st.lists(st.tuples(idx, idx).filter(lambda p: p[0] != p[1]), max_size=2 * n))
    mx = draw(st.sets(idx))
    return Instance(n, tuple(sorted(mx)), tuple(sorted(set(pairs))))


@st.composite
def dag_instances(draw, min_n: int = 1, max_n: int = 6) -> Instance:
    """Acyclic variant: pairs follow a drawn permutation."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(1, n + 1)))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] < p[1]),
            max_size=2 * n,
        )
    )
    mx = draw(st.sets(st.integers(1, n)))
    cons = sorted({(perm[a], perm[b]) for a, b in pairs})
    return Instance(n, tuple(sorted(mx)), tuple(cons))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[num])
