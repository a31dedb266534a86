import os

from hypothesis import HealthCheck, assume, settings, strategies as st

from iwagraph.multigraph import build_multigraph
from iwagraph.voltage import VoltageAssignment, tower_is_connected

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def connected_multigraphs(draw, max_n=5, max_extra=4, loops=True):
    """A random spanning tree plus a few extra edges (possibly parallel or loops)."""
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(2, n + 1):
        u = draw(st.integers(1, v - 1))
        edges.append((u, v) if draw(st.booleans()) else (v, u))
    for _ in range(draw(st.integers(0, max_extra))):
        t = draw(st.integers(1, n))
        h = draw(st.integers(1, n))
        if t == h and not loops:
            continue
        edges.append((t, h))
    order = draw(st.permutations(range(len(edges))))
    return build_multigraph(n, [edges[i] for i in order])


@st.composite
def towers(draw, primes=(2, 3), l=1, max_n=4, max_extra=3, connected=True, loops=True):
    """(graph, assignment) with small integer voltages; optionally a connected tower."""
    p = draw(st.sampled_from(primes))
    G = draw(connected_multigraphs(max_n=max_n, max_extra=max_extra, loops=loops))
    if connected and G.edge_count - G.vertex_count + 1 < l:
        extra = [(e.tail, e.head) for e in G.edges]
        for i in range(l):
            extra.append((1, 1) if G.vertex_count == 1 else (1, 2))
        G = build_multigraph(G.vertex_count, extra)
    volts = [tuple(draw(st.integers(-3, 3)) for _ in range(l)) for _ in G.edges]
    a = VoltageAssignment.build(p, l, volts)
    if connected:
        assume(bool(tower_is_connected(G, a)))
    return G, a


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, passed: bool, detail: str) -> str:
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'} | {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
