import pytest

from ncwick import coalgebra as co
from ncwick import functionals as fn
from ncwick import partitions as parts
from ncwick import wick as wk
from ncwick.cli import main as cli_main

# test function name -> one-line criterion label, in acceptance order
CRITERIA = {
    "test_criterion_1_display_reproduction": "1 display reproduction (tensor and free Wick polynomials)",
    "test_criterion_2_partition_oracles": "2 moment-cumulant partition oracles (set/free/boolean/monotone, c-free)",
    "test_criterion_3_shuffle_axioms": "3 half-shuffle and unshuffle axioms",
    "test_criterion_4_exponential_coherence": "4 exponentials, inverses, adjoint action and BCH",
    "test_criterion_5_wick_identities": "5 Wick-map identity suite",
    "test_criterion_6_monotone_t": "6 monotone t-calculus",
    "test_criterion_7_classical_bridge": "7 Hermite coefficients and semicircular free cumulants",
    "test_criterion_8_cli_contract": "8 CLI round-trip, determinism and mutation detection",
}

_outcomes: dict[str, str] = {}
_notes: list[str] = []


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if name not in CRITERIA:
        return
    if report.when == "call" or report.outcome != "passed":
        prev = _outcomes.get(name)
        if prev in (None, "PASS"):
            _outcomes[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, label in CRITERIA.items():
        status = _outcomes.get(name, "NOT RUN")
        terminalreporter.write_line(f"{status:<7} criterion {label}")
    if _notes:
        terminalreporter.section("reported display discrepancies")
        for line in _notes:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    """Append a line to the discrepancy section of the terminal summary."""
    return _notes.append


@pytest.fixture(scope="session")
def verify_output():
    """Output of one clean ``ncwick verify --max-degree 6`` run, shared by tests."""
    return cli_main.run_captured(["verify", "--max-degree", "6"])


@pytest.fixture(scope="session")
def verify_status(verify_output) -> dict[str, str]:
    """Suite name -> "ok" or "FAIL" from the shared verify run."""
    status = {}
    for line in verify_output.splitlines():
        head = line[:4]
        if head in ("ok  ", "FAIL") and line[5:6] != "" and "/" not in line:
            status[line[5:].split()[0]] = head.strip()
    return status


def _drop_unit_split(orig):
    # forget the S = {} term of the extraction coproduct on nonempty words
    return lambda w: tuple(t for t in orig(w) if t[0]) if w else orig(w)


def _swap_half_succ(orig):
    return lambda mu, nu: orig(nu, mu)


def _wick_without_inverse(orig):
    return lambda Phi: wk.act(wk.identity(), Phi)


MUTATIONS = {
    "coalgebra: extraction coproduct drops the empty subset": (co, "_delta_word_terms", _drop_unit_split),
    "partitions: tree factorial is always 1": (parts, "tree_factorial", lambda orig: (lambda pi: 1)),
    "functionals: right half-shuffle with swapped arguments": (fn, "half_succ", _swap_half_succ),
    "wick: free Wick map acts by Phi instead of its inverse": (wk, "wick_free", _wick_without_inverse),
}


@pytest.fixture(scope="session")
def mutation_outputs():
    """``verify --max-degree 6`` output under each deliberate mutation."""
    out = {}
    for label, (module, attr, mutate) in MUTATIONS.items():
        with pytest.MonkeyPatch.context() as mp:
            mp.setattr(module, attr, mutate(getattr(module, attr)))
            co.clear_caches()
            parts.clear_caches()
            out[label] = cli_main.run_captured(["verify", "--max-degree", "6"])
        co.clear_caches()
        parts.clear_caches()
    return out


@pytest.fixture
def fresh_caches():
    co.clear_caches()
    parts.clear_caches()
    yield
    co.clear_caches()
    parts.clear_caches()
