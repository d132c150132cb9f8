from pathlib import Path

import pytest

from beepath.frontend import LEADING_TEXT, parse_statement, parse_text
from beepath.model import FragmentInstance, Subprocess, analyze

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"
HEADER = LEADING_TEXT + ".\n"

# (variant, statement, arguments as written: plain names or "(id)")
TABLE_ROWS = [
    ("Sequence", 'After "A" ends, immediately start "B".', ["A", "B"]),
    ("ParallelSplit", 'After "A" ends, immediately start "B" and start "C".', ["A", "B", "C"]),
    ("Synchronization", 'After "A" ends and "B" ends, immediately start "C".', ["A", "B", "C"]),
    ("ExclusiveChoice", 'After "A" ends, immediately either start "B" or start "C".', ["A", "B", "C"]),
    ("SimpleMerge", 'After either "A" ends or "B" ends, immediately start "C".', ["A", "B", "C"]),
    ("RepeatSince", 'After "A" ends, immediately repeat since "B" or start "C".', ["A", "B", "C"]),
    ("Eventually", 'After "A" ends, eventually start "B".', ["A", "B"]),
    ("AndSplitInXorSplit", 'After "A" ends, immediately either start (B_and_C) or start "D".',
     ["A", "(B_and_C)", "D"]),
    ("AndJoinInXorJoin", 'After either (A_and_B) ends or "C" ends, immediately start "E".',
     ["(A_and_B)", "C", "E"]),
    ("XorSplitInAndSplit", 'After "A" ends, immediately start (B_or_C) and start "D".',
     ["A", "(B_or_C)", "D"]),
    ("XorJoinInAndJoin", 'After (A_or_B) ends and "C" ends, immediately start "E".',
     ["(A_or_B)", "C", "E"]),
    ("OrSubprocess", '(A_or_B): "A" or "B"', ["A", "B"]),
    ("AndSubprocess", '(A_and_B): "A" and "B"', ["A", "B"]),
]

# The fragment instances used with the drawn automata and constraint lists,
# with the activity names those drawings use.
SUBPROCESSES = {
    "BC_and": Subprocess("BC_and", "AND", ("B", "C"), 0),
    "EF_and": Subprocess("EF_and", "AND", ("E", "F"), 1),
    "BC_or": Subprocess("BC_or", "OR", ("B", "C"), 2),
    "EF_or": Subprocess("EF_or", "OR", ("E", "F"), 3),
}

FLOW_STATEMENTS = {
    "Sequence": 'After "A" ends, immediately start "B".',
    "ParallelSplit": 'After "A" ends, immediately start "B" and start "C".',
    "Synchronization": 'After "D" ends and "E" ends, immediately start "F".',
    "ExclusiveChoice": 'After "A" ends, immediately either start "B" or start "C".',
    "SimpleMerge": 'After either "D" ends or "E" ends, immediately start "F".',
    "RepeatSince": 'After "A" ends, immediately repeat since "B" or start "C".',
    "Eventually": 'After "A" ends, eventually start "B".',
    "AndSplitInXorSplit": 'After "A" ends, immediately either start (BC_and) or start "D".',
    "AndJoinInXorJoin": 'After either (EF_and) ends or "G" ends, immediately start "H".',
    "XorSplitInAndSplit": 'After "A" ends, immediately start (BC_or) and start "D".',
    "XorJoinInAndJoin": 'After (EF_or) ends and "G" ends, immediately start "H".',
}


def instance(statement: str, index: int = 0) -> FragmentInstance:
    f = parse_statement(statement)
    return FragmentInstance(f.variant, f.args, index)


def flow_instance(variant: str) -> FragmentInstance:
    return instance(FLOW_STATEMENTS[variant])


def program(*statements: str, initial: str = "A", closing: str = 'After "B" ends, the process finishes.') -> str:
    body = "\n".join(statements)
    return f'{HEADER}Initially start "{initial}".\n{body}\n{closing}\n'


@pytest.fixture(scope="session")
def hospital_text() -> str:
    return (DATA / "hospital.beepath").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def hospital_description(hospital_text):
    return parse_text(hospital_text)


@pytest.fixture(scope="session")
def hospital_spec(hospital_description):
    return analyze(hospital_description)


_CRITERIA: dict[str, str] = {}


def pytest_runtest_logreport(report):
    title = dict(report.user_properties).get("criterion")
    if title is None:
        return
    if report.failed or report.when == "call":
        if _CRITERIA.get(title) != "FAIL":
            _CRITERIA[title] = "FAIL" if report.failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for title in sorted(_CRITERIA, key=lambda t: int(t.split(".")[0])):
        terminalreporter.write_line(f"{_CRITERIA[title]}  {title}")
