from __future__ import annotations

import contextlib

import pytest

from rebac import SystemGraph, SystemModel
from rebac.fixtures import corporate_workspace

# registry for the acceptance suite's one-line-per-criterion summary
_acceptance: dict[int, dict] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    record = {"title": title, "status": "FAIL", "detail": ""}
    _acceptance[number] = record
    yield record
    record["status"] = "PASS"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance):
        record = _acceptance[number]
        detail = f" ({record['detail']})" if record["detail"] else ""
        terminalreporter.write_line(
            f"criterion {number}: {record['status']} - {record['title']}{detail}"
        )


@pytest.fixture
def five_node_graph() -> SystemGraph:
    """s -r1-> v1, v2 -r2-> v1, v2 -r3-> v3, v3 -r4- o with r4 symmetric."""
    model = SystemModel(
        types=["node"],
        labels=["r1", "r2", "r3", "r4"],
        symmetric=["r4"],
        permissible=[("node", "node", l) for l in ("r1", "r2", "r3", "r4")],
    )
    return SystemGraph(
        model,
        {x: "node" for x in ("s", "v1", "v2", "v3", "o")},
        [("s", "v1", "r1"), ("v2", "v1", "r2"), ("v2", "v3", "r3"), ("v3", "o", "r4")],
    )


@pytest.fixture
def fragment_graph() -> SystemGraph:
    """A project neighborhood: supervisor/participant, folder tree, files."""
    model = SystemModel(
        types=["user", "project", "folder", "file"],
        labels=["Participant-of", "Supervises", "Resource-for", "Member-of"],
        permissible=[
            ("user", "project", "Participant-of"),
            ("user", "project", "Supervises"),
            ("folder", "project", "Resource-for"),
            ("folder", "folder", "Member-of"),
            ("file", "folder", "Member-of"),
        ],
    )
    return SystemGraph(
        model,
        {
            "U1": "user",
            "P1": "project",
            "F1": "folder",
            "F2": "folder",
            "D1": "file",
            "D2": "file",
        },
        [
            ("U1", "P1", "Participant-of"),
            ("U1", "P1", "Supervises"),
            ("F1", "P1", "Resource-for"),
            ("F2", "F1", "Member-of"),
            ("D1", "F2", "Member-of"),
            ("D2", "F2", "Member-of"),
        ],
    )


@pytest.fixture(scope="session")
def corporate():
    return corporate_workspace()
