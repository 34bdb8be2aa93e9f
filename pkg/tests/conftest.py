"""Shared fixtures: the bundled seven-problem corpus in several forms.

``fixture_records()`` returns fresh dict copies on every call, so tests
that corrupt a record build their own instead of using these
session-scoped views.
"""

import pytest

from lpwb.canonical import canonicalize
from lpwb.fixtures import fixture_records
from lpwb.ir import parse_ir

FIXTURE_IDS = (
    "resource",
    "investment",
    "farming",
    "mining",
    "transportation",
    "health",
    "hotel",
)


@pytest.fixture(scope="session")
def records():
    return fixture_records()


@pytest.fixture(scope="session")
def by_id(records):
    return {r["id"]: r for r in records}


@pytest.fixture(scope="session")
def gold_docs(records):
    return {r["id"]: parse_ir(r["gold_ir"]) for r in records}


@pytest.fixture(scope="session")
def gold_forms(gold_docs):
    return {pid: canonicalize(doc) for pid, doc in gold_docs.items()}
