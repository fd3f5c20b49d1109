"""Shared fixtures. The run ledger goes to a throwaway database for the whole session."""

import os
import tempfile

os.environ.setdefault("GNNLAB_DB_PATH", os.path.join(tempfile.mkdtemp(), "gnnlab_test.db"))

import pytest  # noqa: E402

from gnnlab.graph.tensor import encode_dense  # noqa: E402

C6 = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]
TWO_C3 = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]


@pytest.fixture
def c6():
    return encode_dense(6, C6)


@pytest.fixture
def two_c3():
    return encode_dense(6, TWO_C3)
