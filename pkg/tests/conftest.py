import itertools

import numpy as np
import pytest

from twofaced import _backend


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    return request.param


def all_words(n):
    return [np.array(b, dtype=np.uint8) for b in itertools.product((0, 1), repeat=n)]


def ref_descramble(v, w):
    """Descrambler written straight from its definition, position by position."""
    ext = list(w) + list(v)
    l = len(w)
    return np.array([ext[l + k] ^ (sum(ext[k:l + k]) & 1) for k in range(len(v))], dtype=np.uint8)


def ref_scramble(x, w):
    ext = list(w)
    l = len(w)
    for k, b in enumerate(x):
        ext.append(b ^ (sum(ext[k:k + l]) & 1))
    return np.array(ext[l:], dtype=np.uint8)


# one line per acceptance criterion, echoed again at the end of the session
ACCEPTANCE_LINES = []


def record_criterion(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
