import math

import pytest

ACCEPTANCE_LINES: list[str] = []


def is_prime_td(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def factor_td(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def brute_values(f, n):
    """f evaluated from an independent trial-division factorization of each m <= n."""
    return [f(factor_td(m)) for m in range(1, n + 1)]


@pytest.fixture(scope="session")
def primes_small():
    return [p for p in range(2, 10_001) if is_prime_td(p)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def loglog(n):
    return math.log(math.log(n))
