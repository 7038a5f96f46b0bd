from functools import lru_cache

from origami_monoids.congruence import tc_enumerate
from origami_monoids.greens import compute_greens
from origami_monoids.rewrite import kb_complete
from origami_monoids.words import build_jones_presentation, build_origami_presentation


@lru_cache(maxsize=None)
def origami(n: int, include_redundant: bool = True):
    return tc_enumerate(build_origami_presentation(n, include_redundant=include_redundant))


@lru_cache(maxsize=None)
def jones(n: int):
    return tc_enumerate(build_jones_presentation(n))


@lru_cache(maxsize=None)
def greens_of(family: str, n: int):
    return compute_greens(origami(n) if family == "origami" else jones(n))


@lru_cache(maxsize=None)
def kb_system(family: str, n: int):
    p = build_origami_presentation(n) if family == "origami" else build_jones_presentation(n)
    return kb_complete(p)



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
