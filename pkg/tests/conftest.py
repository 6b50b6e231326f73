import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

SOLVED_FIELDS = (
    -6846, -2289, 213, 834, 1545, 1885, 1923, 2517, 2847, 4569,
    6537, 7131, 7302, 7319, 7635, 7890, 8383, 9563, 9903,
)

ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {title}")
