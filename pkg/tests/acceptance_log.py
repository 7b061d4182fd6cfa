"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
LINES = []


def record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}"
    LINES.append(line)
    return line
