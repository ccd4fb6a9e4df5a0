"""Shared store for the one-line acceptance verdicts."""
LINES: list[str] = []


def record(number: int, title: str, ok: bool, detail: str) -> bool:
    LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}")
    print(LINES[-1])
    return ok
