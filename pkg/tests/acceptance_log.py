"""Collects one PASS/FAIL line per acceptance check for the terminal summary."""

LINES: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> bool:
    line = f"criterion {criterion:<4} {'PASS' if ok else 'FAIL'}  {detail}"
    LINES.append(line)
    print(line, flush=True)
    return ok


def sort_key(line: str):
    tag = line.split()[1]
    digits = "".join(ch for ch in tag if ch.isdigit())
    return (int(digits), tag)
