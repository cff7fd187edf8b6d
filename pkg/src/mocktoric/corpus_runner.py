"""Run the bundled example corpus against its golden outputs.

``manifest.json`` lists cases as a CLI argument vector (paths relative to
the corpus directory), the expected exit status and the golden file.
"""

from __future__ import annotations

import difflib
import json
from pathlib import Path

from . import io


def _resolve(args: list[str], root: Path) -> list[str]:
    out = []
    for x in args:
        p = root / x
        out.append(str(p) if x.endswith(".json") and p.exists() else x)
    return out


def run_corpus(root: Path, regenerate: bool = False):
    from .cli import EXIT_INPUT, EXIT_MATH, Outcome, execute

    manifest = root / "manifest.json"
    if not manifest.is_file():
        msg = f"corpus not found at {root}"
        return Outcome({"kind": "error", "message": msg}, [msg], EXIT_INPUT)
    try:
        cases = json.loads(manifest.read_text(encoding="utf-8"))["cases"]
    except (json.JSONDecodeError, KeyError) as exc:
        msg = f"malformed corpus manifest: {exc}"
        return Outcome({"kind": "error", "message": msg}, [msg], EXIT_INPUT)
    results, lines = [], []
    for case in cases:
        outcome, _ = execute(_resolve(case["command"], root))
        text = io.dumps(outcome.payload)
        golden = root / case["golden"]
        if regenerate:
            golden.parent.mkdir(parents=True, exist_ok=True)
            golden.write_text(text, encoding="utf-8")
            case["status"] = outcome.status
        expected = golden.read_text(encoding="utf-8") if golden.is_file() else None
        ok = expected == text and outcome.status == case["status"]
        diff = []
        if not ok:
            if expected is None:
                diff = [f"missing golden file {case['golden']}"]
            elif expected != text:
                diff = list(difflib.unified_diff(expected.splitlines(), text.splitlines(),
                                                 case["golden"], "actual", lineterm="", n=1))[:40]
            if outcome.status != case["status"]:
                diff.append(f"exit status {outcome.status}, expected {case['status']}")
        results.append({"name": case["name"], "passed": ok, "diff": diff})
        lines.append(f"{'ok' if ok else 'MISMATCH'}  {case['name']}")
        lines.extend("    " + d for d in diff)
    if regenerate:
        manifest.write_text(json.dumps({"cases": cases}, indent=2) + "\n", encoding="utf-8")
    passed = all(r["passed"] for r in results)
    return Outcome({"kind": "corpus-report", "passed": passed, "cases": results}, lines,
                   0 if passed else EXIT_MATH)
