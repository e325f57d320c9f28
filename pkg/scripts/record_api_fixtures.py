"""Record real HTTP service responses as JSON files for UI snapshot tests.

Drives the FastAPI app in-process through a test client and writes one
file per interaction: {"method", "path", "status", "body"} (or "text"
for text/plain responses). The web UI's test suite replays these files
to check that every grid it renders equals a grid the service returned.

Regenerate after any service payload change:

    python scripts/record_api_fixtures.py --out frontend/tests/recorded
"""

from __future__ import annotations

import argparse
import copy
import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from fastapi.testclient import TestClient  # noqa: E402

from sheetcsp.grid import load_workbook_json  # noqa: E402
from sheetcsp.service import create_app  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(REPO / "frontend" / "tests" / "recorded"))
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    client = TestClient(create_app(load_workbook_json(FIXTURES / "queens8.json")))
    written: list[str] = []

    def rec(name: str, method: str, path: str, payload=None) -> dict:
        resp = client.request(method, path, json=payload)
        entry: dict = {"method": method, "path": path, "status": resp.status_code}
        if resp.headers.get("content-type", "").startswith("text/plain"):
            entry["text"] = resp.text
        else:
            entry["body"] = resp.json()
        (out / f"{name}.json").write_text(json.dumps(entry, indent=1) + "\n")
        written.append(name)
        return entry

    queens = json.loads((FIXTURES / "queens8.json").read_text())
    sudoku = json.loads((FIXTURES / "sudoku.json").read_text())
    knapsack = json.loads((FIXTURES / "knapsack.json").read_text())
    unsat = json.loads((FIXTURES / "unsat.json").read_text())

    rec("queens-status-initial", "GET", "/api/status")
    rec("queens-workbook", "GET", "/api/workbook")
    solve = rec("queens-solve", "POST", "/api/solve")
    assert solve["body"]["solutionCount"] == 92, solve["status"]
    rec("queens-status-after-solve", "GET", "/api/status")
    rec("queens-next", "POST", "/api/next")
    rec("queens-status-after-next", "GET", "/api/status")
    rec("queens-prev", "POST", "/api/prev")
    rec("queens-reset", "POST", "/api/reset")
    rec("queens-status-after-reset", "GET", "/api/status")
    rec("queens-clp", "GET", "/api/clp")

    put = rec("sudoku-put", "PUT", "/api/workbook", sudoku)
    assert put["body"]["solutionCount"] == 0
    s = rec("sudoku-solve", "POST", "/api/solve")
    assert s["body"]["solutionCount"] == 1
    rec("sudoku-status-after-solve", "GET", "/api/status")

    rec("knapsack-put", "PUT", "/api/workbook", knapsack)
    k = rec("knapsack-solve", "POST", "/api/solve")
    assert k["body"]["objective"] == 32
    rec("knapsack-status-after-solve", "GET", "/api/status")

    broken = copy.deepcopy(queens)
    broken["sheets"][0]["cells"]["A13"] = "ssRowsAggregate(+,A1:H8,#=)"
    rec("error-parse-put", "PUT", "/api/workbook", broken)
    err = rec("error-parse", "POST", "/api/solve")
    assert err["status"] == 422 and err["body"]["error"]["cell"] == "A13", err

    rec("unsat-put", "PUT", "/api/workbook", unsat)
    u = rec("unsat-solve", "POST", "/api/solve")
    assert u["status"] == 422 and u["body"]["error"]["code"] == "UNSAT"

    rec("queens-put", "PUT", "/api/workbook", queens)

    print(f"wrote {len(written)} recordings to {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
