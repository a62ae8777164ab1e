"""Record service responses the frontend tests replay as fixtures.

Captures the stored-optimal-schedule game turn by turn (all nine views),
an undo/redo pair proving the round trip, a hint document, and one 3D
session for the slice renderer.  Regenerate after any service schema
change: python3 scripts/make_ui_fixtures.py
"""
from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from firebreak.service import create_app
from firebreak.strategies import optimal_2d_strategy

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"


def main() -> None:
    client = TestClient(create_app())
    schedule = optimal_2d_strategy()

    view = client.post("/sessions", json={}).json()
    sid = view["id"]
    views = [view]
    turns = []
    for t in range(1, 9):
        placements = [list(v) for v in schedule.placements_at(t)]
        turns.append(placements)
        view = client.post(
            f"/sessions/{sid}/turns", json={"placements": placements}
        ).json()
        views.append(view)

    undo_view = client.post(f"/sessions/{sid}/undo").json()
    redo_view = client.post(
        f"/sessions/{sid}/turns", json={"placements": turns[-1]}
    ).json()

    small = client.post(
        "/sessions",
        json={
            "spec": {
                "schema": 1,
                "geometry": "box",
                "dimension": 2,
                "root": [0, 0],
                "radius": 3,
            }
        },
    ).json()
    hint = client.get(f"/sessions/{small['id']}/hint", params={"budget": 100000})
    rejection = client.post(
        f"/sessions/{small['id']}/turns", json={"placements": [[0, 0]]}
    )

    cube = client.post(
        "/sessions",
        json={
            "spec": {
                "schema": 1,
                "geometry": "grid",
                "dimension": 3,
                "root": [0, 0, 0],
                "side": 5,
            },
            "f": 1,
        },
    ).json()
    cube_after = client.post(
        f"/sessions/{cube['id']}/turns", json={"placements": [[2, 0, 0]]}
    ).json()

    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "replay.json").write_text(
        json.dumps(
            {
                "views": views,
                "turns": turns,
                "undo_view": undo_view,
                "redo_view": redo_view,
                "rejection": {
                    "status": rejection.status_code,
                    "detail": rejection.json()["detail"],
                },
            },
            indent=2,
            sort_keys=True,
        )
    )
    (OUT / "hint.json").write_text(
        json.dumps(hint.json(), indent=2, sort_keys=True)
    )
    (OUT / "cube.json").write_text(
        json.dumps({"fresh": cube, "after_turn": cube_after}, indent=2, sort_keys=True)
    )
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
