#!/usr/bin/env python3
"""Counts session metrics straight from a .vvlog, without the engine.

Usage: demo_metrics.py <project.vvp> <session.vvlog>
"""

import json
import sys
from datetime import datetime


def millis(stamp):
    return int(datetime.fromisoformat(stamp.replace("Z", "+00:00")).timestamp() * 1000)


def main(project_path, log_path):
    with open(project_path) as f:
        project = json.load(f)
    with open(log_path) as f:
        events = [json.loads(line) for line in f if line.strip()]

    first_answer = {}
    forks_chosen = set()
    pairs = set()
    optional = 0
    comments = 0
    for e in events:
        kind, payload = e["kind"], e["payload"]
        if kind == "question_answered":
            first_answer.setdefault(payload["node"], payload["correct"])
        elif kind in ("annotation_expanded", "overview_navigated", "viewer_annotation_added"):
            optional += 1
        elif kind == "comment_added":
            optional += 1
            comments += 1
        elif kind == "choose_path":
            pair = (payload["node"], payload["option"])
            if payload["node"] in forks_chosen and pair not in pairs:
                optional += 1
            forks_chosen.add(payload["node"])
            pairs.add(pair)

    metrics = {
        "correct_answers": sum(first_answer.values()),
        "questions_available": sum(n["kind"] == "question" for n in project["nodes"]),
        "time_spent_ms": millis(events[-1]["wall_time"]) - millis(events[0]["wall_time"]),
        "optional_interactions": optional,
        "branch_paths_seen": len(pairs),
        "comments": comments,
    }
    json.dump(metrics, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main(*sys.argv[1:])
