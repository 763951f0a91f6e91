#!/usr/bin/env python3
# Copyright 2026 The Surprisal Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes tests/data/metrics_repo: one repository, 12 items, 3 contributors,
3 releases. Event times are whole days after 2024-01-01 so the expected
metrics in expected_metrics.csv can be worked out by hand."""

import datetime as dt
import json
import pathlib

BASE = dt.datetime(2024, 1, 1, tzinfo=dt.timezone.utc)
REPO = "tinker/forge"
OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "metrics_repo"


def day(d, hours=0):
    t = BASE + dt.timedelta(days=d, hours=hours)
    return t.strftime("%Y-%m-%dT%H:%M:%SZ")


def ev(kind, actor, d):
    return {"event_type": kind, "actor": actor, "at": day(d)}


def issue(number, author, created, events, labels, reactions, assigned,
          state="closed", kind="issue", title=None, body=""):
    return {
        "repo": REPO,
        "number": number,
        "kind": kind,
        "title": title or f"Item {number}",
        "body": body,
        "author": author,
        "created_at": day(created),
        "state": state,
        "events": events,
        "labels": labels,
        "reactions": reactions,
        "assignee_history": [{"contributor": c, "assigned_at": day(d)} for c, d in assigned],
        "partial_data": False,
    }


ISSUES = [
    issue(1, "ann", 2,
          [ev("labeled", "ben", 2), ev("assigned", "ann", 3), ev("commented", "cat", 5), ev("closed", "ann", 10)],
          ["bug", "P1"], {"+1": 2}, [("ann", 3)],
          title="Crash when saving a project", body="Saving a project with an empty name crashes the editor."),
    issue(2, "ben", 4,
          [ev("assigned", "ann", 4), ev("closed", "ann", 11)],
          ["P2"], {}, [("ann", 4)],
          title="Typo in the settings dialog", body="The word 'prefrences' is misspelled."),
    issue(3, "cat", 5,
          [ev("assigned", "ann", 6), ev("closed", "ann", 8), ev("reopened", "cat", 9),
           ev("commented", "ann", 12), ev("closed", "ann", 13)],
          ["Low Priority", "P4"], {"heart": 1, "+1": 3}, [("ann", 6)],
          title="Undo history lost after export", body="Exporting clears the undo stack."),
    issue(4, "ann", 17,
          [ev("assigned", "ann", 15), ev("closed", "ann", 16)],
          [], {}, [("ann", 15)],
          title="Imported item with skewed clock", body="Creation time is after the close event."),
    issue(5, "ben", 20,
          [ev("commented", "ben", 21), ev("assigned", "ann", 30), ev("closed", "ann", 40)],
          ["enhancement"], {"rocket": 5}, [("ann", 30)],
          title="Support dark theme", body="A dark theme for the main window."),
    issue(6, "cat", 22,
          [ev("assigned", "ann", 25), ev("assigned", "cat", 35), ev("commented", "ben", 36),
           ev("closed", "ann", 38), ev("reopened", "cat", 39), ev("closed", "ben", 41)],
          ["P5", "high priority"], {"+1": 1, "-1": 1}, [("ann", 25), ("ben", 35)],
          title="Data loss on network drive", body="Files saved to a network share are truncated."),
    issue(7, "ann", 26,
          [ev("assigned", "ann", 27), ev("assigned", "cat", 28), ev("commented", "cat", 29), ev("closed", "ann", 50)],
          ["P3"], {}, [("ann", 27), ("cat", 28)],
          title="Slow startup with many plugins", body="Startup takes 30 seconds with 40 plugins."),
    issue(8, "cat", 12,
          [ev("assigned", "ben", 14), ev("closed", "ben", 20)],
          ["P2", "P5"], {"eyes": 1}, [("ben", 14)],
          title="Toolbar icons blurry on HiDPI", body="Icons are rendered at 1x."),
    issue(9, "ben", 18,
          [ev("assigned", "ben", 19), ev("closed", "ben", 21)],
          ["bug"], {}, [("ben", 19)],
          title="Wrong default font", body="The default font falls back to serif."),
    issue(10, "ann", 28,
          [ev("assigned", "ben", 30), ev("commented", "ann", 31), ev("commented", "cat", 32),
           ev("commented", "ben", 33), ev("closed", "ben", 45)],
          ["P1", "Low Priority"], {"+1": 10}, [("ben", 30)],
          title="Update the license year", body="The about box still says 2023."),
    issue(11, "ben", 37,
          [ev("assigned", "ben", 38), ev("commented", "cat", 40), ev("commented", "ann", 43),
           ev("merged", "ann", 46), ev("closed", "ann", 46)],
          [], {}, [("ben", 38)], state="merged", kind="pull_request",
          title="Rewrite the cache layer", body="Replaces the LRU cache with a sharded one."),
    issue(12, "cat", 44,
          [ev("assigned", "cat", 44), ev("closed", "ben", 46), ev("reopened", "cat", 47), ev("labeled", "ann", 48)],
          ["HIGH PRIORITY"], {"laugh": 2, "hooray": 1}, [("cat", 44)], state="open",
          title="Autosave interval ignored", body="Autosave runs every minute regardless of the setting."),
]

RELEASES = [
    {"repo": REPO, "tag": "v1.0.0", "published_at": day(15),
     "body": "Fixes #1, #2 and #3. Thanks to the reporter of #1."},
    {"repo": REPO, "tag": "v1.1.0", "published_at": day(42),
     "body": "Closes #5 and #6 (see #60 and #6a)."},
    {"repo": REPO, "tag": "v1.2.0", "published_at": day(47),
     "body": "Merged #11; reverts #10. Issue #12 is still open. #110 is unrelated."},
]

REPOS = [{"full_name": REPO, "stars": 10, "issue_count": 1000, "primary_language_hint": "C",
          "fetched_at": day(151)}]


def dump(name, rows):
    with open(OUT / name, "w", encoding="utf-8", newline="\n") as f:
        for r in rows:
            f.write(json.dumps(r, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n")


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    dump("repos.jsonl", REPOS)
    dump("issues.jsonl", ISSUES)
    dump("releases.jsonl", RELEASES)
    with open(OUT / "meta.json", "w", encoding="utf-8", newline="\n") as f:
        json.dump({"analysis_time": day(152), "schema_version": 1, "tool_version": "fixture"},
                  f, indent=2, sort_keys=True)
        f.write("\n")
