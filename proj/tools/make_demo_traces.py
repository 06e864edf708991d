#!/usr/bin/env python3
# Copyright 2026 The curtailsim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the synthetic demo traces under data/demo/traces.

Times are hours after the 17:00 UTC epoch of 2026-01-11. Samples are every
five minutes; values are reproducible (no RNG).
"""

import datetime
import math
import pathlib
import sys

EPOCH = datetime.datetime(2026, 1, 11, 17, 0, tzinfo=datetime.timezone.utc)
STEP = 300
END = 18 * 3600


def hm(h, m):
    """Offset of wall-clock h:m after the epoch, wrapping past midnight."""
    s = (h - 17) * 3600 + m * 60
    return s if s >= 0 else s + 86400


# Curtailed intervals [start, end) per region.
WINDOWS = {
    "CA": [(hm(17, 5), hm(19, 0)), (hm(19, 15), hm(23, 25))],
    "SA": [(hm(21, 40), END)],
    "TX": [(hm(3, 20), hm(4, 0)), (hm(4, 5), END)],
    "DE": [],
}

# Base MOER levels: (low, high) inside and outside windows.
LEVELS = {
    "CA": (12.0, 340.0),
    "SA": (18.0, 410.0),
    "TX": (8.0, 460.0),
    "DE": (0.0, 380.0),
}


def moer(region, t, phase):
    low, high = LEVELS[region]
    curtailed = any(a <= t < b for a, b in WINDOWS[region])
    wiggle = math.sin(t / 5400.0 + phase)
    if curtailed:
        return round(low + 15.0 * (1.0 + wiggle), 1)
    return round(high + 60.0 * (1.0 + wiggle), 1)


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for phase, region in enumerate(WINDOWS):
        lines = ["timestamp,moer"]
        for t in range(0, END + 1, STEP):
            stamp = (EPOCH + datetime.timedelta(seconds=t)).strftime("%Y-%m-%dT%H:%M:%SZ")
            lines.append(f"{stamp},{moer(region, t, phase)}")
        (out / f"{region}.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/demo/traces")
