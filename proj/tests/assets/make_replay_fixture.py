#!/usr/bin/env python3
"""Regenerates the committed replay fixture and its manifest.

The grid is 3 methods x 6 problems x 6 prompt classes. Values follow small
arithmetic recipes so every expected score can be recomputed by hand:

  i = method index (alpha 0, beta 1, gamma 2)
  j = problem index (cookies 0, search 1, three_sum 2, sort 3, network 4,
      median 5)

  init values:
    runtime  10 + 2i + j          seconds
    energy   100 + 10i + 5j       joules
    flops    100000 + 10000i + 1000j
    memory   10000 + 1000i + 100j KiB

  paired-metric changes on optimized variants (fractions of the init value):
    runtime-opt improves runtime by (10 + 5i + 3j)%
    memory-opt  improves memory by (8 + 3i + 2j)% on even j,
                regresses by the same amount on odd j (negative deltas)
    energy-opt  improves energy by (15 + 4i + 2j)%
    flops-opt   improves flops by (6 + 2i + j)% when j < 3, else no change

  the human submission scales the init values per metric:
    runtime x (0.50 + 0.05j), memory x (1.25 - 0.10j),
    energy x 0.70, flops x 1.00

  deliberate failures:
    beta/three_sum/memory  incorrect optimized variant (term contributes 0)
    gamma/median/init      incorrect baseline (whole pair Invalid)
    gamma/cookies/human    incorrect human submission (gc_human 0, flagged)

Non-paired metrics on optimized variants get a 1% wiggle; they never enter a
score. Runtime and energy series hold ten equal samples so means are exact.
"""

import json
import os

METHODS = ["alpha", "beta", "gamma"]
PROBLEMS = ["cookies", "search", "three_sum", "sort", "network", "median"]
ROUNDS = 10

INCORRECT = {
    ("beta", "three_sum", "memory"),
    ("gamma", "median", "init"),
    ("gamma", "cookies", "human"),
}

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURE_DIR = os.path.normpath(os.path.join(HERE, "..", "fixtures"))


def init_values(i, j):
    return {
        "runtime": 10 + 2 * i + j,
        "energy": 100 + 10 * i + 5 * j,
        "flops": 100000 + 10000 * i + 1000 * j,
        "memory": 10000 + 1000 * i + 100 * j,
    }


def variant_values(i, j, prompt):
    v = dict(init_values(i, j))
    if prompt == "init":
        return v
    if prompt == "human":
        v["runtime"] *= 0.50 + 0.05 * j
        v["memory"] *= 1.25 - 0.10 * j
        v["energy"] *= 0.70
        return v

    wiggle = 0.99
    paired = {"runtime": "runtime", "memory": "memory",
              "energy": "energy", "flops": "flops"}[prompt]
    for metric in v:
        if metric != paired:
            v[metric] *= wiggle
    if prompt == "runtime":
        v["runtime"] *= 1 - (10 + 5 * i + 3 * j) / 100
    elif prompt == "memory":
        d = (8 + 3 * i + 2 * j) / 100
        v["memory"] *= (1 - d) if j % 2 == 0 else (1 + d)
    elif prompt == "energy":
        v["energy"] *= 1 - (15 + 4 * i + 2 * j) / 100
    elif prompt == "flops":
        if j < 3:
            v["flops"] *= 1 - (6 + 2 * i + j) / 100
    # FLOPs replay truncates to an integer count; keep the fixture honest.
    v["flops"] = float(int(v["flops"]))
    return v


def main():
    fixture = {"schema": "greencap-fixture-v1", "variants": {}}
    manifest = {"variants": []}

    for j, problem in enumerate(PROBLEMS):
        for i, method in enumerate(METHODS):
            for prompt in ["init", "runtime", "memory", "energy", "flops", "human"]:
                key = f"{method}/{problem}/{prompt}"
                manifest["variants"].append({
                    "method": method,
                    "problem": problem,
                    "prompt": prompt,
                    "path": "unused",
                })
                if (method, problem, prompt) in INCORRECT:
                    fixture["variants"][key] = {"correct": False}
                    continue
                v = variant_values(i, j, prompt)
                fixture["variants"][key] = {
                    "correct": True,
                    "runtime": [v["runtime"]] * ROUNDS,
                    "energy": [v["energy"]] * ROUNDS,
                    "flops": v["flops"],
                    "memory": v["memory"],
                }

    with open(os.path.join(FIXTURE_DIR, "replay_fixture.json"), "w") as f:
        json.dump(fixture, f, indent=1, sort_keys=True)
        f.write("\n")
    with open(os.path.join(FIXTURE_DIR, "replay_manifest.json"), "w") as f:
        json.dump(manifest, f, indent=1)
        f.write("\n")
    print(f"wrote {len(fixture['variants'])} fixture variants")


if __name__ == "__main__":
    main()
