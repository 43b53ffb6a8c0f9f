#!/usr/bin/env python3
"""Smoke test for the bipartite_walk_py extension module.

Builds the cdylib with cargo, loads it, and exercises the main surface:
state construction, stepping, closed forms, transfer reports, curves,
sweeps, and a trimmed verification battery.
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "bipartite-walk-py"],
        cwd=REPO_ROOT,
        check=True,
    )
    built = REPO_ROOT / "target" / "release" / "libbipartite_walk_py.so"
    if not built.exists():  # e.g. macOS
        built = REPO_ROOT / "target" / "release" / "libbipartite_walk_py.dylib"
    staging = Path(tempfile.mkdtemp(prefix="bipartite_walk_py_"))
    shutil.copy2(built, staging / "bipartite_walk_py.so")
    return staging


def approx(a, b, tol=1e-12):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main() -> None:
    sys.path.insert(0, str(build_extension()))
    import bipartite_walk_py as bw

    # Parameters and states.
    params = bw.WalkParams(3, 2, layout="same")
    assert params.sender == 1 and params.receiver == 2
    init = bw.WalkState.initial(params)
    approx(init.norm_sqr(), 1.0)
    approx(init.amplitude_part1(1, 1).real, 1 / math.sqrt(2))
    target = bw.WalkState.target(params)
    approx(init.fidelity(target), 0.0)

    # Stepping preserves the norm and alternates parts.
    op = bw.StepOperator(params)
    state = op.apply(init)
    assert state.step == 1
    approx(state.norm_sqr(), 1.0, 1e-14)
    approx(state.fidelity(target), 0.0)  # wrong part at odd steps

    # Bad configurations raise ValueError.
    try:
        bw.WalkParams(1, 4, layout="same")
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for a one-vertex same-part graph")

    # Grover diffusion examples.
    out = bw.apply_grover([1 + 0j, 0j, 0j, 0j])
    approx(out[0].real, -0.5)
    approx(out[1].real, 0.5)

    # Closed forms.
    approx(bw.fmax_opposite(100, 100), 1.0)
    assert abs(bw.fmax_opposite(100, 50) - 0.8873) < 5e-4
    approx(bw.fidelity_closed_form(2, 2, 1), 0.25)
    approx(bw.rotation_phase(100, 100), math.acos(0.9602), 1e-14)

    # Transfer reports.
    report = bw.transfer_report(bw.WalkParams(100, 100), scan_steps=60)
    assert report["T_opt"] == 23
    assert report["peak_step"] == 23
    approx(report["F_max_analytic"], 1.0)
    approx(report["peak_fidelity"], bw.fidelity_closed_form(100, 100, 23), 1e-10)

    star = bw.transfer_time(bw.WalkParams(20, 1, layout="same"))
    assert star["T_opt"] == 10 and star["F_at_T"] > 0.99

    # Curves: full simulation vs closed form at odd steps.
    full = dict(bw.curve(bw.WalkParams(5, 5), 30, source="full"))
    closed = dict(bw.curve(bw.WalkParams(5, 5), 30, source="closed"))
    for step, value in closed.items():
        approx(full[step], value, 1e-12)
    assert all(full[step] == 0.0 for step in range(2, 31, 2))

    # Long evolution matches the closed form.
    evolved = bw.evolve(bw.WalkParams(100, 50), 19)
    approx(
        evolved.fidelity(bw.WalkState.target(bw.WalkParams(100, 50))),
        bw.fidelity_closed_form(100, 50, 19),
        1e-10,
    )

    # Envelope sweep: symmetric grid with unit diagonal.
    grid = bw.sweep_fmax([2, 3, 4], [2, 3, 4])
    for i in range(3):
        approx(grid[i][i], 1.0)
        for j in range(3):
            approx(grid[i][j], grid[j][i])

    # Trimmed verification battery.
    outcome = bw.verify(max_product=16, steps=25)
    assert outcome["all_passed"], outcome
    assert any(c["name"] == "oracle_equivalence" for c in outcome["checks"])

    print("smoke test passed:", len(outcome["checks"]), "battery checks green")


if __name__ == "__main__":
    main()
