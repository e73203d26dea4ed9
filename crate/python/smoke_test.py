#!/usr/bin/env python3
"""Smoke test for the _quasiq extension module.

Builds the cdylib with cargo, loads it and exercises the main types and
operations. Run from anywhere:

    python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_import():
    subprocess.run(
        ["cargo", "build", "-p", "quasiq-py", "--release"],
        cwd=REPO,
        check=True,
    )
    built = REPO / "target" / "release" / "lib_quasiq.so"
    stage = Path(tempfile.mkdtemp(prefix="quasiq-py-"))
    shutil.copy(built, stage / "_quasiq.so")
    sys.path.insert(0, str(stage))
    import _quasiq

    return _quasiq


def main():
    q = build_and_import()

    # quasi-sets: construction, qc, ≡ and the power quasi-set gap
    a = q.QSet().with_micro("electron", 3).with_macro("detector")
    b = q.QSet().with_micro("electron", 3).with_macro("detector")
    assert a.qc() == 4
    assert a.indist(b)
    assert not a.is_pure() and not a.is_classical_set()

    pure = q.QSet().with_micro("electron", 3)
    assert pure.power_qc() == 8
    assert pure.sub_class_count() == 4  # qc + 1 distinguishable sub-classes

    sub = a.sub_qset_with_qc(2)
    assert sub.qc() == 2 and sub.is_sub_qset_of(a)

    nested = q.QSet().with_sub(pure, 2)
    assert nested.qc() == 2
    round_trip = q.QSet.parse(nested.serialize())
    assert round_trip.indist(nested)

    # occupancy counting
    assert q.count_configurations(2, 2, "individuals") == 4
    assert q.count_configurations(2, 2, "nonindividuals") == 3
    assert q.count_configurations(3, 2, "individuals") == 8
    assert q.count_configurations(3, 2, "nonindividuals") == 4

    # EPRB: same axis is exactly anti-correlated; π/3 tracks -cos θ
    counts, corr, se = q.eprb_statistics(0.0, 0.0, 0.0, 0.0, 2000, 7)
    assert corr == -1.0
    assert counts[0][0] == 0 and counts[1][1] == 0

    theta = math.pi / 3
    counts, corr, se = q.eprb_statistics(0.0, 0.0, theta, 0.0, 20000, 7)
    assert abs(corr - (-math.cos(theta))) < 3 * se + 1e-2, corr

    # validated two-body orbit stays individuated
    omega = math.sqrt(2.0)
    bodies = [
        (1.0, (-0.5, 0.0, 0.0), (0.0, -omega * 0.5, 0.0)),
        (1.0, (0.5, 0.0, 0.0), (0.0, omega * 0.5, 0.0)),
    ]
    all_pass, max_residual, singletons = q.simulate_gravity(
        "star", bodies, 1.0, 1e-3, 0.0, 1.0, 1e-4, 1e-9
    )
    assert all_pass, max_residual
    assert max_residual < 1e-4
    assert singletons

    print("smoke test passed")


if __name__ == "__main__":
    main()
