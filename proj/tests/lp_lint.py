"""Reads emitted LP files with HiGHS when the highspy package is installed.

Usage: lp_lint.py <collapse_core binary> <data dir>
Exits 77 (skipped) without highspy.
"""

import os
import subprocess
import sys
import tempfile

try:
    import highspy
except ImportError:
    print("highspy not installed; skipping")
    sys.exit(77)

binary, data = sys.argv[1], sys.argv[2]
karate = os.path.join(data, "karate.txt")
# karate, k = 2, b = 1: the optimum leaves 25 nodes and removing label 33 is optimal.
cases = [
    (["--model", "td"], 25),
    (["--model", "td", "--with-cuts"], 25),
    (["--model", "sparse", "--with-cuts"], None),
    (["--model", "dual", "--linearize"], 25),
    (["--model", "detect", "--remove", "33"], 33 - 25),
]
failures = 0
with tempfile.TemporaryDirectory() as tmp:
    for args, expected in cases:
        path = os.path.join(tmp, "model.lp")
        subprocess.run([binary, "emit", karate, "--k", "2", "--b", "1", *args, "--out", path], check=True)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        status = h.readModel(path)
        ok = status == highspy.HighsStatus.kOk
        value = None
        if ok and expected is not None:
            h.run()
            value = h.getInfo().objective_function_value
            ok = h.getModelStatus() == highspy.HighsModelStatus.kOptimal and abs(value - expected) < 1e-6
        print(("ok  " if ok else "FAIL"), " ".join(args), value)
        failures += not ok
sys.exit(1 if failures else 0)
