"""End-to-end checks of the primecoh command line.

usage: cli_test.py <primecoh> <report.schema.json> <work dir>
"""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

EXE, SCHEMA, WORK = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def cli(*args):
    return subprocess.run([EXE, *map(str, args)], capture_output=True, text=True)


def write(path, obj):
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return path


shutil.rmtree(WORK, ignore_errors=True)
WORK.mkdir(parents=True)
validator = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))

good = write(WORK / "good.json", {"runs": [
    {"id": "smoke", "model": {"kind": "entropic"}, "n": 20},
    {"id": "gue-small", "model": {"kind": "gue"}, "n": 60,
     "controls": {"gue": True, "bilaplacian": True, "ks": True}},
]})
bad = write(WORK / "bad.json", {"runs": [
    {"id": "bad-delta", "model": {"kind": "entropic"}, "n": 20, "delta0": 0}]})
broken = write(WORK / "broken.json", '{\n  "runs": [\n    {"id": "a",,}\n  ]\n}\n')
# A plain file squatting on a run directory makes that run's artifacts
# unwritable while its neighbour succeeds.
partial = write(WORK / "partial.json", {"runs": [
    {"id": "fine", "model": {"kind": "entropic"}, "n": 10},
    {"id": "doomed", "model": {"kind": "entropic"}, "n": 10}]})

r = cli("validate", good)
check(r.returncode == 0 and "ok (2 runs)" in r.stdout, "validate accepts a good config")
r = cli("validate", bad)
check(r.returncode == 2 and "run 'bad-delta'" in r.stderr and "/runs/0/delta0" in r.stderr,
      "validate names the run and field of a bad delta0")
r = cli("validate", broken)
check(r.returncode == 2 and ":3:" in r.stderr, "syntax errors are line anchored")
check(cli("validate", WORK / "missing.json").returncode == 2, "unreadable config exits 2")
check(cli("run").returncode == 2, "missing config argument exits 2")
check(cli("frobnicate").returncode == 2, "unknown subcommand exits 2")
check(cli("run", bad, "--out", WORK / "never").returncode == 2, "run refuses invalid config")
check(not (WORK / "never").exists(), "invalid config writes nothing")

r = cli("presets")
names = [line.split("\t")[0] for line in r.stdout.splitlines()]
check(r.returncode == 0 and {"profiles-n500", "entropic-fit", "controls-n1000", "kernels-n20", "plateau-study"} <= set(names),
      "presets lists the built-in configs")
check(cli("presets", "no-such").returncode == 2, "unknown preset exits 2")
r = cli("presets", "--out", WORK / "presets")
for name in names:
    f = WORK / "presets" / f"{name}.json"
    check(f.exists() and cli("validate", f).returncode == 0, f"exported preset {name} validates")

out_a, out_b = WORK / "out_a", WORK / "out_b"
r = cli("run", good, "--out", out_a, "--jobs", "2", "--emit-kernel", "--seed", "5")
check(r.returncode == 0, "run exits 0 when every run succeeds")
for run_id in ("smoke", "gue-small"):
    d = out_a / run_id
    check((d / "profile.csv").exists() and (d / "report.json").exists(), f"{run_id} artifacts exist")
    lines = (d / "profile.csv").read_text().splitlines()
    check(lines[0] == "t,theta,ds_exact,ds_fd,entropy" and len(lines) == 201,
          f"{run_id} profile has header and 200 rows")
    report = json.loads((d / "report.json").read_text())
    errors = list(validator.iter_errors(report))
    check(not errors, f"{run_id} report matches schema" + (f": {errors[0].message}" if errors else ""))
    check(report["seed"] == 5, f"{run_id} seed override recorded")
kernel = (out_a / "smoke" / "kernel.csv").read_text().splitlines()
check(len(kernel) == 20 and all(len(row.split(",")) == 20 for row in kernel), "kernel.csv is 20x20")

cli("run", good, "--out", out_b, "--jobs", "1", "--emit-kernel", "--seed", "5")
same = all((out_a / p.relative_to(out_b)).read_bytes() == p.read_bytes()
           for p in out_b.rglob("*") if p.is_file() and p.name != "timing.json")
check(same, "reruns are byte-identical")

(WORK / "partial_out").mkdir()
(WORK / "partial_out" / "doomed").write_text("in the way\n")
r = cli("run", partial, "--out", WORK / "partial_out")
check(r.returncode == 1, "partial failure exits 1")
check("FAILED doomed" in r.stdout, "failed run is listed")
check((WORK / "partial_out" / "fine" / "profile.csv").exists(), "healthy run still completes")

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
