"""Runs the CLI, validates every JSON report against the shipped schema and
cross-checks the provenance ledger against the fields it lists."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

RUNS = [
    ("criterion-free", ["criterion", "--group", "free:2", "--set", "[a,a^-1,b,b^-1]", "--nmax", "12"], 0),
    ("criterion-zd", ["criterion", "--group", "zd:2", "--set", "std"], 3),
    ("percolate", ["percolate", "--group", "free:2", "--radius", "6", "--samples", "200",
                   "--seed", "3", "--grid", "0:1:0.25", "--pc", "--probe", "0.6"], 0),
    ("witness-f2", ["witness", "--paradoxical-f2"], 0),
    ("witness-zd", ["witness", "--group", "zd:1", "--iterate", "box:10", "--m", "3"], 0),
    ("rho", ["rho", "--group", "fpc:2,3", "--steps", "12", "--power-radius", "6"], 0),
    ("ball", ["ball", "--group", "zd:2", "--radius", "3"], 0),
]


def ledger_matches(report):
    listed = {(e["stage"], e["field"]) for e in report["provenance_ledger"]}
    tagged = set()
    for stage in report["stages"]:
        for name, value in stage["fields"].items():
            if isinstance(value, dict) and "provenance" in value:
                tagged.add((stage["name"], name))
    return listed == tagged


def main(binary, schema_path):
    schema = json.loads(Path(schema_path).read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, args, expected in RUNS:
            out = Path(tmp) / f"{name}.json"
            proc = subprocess.run([binary, *args, "--json", str(out), "--timing"],
                                  capture_output=True, text=True)
            problems = []
            if proc.returncode != expected:
                problems.append(f"exit {proc.returncode}, expected {expected}: {proc.stderr.strip()}")
            if not out.exists():
                problems.append("no report written")
            else:
                report = json.loads(out.read_text())
                problems += [e.message for e in validator.iter_errors(report)]
                if not ledger_matches(report):
                    problems.append("provenance ledger does not match the tagged fields")
            status = "ok" if not problems else "FAIL"
            print(f"{status:4} {name}")
            for p in problems:
                print(f"     {p}")
            failures += bool(problems)

        bad = Path(tmp) / "bad.json"
        proc = subprocess.run([binary, "criterion", "--group", "nonsense", "--json", str(bad)],
                              capture_output=True, text=True)
        ok = proc.returncode == 2 and not bad.exists()
        print(f"{'ok' if ok else 'FAIL':4} malformed spec leaves no report (exit {proc.returncode})")
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1], sys.argv[2]))
