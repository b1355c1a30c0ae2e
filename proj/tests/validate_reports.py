# SPDX-License-Identifier: Apache-2.0
"""Runs cf over a fixed set of invocations; every report must validate
against the schema and be byte-identical across two runs."""

import json
import subprocess
import sys

import jsonschema

INVOCATIONS = [
    ["eval", "--family", "rogers-ramanujan", "--q", "2", "--depth", "4", "--exact"],
    ["eval", "--family", "example2-G", "--depth", "6", "--exact", "--raw"],
    ["eval", "--family", "g1", "--q", "3/2+1i", "--depth", "5", "--precision", "128"],
    ["transform", "--family", "rogers-ramanujan", "--q", "2", "--to", "unit-numerator", "--depth", "4", "--exact"],
    ["transform", "--family", "example2-G", "--to", "even-part", "--depth", "3", "--exact"],
    ["transform", "--family", "goellnitz-gordon", "--q", "-3", "--to", "unit-denominator", "--depth", "5"],
    ["transform", "--family", "ramanujan-selberg-1", "--q", "2", "--to", "bernoulli", "--depth", "6", "--exact"],
    ["bernoulli", "--values", "0,2,4,3/2", "--exact"],
    ["classify", "--family", "rogers-ramanujan", "--q", "2"],
    ["classify", "--family", "rogers-ramanujan", "--grid", "2,-3,3/2i"],
    ["classify", "--family", "goellnitz-gordon", "--q", "2"],
    ["classify", "--family", "g2", "--q", "2"],
    ["classify", "--family", "example2-G"],
    ["probe", "--family", "example2-G", "--v", "1", "--w", "2", "--depth", "400"],
    ["probe", "--family", "rogers-ramanujan", "--q", "2", "--v", "0", "--w", "inf", "--depth", "200"],
]


def main() -> int:
    cf, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path, encoding="utf-8") as fh:
        schema = json.load(fh)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args in INVOCATIONS:
        runs = [subprocess.run([cf, *args], capture_output=True, text=True, check=False) for _ in range(2)]
        label = " ".join(args)
        if any(r.returncode != 0 for r in runs):
            print(f"FAIL exit code {runs[0].returncode}: {label}\n{runs[0].stderr}")
            failures += 1
            continue
        if runs[0].stdout != runs[1].stdout:
            print(f"FAIL nondeterministic output: {label}")
            failures += 1
        errors = sorted(validator.iter_errors(json.loads(runs[0].stdout)), key=lambda e: e.path)
        for err in errors[:3]:
            print(f"FAIL schema: {label}: {list(err.path)}: {err.message[:200]}")
        failures += bool(errors)
        if not errors:
            print(f"ok {label}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
