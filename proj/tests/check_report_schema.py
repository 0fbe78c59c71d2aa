# Copyright 2026 The g4vmem Authors
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

"""Runs the CLI on the shipped scenarios and validates each report."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    cli, source = sys.argv[1], Path(sys.argv[2])
    schema = json.loads((source / "schemas" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    runs = [
        ("ideal.json", []),
        ("example1_optical.json", ["--fast"]),
        ("example2_microwave.json", ["--fast"]),
    ]
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for name, extra in runs:
            out = Path(tmp) / (name + ".report.json")
            cmd = [cli, "run", "--config", str(source / "scenarios" / name), "--out", str(out), *extra]
            proc = subprocess.run(cmd, capture_output=True, text=True, timeout=300)
            if proc.returncode != 0:
                print(f"{name}: exit {proc.returncode}: {proc.stderr.strip()}")
                failures += 1
                continue
            errors = list(validator.iter_errors(json.loads(out.read_text())))
            for e in errors:
                print(f"{name}: {'/'.join(map(str, e.path))}: {e.message}")
            print(f"{name}: {'ok' if not errors else 'invalid'}")
            failures += bool(errors)
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
