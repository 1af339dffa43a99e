"""
Running scenarios from the command line
=======================================

The ``coopres`` command reads TOML scenarios with explicit units, writes CSV
and JSON results, and records a manifest with SHA-256 digests.  Here the
same entry point is called in-process on a temporary directory.
"""

import json
import tempfile
from pathlib import Path

from coopres import cli

SCENARIO = """
name = "demo"
mode = "two_level"
output = "both"

[physics]
omega_0 = "0.01 Omega_a"
nu = "1 Omega_a"
rho_aa = 0.1
t_end = "1000 tau"
sample_every = "1 tau"
"""

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp)
    path = out / "demo.scenario"
    path.write_text(SCENARIO)

    print("exit code:", cli.main(["simulate", str(path), "--output-dir", str(out)]))
    manifest = json.loads((out / "demo.manifest.json").read_text())
    print("\nmanifest outputs:", manifest["outputs"])
    print("first rows:\n" + "\n".join((out / "demo.csv").read_text().splitlines()[:3]))

    print("\nexit code:", cli.main(["atoms", "Rb", "dump", "--output-dir", str(out)]))
    print("\nexit code:", cli.main(["calc", "zeeman", "--b_z", "500 G"]))

    # validation errors name the offending field and exit with 3
    path.write_text(SCENARIO.replace("rho_aa = 0.1", "rho_aa = 1.5"))
    print("\nexit code:", cli.main(["simulate", str(path), "--output-dir", str(out)]))
