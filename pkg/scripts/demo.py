#!/usr/bin/env python3
"""End-to-end tour: generate matrices, write their JSON files, and drive
the command-line pipeline on them (analyze, dominate, part, arc)."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from contraction_lab import make_contraction, matrix_to_json
from contraction_lab.corpus import GenSpec, generate


def write(path: Path, mat) -> str:
    path.write_text(json.dumps(matrix_to_json(np.asarray(mat, dtype=complex))))
    return str(path)


def run(argv):
    print(f"$ contraction-lab {' '.join(argv)}")
    proc = subprocess.run([sys.executable, "-m", "contraction_lab.cli", *argv],
                          capture_output=True, text=True)
    out = json.loads(proc.stdout)
    compact = {k: v for k, v in out.items()
               if k not in ("inputs", "tolerances", "seed", "command")}
    print(f"  exit={proc.returncode} {json.dumps(compact)[:240]}")
    print()


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        w = generate(GenSpec(dim=3, kind="partial_isometry", seed=7,
                             params={"rank": 2}))
        member = generate(GenSpec(dim=3, kind="direct_sum_U_plus_Q", seed=7,
                                  params={"unitary_dim": 2, "norm_bound": 0.5}))
        files = {
            "pi": write(root / "pi.json", w.mat),
            "mix": write(root / "mix.json",
                         np.diag([1.0, 0.6, 0.2]).astype(complex)),
            "zero": write(root / "zero.json", np.zeros((3, 3))),
            "strict": write(root / "strict.json",
                            generate(GenSpec(dim=3, kind="strict", seed=3)).mat),
        }
        run(["analyze", files["mix"]])
        run(["dominate", "--order", "harnack", files["zero"], files["strict"]])
        run(["dominate", "--order", "shmulyan", files["strict"], files["zero"]])
        run(["part", files["pi"], files["pi"]])
        run(["arc", files["zero"], files["strict"]])
        run(["gen", "--kind", "commuting_pair", "--dim", "3", "--seed", "1"])
        run(["suite", "--name", "scalar-constant"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
