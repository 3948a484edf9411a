"""Driving the command-line interface from the shipped scenario files.

Runs each scenario in scenarios/ through the console entry point and shows
the exit code plus the first lines of output.  Exit code 0 means every
check passed, 1 means a verdict failed or was untestable, 2 means the
scenario file itself was rejected.
"""

import pathlib
import subprocess
import sys

COMMANDS = {
    "mean_exp.ini": "mean",
    "sweep_square.ini": "sweep",
    "verify_holo_exp.ini": "verify-holo",
    "verify_holo_conj.ini": "verify-holo",
    "verify_system_pharm.ini": "verify-system",
    "verify_amvp_pharm.ini": "verify-amvp",
    "contact_exp.ini": "contact",
    "dpp_exp.ini": "dpp",
    "validate_density.ini": "validate-density",
}


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    for name, command in COMMANDS.items():
        path = root / "scenarios" / name
        proc = subprocess.run(
            [sys.executable, "-m", "holomeans.cli", command, "--config", str(path)],
            capture_output=True,
            text=True,
        )
        print(f"$ holomeans {command} --config scenarios/{name}  -> exit {proc.returncode}")
        for line in proc.stdout.splitlines()[:4]:
            print(f"    {line}")
        print()


if __name__ == "__main__":
    main()
