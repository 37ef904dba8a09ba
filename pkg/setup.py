#!/usr/bin/env python3
"""
setup.py - Install the workbench requirements and verify the calculus

Installs requirements.txt, then runs the installation check, the quick
calculus smoke test and the workbench selftest in order.
"""

import os
import subprocess
import sys

ROOT = os.path.dirname(os.path.abspath(__file__))

# (description, argv); the first failing step aborts the setup
STEPS = [
    ("Installing dependencies", [sys.executable, "-m", "pip", "install", "-r", "requirements.txt"]),
    ("Checking installation", [sys.executable, "test_installation.py"]),
    ("Running calculus smoke test", [sys.executable, "quick_test.py"]),
    ("Running workbench selftest", [sys.executable, "workbench.py", "selftest", "--silent"]),
]


def run_step(description, argv):
    print(f"\n🔄 {description}...")
    try:
        result = subprocess.run(argv, cwd=ROOT, capture_output=True, text=True)
    except OSError as e:
        print(f"❌ {description} could not start: {e}")
        return False
    if result.returncode != 0:
        print(f"❌ {description} failed (exit {result.returncode}):")
        print(result.stdout[-2000:])
        print(result.stderr[-2000:])
        return False
    print(f"✅ {description}")
    return True


def main():
    print("🎯 Garland Workbench Setup")
    print("=" * 40)

    if sys.version_info < (3, 8):
        print(f"❌ Python 3.8+ required, found {sys.version.split()[0]}")
        sys.exit(1)

    for description, argv in STEPS:
        if not run_step(description, argv):
            print(f"\n❌ Setup stopped at: {description}")
            sys.exit(1)

    print("\n🎉 Workbench ready")
    print("\n📋 Try:")
    print("  python workbench.py check prop42 --trials 200 --seed 7")
    print("  python workbench.py eval corpus/single_mark.txt --op lift")
    print("  python workbench.py bv verify --bound 4")
    print("  python workbench.py signs search --degree 1 --trials 50")


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # invoked by a build frontend (pip) with setuptools commands;
        # package metadata lives in pyproject.toml
        from setuptools import setup
        setup()
    else:
        main()
