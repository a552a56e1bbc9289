"""Run the acceptance criteria and print one PASS/FAIL line per criterion."""

import pathlib
import runpy
import sys

tests = pathlib.Path(__file__).resolve().parent.parent / "tests"
sys.path.insert(0, str(tests))
sys.argv = [str(tests / "test_acceptance.py")]
runpy.run_path(str(tests / "test_acceptance.py"), run_name="__main__")
