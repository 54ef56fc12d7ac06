"""Run the ten acceptance criteria and print one PASS/FAIL line each."""
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

import test_acceptance  # noqa: E402


def main():
    failed = 0
    for k in range(1, 11):
        start = time.time()
        ok, line = test_acceptance.run_one(k)
        failed += not ok
        print(f"{line}  [{time.time() - start:.1f}s]", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
