#!/usr/bin/env python3
"""Run the three worked examples end to end and print their diff tables.

Each example compares every displayed quantity (trees, V(s), pushforward
systems, optimal bases, radius exponents) against closed forms built
independently from binomial and exponential series.  Exit code 0 iff every
blocking diff is zero and every pipeline check passes.
"""

import sys

from padicdisc.cli import run_example

EXAMPLES = ("p2-trivial", "p2-exp", "p3-trivial")


def main() -> int:
    all_ok = True
    for name in EXAMPLES:
        result = run_example(name)
        checks_ok = all(c["passed"] for c in result["report"]["checks"])
        ok = result["passed"] and checks_ok
        all_ok = all_ok and ok
        print("== %s: %s" % (name, "ok" if ok else "FAILED"))
        for row in result["diffs"]:
            status = "match" if row["match"] else (
                "known-discrepancy" if not row.get("blocking", True) else "MISMATCH")
            print("   %-62s %s" % (row["quantity"], status))
            if row.get("note"):
                print("      note: %s" % row["note"])
        for check in result["report"]["checks"]:
            if not check["passed"]:
                print("   check %-20s FAILED (%s)" % (check["name"], check["detail"]))
        print("   checks: %d/%d passed" % (
            sum(c["passed"] for c in result["report"]["checks"]),
            len(result["report"]["checks"])))
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
