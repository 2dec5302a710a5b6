#!/usr/bin/env python3
"""External-solver adapter: solves an MPS file with HiGHS and prints the
STATUS / OBJ / VAR protocol on stdout."""
import os
import sys

import highspy


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: ext_solver_highs.py MODEL.mps", file=sys.stderr)
        return 2
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    h.setOptionValue("threads", 1)
    h.setOptionValue("mip_rel_gap", 1e-6)
    # With presolve on, HiGHS 1.15 reports suboptimal MILP optima on some
    # small random models (checked against the bundled branch and bound).
    h.setOptionValue("presolve", "off")
    limit = os.environ.get("SPACELOG_EXT_TIME_LIMIT")
    if limit:
        h.setOptionValue("time_limit", float(limit))
    if h.readModel(sys.argv[1]) != highspy.HighsStatus.kOk:
        print("cannot read " + sys.argv[1], file=sys.stderr)
        return 1
    h.run()
    ms = h.getModelStatus()
    S = highspy.HighsModelStatus
    if ms == S.kOptimal:
        status = "optimal"
    elif ms == S.kInfeasible:
        status = "infeasible"
    elif ms in (S.kUnbounded, S.kUnboundedOrInfeasible):
        status = "unbounded"
    else:
        status = "limit"
    print("STATUS " + status)
    info = h.getInfo()
    has_sol = info.primal_solution_status == 2
    print("OBJ %.17g" % (info.objective_function_value if has_sol else float("nan")))
    if has_sol:
        lp = h.getLp()
        values = h.getSolution().col_value
        for name, v in zip(lp.col_names_, values):
            print("VAR %s %.17g" % (name, v))
    return 0


if __name__ == "__main__":
    sys.exit(main())
