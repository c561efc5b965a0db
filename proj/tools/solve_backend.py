#!/usr/bin/env python3
"""MILP solve bridge.

Reads a batch of problems from a JSON file, solves each with the HiGHS
solver bundled in scipy, and writes a JSON file with one result per
problem. A problem is either given inline as sparse arrays or as a path
to an MPS file.

Usage: solve_backend.py INPUT.json OUTPUT.json
"""

import json
import math
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

INF = float("inf")


def parse_mps(path):
    """Parse a (free-format) MPS file into the inline problem dict."""
    rows = []  # (name, sense) excluding objective
    row_index = {}
    obj_row = None
    cols = []  # names in order of first appearance
    col_index = {}
    col_kind = []  # 'c' or 'i'
    obj = {}
    entries = {}  # (row_idx, col_idx) -> coef
    rhs = {}
    obj_offset = 0.0
    lb = {}
    ub = {}
    explicit_lb = set()

    section = None
    integer_mode = False
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0].upper()
                continue
            fields = line.split()
            if section == "ROWS":
                sense, name = fields[0].upper(), fields[1]
                if sense == "N":
                    if obj_row is None:
                        obj_row = name
                else:
                    row_index[name] = len(rows)
                    rows.append((name, sense))
            elif section == "COLUMNS":
                if len(fields) >= 3 and fields[1] == "'MARKER'":
                    integer_mode = fields[2] == "'INTORG'"
                    continue
                cname = fields[0]
                if cname not in col_index:
                    col_index[cname] = len(cols)
                    cols.append(cname)
                    col_kind.append("i" if integer_mode else "c")
                ci = col_index[cname]
                for k in range(1, len(fields) - 1, 2):
                    rname, val = fields[k], float(fields[k + 1])
                    if rname == obj_row:
                        obj[ci] = obj.get(ci, 0.0) + val
                    else:
                        key = (row_index[rname], ci)
                        entries[key] = entries.get(key, 0.0) + val
            elif section == "RHS":
                for k in range(1, len(fields) - 1, 2):
                    rname, val = fields[k], float(fields[k + 1])
                    if rname == obj_row:
                        obj_offset = -val
                    else:
                        rhs[row_index[rname]] = val
            elif section == "RANGES":
                raise ValueError("RANGES section not supported")
            elif section == "BOUNDS":
                btype = fields[0].upper()
                cname = fields[2]
                ci = col_index[cname]
                val = float(fields[3]) if len(fields) > 3 else 0.0
                if btype in ("UP", "UI"):
                    ub[ci] = val
                    # Classic MPS quirk: a negative upper bound with no
                    # explicit lower implies a free lower bound.
                    if val < 0 and ci not in explicit_lb:
                        lb[ci] = -INF
                elif btype in ("LO", "LI"):
                    lb[ci] = val
                    explicit_lb.add(ci)
                elif btype == "FX":
                    lb[ci] = ub[ci] = val
                elif btype == "FR":
                    lb[ci] = -INF
                    ub[ci] = INF
                elif btype == "MI":
                    lb[ci] = -INF
                elif btype == "PL":
                    ub[ci] = INF
                elif btype == "BV":
                    lb[ci], ub[ci] = 0.0, 1.0
                    col_kind[ci] = "i"
                else:
                    raise ValueError("unsupported bound type " + btype)

    n = len(cols)
    sense_map = {"L": "<=", "G": ">=", "E": "="}
    prob = {
        "minimize": True,
        "obj": [obj.get(i, 0.0) for i in range(n)],
        "offset": obj_offset,
        "lb": [lb.get(i, 0.0) for i in range(n)],
        "ub": [ub.get(i, INF) for i in range(n)],
        "kind": "".join(col_kind),
        "rows": [
            {"sense": sense_map[rows[ri][1]], "rhs": rhs.get(ri, 0.0), "terms": []}
            for ri in range(len(rows))
        ],
    }
    for (ri, ci), val in entries.items():
        prob["rows"][ri]["terms"].append([ci, val])
    return prob


def to_float(v, default):
    if v is None:
        return default
    if v in ("inf", "+inf"):
        return INF
    if v == "-inf":
        return -INF
    return float(v)


def solve_one(prob, options):
    if "mps" in prob:
        prob = parse_mps(prob["mps"])
    n = len(prob["obj"])
    if n == 0:
        return {"status": "optimal", "objective": prob.get("offset", 0.0),
                "dual_bound": prob.get("offset", 0.0), "gap": 0.0, "x": []}

    sign = 1.0 if prob.get("minimize", True) else -1.0
    c = sign * np.asarray(prob["obj"], dtype=float)
    lb = np.array([to_float(v, 0.0) for v in prob["lb"]])
    ub = np.array([to_float(v, INF) for v in prob["ub"]])
    integrality = np.array([0 if k == "c" else 1 for k in prob["kind"]])

    constraints = []
    rows = prob.get("rows", [])
    if rows:
        data, ri, ci = [], [], []
        clb, cub = [], []
        for r, row in enumerate(rows):
            for var, coef in row["terms"]:
                ri.append(r)
                ci.append(var)
                data.append(coef)
            rhs = to_float(row["rhs"], 0.0)
            if row["sense"] == "<=":
                clb.append(-INF)
                cub.append(rhs)
            elif row["sense"] == ">=":
                clb.append(rhs)
                cub.append(INF)
            else:
                clb.append(rhs)
                cub.append(rhs)
        A = csr_matrix((data, (ri, ci)), shape=(len(rows), n))
        constraints = [LinearConstraint(A, clb, cub)]

    res = milp(c=c, constraints=constraints, integrality=integrality,
               bounds=Bounds(lb, ub), options=options)

    offset = prob.get("offset", 0.0)
    has_x = res.x is not None
    status_map = {0: "optimal", 2: "infeasible", 3: "unbounded"}
    if res.status == 1:
        status = "time-limit-feasible" if has_x else "time-limit"
    else:
        status = status_map.get(res.status, "error")
    out = {"status": status, "message": str(res.message)}
    if has_x:
        out["objective"] = sign * float(res.fun) + offset
        out["x"] = [float(v) for v in res.x]
        gap = getattr(res, "mip_gap", None)
        dual = getattr(res, "mip_dual_bound", None)
        out["gap"] = float(gap) if gap is not None and math.isfinite(gap) else 0.0
        out["dual_bound"] = (sign * float(dual) + offset
                             if dual is not None and math.isfinite(dual)
                             else out["objective"])
    return out


def main():
    if len(sys.argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    with open(sys.argv[1]) as fh:
        batch = json.load(fh)
    options = {
        "mip_rel_gap": batch.get("mip_gap", 0.005),
        "time_limit": batch.get("time_limit", 600.0),
    }
    results = []
    for prob in batch["problems"]:
        try:
            results.append(solve_one(prob, options))
        except Exception as exc:  # propagate per-problem, keep the batch going
            results.append({"status": "error", "message": repr(exc)})
    with open(sys.argv[2], "w") as fh:
        json.dump({"results": results}, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main())
