#!/usr/bin/env python3
"""Solve an MPS file with SciPy's HiGHS interface and write an mgplan solution file.

Usage: milp_scipy.py MODEL.mps SOLUTION.sol [--time-limit SECONDS]

The solution file starts with `status <Optimal|Infeasible|Unbounded|Limit>` and
`objective <value>`, followed by one `name value` line per column. After the MILP
solve the integer columns are fixed and the LP is re-solved so continuous values are
clean vertex values.
"""

import argparse
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix


def read_mps(path):
    rows = {}  # name -> sense
    row_order = []
    obj_row = None
    cols = {}
    col_order = []
    entries = []  # (row, col, value)
    cost = {}
    rhs = {}
    integer = set()
    lower = {}
    upper = {}
    section = None
    in_int = False
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            tok = line.split()
            if section == "ROWS":
                sense, name = tok
                if sense == "N":
                    if obj_row is None:
                        obj_row = name
                    continue
                rows[name] = sense
                row_order.append(name)
            elif section == "COLUMNS":
                if len(tok) >= 3 and tok[1] == "'MARKER'":
                    in_int = tok[2] == "'INTORG'"
                    continue
                name = tok[0]
                if name not in cols:
                    cols[name] = len(col_order)
                    col_order.append(name)
                    if in_int:
                        integer.add(name)
                for r, v in zip(tok[1::2], tok[2::2]):
                    if r == obj_row:
                        cost[name] = cost.get(name, 0.0) + float(v)
                    else:
                        entries.append((r, name, float(v)))
            elif section == "RHS":
                for r, v in zip(tok[1::2], tok[2::2]):
                    rhs[r] = float(v)
            elif section == "RANGES":
                if tok:
                    sys.exit("RANGES entries are not supported")
            elif section == "BOUNDS":
                kind, name = tok[0], tok[2]
                val = float(tok[3]) if len(tok) > 3 else None
                if kind == "LO":
                    lower[name] = val
                elif kind == "UP":
                    upper[name] = val
                elif kind == "FX":
                    lower[name] = upper[name] = val
                elif kind == "FR":
                    lower[name], upper[name] = -np.inf, np.inf
                elif kind == "MI":
                    lower[name] = -np.inf
                elif kind == "PL":
                    upper[name] = np.inf
                elif kind == "BV":
                    lower[name], upper[name] = 0.0, 1.0
                    integer.add(name)
                else:
                    sys.exit(f"unsupported bound type {kind}")
    n = len(col_order)
    ridx = {r: i for i, r in enumerate(row_order)}
    data = [v for _, _, v in entries]
    ri = [ridx[r] for r, _, _ in entries]
    ci = [cols[c] for _, c, _ in entries]
    a = csr_matrix((data, (ri, ci)), shape=(len(row_order), n))
    lo = np.full(len(row_order), -np.inf)
    hi = np.full(len(row_order), np.inf)
    for i, r in enumerate(row_order):
        b = rhs.get(r, 0.0)
        s = rows[r]
        if s in ("L", "E"):
            hi[i] = b
        if s in ("G", "E"):
            lo[i] = b
    c = np.array([cost.get(name, 0.0) for name in col_order])
    lb = np.array([lower.get(name, 0.0) for name in col_order])
    ub = np.array([upper.get(name, np.inf) for name in col_order])
    integrality = np.array([1 if name in integer else 0 for name in col_order])
    return col_order, c, a, lo, hi, lb, ub, integrality


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("mps")
    parser.add_argument("sol")
    parser.add_argument("--time-limit", type=float, default=None)
    args = parser.parse_args()

    names, c, a, lo, hi, lb, ub, integrality = read_mps(args.mps)
    constraints = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    options = {"mip_rel_gap": 0.0, "disp": False}
    if args.time_limit:
        options["time_limit"] = args.time_limit
    res = milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lb, ub), options=options)

    status = {0: "Optimal", 1: "Limit", 2: "Infeasible", 3: "Unbounded"}.get(res.status, "Limit")
    x = res.x
    if status == "Optimal" and integrality.any():
        fixed = np.where(integrality == 1, np.round(x), np.nan)
        plb = np.where(integrality == 1, fixed, lb)
        pub = np.where(integrality == 1, fixed, ub)
        polish = milp(c, constraints=constraints, bounds=Bounds(plb, pub), options={"disp": False})
        if polish.status == 0:
            x = polish.x
    with open(args.sol, "w") as out:
        out.write(f"status {status}\n")
        objective = float(c @ x) if x is not None else 0.0
        out.write(f"objective {objective!r}\n")
        if x is not None and status in ("Optimal", "Limit"):
            for name, v in zip(names, x):
                if v != 0.0:
                    out.write(f"{name} {float(v)!r}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
