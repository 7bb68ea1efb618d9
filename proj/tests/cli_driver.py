#!/usr/bin/env python3
"""End-to-end driver for the fls CLI: exit codes, report fields, determinism."""

import json
import subprocess
import sys

FLS = sys.argv[1]
FIX = sys.argv[2]

failures = []


def run(*args, expect_code=0):
    proc = subprocess.run([FLS, *args], capture_output=True, text=True)
    if proc.returncode != expect_code:
        failures.append(f"{' '.join(args)}: exit {proc.returncode} != {expect_code}\n{proc.stderr}")
        return None
    if expect_code != 0:
        return None
    try:
        return json.loads(proc.stdout)
    except json.JSONDecodeError as exc:
        failures.append(f"{' '.join(args)}: bad JSON ({exc})")
        return None


def check(label, cond):
    if not cond:
        failures.append(label)


# classify: closed-form constant
doc = run("classify", "--spec", f"{FIX}/constant3.json")
if doc:
    check("classify classification", doc["classification"] == "NoInverse")
    check("classify method", doc["method"] == "ClosedForm")
    check("classify schema", doc["schema_version"] == 1)

# invert: the regular ones series has exactly one inverse, 1 - z
doc = run("invert", "--spec", f"{FIX}/ones_regular.json", "--window", "-16", "16",
          "--depths", "16,32,64,128,256")
if doc:
    check("invert classification", doc["classification"] == "Unique")
    coeffs = {tuple(e[:1])[0]: (e[1], e[2]) for e in doc["witness"]["coefficients"]}
    check("invert witness c0", abs(coeffs.get(0, (0, 0))[0] - 1.0) < 1e-9)
    check("invert witness c1", abs(coeffs.get(1, (0, 0))[0] + 1.0) < 1e-9)

# invert: the family case carries a homogeneous direction
doc = run("invert", "--spec", f"{FIX}/one_minus_z.json", "--window", "-16", "16",
          "--depths", "16,32,64,128,256")
if doc:
    check("family classification", doc["classification"] == "Family")
    check("family arity", doc["parameter_arity"] == 1)
    check("family direction", len(doc.get("homogeneous", [])) == 1)

# invert with explicit strict/omega methods
doc = run("invert", "--spec", f"{FIX}/monomial_3z2.json", "--method", "strict",
          "--depths", "8,16,32,64", "--window", "-4", "4")
if doc:
    check("strict honesty", doc["classification"] == "Undetermined")
doc = run("invert", "--spec", f"{FIX}/monomial_3z2.json", "--method", "omega",
          "--depths", "8,16,32,64", "--window", "-4", "4")
if doc:
    check("omega honesty", doc["classification"] == "Undetermined")

# omega with an explicit splitting-sequence spec (parse path)
doc = run("invert", "--spec", f"{FIX}/ones_regular.json", "--method", "omega",
          "--split", f"{FIX}/split_e1.json", "--depths", "8,16,32,64", "--window", "-4", "4")
if doc:
    check("omega split parse", doc["classification"] == "Undetermined")
    check("omega evidence", "a2_minors" in doc["evidence"])

# multiply: S_1 on the window
doc = run("multiply", "--a", f"{FIX}/one_minus_z.json", "--b", f"{FIX}/ones_regular.json",
          "--window", "-8", "8")
if doc:
    check("multiply converged", doc["all_converged"] is True)
    check("multiply unit", doc["coefficients"] == [[0, 1.0, 0.0]])

# a family member of 1 - z built as a sum spec is an exact inverse too
doc = run("multiply", "--a", f"{FIX}/one_minus_z.json", "--b", f"{FIX}/family_c25.json",
          "--window", "-8", "8")
if doc:
    check("family member multiply", doc["coefficients"] == [[0, 1.0, 0.0]])

# power: both routes agree on (1-z)^3
for route_flag in ([], ["--multinomial"]):
    doc = run("power", "--spec", f"{FIX}/one_minus_z.json", "--k", "3",
              "--window", "-2", "4", *route_flag)
    if doc:
        vals = {e["n"]: e["outcome"]["value"][0] for e in doc["coefficients"]
                if e["outcome"]["state"] == "Converged"}
        check(f"power {route_flag}", abs(vals.get(1, 0) + 3.0) < 1e-9)

# compose, check-rd, check-cr
doc = run("compose", "--g", f"{FIX}/alt_inv_sqrt.json", "--f", f"{FIX}/s_one.json",
          "--finv", f"{FIX}/s_one.json", "--window", "-2", "2")
if doc:
    states = {e["n"]: e["outcome"]["state"] for e in doc["coefficients"]}
    check("compose states", all(s == "Converged" for s in states.values()))

doc = run("check-rd", "--a", f"{FIX}/alt_inv_sqrt.json", "--b", f"{FIX}/alt_doubled.json",
          "--g", f"{FIX}/s_one.json", "--finv", f"{FIX}/s_one.json", "--window", "-2", "2")
if doc:
    check("rd verdicts", doc["left_exists"] is True and doc["right_exists"] is False)

doc = run("check-cr", "--f", f"{FIX}/inv_square.json", "--g", f"{FIX}/s_one.json",
          "--window", "-2", "2")
if doc:
    check("cr verdicts", doc["left_exists"] is True and doc["right_exists"] is False)

# radii and boundary
doc = run("radii", "--spec", f"{FIX}/two_sided_geometric.json")
if doc:
    check("radii r", abs(doc["r"] - 0.5) <= 0.025)
    check("radii R", abs(doc["R"] - 1.0) <= 0.05)

doc = run("boundary", "--spec", f"{FIX}/regular_half_geometric.json",
          "--point-a", "2", "0", "--kmax", "0")
if doc:
    check("boundary diverged",
          doc["regular_hypothesis"][0]["outcome"]["state"] == "Diverged")

doc = run("boundary", "--spec", f"{FIX}/principal_third_geometric.json",
          "--point-b", "0.3333333333333333", "0", "--kmax", "0")
if doc:
    check("inner boundary diverged",
          doc["principal_hypothesis"][0]["outcome"]["state"] == "Diverged")

# rejected input paths exit with code 2
run("classify", "--spec", f"{FIX}/does_not_exist.json", expect_code=2)
run("boundary", "--spec", f"{FIX}/regular_half_geometric.json",
    "--point-a", "9", "0", expect_code=2)

# determinism: byte-identical reports for identical invocations
a = subprocess.run([FLS, "invert", "--spec", f"{FIX}/ones_regular.json", "--window", "-8", "8",
                    "--depths", "16,32,64,128"], capture_output=True, text=True)
b = subprocess.run([FLS, "invert", "--spec", f"{FIX}/ones_regular.json", "--window", "-8", "8",
                    "--depths", "16,32,64,128"], capture_output=True, text=True)
check("determinism", a.stdout == b.stdout and len(a.stdout) > 0)

if failures:
    print("CLI driver failures:")
    for f in failures:
        print(" -", f)
    sys.exit(1)
print(f"cli driver: all checks passed")
