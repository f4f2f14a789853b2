#!/usr/bin/env python3
"""Regenerate the committed oracle fixtures with PARI/GP (through cypari2).

Usage: python3 fixtures/generate_fixtures.py [--out DIR]

Output is deterministic for a given PARI version: keys are sorted, random
curves come from a fixed seed, and decimals are printed at a fixed
precision.
"""

import argparse
import json
import random
from pathlib import Path

import cypari2

pari = cypari2.Pari()
pari.allocatemem(512 * 1024 * 1024, silent=True)
pari("default(realprecision, 60)")

DIGITS = 40

CURVES = {
    "11a1": [0, -1, 1, -10, -20],
    "14a1": [1, 0, 1, 4, -6],
    "15a1": [1, 1, 1, -10, -10],
    "17a1": [1, -1, 1, -1, -14],
    "37a1": [0, 0, 1, -1, 0],
    "43a1": [0, 1, 1, 0, 0],
    "53a1": [1, -1, 1, 0, 0],
    "58a1": [1, -1, 0, -1, 1],
    "61a1": [1, 0, 0, -2, 1],
    "65a1": [1, 0, 0, -1, 0],
    "65a2": [1, 0, 0, 4, 1],
    "77a1": [0, 0, 1, 2, 0],
}

LEVELS = [11, 14, 15, 17, 37, 43, 53, 58, 61, 65, 77]

# curves and conductor bound for twisted L-values
TWIST_CURVES = ["11a1", "37a1", "43a1"]
TWIST_MAX_CONDUCTOR = 30

AP_BOUND = 200

# (curve, ell, degree): rank-zero instances over the degree-`degree` subfield of Q(zeta_ell)
SHA_INSTANCES = [("11a1", 7, 3), ("17a1", 7, 3)]
FORMAL_LOG_CURVES = ["11a1", "17a1", "37a1", "58a1", "65a2"]
FORMAL_LOG_TERMS = 30


def provenance():
    v = pari.version()
    return {
        "tool": "PARI/GP",
        "version": ".".join(str(int(x)) for x in v[:3]),
        "interface": "cypari2",
        "generator": "fixtures/generate_fixtures.py",
    }


def dec(x):
    """Decimal string with DIGITS significant digits."""
    return str(pari(f"strprintf(\"%.{DIGITS}Pg\", {x})"))


def ell(ainvs):
    return f"ellinit({ainvs})"


def write(out, kind, key, payload):
    path = out / kind / f"{key}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"kind": kind, "key": key, "provenance": provenance(), "payload": payload}
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def ap_table(label, a):
    E = ell(a)
    primes = [int(p) for p in pari(f"primes([2, {AP_BOUND}])")]
    ap = {str(p): int(pari(f"ellap({E}, {p})")) for p in primes}
    return {"curve": label, "ainvs": a, "bound": AP_BOUND, "ap": ap}


def reduction_data(a):
    E = ell(a)
    g = pari(f"ellglobalred({E})")
    conductor = int(g[0])
    local = []
    for p in [int(q) for q in pari(f"factor({conductor})[,1]")]:
        lr = pari(f"elllocalred({E}, {p})")
        local.append({
            "prime": p,
            "conductor_exponent": int(lr[0]),
            "kodaira": kodaira_symbol(int(lr[1])),
            "tamagawa": int(lr[3]),
            "ap": int(pari(f"ellap({E}, {p})")),
        })
    minimal = [int(x) for x in pari(f"ellminimalmodel({E})[1..5]")]
    return {"ainvs": a, "conductor": conductor, "minimal_model": minimal,
            "discriminant": str(pari(f"ellminimalmodel({E}).disc")), "local": local}


def kodaira_symbol(k):
    # PARI codes: 1 = I0, 2 = II, 3 = III, 4 = IV, 4+n = I_n, -1 = I0*,
    # -2 = II*, -3 = III*, -4 = IV*, -4-n = I_n*
    if k == 1:
        return "I0"
    if k == 2:
        return "II"
    if k == 3:
        return "III"
    if k == 4:
        return "IV"
    if k > 4:
        return f"I{k - 4}"
    if k == -1:
        return "I0*"
    if k == -2:
        return "II*"
    if k == -3:
        return "III*"
    if k == -4:
        return "IV*"
    return f"I{-k - 4}*"


def period(label, a):
    E = ell(a)
    disc = int(pari(f"{E}.disc"))
    # imaginary period: the generator of the purely imaginary part of the lattice
    imag = pari(f"my(w = {E}.omega); if ({disc} > 0, imag(w[2]), 2 * imag(w[2]))")
    return {"curve": label, "ainvs": a, "precision_digits": DIGITS,
            "omega_plus": dec(f"real({E}.omega[1])"),
            "omega_minus": dec(f"abs({imag})"),
            "c_infty": 2 if disc > 0 else 1}


def lvalue(label, a):
    E = ell(a)
    rank = int(pari(f"ellanalyticrank({E})[1]"))
    L1 = dec(f"lfun({E}, 1)")
    torsion = int(pari(f"elltors({E})[1]"))
    out = {"curve": label, "ainvs": a, "precision_digits": DIGITS, "analytic_rank": rank,
           "L1": L1, "root_number": int(pari(f"ellrootno({E})")), "torsion": torsion}
    if rank == 0:
        # analytic order of Sha from the rank-0 BSD formula
        sha = pari(f"my(e = {E}, g = ellglobalred(e)); "
                   f"lfun(e, 1) * elltors(e)[1]^2 / (real(e.omega[1]) * if (e.disc > 0, 2, 1) * g[3])")
        out["sha_analytic"] = int(pari(f"round({sha})"))
        out["sha_analytic_decimal"] = dec(sha)
    else:
        out["L1_derivative"] = dec(f"lfun({E}, 1, 1)")
    return out


def twisted_lvalues(label, a):
    E = ell(a)
    N = int(pari(f"ellglobalred({E})[1]"))
    entries = []
    for c in range(1, TWIST_MAX_CONDUCTOR + 1):
        if pari(f"gcd({c}, {N})") != 1:
            continue
        G = f"znstar({c}, 1)"
        # enumerate every character of (Z/c)^*, keep primitive ones
        cyc = [int(x) for x in pari(f"{G}.cyc")]
        for chi in all_vectors(cyc):
            chi_s = str(chi).replace(" ", "")
            if int(pari(f"zncharconductor({G}, {chi_s})")) != c:
                continue
            parity = int(pari(f"zncharisodd({G}, {chi_s})"))
            units = [u for u in range(1, c + 1) if int(pari(f"gcd({u}, {c})")) == 1]
            values = {str(u % c): str(pari(f"chareval({G}, {chi_s}, {u})")) for u in units}
            if c == 1:
                val = pari(f"lfun({E}, 1)")
                re, im = dec(f"real({val})"), dec(f"imag({val})")
            else:
                val = f"lfun(lfuntwist({E}, [{G}, {chi_s}]), 1)"
                re, im = dec(f"real({val})"), dec(f"imag({val})")
            entries.append({"conductor": c, "odd": bool(parity), "values": values,
                            "L_re": re, "L_im": im})
    return {"curve": label, "ainvs": a, "precision_digits": DIGITS,
            "convention": "L(E x chi, s) = sum a_n chi(n) n^-s at s = 1; values[a] = t with chi(a) = exp(2 pi i t)",
            "twists": entries}


def all_vectors(cyc):
    vecs = [[]]
    for n in cyc:
        vecs = [v + [k] for v in vecs for k in range(n)]
    return vecs


def dimension(N):
    return {"level": N, "weight": 2, "cuspidal_plus_dimension": int(pari(f"mfdim([{N}, 2], 1)")),
            "genus": int(pari(f"mfdim([{N}, 2], 1)")), "new_dimension": int(pari(f"mfdim([{N}, 2], 0)"))}


def random_reduction_batch(count=80, seed=20241):
    rng = random.Random(seed)
    curves = []
    while len(curves) < count:
        a = [rng.randint(-1, 1), rng.randint(-3, 3), rng.randint(-1, 1), rng.randint(-60, 60), rng.randint(-200, 200)]
        if int(pari(f"ellinit({a}).disc")) == 0:
            continue
        d = reduction_data(a)
        d["torsion"] = int(pari(f"elltors(ellinit({a}))[1]"))
        curves.append(d)
    # scaled non-minimal models exercise the minimal-model code path
    for a in [[0, 0, 0, -16, 0], [0, 0, 0, 0, 64], [0, 0, 0, -432, 8208], [0, 0, 0, -1296, -11664]]:
        d = reduction_data(a)
        d["torsion"] = int(pari(f"elltors(ellinit({a}))[1]"))
        curves.append(d)
    return {"seed": seed, "curves": curves}


def sha_over_subfield(label, a, l, degree):
    """Analytic order of Sha over the real cyclic subfield, from L(E/F, 1) and ellbsd."""
    nf = f"nfinit(polsubcyclo({l}, {degree}))"
    E = f"ellinit({a}, {nf})"
    L = pari(f"lfun({E}, 1)")
    c = pari(f"ellbsd({E})")
    ratio = pari(f"{L} / {c}")
    order = int(pari(f"round({ratio})"))
    return {
        "curve": label,
        "ainvs": a,
        "ell": l,
        "degree": degree,
        "field_polynomial": str(pari(f"polsubcyclo({l}, {degree})")),
        "L_E_F_1": dec(L),
        "bsd_ratio": dec(ratio),
        "analytic_sha_order": order,
        "torsion_over_F": int(pari(f"elltors({E})[1]")),
    }


def formal_log(label, a):
    """Coefficients c_1..c_n of the formal logarithm in t = -x/y."""
    n = FORMAL_LOG_TERMS
    series = pari(f"ellformallog({ell(a)}, {n + 1}, 't)")
    coeffs = [str(pari(f"polcoef({series}, {k}, 't)")) for k in range(1, n + 1)]
    return {"curve": label, "ainvs": a, "terms": n, "coefficients": coeffs}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent))
    ap.add_argument("--only", help="regenerate a single fixture kind")
    args = ap.parse_args()
    out = Path(args.out)
    if args.only == "sha" or args.only is None:
        for label, l, degree in SHA_INSTANCES:
            write(out, "sha", f"{label}_{l}_{degree}", sha_over_subfield(label, CURVES[label], l, degree))
    if args.only == "formal_log" or args.only is None:
        for label in FORMAL_LOG_CURVES:
            write(out, "formal_log", label, formal_log(label, CURVES[label]))
    if args.only is not None:
        return
    for label, a in CURVES.items():
        write(out, "ap_table", label, ap_table(label, a))
        red = reduction_data(a)
        red["curve"] = label
        write(out, "reduction", label, red)
        write(out, "torsion", label, {"curve": label, "ainvs": a, "order": int(pari(f"elltors({ell(a)})[1]"))})
        write(out, "period", label, period(label, a))
        write(out, "lvalue", label, lvalue(label, a))
    for label in TWIST_CURVES:
        write(out, "lvalue", label + "_twists", twisted_lvalues(label, CURVES[label]))
    for N in LEVELS:
        write(out, "dimension", f"N{N}", dimension(N))
    write(out, "reduction", "random_batch", random_reduction_batch())


if __name__ == "__main__":
    main()
