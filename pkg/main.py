"""
obstruction_lab command line.
- verify-all: inverse, homology, metabolizers, linking conditions, ledger and
  the d-invariant bound for every m of the range
- branched-cover / cobordism / theorem: the individual stages per m
- family: companion parameter selection with the rho verification matrix
- certify: bipolarity certificates (example knots or a JSON knot expression)
- d-lens: correction terms of a lens space
- invariants: classical invariants of Seifert matrices from a JSON document
Reports are JSON with exact rationals ("schema": "1"); exit 0 iff every
verdict is "pass", 1 on a failed verdict or I/O error, 2 on usage errors.
"""

import os
import sys
import asyncio
import argparse
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import ValidationError

load_dotenv()

from formatting import render_report, to_jsonable, verdict   # noqa: E402
from exact_core import CertificationError   # noqa: E402
from seifert_invariants import (   # noqa: E402
    SeifertMatrix,
    alexander_module,
    alexander_polynomial,
    blanchfield_metabolizers,
    levine_tristram,
    rho_average,
    signature_jumps,
)
from branched_cover import (   # noqa: E402
    brute_force_metabolizers,
    corrupt_inverse,
    homology,
    homology_via_seifert,
    is_z2_homology_sphere,
    linking_order,
    mersenne,
    metabolizers,
    spinc_offset_check,
    verify_inverse,
)
from cobordism import (   # noqa: E402
    K0_SEIFERT,
    characteristic_check,
    characteristic_equivalence,
    condition_one,
    condition_two,
    ledger,
)
from companion_family import case1_budget, choose_family_parameters, verification_matrix   # noqa: E402
from bipolarity import (   # noqa: E402
    NEGATIVE,
    POSITIVE,
    certificate_to_dict,
    certify_example_knots,
    check_certificate,
    derive,
    expr_to_dict,
)
from dinvariant import (   # noqa: E402
    calibrate,
    case_two_pipeline,
    conjugate_index,
    lens_d,
    spin_index,
)
from data.fact_base import get_fact_base   # noqa: E402
from data.json_io import RunConfig, load_knot_expr, load_seifert_documents   # noqa: E402

OBSTRUCTION_LAB_THREADS = max(1, int(os.getenv("OBSTRUCTION_LAB_THREADS", "4")))
OBSTRUCTION_LAB_LOG_LEVEL = os.getenv("OBSTRUCTION_LAB_LOG_LEVEL", "WARNING").upper()

BRUTE_FORCE_ORACLE_MAX_Q = 31

logger = logging.getLogger("obstruction_lab")


class UsageError(ValueError):
    pass


# -------------------------
# Argument helpers
# -------------------------
def parse_m_range(text: str, odd_only: bool = False) -> List[int]:
    """'3..13', '3,5,7' or '9'."""
    values: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                values.extend(range(int(lo), int(hi) + 1))
            else:
                values.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse m-range {text!r}") from None
    if odd_only:
        values = [m for m in values if m % 2]
    if not values:
        raise UsageError(f"m-range {text!r} is empty")
    if any(m < 2 for m in values):
        raise UsageError("cover degrees must be >= 2")
    return values


def parse_primes(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse primes {text!r}") from None


# -------------------------
# Stage runner (one verdict per stage, errors become failed verdicts)
# -------------------------
def run_stage(name: str, m: Optional[int], fn: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    try:
        out = fn()
        out.setdefault("verdict", verdict(all(v == "pass" for v in collect_verdicts(out))))
        return out
    except (ValueError, ArithmeticError) as e:
        logger.error("[VERIFY] %s failed%s: %s", name, f" for m={m}" if m is not None else "", e)
        return {"verdict": verdict(False), "error": str(e)}


def collect_verdicts(node: Any) -> List[str]:
    if isinstance(node, dict):
        found = [node["verdict"]] if isinstance(node.get("verdict"), str) else []
        for k, v in node.items():
            if k != "verdict":
                found.extend(collect_verdicts(v))
        return found
    if isinstance(node, list):
        return [v for item in node for v in collect_verdicts(item)]
    return []


async def fan_out(fn: Callable[[int], Dict[str, Any]], values: Sequence[int]) -> List[Dict[str, Any]]:
    """Run fn per value on worker threads, at most OBSTRUCTION_LAB_THREADS at once; input order kept."""
    sem = asyncio.Semaphore(OBSTRUCTION_LAB_THREADS)

    async def one(v: int) -> Dict[str, Any]:
        async with sem:
            return await asyncio.to_thread(fn, v)

    return list(await asyncio.gather(*(one(v) for v in values)))


# -------------------------
# Per-m stages
# -------------------------
def stage_inverse(m: int, corrupt: bool) -> Dict[str, Any]:
    def go():
        pinv = corrupt_inverse(m) if corrupt else None
        ok = verify_inverse(m, pinv)
        return {"corrupted": corrupt, "verdict": verdict(ok)}
    return run_stage("inverse", m, go)


def stage_homology(m: int) -> Dict[str, Any]:
    def go():
        g = homology(m)
        q = mersenne(m)
        via_seifert = homology_via_seifert(K0_SEIFERT, m)
        ok = (
            g.form[0][0] == 0
            and g.form[1][1] == 0
            and linking_order(g) == q
            and tuple(via_seifert) == (q, q)
            and spinc_offset_check(m)
        )
        return {
            "divisors": list(g.divisors),
            "linking_form": g.form,
            "x2_correction": g.x2_correction,
            "via_seifert": list(via_seifert),
            "z2_homology_sphere": is_z2_homology_sphere(m),
            "verdict": verdict(ok),
        }
    return run_stage("homology", m, go)


def stage_metabolizers(m: int) -> Dict[str, Any]:
    def go():
        g = homology(m)
        found = metabolizers(g)
        span_x1, span_x2 = g.span([(1, 0)]), g.span([(0, 1)])
        ok = any(mb.elements == span_x1 for mb in found) and any(mb.elements == span_x2 for mb in found)
        out: Dict[str, Any] = {
            "method": found.method,
            "count": len(found),
            "metabolizers": [{"generators": mb.generators, "order": mb.order} for mb in found],
        }
        if mersenne(m) <= BRUTE_FORCE_ORACLE_MAX_Q:
            oracle = brute_force_metabolizers(g)
            out["oracle_agrees"] = oracle.element_sets() == found.element_sets()
            ok = ok and out["oracle_agrees"]
        out["verdict"] = verdict(ok)
        return out
    return run_stage("metabolizers", m, go)


def stage_conditions(m: int, scope: str) -> Dict[str, Any]:
    def go():
        one = condition_one(m)
        two = condition_two(m, scope)
        char = characteristic_check(m)
        same = characteristic_equivalence(m, scope)
        return {
            "condition_one": {"total": one.total, "nonzero_terms": one.nonzero_terms, "verdict": verdict(one.passed)},
            "condition_two": {
                "scope": scope,
                "checks": len(two.checks),
                "first_column_parity": two.column_parity,
                "failing": [c.label for c in two.checks if not c.passed],
                "verdict": verdict(two.passed),
            },
            "characteristic": {
                "e0_square": char.e0_square,
                "w_hat_square": char.w_hat_square,
                "failing_indices": list(char.failing_indices),
                "matches_condition_two": same,
                "verdict": verdict(char.passed and same),
            },
        }
    return run_stage("conditions", m, go)


def stage_ledger(m: int) -> Dict[str, Any]:
    def go():
        book = ledger(m)
        return {
            "b2": {"W0": book.b2_w0, "W_prime": book.b2_w_prime, "W_hat": book.b2_w_hat, "W": book.b2_w},
            "signature": {"W0": book.sign_w0, "W_prime": book.sign_w_prime, "W_hat": book.sign_w_hat, "W": book.sign_w},
            "negative_definite": book.negative_definite,
            "verdict": verdict(book.matches_expected and book.negative_definite),
        }
    return run_stage("ledger", m, go)


def stage_theorem(m: int) -> Dict[str, Any]:
    def go():
        report = case_two_pipeline(m)
        a = report.assembly
        return {
            "d_L31": a.d_l31,
            "d_A": a.d_a,
            "d_B_bound": a.d_b_bound,
            "c1_square": a.c1_square,
            "b2": a.b2,
            "ym_bound": a.ym_bound,
            "rhs_bound": a.rhs_bound,
            "final_bound": a.final_bound,
            "hypothesis_flag": a.hypothesis_flag,
            "obstruction": [
                {"generators": v.generators, "contains_x1": v.contains_x1, "outcome": v.outcome}
                for v in report.verdicts
            ],
            "conditional_on": report.hypothesis,
            "verdict": verdict(a.passed and report.passed),
        }
    return run_stage("theorem", m, go)


def _odd_only(m: int, fn: Callable[[], Dict[str, Any]]) -> Dict[str, Any]:
    if m < 3 or m % 2 == 0:
        return {"skipped": "needs odd m >= 3"}
    return fn()


def verify_one(m: int, config: RunConfig) -> Dict[str, Any]:
    return {
        "m": m,
        "inverse": stage_inverse(m, config.corrupt_inverse),
        "homology": stage_homology(m),
        "metabolizers": stage_metabolizers(m),
        "conditions": _odd_only(m, lambda: stage_conditions(m, config.scope)),
        "ledger": _odd_only(m, lambda: stage_ledger(m)),
        "theorem": _odd_only(m, lambda: stage_theorem(m)),
    }


# -------------------------
# Commands
# -------------------------
async def cmd_verify_all(config: RunConfig) -> Dict[str, Any]:
    return {"command": "verify-all", "results": await fan_out(lambda m: verify_one(m, config), config.m_values)}


async def cmd_branched_cover(config: RunConfig) -> Dict[str, Any]:
    def one(m: int) -> Dict[str, Any]:
        return {
            "m": m,
            "inverse": stage_inverse(m, config.corrupt_inverse),
            "homology": stage_homology(m),
            "metabolizers": stage_metabolizers(m),
        }
    return {"command": "branched-cover", "results": await fan_out(one, config.m_values)}


async def cmd_cobordism(config: RunConfig) -> Dict[str, Any]:
    def one(m: int) -> Dict[str, Any]:
        return {
            "m": m,
            "conditions": _odd_only(m, lambda: stage_conditions(m, config.scope)),
            "ledger": _odd_only(m, lambda: stage_ledger(m)),
        }
    return {"command": "cobordism", "results": await fan_out(one, config.m_values)}


async def cmd_theorem(config: RunConfig) -> Dict[str, Any]:
    def one(m: int) -> Dict[str, Any]:
        return {"m": m, "theorem": _odd_only(m, lambda: stage_theorem(m))}
    return {"command": "theorem", "results": await fan_out(one, config.m_values)}


async def cmd_family(config: RunConfig) -> Dict[str, Any]:
    def go():
        selection = choose_family_parameters(config.primes, config.n)
        matrix = verification_matrix(selection, exact=config.exact)
        rows = []
        for row, bound in zip(selection.rows, matrix.lower_bounds):
            budget = case1_budget(config.n, bound * row.multiplicity)
            rows.append({
                "i": row.index,
                "p": row.p,
                "a": row.a,
                "b": row.b,
                "jump_x_interval": list(row.x_interval),
                "interval": [row.lower, row.upper],
                "N": row.multiplicity,
                "candidates_tried": row.candidates_tried,
                "flag": row.flag,
                "rho_lower_bound_per_copy": bound,
                "budget": {"total": budget.total_budget, "contradiction": budget.contradiction,
                           "verdict": verdict(budget.contradiction)},
            })
        return {
            "selection": rows,
            "vanishing": [{"i": i, "j": j, "rho_vanishes": ok} for i, j, ok in matrix.vanishing],
            "exact_rho": matrix.exact_rho,
            "verdict": verdict(matrix.passed),
        }
    body = await asyncio.to_thread(run_stage, "family", None, go)
    return {"command": "family", "primes": config.primes, "n": config.n, **body}


async def cmd_certify(config: RunConfig, i: int) -> Dict[str, Any]:
    facts = get_fact_base()

    def examples():
        pair = certify_example_knots(config.n, i, facts)
        ok = check_certificate(pair.negative, facts) and check_certificate(pair.positive, facts)
        return {
            "knot": f"K_{i}",
            "negative": certificate_to_dict(pair.negative),
            "negative_nodes": pair.negative.node_count(),
            "positive": certificate_to_dict(pair.positive),
            "verdict": verdict(ok),
        }

    def expression():
        expr = load_knot_expr(config.input_path, facts)
        out: Dict[str, Any] = {"expr": expr_to_dict(expr)}
        ok = True
        for polarity in (NEGATIVE, POSITIVE):
            cert = derive(expr, polarity)
            if cert is None:
                out[polarity] = None
                continue
            out[polarity] = certificate_to_dict(cert)
            ok = ok and check_certificate(cert, facts)
        out["verdict"] = verdict(ok)
        return out

    body = run_stage("certify", None, expression if config.input_path else examples)
    return {"command": "certify", **body}


def cmd_d_lens(p: int, q: int, i: Optional[int]) -> Dict[str, Any]:
    def go():
        indices = [i] if i is not None else list(range(p))
        values = [{"i": k, "d": lens_d(p, q, k), "conjugate": conjugate_index(p, q, k)} for k in indices]
        symmetric = all(lens_d(p, q, v["conjugate"]) == v["d"] for v in values)
        spin = spin_index(p, q)
        return {
            "p": p,
            "q": q,
            "values": values,
            "spin_indices": list(spin.indices),
            "spin_flag": spin.flag,
            "conjugation_symmetric": symmetric,
            "verdict": verdict(symmetric),
        }
    return {"command": "d-lens", **run_stage("d-lens", None, go)}


def invariants_of(seifert: SeifertMatrix) -> Dict[str, Any]:
    def go():
        jumps = signature_jumps(seifert)
        out: Dict[str, Any] = {
            "name": seifert.name,
            "genus": seifert.genus,
            "alexander": alexander_polynomial(seifert),
            "signature_at_minus_one": levine_tristram(seifert, 1, 2),
            "jump_count": jumps.jump_count(),
            "rho": {str(d): rho_average(seifert, d) for d in (2, 3, 5, 7)},
        }
        if seifert.size:
            module = alexander_module(seifert)
            out["alexander_module"] = [str(f) for f in module.cyclic_factors]
            try:
                out["blanchfield_metabolizers"] = [s.label() for s in blanchfield_metabolizers(seifert)]
            except ValueError as e:
                out["blanchfield_metabolizers"] = {"unsupported": str(e)}
        return out
    return run_stage("invariants", None, go)


def cmd_invariants(config: RunConfig) -> Dict[str, Any]:
    seiferts = load_seifert_documents(config.input_path)
    return {"command": "invariants", "results": [invariants_of(s) for s in seiferts]}


# -------------------------
# Entry point
# -------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="obstruction_lab", description="Exact checks for the bipolar filtration argument")
    parser.add_argument("--output", help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_m(p: argparse.ArgumentParser):
        p.add_argument("--m", required=True, help="cover degrees: '3..13', '3,5,7' or '9'")
        p.add_argument("--odd", action="store_true", help="keep only odd m")

    p = sub.add_parser("verify-all", help="full per-m suite")
    with_m(p)
    p.add_argument("--scope", choices=["all", "families", "both"], default="all")
    p.add_argument("--corrupt-inverse", action="store_true", help="perturb P^-1 (soundness probe)")

    p = sub.add_parser("branched-cover", help="P(m), its inverse, H_1 and metabolizers")
    with_m(p)
    p.add_argument("--corrupt-inverse", action="store_true")

    p = sub.add_parser("cobordism", help="linking conditions and the b2/signature ledger")
    with_m(p)
    p.add_argument("--scope", choices=["all", "families", "both"], default="all")

    p = sub.add_parser("theorem", help="d-invariant bound and obstruction per m")
    with_m(p)

    p = sub.add_parser("family", help="companion parameters for increasing odd primes")
    p.add_argument("--primes", required=True, help="comma separated, e.g. 3,5,7")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--exact", action="store_true", help="also evaluate rho on realized Seifert matrices")

    p = sub.add_parser("certify", help="bipolarity certificates")
    p.add_argument("input", nargs="?", help="knot expression JSON (default: the example knots)")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--i", type=int, default=1)

    p = sub.add_parser("d-lens", help="d-invariants of L(p,q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("i", type=int, nargs="?")

    p = sub.add_parser("invariants", help="classical invariants of Seifert matrices")
    p.add_argument("input", help="JSON {name, matrix} or a list of them")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, Any] = {"command": args.command, "output_path": args.output}
    if hasattr(args, "m"):
        values["m_values"] = parse_m_range(args.m, args.odd)
    if getattr(args, "primes", None):
        values["primes"] = parse_primes(args.primes)
    for key in ("n", "scope", "corrupt_inverse", "exact"):
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    if getattr(args, "input", None):
        values["input_path"] = args.input
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise UsageError(e.errors()[0]["msg"]) from None


async def dispatch(args: argparse.Namespace, config: RunConfig) -> Dict[str, Any]:
    if config.command == "verify-all":
        return await cmd_verify_all(config)
    if config.command == "branched-cover":
        return await cmd_branched_cover(config)
    if config.command == "cobordism":
        return await cmd_cobordism(config)
    if config.command == "theorem":
        return await cmd_theorem(config)
    if config.command == "family":
        return await cmd_family(config)
    if config.command == "certify":
        return await cmd_certify(config, args.i)
    if config.command == "d-lens":
        return cmd_d_lens(args.p, args.q, args.i)
    if config.command == "invariants":
        return cmd_invariants(config)
    raise UsageError(f"unknown command {config.command!r}")


def write_report(text: str, path: Optional[str]) -> None:
    if not path:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write report to {path}: {e.strerror or e}") from e


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, OBSTRUCTION_LAB_LOG_LEVEL, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        config = make_config(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    try:
        calibrate()
        report = asyncio.run(dispatch(args, config))
        text = render_report(report)
        write_report(text, config.output_path)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError, CertificationError) as e:
        logger.error("[CLI] %s", e)
        print(f"error: {e}", file=sys.stderr)
        return 1
    verdicts = collect_verdicts(to_jsonable(report))
    return 0 if verdicts and all(v == "pass" for v in verdicts) else 1


if __name__ == "__main__":
    sys.exit(main())
