"""Command line front end.

Every subcommand prints one JSON report to stdout. Reports are deterministic
for identical (input, flags, seed) triples once the "timing" block is
stripped; nothing else in the report depends on the clock or the machine.

Exit codes: 0 success, 1 property violation (a mathematical invariant failed
on the given input), 2 input error (unreadable, unparsable, or invalid data).
The MAXCORR_TOL environment variable overrides the oracle agreement
tolerance; reports record the override under tolerances.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from .correlation import mu_classical, mu_schmidt, mu_variational
from .defaults import (
    AGREEMENT_TOL,
    COMPONENTS,
    HERMITICITY_TOL,
    ORACLE_ITERS,
    PSD_TOL,
    RANK_TOL,
    RECONSTRUCTION_TOL,
    RESTARTS,
    SEARCH_ITERS,
    TRACE_TOL,
    TRIALS,
)
from .entanglement import (
    bell_fidelity,
    decomposition_search,
    fidelity_mu_lower_bound,
    lambda_bounds,
    mu_ent_upper,
    ppt_check,
    random_povm_decomposition,
    twirl_clifford_average,
    twirl_exact,
    Decomposition,
)
from .errors import (
    MaxcorrError,
    ParseError,
    RangeError,
    UnknownSuiteError,
    ValidationError,
)
from .states import (
    BipartiteState,
    ClassicalJoint,
    apply_local,
    classical_bsc,
    embed_classical,
    isotropic,
    measure_computational,
    random_channel,
    random_density,
    random_product,
    random_pure,
    tensor_bipartite,
    validate,
)

SUITES = ("dpi", "tensor", "extremes", "semicontinuity", "ment-dpi", "ment-tensor")

MAX_DIM = 4


# ---------------------------------------------------------------------------
# file formats


def state_payload(state: BipartiteState) -> dict:
    matrix = [
        [[float(z.real), float(z.imag)] for z in row] for row in state.rho
    ]
    return {"dims": [state.d_a, state.d_b], "matrix": matrix}


def write_state_file(path: str, state: BipartiteState) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_payload(state), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_state_file(path: str) -> BipartiteState:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict) or "dims" not in data or "matrix" not in data:
        raise ParseError(f"{path}: expected an object with 'dims' and 'matrix'")
    dims = data["dims"]
    if (
        not isinstance(dims, list)
        or len(dims) != 2
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise ParseError(f"{path}: 'dims' must be two positive integers")
    n = dims[0] * dims[1]
    matrix = data["matrix"]
    if not isinstance(matrix, list) or len(matrix) != n:
        raise ParseError(f"{path}: 'matrix' must have {n} rows")
    rho = np.zeros((n, n), dtype=np.complex128)
    for i, row in enumerate(matrix):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{path}: row {i} must have {n} entries")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(v, (int, float)) for v in cell)
            ):
                raise ParseError(f"{path}: entry ({i}, {j}) must be a [re, im] pair")
            rho[i, j] = complex(cell[0], cell[1])
    try:
        state = BipartiteState(dims[0], dims[1], rho)
    except MaxcorrError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    diag = validate(state)
    if not diag.ok:
        raise ValidationError(f"{path}: " + "; ".join(diag.failures))
    return state


def write_joint_csv(path: str, joint: ClassicalJoint) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in joint.probs:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


def read_joint_csv(path: str) -> ClassicalJoint:
    try:
        table = np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64)
    except (ValueError, OSError) as exc:
        if isinstance(exc, OSError):
            raise
        raise ParseError(f"{path}: not a rectangular CSV of numbers ({exc})") from exc
    try:
        return ClassicalJoint(table)
    except MaxcorrError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


# ---------------------------------------------------------------------------
# report plumbing


def _agreement_tol() -> tuple:
    raw = os.environ.get("MAXCORR_TOL")
    if raw is None:
        return AGREEMENT_TOL, "default"
    try:
        val = float(raw)
    except ValueError as exc:
        raise ParseError(f"MAXCORR_TOL={raw!r} is not a number") from exc
    if not 0.0 < val < 1.0:
        raise RangeError(f"MAXCORR_TOL must lie in (0, 1), got {val!r}")
    return val, "env:MAXCORR_TOL"


def _tolerances() -> dict:
    tol, source = _agreement_tol()
    return {
        "agreement_tol": tol,
        "agreement_tol_source": source,
        "hermiticity_tol": HERMITICITY_TOL,
        "psd_tol": PSD_TOL,
        "rank_tol": RANK_TOL,
        "reconstruction_tol": RECONSTRUCTION_TOL,
        "trace_tol": TRACE_TOL,
    }


def _matrix_payload(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _witness_payload(pair) -> dict:
    return {
        "x": _matrix_payload(pair.x),
        "y": _matrix_payload(pair.y),
        "mean_x": [float(pair.mean_x.real), float(pair.mean_x.imag)],
        "mean_y": [float(pair.mean_y.real), float(pair.mean_y.imag)],
        "second_moment_x": float(pair.second_moment_x),
        "second_moment_y": float(pair.second_moment_y),
        "objective": float(pair.objective),
        "hermitian": bool(pair.hermitian),
        "second_multiplicity": int(pair.second_multiplicity),
    }


def _emit(command: str, inputs: dict, seed, results: dict, warnings: list, started: float) -> None:
    report = {
        "command": command,
        "inputs": inputs,
        "seed": seed,
        "tolerances": _tolerances(),
        "results": results,
        "warnings": list(warnings),
        "timing": {"wall_time_s": time.monotonic() - started},
    }
    print(json.dumps(report, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands


def cmd_mu(args) -> int:
    started = time.monotonic()
    state = read_state_file(args.state)
    report = mu_schmidt(state, witness=args.witness)
    warnings = list(report.warnings)
    results = {
        "mu": report.mu,
        "schmidt": [float(s) for s in report.schmidt],
        "lambda1_deviation": report.lambda1_deviation,
        "marginal_ranks": list(report.marginal_ranks),
    }
    if report.witness is not None:
        results["witness"] = _witness_payload(report.witness)
    violation = bool(report.warnings)
    if args.oracle:
        tol, _ = _agreement_tol()
        oracle = mu_variational(state, restarts=args.restarts, seed=args.seed)
        low, high = report.mu - max(tol, 1e-4), report.mu + tol
        agrees = low <= oracle.value <= high
        results["oracle"] = {
            "value": oracle.value,
            "gap": oracle.value - report.mu,
            "converged": oracle.converged,
            "agrees": agrees,
        }
        if not oracle.converged:
            warnings.append("oracle did not converge; its value is still a feasible lower estimate")
        if not agrees:
            warnings.append(
                f"oracle value {oracle.value!r} outside [{low!r}, {high!r}]"
            )
            violation = True
    _emit(
        "mu",
        {"path": args.state, "digest": _digest(args.state)},
        args.seed if args.oracle else None,
        results,
        warnings,
        started,
    )
    return 1 if violation else 0


def cmd_mu_classical(args) -> int:
    started = time.monotonic()
    joint = read_joint_csv(args.table)
    report = mu_classical(joint)
    results = {
        "mu": report.mu,
        "singular_values": [float(s) for s in report.schmidt],
        "lambda1_deviation": report.lambda1_deviation,
        "support_shape": list(report.marginal_ranks),
    }
    _emit(
        "mu-classical",
        {"path": args.table, "digest": _digest(args.table)},
        None,
        results,
        list(report.warnings),
        started,
    )
    return 1 if report.warnings else 0


def cmd_ment(args) -> int:
    started = time.monotonic()
    state = read_state_file(args.state)
    warnings = []
    violation = False

    plain = mu_schmidt(state)
    dec = decomposition_search(
        state, k=args.k, restarts=args.restarts, iters=args.iters, seed=args.seed
    )
    upper = mu_ent_upper(dec)
    comp_mus = [mu_schmidt(c).mu for c in dec.components]
    results = {
        "mu": plain.mu,
        "upper_bound": upper,
        "decomposition": {
            "size": len(dec.components),
            "weights": [float(w) for w in dec.weights],
            "component_mu": comp_mus,
            "residual": dec.residual(),
        },
    }

    if (state.d_a, state.d_b) == (2, 2):
        lower = fidelity_mu_lower_bound(state)
        results["lower_bound"] = lower
        results["bell_fidelity"] = bell_fidelity(state)
        ppt = ppt_check(state)
        results["ppt"] = {"min_eigenvalue": ppt.min_eigenvalue, "is_ppt": ppt.is_ppt}
        if upper < lower - 1e-8:
            warnings.append(
                f"certified bounds crossed: upper {upper!r} below lower {lower!r}"
            )
            violation = True
        tw = twirl_exact(state)
        if float(np.max(np.abs(state.rho - tw.rho))) < 1e-9:
            delta = 4.0 * (1.0 - bell_fidelity(state)) / 3.0
            results["isotropic"] = {"epsilon": delta}
            if delta <= 1.0:
                iso = lambda_bounds(delta)
                results["isotropic"]["lower"] = iso.lower
                results["isotropic"]["upper"] = iso.upper
                results["isotropic"]["separable"] = iso.separable
    else:
        results["lower_bound"] = 0.0

    _emit(
        "ment",
        {"path": args.state, "digest": _digest(args.state)},
        args.seed,
        results,
        warnings,
        started,
    )
    return 1 if violation else 0


def cmd_iso_bounds(args) -> int:
    started = time.monotonic()
    bounds = lambda_bounds(args.epsilon)
    results = {
        "epsilon": bounds.epsilon,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "separable": bounds.separable,
    }
    _emit("iso-bounds", {"epsilon": args.epsilon}, None, results, [], started)
    return 0


def cmd_twirl(args) -> int:
    started = time.monotonic()
    state = read_state_file(args.state)
    tw = twirl_exact(state)
    cliff = twirl_clifford_average(state)
    gap = float(np.max(np.abs(tw.rho - cliff.rho)))
    delta = 4.0 * (1.0 - bell_fidelity(state)) / 3.0
    warnings = []
    violation = False
    if gap > 1e-10:
        warnings.append(f"closed form and Clifford average disagree by {gap:.3e}")
        violation = True
    results = {
        "epsilon": delta,
        "bell_fidelity_in": bell_fidelity(state),
        "bell_fidelity_out": bell_fidelity(tw),
        "clifford_average_gap": gap,
        "state": state_payload(tw),
    }
    _emit(
        "twirl",
        {"path": args.state, "digest": _digest(args.state)},
        None,
        results,
        warnings,
        started,
    )
    return 1 if violation else 0


def cmd_ppt(args) -> int:
    started = time.monotonic()
    state = read_state_file(args.state)
    ppt = ppt_check(state)
    results = {"min_eigenvalue": ppt.min_eigenvalue, "is_ppt": ppt.is_ppt}
    _emit(
        "ppt",
        {"path": args.state, "digest": _digest(args.state)},
        None,
        results,
        [],
        started,
    )
    return 0


def cmd_gen(args) -> int:
    started = time.monotonic()
    if args.kind == "isotropic":
        state = isotropic(args.epsilon)
        write_state_file(args.output, state)
        inputs = {"kind": "isotropic", "epsilon": args.epsilon}
        seed = None
    elif args.kind == "bsc":
        joint = classical_bsc(args.epsilon)
        write_joint_csv(args.output, joint)
        inputs = {"kind": "bsc", "epsilon": args.epsilon}
        seed = None
    else:
        _check_dims(args.da, args.db)
        state = random_density(args.da, args.db, rank=args.rank, seed=args.seed)
        write_state_file(args.output, state)
        inputs = {
            "kind": "random",
            "d_a": args.da,
            "d_b": args.db,
            "rank": args.rank,
        }
        seed = args.seed
    results = {"path": args.output, "digest": _digest(args.output)}
    _emit("gen", inputs, seed, results, [], started)
    return 0


# ---------------------------------------------------------------------------
# property suites


def _check_dims(d_a: int, d_b: int) -> None:
    if not (1 <= d_a <= MAX_DIM and 1 <= d_b <= MAX_DIM):
        raise RangeError(f"dimensions must lie in [1, {MAX_DIM}], got {d_a}x{d_b}")


def _parse_dims(text: str) -> tuple:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ParseError(f"dims must look like '2x2', got {text!r}")
    try:
        d_a, d_b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ParseError(f"dims must look like '2x2', got {text!r}") from exc
    _check_dims(d_a, d_b)
    return d_a, d_b


def _trial_seeds(seed: int, count: int) -> list:
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count)]


def _suite_dpi(trials: int, seed: int, dims: tuple) -> tuple:
    d_a, d_b = dims
    seeds = _trial_seeds(seed, trials)
    violations = 0
    worst = np.inf
    for t, s in enumerate(seeds):
        n = d_a * d_b
        state = random_density(d_a, d_b, rank=(t % n) + 1, seed=s)
        side = "A" if t % 2 == 0 else "B"
        d_in = d_a if side == "A" else d_b
        d_out = 2 + (t % 2)
        ch = random_channel(d_in, d_out, kraus_rank=(t % 3) + 1 + (d_in - 1) // d_out, seed=s + 1, side=side)
        before = mu_schmidt(state).mu
        after = mu_schmidt(apply_local(state, ch)).mu
        margin = before + 1e-7 - after
        worst = min(worst, margin)
        if margin < 0.0:
            violations += 1
    return {"trials": trials, "worst_margin": float(worst)}, violations


def _suite_tensor(trials: int, seed: int, dims: tuple) -> tuple:
    d_a, d_b = dims
    seeds = _trial_seeds(seed, trials)
    violations = 0
    worst = 0.0
    for t, s in enumerate(seeds):
        n = d_a * d_b
        r = random_density(d_a, d_b, rank=(t % n) + 1, seed=s)
        q = random_density(d_a, d_b, rank=((t + 1) % n) + 1, seed=s + 1)
        gap = abs(
            mu_schmidt(tensor_bipartite(r, q)).mu
            - max(mu_schmidt(r).mu, mu_schmidt(q).mu)
        )
        worst = max(worst, gap)
        if gap > 1e-7:
            violations += 1
    return {"trials": trials, "worst_gap": float(worst)}, violations


def _suite_extremes(trials: int, seed: int, dims: tuple) -> tuple:
    d_a, d_b = dims
    seeds = _trial_seeds(seed, trials)
    violations = 0
    worst_product = 0.0
    worst_pure = 1.0
    for t, s in enumerate(seeds):
        if t % 2 == 0:
            mu = mu_schmidt(random_product(d_a, d_b, seed=s)).mu
            worst_product = max(worst_product, mu)
            if mu > 1e-8:
                violations += 1
        else:
            mu = mu_schmidt(random_pure(d_a, d_b, seed=s)).mu
            worst_pure = min(worst_pure, mu)
            if mu < 1.0 - 1e-8:
                violations += 1
    return (
        {
            "trials": trials,
            "worst_product_mu": float(worst_product),
            "worst_pure_mu": float(worst_pure),
        },
        violations,
    )


def _suite_semicontinuity(trials: int, seed: int, dims: tuple) -> tuple:
    violations = 0
    values = {}
    for n in (2, 10, 100, 10**4):
        p = np.array([[1.0 - 1.0 / n, 0.0], [0.0, 1.0 / n]])
        mu = mu_classical(ClassicalJoint(p)).mu
        values[str(n)] = mu
        if abs(mu - 1.0) > 1e-9:
            violations += 1
    limit = mu_classical(ClassicalJoint(np.array([[1.0, 0.0], [0.0, 0.0]]))).mu
    if abs(limit) > 1e-9:
        violations += 1
    return {"mu_along_sequence": values, "mu_at_limit": limit}, violations


def _suite_ment_dpi(trials: int, seed: int, dims: tuple) -> tuple:
    d_a, d_b = dims
    seeds = _trial_seeds(seed, trials)
    violations = 0
    worst = np.inf
    for t, s in enumerate(seeds):
        n = d_a * d_b
        state = random_density(d_a, d_b, rank=(t % n) + 1, seed=s)
        dec = random_povm_decomposition(state, k=4, seed=s + 2)
        side = "A" if t % 2 == 0 else "B"
        d_in = d_a if side == "A" else d_b
        ch = random_channel(d_in, 2, kraus_rank=2 if d_in <= 4 else 3, seed=s + 1, side=side)
        pushed = Decomposition(
            target=apply_local(state, ch),
            weights=dec.weights,
            components=tuple(apply_local(c, ch) for c in dec.components),
        )
        margin = mu_ent_upper(dec) + 1e-7 - mu_ent_upper(pushed)
        worst = min(worst, margin)
        if margin < 0.0:
            violations += 1
    return {"trials": trials, "worst_margin": float(worst)}, violations


def _suite_ment_tensor(trials: int, seed: int, dims: tuple) -> tuple:
    d_a, d_b = dims
    seeds = _trial_seeds(seed, trials)
    violations = 0
    worst = 0.0
    for t, s in enumerate(seeds):
        n = d_a * d_b
        r = random_density(d_a, d_b, rank=(t % n) + 1, seed=s)
        q = random_density(d_a, d_b, rank=((t + 2) % n) + 1, seed=s + 1)
        dr = random_povm_decomposition(r, k=3, seed=s + 2)
        dq = random_povm_decomposition(q, k=3, seed=s + 3)
        prod = Decomposition(
            target=tensor_bipartite(r, q),
            weights=np.outer(dr.weights, dq.weights).reshape(-1),
            components=tuple(
                tensor_bipartite(cr, cq) for cr in dr.components for cq in dq.components
            ),
        )
        gap = abs(mu_ent_upper(prod) - max(mu_ent_upper(dr), mu_ent_upper(dq)))
        worst = max(worst, gap)
        if gap > 1e-7:
            violations += 1
    return {"trials": trials, "worst_gap": float(worst)}, violations


_SUITE_FUNCS = {
    "dpi": _suite_dpi,
    "tensor": _suite_tensor,
    "extremes": _suite_extremes,
    "semicontinuity": _suite_semicontinuity,
    "ment-dpi": _suite_ment_dpi,
    "ment-tensor": _suite_ment_tensor,
}


def cmd_suite(args) -> int:
    started = time.monotonic()
    if args.name not in _SUITE_FUNCS:
        raise UnknownSuiteError(
            f"unknown suite {args.name!r}; available: {', '.join(SUITES)}"
        )
    dims = _parse_dims(args.dims)
    if args.trials < 1:
        raise RangeError(f"trials must be positive, got {args.trials!r}")
    results, violations = _SUITE_FUNCS[args.name](args.trials, args.seed, dims)
    results["violations"] = violations
    warnings = []
    if violations:
        warnings.append(f"{violations} trial(s) violated the property")
    _emit(
        "suite",
        {"name": args.name, "dims": list(dims), "trials": args.trials},
        args.seed,
        results,
        warnings,
        started,
    )
    return 1 if violations else 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxcorr",
        description=(
            "Maximal correlation of bipartite quantum states and classical joint "
            "distributions, with certified bounds on maximal entanglement."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mu", help="maximal correlation of a bipartite state")
    p.add_argument("state", help="state file (JSON)")
    p.add_argument("--witness", action="store_true", help="include the maximizing observable pair")
    p.add_argument("--oracle", action="store_true", help="cross-check with the variational oracle")
    p.add_argument("--restarts", type=int, default=RESTARTS, help="oracle restarts")
    p.add_argument("--seed", type=int, default=0, help="oracle seed")
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("mu-classical", help="maximal correlation of a joint table")
    p.add_argument("table", help="joint probability table (CSV)")
    p.set_defaults(func=cmd_mu_classical)

    p = sub.add_parser("ment", help="certified maximal-entanglement bounds")
    p.add_argument("state", help="state file (JSON)")
    p.add_argument("--k", type=int, default=COMPONENTS, help="components in the search")
    p.add_argument("--restarts", type=int, default=RESTARTS, help="search restarts")
    p.add_argument("--iters", type=int, default=SEARCH_ITERS, help="search iterations per restart")
    p.add_argument("--seed", type=int, default=0, help="search seed")
    p.set_defaults(func=cmd_ment)

    p = sub.add_parser("iso-bounds", help="certified bracket for the noisy Bell family")
    p.add_argument("--epsilon", type=float, required=True, help="noise parameter in [0, 1]")
    p.set_defaults(func=cmd_iso_bounds)

    p = sub.add_parser("twirl", help="closed-form twirl of a two-qubit state")
    p.add_argument("state", help="state file (JSON)")
    p.set_defaults(func=cmd_twirl)

    p = sub.add_parser("ppt", help="partial transpose eigenvalue check")
    p.add_argument("state", help="state file (JSON)")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("gen", help="write example inputs")
    gen_sub = p.add_subparsers(dest="kind", required=True)

    g = gen_sub.add_parser("isotropic", help="noisy Bell state file")
    g.add_argument("epsilon", type=float, help="noise parameter in [0, 1]")
    g.add_argument("-o", "--output", required=True, help="output path (JSON)")
    g.set_defaults(func=cmd_gen)

    g = gen_sub.add_parser("bsc", help="binary symmetric channel joint table")
    g.add_argument("epsilon", type=float, help="flip probability in [0, 1]")
    g.add_argument("-o", "--output", required=True, help="output path (CSV)")
    g.set_defaults(func=cmd_gen)

    g = gen_sub.add_parser("random", help="seeded random state file")
    g.add_argument("--da", type=int, default=2, help="dimension of side A")
    g.add_argument("--db", type=int, default=2, help="dimension of side B")
    g.add_argument("--rank", type=int, default=None, help="rank (default full)")
    g.add_argument("--seed", type=int, default=0, help="seed")
    g.add_argument("-o", "--output", required=True, help="output path (JSON)")
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run a randomized property suite")
    p.add_argument("name", help="one of: " + ", ".join(SUITES))
    p.add_argument("--trials", type=int, default=TRIALS, help="trial count")
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--dims", default="2x2", help="dimensions, e.g. 2x3")
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MaxcorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
