"""Command-line entry point: ``paldus <subcommand> [flags]``.

Exit codes: 0 success, 1 bad input or usage, 2 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import applications as app
from . import kernels
from . import resources as res
from .circuit import SCHEMA, Circuit, StateVector, paldus_circuit, run_isometry_check, simulate
from .combinatorics import UgaLabel, allowed_sectors, dim_irrep, dimension_identities, enumerate_step_vectors
from .errors import PaldusError, ValidationError, VerificationError
from .gtstates import gt_amplitudes
from .symfunc import identity_suite


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; usage errors are 1 here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, "command": args.command, **payload}, indent=2))
    else:
        print(text)


def _read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line without '=': {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val.strip('"').strip("'")
    return out


# ------------------------------------------------------------------ subcommands


def cmd_enumerate(args) -> int:
    filt = None
    if args.n is not None or args.two_s is not None:
        if args.n is None or args.two_s is None:
            raise ValidationError("--n and --two-s go together")
        filt = (args.n, args.two_s)
    steps = enumerate_step_vectors(args.d, filt)
    rows = [{"step": str(s), "N": s.n_particles, "twoS": s.two_s} for s in steps]
    text = "\n".join(f"{r['step']}\tN={r['N']}\t2S={r['twoS']}" for r in rows)
    _emit(args, {"d": args.d, "count": len(rows), "stepVectors": rows}, text)
    return 0


def cmd_dims(args) -> int:
    rows = [
        {"N": n, "twoS": ts, "dim": dim_irrep(args.d, ts, n), "mult": ts + 1} for n, ts in allowed_sectors(args.d)
    ]
    text = "N\t2S\tdim\tmult\n" + "\n".join(f"{r['N']}\t{r['twoS']}\t{r['dim']}\t{r['mult']}" for r in rows)
    _emit(args, {"d": args.d, "rows": rows}, text)
    return 0


def cmd_verify_identities(args) -> int:
    checks = []
    for c in identity_suite(args.seed, args.trials):
        checks.append({"name": c.name, "maxRel": c.max_rel, "passed": c.passed})
    for d in range(1, args.max_d + 1):
        try:
            rep = dimension_identities(d, enumerate_up_to=6)
            checks.append({"name": f"dimensions-d{d}", "maxRel": 0.0, "passed": rep.ok and rep.weyl_agrees})
        except VerificationError as exc:
            checks.append({"name": f"dimensions-d{d}", "maxRel": float("nan"), "passed": False, "error": str(exc)})
    text = f"seed={args.seed} trials={args.trials}\n" + "\n".join(
        f"{'PASS' if c['passed'] else 'FAIL'}\t{c['name']}\t{c['maxRel']:.3e}" for c in checks
    )
    _emit(args, {"seed": args.seed, "trials": args.trials, "checks": checks}, text)
    return 0 if all(c["passed"] for c in checks) else 2


def cmd_gt_state(args) -> int:
    label = UgaLabel(args.n, args.two_s, args.two_m, args.step)
    if label.step.d != args.d:
        raise ValidationError(f"step vector has {label.step.d} orbitals, expected {args.d}")
    amps = gt_amplitudes(label)
    text = "\n".join(f"{b}  {a:.17g}  0" for b, a in amps.items())
    payload = {"d": args.d, "label": str(label), "amplitudes": [{"bits": b, "re": a, "im": 0.0} for b, a in amps.items()]}
    _emit(args, payload, text)
    return 0


def cmd_build_circuit(args) -> int:
    circ = paldus_circuit(args.d, includeN=not args.no_include_n, decoupleS=args.decouple_s)
    body = circ.dumps()
    if args.out:
        Path(args.out).write_text(body + "\n")
    summary = {
        "d": args.d,
        "width": circ.width,
        "gates": len(circ),
        "nontrivialGivens": circ.nontrivial_givens(),
        "out": args.out,
    }
    if args.out:
        text = f"wrote {args.out}: width={circ.width} gates={len(circ)} nontrivial_givens={circ.nontrivial_givens()}"
        _emit(args, summary, text)
    else:
        print(body)
    return 0


def cmd_simulate(args) -> int:
    circ = Circuit.from_json(Path(args.circuit).read_text())
    state = StateVector.loads(Path(args.input).read_text())
    if state.n_qubits != circ.width:
        if circ.layout is None:
            raise ValidationError(f"state has {state.n_qubits} qubits, circuit has {circ.width}")
        state = state.embed(circ.layout)
    out = simulate(circ, state)
    body = out.dumps()
    if args.out:
        Path(args.out).write_text(body)
        _emit(args, {"out": args.out, "width": circ.width, "norm": out.norm()}, f"wrote {args.out}")
    else:
        print(body, end="")
    return 0


def cmd_check_isometry(args) -> int:
    rep = run_isometry_check(args.d, raise_on_fail=False)
    payload = {
        "d": rep.d,
        "labels": rep.n_labels,
        "minOverlap": rep.min_overlap,
        "maxLeakage": rep.max_leakage,
        "failures": [list(f) for f in rep.failures],
        "seconds": rep.seconds,
        "backend": rep.backend,
        "ok": rep.ok,
    }
    text = (
        f"{'PASS' if rep.ok else 'FAIL'} d={rep.d} labels={rep.n_labels} min_overlap={rep.min_overlap:.15f} "
        f"time={rep.seconds:.2f}s backend={rep.backend}"
    )
    _emit(args, payload, text)
    return 0 if rep.ok else 2


def cmd_spin_project(args) -> int:
    state = StateVector.loads(Path(args.input).read_text())
    if state.n_qubits != 2 * args.d:
        raise ValidationError(f"expected a {2 * args.d}-qubit occupation state")
    prob, post = app.project_spin(state, args.two_s)
    post_state = StateVector(post, None, "occupation")
    if args.out:
        Path(args.out).write_text(post_state.dumps())
    _emit(args, {"d": args.d, "twoS": args.two_s, "probability": prob, "out": args.out}, f"P(2S={args.two_s}) = {prob:.12f}")
    return 0


def cmd_csf_prep(args) -> int:
    exact = app.csf_success_probability(args.d)
    stats = app.csf_acceptance(args.d, args.trials, args.seed)
    prep = app.prepare_uniform_csf(args.d, args.seed)
    payload = {
        "d": args.d,
        "seed": args.seed,
        "trials": args.trials,
        "exactProbability": exact,
        "acceptanceRate": stats.rate,
        "zScore": stats.z_score,
        "attempts": prep.attempts,
        "overlap": prep.overlap,
    }
    text = (
        f"seed={args.seed} exact={exact:.12f} rate={stats.rate:.4f} ({stats.accepted}/{args.trials}, "
        f"z={stats.z_score:+.2f}) overlap={prep.overlap:.12f} attempts={prep.attempts}"
    )
    _emit(args, payload, text)
    ok = abs(stats.z_score) <= 3 and prep.overlap >= 1 - 1e-9
    return 0 if ok else 2


def cmd_dfs_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    sector = app.largest_sector(args.d)
    payload = app.random_payload(args.d, sector, rng)
    worst_f, worst_m = 1.0, 0.0
    for _ in range(args.draws):
        noise = rng.normal(size=4)
        r = app.dfs_roundtrip(args.d, payload, noise)
        worst_f = min(worst_f, r.fidelity)
        worst_m = max(worst_m, r.m_residual)
    out = {
        "d": args.d,
        "seed": args.seed,
        "sector": {"N": sector[0], "twoS": sector[1]},
        "draws": args.draws,
        "minFidelity": worst_f,
        "maxMResidual": worst_m,
    }
    text = (
        f"seed={args.seed} sector N={sector[0]} 2S={sector[1]} draws={args.draws} "
        f"min_fidelity={worst_f:.15f} max_M_residual={worst_m:.3e}"
    )
    _emit(args, out, text)
    return 0 if worst_f >= 1 - 1e-9 and worst_m < 1e-9 else 2


def cmd_uga_elements(args) -> int:
    me = app.uga_matrix_elements(args.d, args.i, args.j)
    entries = []
    for a, b in zip(*np.nonzero(np.abs(me.matrix) > 1e-12)):
        v = me.matrix[a, b]
        entries.append({"row": str(me.labels[a]), "col": str(me.labels[b]), "re": v.real, "im": v.imag})
    text = "\n".join(f"{e['row']}\t{e['col']}\t{e['re']:+.12f}\t{e['im']:+.12f}" for e in entries)
    _emit(args, {"d": args.d, "i": args.i, "j": args.j, "elements": entries}, text)
    return 0


def cmd_resources(args) -> int:
    q = args.q if args.q is not None else res.q_from_epsilon(args.epsilon)
    dims = range(1, args.d + 1) if args.sweep else [args.d]
    strategies = list(res.Strategy) if args.strategy == "all" else [res.Strategy.parse(args.strategy)]
    rows = []
    for d in dims:
        for row in res.comparison(d, q, args.k):
            if res.Strategy(row["strategy"]) in strategies:
                rows.append(row)
    cross = res.crossover(q, args.k)
    pg = res.phase_gradient_cost(q, args.epsilon)
    if args.format == "json":
        _emit(args, {"q": q, "epsilon": args.epsilon, "rows": rows, "crossover": cross, "phaseGradientT": pg}, "")
        return 0
    sep = "," if args.csv else "\t"
    cols = list(rows[0])
    print(sep.join(cols))
    for r in rows:
        print(sep.join(str(r[c]) for c in cols))
    print(f"# q={q} epsilon={args.epsilon:g} phase_gradient_T~{pg} multi_index_beats_unary_from_d={cross}")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--config", help="key=value file; command-line flags win")
    common.add_argument("--seed", type=int, default=0)

    p = _Parser(prog="paldus", description="Quantum Paldus transform toolkit")
    p.add_argument("--kernel", choices=("auto", "cython", "python"), default="auto")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.set_defaults(func=fn)
        return s

    s = add("enumerate", cmd_enumerate, "list valid step vectors")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--two-s", type=int)

    s = add("dims", cmd_dims, "irrep dimensions and multiplicities")
    s.add_argument("--d", type=int, required=True)

    s = add("verify-identities", cmd_verify_identities, "symmetric-function and counting identities")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--max-d", type=int, default=8)

    s = add("gt-state", cmd_gt_state, "occupation amplitudes of a GT state")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--two-s", type=int, required=True)
    s.add_argument("--two-m", type=int, required=True)
    s.add_argument("--step", required=True)

    s = add("build-circuit", cmd_build_circuit, "write the transform circuit as JSON")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--no-include-n", action="store_true")
    s.add_argument("--decouple-s", action="store_true")

    s = add("simulate", cmd_simulate, "run a circuit file on a state file")
    s.add_argument("--circuit", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")

    s = add("check-isometry", cmd_check_isometry, "verify every GT state maps to its label")
    s.add_argument("--d", type=int, required=True)

    s = add("spin-project", cmd_spin_project, "project a state on total spin")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--two-s", type=int, required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out")

    s = add("csf-prep", cmd_csf_prep, "measured preparation of the uniform CSF superposition")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--trials", type=int, default=10_000)

    s = add("dfs-demo", cmd_dfs_demo, "round trip through collective u(2) noise")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--draws", type=int, default=100)

    s = add("uga-elements", cmd_uga_elements, "E_ij in the UGA basis")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--i", type=int, required=True)
    s.add_argument("--j", type=int, required=True)

    s = add("resources", cmd_resources, "fault-tolerant cost estimates")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--epsilon", type=float, default=1e-5)
    s.add_argument("--q", type=int)
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--strategy", default="all")
    s.add_argument("--sweep", action="store_true")
    s.add_argument("--csv", action="store_true")
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Install config-file values as subcommand defaults so explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    conf = _read_config(known.config)
    if not conf:
        return
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((tok for tok in argv if tok in sub_action.choices), None)
    if command is None:
        return
    subparser = sub_action.choices[command]
    typed = {}
    for action in subparser._actions:
        if action.dest not in conf:
            continue
        raw = conf[action.dest]
        if action.const is True:
            typed[action.dest] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            typed[action.dest] = action.type(raw)
        else:
            typed[action.dest] = raw
        action.required = False
    unknown = sorted(set(conf) - set(typed) - {"config"})
    if unknown:
        raise ValidationError(f"unknown config keys for {command}: {unknown}")
    subparser.set_defaults(**typed)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except _UsageError:
        return 1
    except (ValidationError, OSError, ValueError) as exc:
        print(f"paldus: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.kernel != "auto":
        try:
            kernels.use(args.kernel)
        except ValueError as exc:
            print(f"paldus: error: {exc}", file=sys.stderr)
            return 1
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"paldus: verification failed: {exc}", file=sys.stderr)
        return 2
    except (PaldusError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"paldus: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
